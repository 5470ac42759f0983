//! S-expression concrete syntax for programs.
//!
//! ```text
//! term    ::= atom                      nullary construct, e.g. skip
//!           | "(" head arg* ")"
//! arg     ::= term | literal | name | map
//! literal ::= integer | "true" | "false" | symbol
//! map     ::= "(" "env" ("(" name literal-or-map ")")* ")"
//! ```
//!
//! Heads are construct names (`seq`) or full ids (`Cmd.seq`). Two sugar
//! forms are accepted: `(while e c)` and `break`.

use std::fmt;

use thiserror::Error;

use crate::terms::{desugar_break, desugar_while, Arg, Construct, Grammar, Param, Term};
use crate::value::{is_symbol, Value, ValueMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn err(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, ParseError> {
        self.skip_trivia();
        let start = self.pos;
        match self.chars.peek() {
            None => Err(err(start, "unexpected end of input")),
            Some(')') => Err(err(start, "unexpected `)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(err(start, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let mut atom = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    atom.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(atom, start))
            }
        }
    }
}

fn read_one(src: &str) -> Result<Sexp, ParseError> {
    let mut r = Reader {
        chars: src.chars().peekable(),
        pos: Pos { line: 1, column: 1 },
    };
    let e = r.read()?;
    r.skip_trivia();
    if r.chars.peek().is_some() {
        return Err(err(r.pos, "trailing input after program"));
    }
    Ok(e)
}

/// Parses a program against the productions of `grammar`.
pub fn parse_term(src: &str, grammar: &Grammar) -> Result<Term, ParseError> {
    term(&read_one(src)?, grammar)
}

/// Parses a single literal or `(env ...)` map.
pub fn parse_value(src: &str) -> Result<Value, ParseError> {
    value(&read_one(src)?)
}

fn lookup(grammar: &Grammar, name: &str, pos: Pos) -> Result<&'static Construct, ParseError> {
    grammar
        .lookup(name)
        .ok_or_else(|| err(pos, format!("unknown construct `{name}`")))
}

fn term(e: &Sexp, grammar: &Grammar) -> Result<Term, ParseError> {
    let (head, rest, pos) = match e {
        Sexp::Atom(a, p) => (a.as_str(), &[][..], *p),
        Sexp::List(items, p) => match items.split_first() {
            Some((Sexp::Atom(h, _), rest)) => (h.as_str(), rest, *p),
            Some((other, _)) => return Err(err(other.pos(), "expected a construct name")),
            None => return Err(err(*p, "empty list")),
        },
    };
    match head {
        "break" if rest.is_empty() => return Ok(desugar_break()),
        "while" => {
            let [c1, c2] = rest else {
                return Err(err(pos, "while expects a condition and a body"));
            };
            return desugar_while(term(c1, grammar)?, term(c2, grammar)?)
                .map_err(|e| err(pos, e.to_string()));
        }
        _ => {}
    }
    let c = lookup(grammar, head, pos)?;
    // A computed environment is written like its payload: (env (x 1) ...).
    if c.params() == [Param::Map] {
        let map = map_entries(rest)?;
        return c
            .inject(vec![Arg::Value(map)])
            .map_err(|e| err(pos, e.to_string()));
    }
    if rest.len() != c.params().len() {
        return Err(err(
            pos,
            format!(
                "{} expects {} arguments, found {}",
                c.id(),
                c.params().len(),
                rest.len()
            ),
        ));
    }
    let args = c
        .params()
        .iter()
        .zip(rest)
        .map(|(p, a)| arg(*p, a, grammar))
        .collect::<Result<Vec<_>, _>>()?;
    c.inject(args).map_err(|e| err(pos, e.to_string()))
}

fn arg(p: Param, e: &Sexp, grammar: &Grammar) -> Result<Arg, ParseError> {
    match p {
        Param::Sort(_) => term(e, grammar).map(Arg::Term),
        Param::Value | Param::Map => value(e).map(Arg::Value),
        Param::Name => match e {
            Sexp::Atom(a, _) if is_symbol(a) => Ok(Arg::Name(a.clone())),
            other => Err(err(other.pos(), "expected an identifier")),
        },
    }
}

fn value(e: &Sexp) -> Result<Value, ParseError> {
    match e {
        Sexp::Atom(a, p) => {
            Value::parse_literal(a).ok_or_else(|| err(*p, format!("invalid literal `{a}`")))
        }
        Sexp::List(items, p) => match items.split_first() {
            Some((Sexp::Atom(h, _), rest)) if h == "env" => map_entries(rest),
            _ => Err(err(*p, "expected a literal or (env ...)")),
        },
    }
}

fn map_entries(items: &[Sexp]) -> Result<Value, ParseError> {
    let mut map = ValueMap::new();
    for item in items {
        match item {
            Sexp::List(kv, p) => match kv.as_slice() {
                [Sexp::Atom(k, kp), v] => {
                    if !is_symbol(k) {
                        return Err(err(*kp, "expected an identifier"));
                    }
                    if map.insert(k.clone(), value(v)?).is_some() {
                        return Err(err(*kp, format!("duplicate binding `{k}`")));
                    }
                }
                _ => return Err(err(*p, "expected (name value)")),
            },
            other => return Err(err(other.pos(), "expected (name value)")),
        }
    }
    Ok(Value::Map(map.into()))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.construct();
        if c.params().is_empty() {
            return f.write_str(c.name());
        }
        if c.params() == [Param::Map] {
            if let [Arg::Value(v)] = self.args() {
                return write!(f, "{v}");
            }
        }
        write!(f, "({}", c.name())?;
        for a in self.args() {
            match a {
                Arg::Term(t) => write!(f, " {t}")?,
                Arg::Value(v) => write!(f, " {v}")?,
                Arg::Name(n) => write!(f, " {n}")?,
            }
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::syntax::{self, *};

    fn full() -> Grammar {
        Grammar::new(syntax::ALL.to_vec())
    }

    #[test]
    fn parses_nested_program() {
        let t = parse_term("(seq (skip) (throw (lit breaking)))", &full()).unwrap();
        assert_eq!(t, seq(skip(), throw(lit(Value::sym("breaking")))));
        assert_eq!(t.to_string(), "(seq skip (throw (lit breaking)))");
    }

    #[test]
    fn parses_envs_and_names() {
        let t = parse_term("(block (env (x 2)) (boundid x))", &full()).unwrap();
        assert_eq!(
            t,
            block(env(Value::map([("x", Value::Int(2))])), boundid("x"))
        );
        assert_eq!(t.to_string(), "(block (env (x 2)) (boundid x))");
        let e = parse_term("(env)", &full()).unwrap();
        assert_eq!(e, env(Value::empty_map()));
    }

    #[test]
    fn sugar_forms() {
        let t = parse_term("(while (lit true) break)", &full()).unwrap();
        assert_eq!(t, desugar_while(lit(true), desugar_break()).unwrap());
    }

    #[test]
    fn reports_positions() {
        let e = parse_term("(seq skip\n  (bogus))", &full()).unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("unknown construct"));

        let e = parse_term("(seq skip", &full()).unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));

        let e = parse_term("(seq (lit 1) skip)", &full()).unwrap_err();
        assert!(e.message.contains("Cmd.seq"), "{e}");

        let e = parse_term("skip skip", &full()).unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
    }

    #[test]
    fn restricted_grammar_rejects_foreign_constructs() {
        let g = Grammar::new(vec![&SKIP, &SEQ]);
        assert!(parse_term("(seq skip skip)", &g).is_ok());
        assert!(parse_term("(emit (lit 1))", &g).is_err());
    }

    #[test]
    fn values() {
        assert_eq!(parse_value("-4").unwrap(), Value::Int(-4));
        assert_eq!(
            parse_value("(env (y true))").unwrap(),
            Value::map([("y", Value::Bool(true))])
        );
        assert!(parse_value("(1 2)").is_err());
    }
}
