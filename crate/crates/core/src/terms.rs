//! Sorted abstract syntax.
//!
//! Every node records the [`Construct`] that built it. A construct is an
//! injection/projection pair between its argument tuple and its sort; the two
//! functions are partial inverses:
//!
//! * `project(inject(x)) == Some(x)`
//! * `project(t) == Some(x)` implies `inject(x) == t`
//!
//! Construct ids have the form `<Sort>.<name>`, so two constructs with the
//! same argument signature stay distinguishable.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::value::Value;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("{construct} expects {expected} arguments, found {found}")]
    Arity {
        construct: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{construct} argument {position}: expected {expected}, found {found}")]
    ArgMismatch {
        construct: &'static str,
        position: usize,
        expected: String,
        found: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Cmd,
    Exp,
    Dcl,
    Pcd,
    Prm,
}

impl Sort {
    pub const ALL: [Sort; 5] = [Sort::Cmd, Sort::Exp, Sort::Dcl, Sort::Pcd, Sort::Prm];

    pub fn as_str(self) -> &'static str {
        match self {
            Sort::Cmd => "Cmd",
            Sort::Exp => "Exp",
            Sort::Dcl => "Dcl",
            Sort::Pcd => "Pcd",
            Sort::Prm => "Prm",
        }
    }

    pub fn parse(text: &str) -> Option<Sort> {
        Sort::ALL.into_iter().find(|s| s.as_str() == text)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Declared kind of one construct argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    Sort(Sort),
    /// A literal value (integer, boolean, symbol).
    Value,
    /// A computed environment map.
    Map,
    /// An identifier.
    Name,
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Sort(s) => write!(f, "{s}"),
            Param::Value => f.write_str("value"),
            Param::Map => f.write_str("map"),
            Param::Name => f.write_str("name"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Arg {
    Term(Term),
    Value(Value),
    Name(String),
}

impl Arg {
    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Arg::Term(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_value(&self) -> Option<&Value> {
        match self {
            Arg::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_name(&self) -> Option<&str> {
        match self {
            Arg::Name(n) => Some(n),
            _ => None,
        }
    }

    fn describe(&self) -> String {
        match self {
            Arg::Term(t) => t.sort().to_string(),
            Arg::Value(Value::Map(_)) => "map".into(),
            Arg::Value(_) => "value".into(),
            Arg::Name(_) => "name".into(),
        }
    }

    fn fits(&self, p: Param) -> bool {
        match (self, p) {
            (Arg::Term(t), Param::Sort(s)) => t.sort() == s,
            (Arg::Value(Value::Map(_)), Param::Map) => true,
            (Arg::Value(v), Param::Value) => !matches!(v, Value::Map(_)),
            (Arg::Name(_), Param::Name) => true,
            _ => false,
        }
    }
}

/// An injection/projection pair for one production of the grammar.
#[derive(Debug)]
pub struct Construct {
    id: &'static str,
    sort: Sort,
    params: &'static [Param],
}

impl PartialEq for Construct {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || self.id == other.id
    }
}

impl Eq for Construct {}

impl Hash for Construct {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl Construct {
    pub const fn new(id: &'static str, sort: Sort, params: &'static [Param]) -> Self {
        Self { id, sort, params }
    }

    pub fn id(&self) -> &'static str {
        self.id
    }

    /// The id without its sort prefix.
    pub fn name(&self) -> &'static str {
        self.id.split_once('.').map_or(self.id, |(_, n)| n)
    }

    pub fn sort(&self) -> Sort {
        self.sort
    }

    pub fn params(&self) -> &'static [Param] {
        self.params
    }

    pub fn inject(&'static self, args: Vec<Arg>) -> Result<Term, TermError> {
        if args.len() != self.params.len() {
            return Err(TermError::Arity {
                construct: self.id,
                expected: self.params.len(),
                found: args.len(),
            });
        }
        for (i, (a, p)) in args.iter().zip(self.params).enumerate() {
            if !a.fits(*p) {
                return Err(TermError::ArgMismatch {
                    construct: self.id,
                    position: i,
                    expected: p.to_string(),
                    found: a.describe(),
                });
            }
        }
        Ok(Term(Arc::new(Node {
            construct: self,
            args,
        })))
    }

    /// The argument tuple if `t` was built by this construct.
    pub fn project<'t>(&self, t: &'t Term) -> Option<&'t [Arg]> {
        (*t.0.construct == *self).then_some(t.0.args.as_slice())
    }

    pub fn restrict(&'static self, t: &Term) -> Option<Restricted> {
        self.project(t).map(|_| Restricted {
            construct: self,
            term: t.clone(),
        })
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Node {
    construct: &'static Construct,
    args: Vec<Arg>,
}

/// Immutable, cheaply clonable syntax tree.
#[derive(Debug, Clone, Eq)]
pub struct Term(Arc<Node>);

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl Term {
    pub fn construct(&self) -> &'static Construct {
        self.0.construct
    }

    pub fn id(&self) -> &'static str {
        self.0.construct.id
    }

    pub fn sort(&self) -> Sort {
        self.0.construct.sort
    }

    pub fn args(&self) -> &[Arg] {
        &self.0.args
    }

    /// Term children in argument order.
    pub fn children(&self) -> impl Iterator<Item = &Term> {
        self.0.args.iter().filter_map(Arg::as_term)
    }

    /// Height of the tree; literal payloads do not count.
    pub fn height(&self) -> usize {
        1 + self.children().map(Term::height).max().unwrap_or(0)
    }

    /// Address of the shared node; stable while any clone is alive.
    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn is(&self, c: &Construct) -> bool {
        *self.0.construct == *c
    }

    /// Computed-value forms: `lit v`, a computed environment, `eq` of a value
    /// and `abs` with a value parameter. Commands have no value form.
    pub fn is_value(&self) -> bool {
        use syntax::*;
        if self.is(&LIT) || self.is(&ENV) {
            true
        } else if self.is(&EQ) || self.is(&ABS) {
            self.children().next().is_some_and(Term::is_value)
        } else {
            false
        }
    }

    /// Normal completion (`skip`), abrupt completion (`throwing v`) or a value.
    pub fn is_terminal(&self) -> bool {
        self.is(&syntax::SKIP) || self.is(&syntax::THROWING) || self.is_value()
    }
}

/// A term statically known to be built by `construct`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restricted {
    construct: &'static Construct,
    term: Term,
}

impl Restricted {
    pub fn new(construct: &'static Construct, args: Vec<Arg>) -> Result<Self, TermError> {
        Ok(Self {
            construct,
            term: construct.inject(args)?,
        })
    }

    pub fn construct(&self) -> &'static Construct {
        self.construct
    }

    pub fn args(&self) -> &[Arg] {
        self.term.args()
    }

    /// The embedding back into the full sort.
    pub fn embed(&self) -> &Term {
        &self.term
    }
}

/// The built-in productions.
pub mod syntax {
    use super::{Arg, Construct, Param, Sort, Term};
    use crate::value::Value;

    const CMD: Param = Param::Sort(Sort::Cmd);
    const EXP: Param = Param::Sort(Sort::Exp);

    pub static SKIP: Construct = Construct::new("Cmd.skip", Sort::Cmd, &[]);
    pub static SEQ: Construct = Construct::new("Cmd.seq", Sort::Cmd, &[CMD, CMD]);
    pub static COND: Construct = Construct::new("Cmd.cond", Sort::Cmd, &[EXP, CMD, CMD]);
    pub static COND_LOOP: Construct = Construct::new("Cmd.cond_loop", Sort::Cmd, &[EXP, CMD]);
    pub static THROW: Construct = Construct::new("Cmd.throw", Sort::Cmd, &[EXP]);
    pub static THROWING: Construct = Construct::new("Cmd.throwing", Sort::Cmd, &[Param::Value]);
    pub static CATCH: Construct =
        Construct::new("Cmd.catch", Sort::Cmd, &[CMD, Param::Sort(Sort::Pcd)]);
    pub static ASSIGN: Construct = Construct::new("Cmd.assign", Sort::Cmd, &[Param::Name, EXP]);
    pub static EMIT: Construct = Construct::new("Cmd.emit", Sort::Cmd, &[EXP]);

    pub static LIT: Construct = Construct::new("Exp.lit", Sort::Exp, &[Param::Value]);
    pub static BOUNDID: Construct = Construct::new("Exp.boundid", Sort::Exp, &[Param::Name]);
    pub static DEREF: Construct = Construct::new("Exp.deref", Sort::Exp, &[Param::Name]);
    pub static BLOCK: Construct =
        Construct::new("Exp.block", Sort::Exp, &[Param::Sort(Sort::Dcl), EXP]);

    pub static ENV: Construct = Construct::new("Dcl.env", Sort::Dcl, &[Param::Map]);
    pub static BIND: Construct = Construct::new("Dcl.bind", Sort::Dcl, &[Param::Name, EXP]);

    pub static ABS: Construct =
        Construct::new("Pcd.abs", Sort::Pcd, &[Param::Sort(Sort::Prm), CMD]);
    pub static EQ: Construct = Construct::new("Prm.eq", Sort::Prm, &[EXP]);

    /// Every built-in construct, in canonical order.
    pub static ALL: [&Construct; 17] = [
        &SKIP, &SEQ, &COND, &COND_LOOP, &THROW, &THROWING, &CATCH, &ASSIGN, &EMIT, &LIT,
        &BOUNDID, &DEREF, &BLOCK, &ENV, &BIND, &ABS, &EQ,
    ];

    /// Value forms that belong to a sort rather than to a component: they
    /// have no transitions of their own.
    pub fn data_constructs(sort: Sort) -> &'static [&'static Construct] {
        static EXP_DATA: [&Construct; 1] = [&LIT];
        static DCL_DATA: [&Construct; 1] = [&ENV];
        static PCD_DATA: [&Construct; 1] = [&ABS];
        static PRM_DATA: [&Construct; 1] = [&EQ];
        match sort {
            Sort::Cmd => &[],
            Sort::Exp => &EXP_DATA,
            Sort::Dcl => &DCL_DATA,
            Sort::Pcd => &PCD_DATA,
            Sort::Prm => &PRM_DATA,
        }
    }

    pub fn by_id(id: &str) -> Option<&'static Construct> {
        ALL.iter().copied().find(|c| c.id() == id)
    }

    // Builders for well-sorted terms. They panic on sort mismatches, which
    // are programming errors at the call site.

    fn build(c: &'static Construct, args: Vec<Arg>) -> Term {
        c.inject(args).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn skip() -> Term {
        build(&SKIP, vec![])
    }

    pub fn seq(c1: Term, c2: Term) -> Term {
        build(&SEQ, vec![Arg::Term(c1), Arg::Term(c2)])
    }

    pub fn cond(e: Term, then: Term, otherwise: Term) -> Term {
        build(&COND, vec![Arg::Term(e), Arg::Term(then), Arg::Term(otherwise)])
    }

    pub fn cond_loop(e: Term, c: Term) -> Term {
        build(&COND_LOOP, vec![Arg::Term(e), Arg::Term(c)])
    }

    pub fn throw(e: Term) -> Term {
        build(&THROW, vec![Arg::Term(e)])
    }

    pub fn throwing(v: Value) -> Term {
        build(&THROWING, vec![Arg::Value(v)])
    }

    pub fn catch(c: Term, handler: Term) -> Term {
        build(&CATCH, vec![Arg::Term(c), Arg::Term(handler)])
    }

    pub fn assign(x: &str, e: Term) -> Term {
        build(&ASSIGN, vec![Arg::Name(x.into()), Arg::Term(e)])
    }

    pub fn emit(e: Term) -> Term {
        build(&EMIT, vec![Arg::Term(e)])
    }

    pub fn lit(v: impl Into<Value>) -> Term {
        build(&LIT, vec![Arg::Value(v.into())])
    }

    pub fn boundid(x: &str) -> Term {
        build(&BOUNDID, vec![Arg::Name(x.into())])
    }

    pub fn deref(x: &str) -> Term {
        build(&DEREF, vec![Arg::Name(x.into())])
    }

    pub fn block(d: Term, e: Term) -> Term {
        build(&BLOCK, vec![Arg::Term(d), Arg::Term(e)])
    }

    pub fn env(map: Value) -> Term {
        build(&ENV, vec![Arg::Value(map)])
    }

    pub fn bind(x: &str, e: Term) -> Term {
        build(&BIND, vec![Arg::Name(x.into()), Arg::Term(e)])
    }

    pub fn abs(prm: Term, body: Term) -> Term {
        build(&ABS, vec![Arg::Term(prm), Arg::Term(body)])
    }

    pub fn eq(e: Term) -> Term {
        build(&EQ, vec![Arg::Term(e)])
    }
}

/// `while (e) c` as a catch around a loop whose handler consumes `breaking`.
pub fn desugar_while(e: Term, c: Term) -> Result<Term, TermError> {
    use syntax::*;
    let loop_ = COND_LOOP.inject(vec![Arg::Term(e), Arg::Term(c)])?;
    let handler = abs(eq(lit(Value::sym("breaking"))), skip());
    CATCH.inject(vec![Arg::Term(loop_), Arg::Term(handler)])
}

/// `break` as throwing the `breaking` symbol.
pub fn desugar_break() -> Term {
    syntax::throw(syntax::lit(Value::sym("breaking")))
}

/// An ordered set of productions.
#[derive(Debug, Clone, Default)]
pub struct Grammar {
    constructs: Vec<&'static Construct>,
}

impl Grammar {
    pub fn new(constructs: Vec<&'static Construct>) -> Self {
        Self { constructs }
    }

    pub fn constructs(&self) -> &[&'static Construct] {
        &self.constructs
    }

    pub fn of_sort(&self, sort: Sort) -> impl Iterator<Item = &'static Construct> + '_ {
        self.constructs.iter().copied().filter(move |c| c.sort() == sort)
    }

    pub fn lookup(&self, name: &str) -> Option<&'static Construct> {
        self.constructs
            .iter()
            .copied()
            .find(|c| c.id() == name || c.name() == name)
    }
}

/// Finite literal pools used to fill leaf positions during enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct Seeds {
    pub values: Vec<Value>,
    pub names: Vec<String>,
    pub maps: Vec<Value>,
}

impl Default for Seeds {
    fn default() -> Self {
        Self {
            values: vec![
                Value::Bool(true),
                Value::Bool(false),
                Value::Int(0),
                Value::Int(1),
                Value::sym("breaking"),
            ],
            names: vec!["x".into(), "y".into()],
            maps: vec![Value::empty_map(), Value::map([("x", Value::Int(1))])],
        }
    }
}

impl Seeds {
    fn pool_len(&self, p: Param) -> usize {
        match p {
            Param::Value => self.values.len(),
            Param::Map => self.maps.len(),
            Param::Name => self.names.len(),
            Param::Sort(_) => 0,
        }
    }

    fn leaf(&self, p: Param, i: usize) -> Arg {
        match p {
            Param::Value => Arg::Value(self.values[i].clone()),
            Param::Map => Arg::Value(self.maps[i].clone()),
            Param::Name => Arg::Name(self.names[i].clone()),
            Param::Sort(_) => unreachable!("leaf pools exist only for literal params"),
        }
    }
}

/// Bounded, duplicate-free enumeration of well-sorted terms.
///
/// Terms come out ordered by height, then by production order, then
/// lexicographically by argument (last argument varying fastest).
/// All levels below the requested height are materialized for the sorts the
/// requested sort depends on; the top level is produced lazily.
pub struct Enumerator<'g> {
    grammar: &'g Grammar,
    seeds: &'g Seeds,
    // levels[h][sort] = all terms of height <= h, ordered by height.
    levels: Vec<HashMap<Sort, Vec<Term>>>,
    scope: BTreeSet<Sort>,
}

impl<'g> Enumerator<'g> {
    pub fn new(grammar: &'g Grammar, seeds: &'g Seeds) -> Self {
        let empty = Sort::ALL.iter().map(|&s| (s, Vec::new())).collect();
        Self {
            grammar,
            seeds,
            levels: vec![empty],
            scope: BTreeSet::new(),
        }
    }

    /// Sorts whose terms can occur inside terms of `sort`, including itself.
    fn closure(&self, sort: Sort) -> BTreeSet<Sort> {
        let mut seen = BTreeSet::from([sort]);
        let mut todo = vec![sort];
        while let Some(s) = todo.pop() {
            for c in self.grammar.of_sort(s) {
                for p in c.params() {
                    if let Param::Sort(t) = p {
                        if seen.insert(*t) {
                            todo.push(*t);
                        }
                    }
                }
            }
        }
        seen
    }

    fn ensure(&mut self, sort: Sort, height: usize) {
        let needed = self.closure(sort);
        if !needed.is_subset(&self.scope) {
            self.scope.extend(needed);
            self.levels.truncate(1);
        }
        while self.levels.len() <= height {
            let h = self.levels.len();
            let mut next = self.levels[h - 1].clone();
            for sort in self.scope.iter().copied() {
                let exact: Vec<Term> = self.exact_level(sort, h).collect();
                next.get_mut(&sort).expect("all sorts present").extend(exact);
            }
            self.levels.push(next);
        }
    }

    fn exact_level(&self, sort: Sort, height: usize) -> ExactLevel<'_> {
        let below = &self.levels[height - 1];
        let below2 = (height >= 2).then(|| &self.levels[height - 2]);
        let constructs: Vec<_> = self
            .grammar
            .of_sort(sort)
            .filter(|c| {
                let has_child = c.params().iter().any(|p| matches!(p, Param::Sort(_)));
                if height == 1 {
                    !has_child
                } else {
                    has_child
                }
            })
            .collect();
        ExactLevel {
            seeds: self.seeds,
            below,
            below2,
            constructs,
            current: 0,
            odometer: None,
        }
    }

    /// All terms of `sort` with height <= `depth`, materialized.
    pub fn up_to(&mut self, sort: Sort, depth: usize) -> Vec<Term> {
        self.ensure(sort, depth);
        self.levels[depth][&sort].clone()
    }

    /// All terms of `sort` with height <= `depth`, the top level lazily.
    pub fn stream(&mut self, sort: Sort, depth: usize) -> impl Iterator<Item = Term> + '_ {
        if depth == 0 {
            return TermStream::Done;
        }
        self.ensure(sort, depth - 1);
        let lower = self.levels[depth - 1][&sort].clone();
        TermStream::Running(lower.into_iter(), self.exact_level(sort, depth))
    }
}

enum TermStream<'a> {
    Done,
    Running(std::vec::IntoIter<Term>, ExactLevel<'a>),
}

impl Iterator for TermStream<'_> {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        match self {
            TermStream::Done => None,
            TermStream::Running(lower, top) => lower.next().or_else(|| top.next()),
        }
    }
}

struct ExactLevel<'a> {
    seeds: &'a Seeds,
    below: &'a HashMap<Sort, Vec<Term>>,
    below2: Option<&'a HashMap<Sort, Vec<Term>>>,
    constructs: Vec<&'static Construct>,
    current: usize,
    odometer: Option<Vec<usize>>,
}

impl ExactLevel<'_> {
    fn pool_len(&self, p: Param) -> usize {
        match p {
            Param::Sort(s) => self.below[&s].len(),
            _ => self.seeds.pool_len(p),
        }
    }

    fn boundary(&self, p: Param) -> usize {
        match (p, self.below2) {
            (Param::Sort(s), Some(b)) => b[&s].len(),
            _ => 0,
        }
    }

    // At least one child must come from the newest level, otherwise the
    // term was already produced at a lower height.
    fn reaches_height(&self, c: &Construct, idx: &[usize]) -> bool {
        let children: Vec<_> = c
            .params()
            .iter()
            .zip(idx)
            .filter(|(p, _)| matches!(p, Param::Sort(_)))
            .collect();
        children.is_empty() || children.iter().any(|(p, &i)| i >= self.boundary(**p))
    }

    fn advance(&self, c: &Construct, idx: &mut [usize]) -> bool {
        for pos in (0..idx.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < self.pool_len(c.params()[pos]) {
                return true;
            }
            idx[pos] = 0;
        }
        false
    }

    fn build(&self, c: &'static Construct, idx: &[usize]) -> Term {
        let args = c
            .params()
            .iter()
            .zip(idx)
            .map(|(p, &i)| match p {
                Param::Sort(s) => Arg::Term(self.below[s][i].clone()),
                _ => self.seeds.leaf(*p, i),
            })
            .collect();
        c.inject(args).expect("enumerated arguments are well sorted")
    }
}

impl Iterator for ExactLevel<'_> {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        loop {
            let c = *self.constructs.get(self.current)?;
            let mut idx = match self.odometer.take() {
                None => {
                    let idx = vec![0; c.params().len()];
                    if c.params().iter().any(|p| self.pool_len(*p) == 0) {
                        self.current += 1;
                        continue;
                    }
                    idx
                }
                Some(mut idx) => {
                    if !self.advance(c, &mut idx) {
                        self.current += 1;
                        continue;
                    }
                    idx
                }
            };
            while !self.reaches_height(c, &idx) {
                if !self.advance(c, &mut idx) {
                    break;
                }
            }
            if !self.reaches_height(c, &idx) {
                self.current += 1;
                continue;
            }
            let t = self.build(c, &idx);
            self.odometer = Some(idx);
            return Some(t);
        }
    }
}

/// All terms of `sort` with height <= `depth`.
pub fn enumerate_terms(grammar: &Grammar, seeds: &Seeds, sort: Sort, depth: usize) -> Vec<Term> {
    Enumerator::new(grammar, seeds).up_to(sort, depth)
}

/// Number of terms `enumerate_terms` would produce, without building them.
/// Saturates at `u128::MAX`.
pub fn count_terms(grammar: &Grammar, seeds: &Seeds, sort: Sort, depth: usize) -> u128 {
    let mut le: HashMap<Sort, u128> = Sort::ALL.iter().map(|&s| (s, 0)).collect();
    let mut le2 = le.clone();
    for h in 1..=depth {
        let mut next = le.clone();
        for s in Sort::ALL {
            let mut exact: u128 = 0;
            for c in grammar.of_sort(s) {
                let has_child = c.params().iter().any(|p| matches!(p, Param::Sort(_)));
                let (all, old) = c.params().iter().fold((1u128, 1u128), |(a, o), p| match p {
                    Param::Sort(t) => (a.saturating_mul(le[t]), o.saturating_mul(le2[t])),
                    _ => {
                        let n = seeds.pool_len(*p) as u128;
                        (a.saturating_mul(n), o.saturating_mul(n))
                    }
                });
                exact = exact.saturating_add(match (h, has_child) {
                    (1, false) => all,
                    (1, true) | (_, false) => 0,
                    _ => all.saturating_sub(old),
                });
            }
            *next.get_mut(&s).expect("sort") = le[&s].saturating_add(exact);
        }
        le2 = le;
        le = next;
    }
    le[&sort]
}

#[cfg(test)]
mod tests {
    use super::syntax::*;
    use super::*;

    fn skip_seq() -> Grammar {
        Grammar::new(vec![&SKIP, &SEQ])
    }

    #[test]
    fn inject_and_project_seq() {
        let t = SEQ
            .inject(vec![Arg::Term(skip()), Arg::Term(skip())])
            .unwrap();
        assert_eq!(t, seq(skip(), skip()));
        assert_eq!(
            SEQ.project(&t),
            Some(&[Arg::Term(skip()), Arg::Term(skip())][..])
        );
        assert_eq!(SEQ.project(&skip()), None);
        assert_eq!(SKIP.project(&skip()), Some(&[][..]));
    }

    #[test]
    fn inject_checks_arity_and_sorts() {
        assert_eq!(
            SEQ.inject(vec![Arg::Term(skip())]).unwrap_err(),
            TermError::Arity {
                construct: "Cmd.seq",
                expected: 2,
                found: 1
            }
        );
        assert!(matches!(
            SEQ.inject(vec![Arg::Term(lit(1)), Arg::Term(skip())]),
            Err(TermError::ArgMismatch { position: 0, .. })
        ));
        assert!(ENV.inject(vec![Arg::Value(Value::Int(1))]).is_err());
        assert!(LIT.inject(vec![Arg::Value(Value::empty_map())]).is_err());
    }

    #[test]
    fn value_forms() {
        assert!(lit(2).is_value());
        assert!(!seq(skip(), skip()).is_value());
        assert!(!skip().is_value());
        assert!(eq(lit(2)).is_value());
        assert!(!eq(deref("x")).is_value());
        assert!(abs(eq(lit(1)), skip()).is_value());
        assert!(!abs(eq(boundid("x")), skip()).is_value());
        assert!(env(Value::empty_map()).is_value());
        assert!(!bind("x", lit(1)).is_value());
        assert!(throwing(Value::Int(1)).is_terminal());
        assert!(!throwing(Value::Int(1)).is_value());
    }

    #[test]
    fn construct_names() {
        assert_eq!(SEQ.name(), "seq");
        assert_eq!(SEQ.sort(), Sort::Cmd);
        assert_eq!(syntax::by_id("Exp.block").map(Construct::id), Some("Exp.block"));
    }

    #[test]
    fn desugaring() {
        assert_eq!(desugar_break(), throw(lit(Value::sym("breaking"))));
        let w = desugar_while(lit(false), skip()).unwrap();
        assert_eq!(
            w,
            catch(
                cond_loop(lit(false), skip()),
                abs(eq(lit(Value::sym("breaking"))), skip())
            )
        );
        assert!(desugar_while(skip(), skip()).is_err());
    }

    #[test]
    fn skip_seq_small_depths() {
        let g = skip_seq();
        let seeds = Seeds::default();
        assert_eq!(enumerate_terms(&g, &seeds, Sort::Cmd, 1), vec![skip()]);
        assert_eq!(
            enumerate_terms(&g, &seeds, Sort::Cmd, 2),
            vec![skip(), seq(skip(), skip())]
        );
        assert_eq!(enumerate_terms(&g, &seeds, Sort::Cmd, 3).len(), 5);
        assert!(enumerate_terms(&g, &seeds, Sort::Cmd, 0).is_empty());
    }

    #[test]
    fn stream_matches_materialized() {
        let g = skip_seq();
        let seeds = Seeds::default();
        let mut en = Enumerator::new(&g, &seeds);
        let streamed: Vec<_> = en.stream(Sort::Cmd, 5).collect();
        assert_eq!(streamed, enumerate_terms(&g, &seeds, Sort::Cmd, 5));
    }

    #[test]
    fn count_follows_recurrence() {
        // a(n) = 1 + a(n-1)^2 for skip-seq
        let g = skip_seq();
        let seeds = Seeds::default();
        let mut a: u128 = 0;
        for d in 1..=7 {
            a = 1 + a * a;
            assert_eq!(count_terms(&g, &seeds, Sort::Cmd, d), a);
        }
        assert_eq!(count_terms(&g, &seeds, Sort::Cmd, 6), 458_330);
    }

    #[test]
    fn heights() {
        assert_eq!(skip().height(), 1);
        assert_eq!(lit(3).height(), 1);
        assert_eq!(seq(seq(skip(), skip()), skip()).height(), 3);
    }
}
