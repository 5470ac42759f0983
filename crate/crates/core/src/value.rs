//! Computed values: literal payloads, environment maps and entity objects.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Finite map from identifiers to values. Environments and stores are both
/// represented this way; equality is structural on the canonical (sorted) form.
pub type ValueMap = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Int(i64),
    Bool(bool),
    /// Interned name such as `breaking`.
    Sym(String),
    Map(Arc<ValueMap>),
    Unit,
}

impl Value {
    pub fn sym(name: impl Into<String>) -> Self {
        Value::Sym(name.into())
    }

    pub fn empty_map() -> Self {
        Value::Map(Arc::new(ValueMap::new()))
    }

    pub fn map<K, I>(entries: I) -> Self
    where
        K: Into<String>,
        I: IntoIterator<Item = (K, Value)>,
    {
        Value::Map(Arc::new(
            entries.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        ))
    }

    pub fn as_map(&self) -> Option<&ValueMap> {
        match self {
            Value::Map(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    /// Right-biased union: bindings of `overlay` win.
    pub fn update(&self, overlay: &Value) -> Option<Value> {
        let base = self.as_map()?;
        let top = overlay.as_map()?;
        let mut merged = base.clone();
        merged.extend(top.iter().map(|(k, v)| (k.clone(), v.clone())));
        Some(Value::Map(Arc::new(merged)))
    }

    /// Map with one binding replaced or added.
    pub fn with_binding(&self, name: &str, value: Value) -> Option<Value> {
        let mut m = self.as_map()?.clone();
        m.insert(name.to_string(), value);
        Some(Value::Map(Arc::new(m)))
    }

    /// Parses the literal grammar used on the command line and in
    /// s-expressions: integers, `true`/`false`, otherwise a bare symbol.
    pub fn parse_literal(text: &str) -> Option<Value> {
        if text.is_empty() {
            return None;
        }
        if let Ok(i) = text.parse::<i64>() {
            return Some(Value::Int(i));
        }
        match text {
            "true" => Some(Value::Bool(true)),
            "false" => Some(Value::Bool(false)),
            _ if is_symbol(text) => Some(Value::Sym(text.to_string())),
            _ => None,
        }
    }
}

pub(crate) fn is_symbol(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '\'' | '?' | '!'))
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Sym(s) => f.write_str(s),
            Value::Unit => f.write_str("()"),
            Value::Map(m) => {
                f.write_str("(env")?;
                for (k, v) in m.iter() {
                    write!(f, " ({k} {v})")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn update_is_right_biased() {
        let base = Value::map([("x", Value::Int(1)), ("y", Value::Int(0))]);
        let top = Value::map([("x", Value::Int(2))]);
        let merged = base.update(&top).unwrap();
        assert_eq!(
            merged,
            Value::map([("x", Value::Int(2)), ("y", Value::Int(0))])
        );
    }

    #[test]
    fn literal_grammar() {
        assert_eq!(Value::parse_literal("-3"), Some(Value::Int(-3)));
        assert_eq!(Value::parse_literal("true"), Some(Value::Bool(true)));
        assert_eq!(Value::parse_literal("breaking"), Some(Value::sym("breaking")));
        assert_eq!(Value::parse_literal("(x"), None);
        assert_eq!(Value::parse_literal(""), None);
    }
}
