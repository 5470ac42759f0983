//! Language definition files.
//!
//! ```toml
//! sorts = ["Cmd", "Exp"]
//!
//! [[entities]]
//! name = "σ"
//! kind = "read_write"      # read_only | read_write | write_only
//! domain = "map"           # optional: map | value | values
//!
//! [components]
//! Cmd = ["Cmd.skip", "Cmd.seq", "Cmd.assign"]
//! Exp = ["Exp.deref"]
//!
//! [seeds]                  # optional, every field defaults
//! booleans = [true, false]
//! integers = [0, 1]
//! symbols = ["breaking"]
//! identifiers = ["x", "y"]
//! envs = [{}, { x = 1 }]
//! ```

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::labels::{EntityKind, EntitySpec, LabelError, ObjectDomain};
use crate::terms::{Seeds, Sort};
use crate::value::{is_symbol, Value, ValueMap};

#[derive(Debug, Error)]
pub enum DefinitionError {
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown entity kind `{0}`")]
    UnknownKind(String),
    #[error("unknown object domain `{0}`")]
    UnknownDomain(String),
    #[error("components listed for sort `{0}`, which is not declared")]
    UndeclaredSort(String),
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error(transparent)]
    Signature(#[from] LabelError),
}

/// Input to [`crate::engine::Language::build`].
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageDefinition {
    pub entities: Vec<EntitySpec>,
    pub sorts: Vec<Sort>,
    /// Component ids per sort, in declaration order.
    pub components: Vec<(Sort, Vec<String>)>,
    pub seeds: Seeds,
}

impl LanguageDefinition {
    pub fn new(entities: Vec<EntitySpec>, components: &[(Sort, &[&str])]) -> Self {
        Self {
            entities,
            sorts: components.iter().map(|(s, _)| *s).collect(),
            components: components
                .iter()
                .map(|(s, ids)| (*s, ids.iter().map(|id| id.to_string()).collect()))
                .collect(),
            seeds: Seeds::default(),
        }
    }

    /// `skip` and `seq` over the given entities.
    pub fn skip_seq(entities: Vec<EntitySpec>) -> Self {
        Self::new(entities, &[(Sort::Cmd, &["Cmd.skip", "Cmd.seq"])])
    }

    /// Every shipped component over `ρ`, `σ` and `out`.
    pub fn full() -> Self {
        Self::new(
            standard_entities(),
            &[
                (
                    Sort::Cmd,
                    &[
                        "Cmd.skip",
                        "Cmd.seq",
                        "Cmd.cond",
                        "Cmd.cond_loop",
                        "Cmd.throw",
                        "Cmd.throwing",
                        "Cmd.catch",
                        "Cmd.assign",
                        "Cmd.emit",
                    ],
                ),
                (Sort::Exp, &["Exp.block", "Exp.boundid", "Exp.deref"]),
                (Sort::Dcl, &["Dcl.bind"]),
                (Sort::Pcd, &[]),
                (Sort::Prm, &[]),
            ],
        )
    }

    pub fn with_seeds(mut self, seeds: Seeds) -> Self {
        self.seeds = seeds;
        self
    }

    pub fn from_toml(src: &str) -> Result<Self, DefinitionError> {
        let raw: RawDefinition = toml::from_str(src)?;
        let sorts = raw
            .sorts
            .iter()
            .map(|s| Sort::parse(s).ok_or_else(|| DefinitionError::UnknownSort(s.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(extra) = raw
            .components
            .keys()
            .find(|k| !sorts.iter().any(|s| s.as_str() == k.as_str()))
        {
            return Err(match Sort::parse(extra) {
                Some(_) => DefinitionError::UndeclaredSort(extra.clone()),
                None => DefinitionError::UnknownSort(extra.clone()),
            });
        }
        let components = sorts
            .iter()
            .map(|s| {
                let ids = raw.components.get(s.as_str()).cloned().unwrap_or_default();
                (*s, ids)
            })
            .collect();
        let entities = raw
            .entities
            .into_iter()
            .map(RawEntity::resolve)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            entities,
            sorts,
            components,
            seeds: raw.seeds.resolve()?,
        })
    }
}

/// `ρ` read-only, `σ` read-write and `out` write-only.
pub fn standard_entities() -> Vec<EntitySpec> {
    vec![
        EntitySpec::read_only("ρ"),
        EntitySpec::read_write("σ"),
        EntitySpec::write_only("out"),
    ]
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDefinition {
    #[serde(default)]
    entities: Vec<RawEntity>,
    sorts: Vec<String>,
    #[serde(default)]
    components: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    seeds: RawSeeds,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntity {
    name: String,
    kind: String,
    domain: Option<String>,
}

impl RawEntity {
    fn resolve(self) -> Result<EntitySpec, DefinitionError> {
        let kind = EntityKind::parse(&self.kind).ok_or(DefinitionError::UnknownKind(self.kind))?;
        let domain = match self.domain {
            Some(d) => ObjectDomain::parse(&d).ok_or(DefinitionError::UnknownDomain(d))?,
            None if kind == EntityKind::WriteOnly => ObjectDomain::Values,
            None => ObjectDomain::Map,
        };
        Ok(EntitySpec::new(self.name, kind, domain))
    }
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeeds {
    booleans: Option<Vec<bool>>,
    integers: Option<Vec<i64>>,
    symbols: Option<Vec<String>>,
    identifiers: Option<Vec<String>>,
    envs: Option<Vec<BTreeMap<String, toml::Value>>>,
}

impl RawSeeds {
    fn resolve(self) -> Result<Seeds, DefinitionError> {
        let defaults = Seeds::default();
        let values = if self.booleans.is_none() && self.integers.is_none() && self.symbols.is_none()
        {
            defaults.values
        } else {
            let mut values: Vec<Value> = Vec::new();
            values.extend(self.booleans.unwrap_or_default().into_iter().map(Value::Bool));
            values.extend(self.integers.unwrap_or_default().into_iter().map(Value::Int));
            for s in self.symbols.unwrap_or_default() {
                values.push(symbol(s)?);
            }
            values
        };
        let names = match self.identifiers {
            Some(ids) => ids
                .into_iter()
                .map(|s| symbol(s.clone()).map(|_| s))
                .collect::<Result<_, _>>()?,
            None => defaults.names,
        };
        let maps = match self.envs {
            Some(envs) => envs.iter().map(env).collect::<Result<_, _>>()?,
            None => defaults.maps,
        };
        Ok(Seeds {
            values,
            names,
            maps,
        })
    }
}

fn symbol(s: String) -> Result<Value, DefinitionError> {
    if is_symbol(&s) && s != "true" && s != "false" {
        Ok(Value::Sym(s))
    } else {
        Err(DefinitionError::InvalidSeed(format!("`{s}` is not an identifier")))
    }
}

fn env(table: &BTreeMap<String, toml::Value>) -> Result<Value, DefinitionError> {
    let mut map = ValueMap::new();
    for (k, v) in table {
        symbol(k.clone())?;
        map.insert(k.clone(), literal(v)?);
    }
    Ok(Value::Map(map.into()))
}

fn literal(v: &toml::Value) -> Result<Value, DefinitionError> {
    match v {
        toml::Value::Integer(i) => Ok(Value::Int(*i)),
        toml::Value::Boolean(b) => Ok(Value::Bool(*b)),
        toml::Value::String(s) => symbol(s.clone()),
        toml::Value::Table(t) => {
            let entries: BTreeMap<String, toml::Value> =
                t.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            env(&entries)
        }
        other => Err(DefinitionError::InvalidSeed(format!(
            "unsupported literal `{other}`"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SKIP_SEQ: &str = r#"
sorts = ["Cmd"]

[[entities]]
name = "ρ"
kind = "read_only"

[[entities]]
name = "σ"
kind = "rw"

[components]
Cmd = ["Cmd.skip", "Cmd.seq"]
"#;

    #[test]
    fn parses_skip_seq() {
        let d = LanguageDefinition::from_toml(SKIP_SEQ).unwrap();
        assert_eq!(d.sorts, vec![Sort::Cmd]);
        assert_eq!(d.entities[1].kind, EntityKind::ReadWrite);
        assert_eq!(d.entities[1].domain, ObjectDomain::Map);
        assert_eq!(d.components[0].1, vec!["Cmd.skip", "Cmd.seq"]);
        assert_eq!(d.seeds, Seeds::default());
    }

    #[test]
    fn rejects_unknown_keys() {
        let src = format!("{SKIP_SEQ}\n[extra]\nx = 1\n");
        assert!(matches!(
            LanguageDefinition::from_toml(&src),
            Err(DefinitionError::Toml(_))
        ));
        let src = SKIP_SEQ.replace("kind = \"rw\"", "kind = \"rw\"\ncolour = 1");
        assert!(LanguageDefinition::from_toml(&src).is_err());
    }

    #[test]
    fn rejects_bad_sorts_and_kinds() {
        let src = SKIP_SEQ.replace("sorts = [\"Cmd\"]", "sorts = [\"Stmt\"]");
        assert!(matches!(
            LanguageDefinition::from_toml(&src),
            Err(DefinitionError::UnknownSort(s)) if s == "Stmt"
        ));
        let src = SKIP_SEQ.replace("Cmd = [", "Exp = []\nCmd = [");
        assert!(matches!(
            LanguageDefinition::from_toml(&src),
            Err(DefinitionError::UndeclaredSort(s)) if s == "Exp"
        ));
        let src = SKIP_SEQ.replace("\"rw\"", "\"append\"");
        assert!(matches!(
            LanguageDefinition::from_toml(&src),
            Err(DefinitionError::UnknownKind(_))
        ));
    }

    #[test]
    fn seeds_override_defaults() {
        let src = format!(
            "{SKIP_SEQ}\n[seeds]\nbooleans = [true]\nidentifiers = [\"b\"]\nenvs = [{{ b = true }}]\n"
        );
        let d = LanguageDefinition::from_toml(&src).unwrap();
        assert_eq!(d.seeds.values, vec![Value::Bool(true)]);
        assert_eq!(d.seeds.names, vec!["b".to_string()]);
        assert_eq!(d.seeds.maps, vec![Value::map([("b", Value::Bool(true))])]);

        let bad = format!("{SKIP_SEQ}\n[seeds]\nsymbols = [\"not a name\"]\n");
        assert!(matches!(
            LanguageDefinition::from_toml(&bad),
            Err(DefinitionError::InvalidSeed(_))
        ));
    }
}
