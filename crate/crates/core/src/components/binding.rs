use super::{literal, Component, RuleContext, ENV_ENTITY};
use crate::labels::{EntityArrow, EntityKind};
use crate::step::{RuleKind::*, RuleSpec, Transition};
use crate::terms::syntax::*;
use crate::terms::{Arg, Construct, Restricted};
use crate::value::Value;

const READS_ENV: &[(&str, EntityKind)] = &[(ENV_ENTITY, EntityKind::ReadOnly)];

/// `let d in e`: evaluates the declaration, then the body under the current
/// environment updated by the declared one.
pub struct Block;

impl Component for Block {
    fn construct(&self) -> &'static Construct {
        &BLOCK
    }

    fn mentions(&self) -> &'static [(&'static str, EntityKind)] {
        READS_ENV
    }

    fn rules(&self) -> &'static [RuleSpec] {
        const RULES: &[RuleSpec] = &[
            RuleSpec::new("block_1", Premise),
            RuleSpec::new("block_2", Premise),
            RuleSpec::new("block_3", Unlabeled),
        ];
        RULES
    }

    fn local_step(&self, rt: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition> {
        let [Arg::Term(d), Arg::Term(e)] = rt.args() else {
            return Vec::new();
        };
        let Some([Arg::Value(declared)]) = ENV.project(d) else {
            return cx
                .premises(d)
                .into_iter()
                .map(|p| {
                    let target = block(p.target().clone(), e.clone());
                    cx.pass("block_1", p, target)
                })
                .collect();
        };
        if e.is_value() {
            return vec![cx.unobservable("block_3", e.clone())];
        }
        let Some(outer) = cx.object(ENV_ENTITY) else {
            return Vec::new();
        };
        let Some(inner) = outer.update(declared) else {
            return Vec::new();
        };
        cx.premises_with(e, &[(ENV_ENTITY, inner)])
            .into_iter()
            .filter_map(|p| {
                let mut mentioned = p.mentioned().clone();
                mentioned
                    .set(ENV_ENTITY, EntityArrow::Ro(outer.clone()))
                    .ok()?;
                let target = block(d.clone(), p.target().clone());
                Some(cx.conclude("block_2", p, mentioned, target))
            })
            .collect()
    }
}

pub struct Bind;

impl Component for Bind {
    fn construct(&self) -> &'static Construct {
        &BIND
    }

    fn rules(&self) -> &'static [RuleSpec] {
        const RULES: &[RuleSpec] = &[
            RuleSpec::new("bind_1", Premise),
            RuleSpec::new("bind_2", Unlabeled),
        ];
        RULES
    }

    fn local_step(&self, rt: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition> {
        let [Arg::Name(x), Arg::Term(e)] = rt.args() else {
            return Vec::new();
        };
        if let Some(v) = literal(e) {
            let declared = Value::map([(x.as_str(), v.clone())]);
            return vec![cx.unobservable("bind_2", env(declared))];
        }
        cx.premises(e)
            .into_iter()
            .map(|p| {
                let target = bind(x, p.target().clone());
                cx.pass("bind_1", p, target)
            })
            .collect()
    }
}

pub struct BoundId;

impl Component for BoundId {
    fn construct(&self) -> &'static Construct {
        &BOUNDID
    }

    fn mentions(&self) -> &'static [(&'static str, EntityKind)] {
        READS_ENV
    }

    fn rules(&self) -> &'static [RuleSpec] {
        const RULES: &[RuleSpec] = &[RuleSpec::new("boundid_1", Axiom)];
        RULES
    }

    fn local_step(&self, rt: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition> {
        let [Arg::Name(x)] = rt.args() else {
            return Vec::new();
        };
        let bound = cx
            .object(ENV_ENTITY)
            .and_then(Value::as_map)
            .and_then(|m| m.get(x));
        match bound {
            Some(v) => vec![cx.axiom("boundid_1", cx.identity_mentioned(), lit(v.clone()))],
            None => Vec::new(),
        }
    }
}
