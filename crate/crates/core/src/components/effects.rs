use super::{literal, Component, RuleContext, OUT_ENTITY, STORE_ENTITY};
use crate::labels::{EntityArrow, EntityKind};
use crate::step::{RuleKind::*, RuleSpec, Transition};
use crate::terms::syntax::*;
use crate::terms::{Arg, Construct, Restricted};
use crate::value::Value;

const USES_STORE: &[(&str, EntityKind)] = &[(STORE_ENTITY, EntityKind::ReadWrite)];

pub struct Assign;

impl Component for Assign {
    fn construct(&self) -> &'static Construct {
        &ASSIGN
    }

    fn mentions(&self) -> &'static [(&'static str, EntityKind)] {
        USES_STORE
    }

    fn imports(&self) -> &'static [&'static str] {
        &["Cmd.skip"]
    }

    fn rules(&self) -> &'static [RuleSpec] {
        const RULES: &[RuleSpec] = &[
            RuleSpec::new("assign_1", Premise),
            RuleSpec::new("assign_2", Axiom),
        ];
        RULES
    }

    fn local_step(&self, rt: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition> {
        let [Arg::Name(x), Arg::Term(e)] = rt.args() else {
            return Vec::new();
        };
        let Some(v) = literal(e) else {
            return cx
                .premises(e)
                .into_iter()
                .map(|p| {
                    let target = assign(x, p.target().clone());
                    cx.pass("assign_1", p, target)
                })
                .collect();
        };
        let Some(pre) = cx.object(STORE_ENTITY) else {
            return Vec::new();
        };
        let Some(post) = pre.with_binding(x, v.clone()) else {
            return Vec::new();
        };
        let mut mentioned = cx.identity_mentioned();
        let arrow = EntityArrow::Rw {
            pre: pre.clone(),
            post,
        };
        if mentioned.set(STORE_ENTITY, arrow).is_err() {
            return Vec::new();
        }
        vec![cx.axiom("assign_2", mentioned, skip())]
    }
}

pub struct Deref;

impl Component for Deref {
    fn construct(&self) -> &'static Construct {
        &DEREF
    }

    fn mentions(&self) -> &'static [(&'static str, EntityKind)] {
        USES_STORE
    }

    fn rules(&self) -> &'static [RuleSpec] {
        const RULES: &[RuleSpec] = &[RuleSpec::new("deref_1", Axiom)];
        RULES
    }

    fn local_step(&self, rt: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition> {
        let [Arg::Name(x)] = rt.args() else {
            return Vec::new();
        };
        let stored = cx
            .object(STORE_ENTITY)
            .and_then(Value::as_map)
            .and_then(|m| m.get(x));
        match stored {
            Some(v) => vec![cx.axiom("deref_1", cx.identity_mentioned(), lit(v.clone()))],
            None => Vec::new(),
        }
    }
}

pub struct Emit;

impl Component for Emit {
    fn construct(&self) -> &'static Construct {
        &EMIT
    }

    fn mentions(&self) -> &'static [(&'static str, EntityKind)] {
        &[(OUT_ENTITY, EntityKind::WriteOnly)]
    }

    fn imports(&self) -> &'static [&'static str] {
        &["Cmd.skip"]
    }

    fn rules(&self) -> &'static [RuleSpec] {
        const RULES: &[RuleSpec] = &[
            RuleSpec::new("emit_1", Premise),
            RuleSpec::new("emit_2", Axiom),
        ];
        RULES
    }

    fn local_step(&self, rt: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition> {
        let [Arg::Term(e)] = rt.args() else {
            return Vec::new();
        };
        let Some(v) = literal(e) else {
            return cx
                .premises(e)
                .into_iter()
                .map(|p| {
                    let target = emit(p.target().clone());
                    cx.pass("emit_1", p, target)
                })
                .collect();
        };
        let mut mentioned = cx.identity_mentioned();
        if mentioned
            .set(OUT_ENTITY, EntityArrow::Wo(vec![v.clone()]))
            .is_err()
        {
            return Vec::new();
        }
        vec![cx.axiom("emit_2", mentioned, skip())]
    }
}
