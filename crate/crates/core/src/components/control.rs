use super::{literal, Component, RuleContext};
use crate::step::{RuleKind::*, RuleSpec, Transition};
use crate::terms::syntax::*;
use crate::terms::{Arg, Construct, Restricted};
use crate::value::Value;

pub struct Skip;

impl Component for Skip {
    fn construct(&self) -> &'static Construct {
        &SKIP
    }

    fn rules(&self) -> &'static [RuleSpec] {
        &[]
    }

    fn local_step(&self, _: &Restricted, _: &RuleContext<'_>) -> Vec<Transition> {
        Vec::new()
    }
}

/// Abrupt completion. Terminal, like `skip`.
pub struct Throwing;

impl Component for Throwing {
    fn construct(&self) -> &'static Construct {
        &THROWING
    }

    fn rules(&self) -> &'static [RuleSpec] {
        &[]
    }

    fn local_step(&self, _: &Restricted, _: &RuleContext<'_>) -> Vec<Transition> {
        Vec::new()
    }
}

pub struct Seq;

impl Component for Seq {
    fn construct(&self) -> &'static Construct {
        &SEQ
    }

    fn imports(&self) -> &'static [&'static str] {
        &["Cmd.skip"]
    }

    fn rules(&self) -> &'static [RuleSpec] {
        const RULES: &[RuleSpec] = &[
            RuleSpec::new("seq_1", Unlabeled),
            RuleSpec::new("seq_2", Premise),
            RuleSpec::new("seq_throw", Unlabeled),
        ];
        RULES
    }

    fn local_step(&self, rt: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition> {
        let [Arg::Term(c1), Arg::Term(c2)] = rt.args() else {
            return Vec::new();
        };
        if c1.is(&SKIP) {
            return vec![cx.unobservable("seq_1", c2.clone())];
        }
        if c1.is(&THROWING) {
            return vec![cx.unobservable("seq_throw", c1.clone())];
        }
        cx.premises(c1)
            .into_iter()
            .map(|p| {
                let target = seq(p.target().clone(), c2.clone());
                cx.pass("seq_2", p, target)
            })
            .collect()
    }
}

pub struct Cond;

impl Component for Cond {
    fn construct(&self) -> &'static Construct {
        &COND
    }

    fn rules(&self) -> &'static [RuleSpec] {
        const RULES: &[RuleSpec] = &[
            RuleSpec::new("cond_1", Premise),
            RuleSpec::new("cond_true", Unlabeled),
            RuleSpec::new("cond_false", Unlabeled),
        ];
        RULES
    }

    fn local_step(&self, rt: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition> {
        let [Arg::Term(e), Arg::Term(then), Arg::Term(otherwise)] = rt.args() else {
            return Vec::new();
        };
        match literal(e) {
            Some(Value::Bool(true)) => vec![cx.unobservable("cond_true", then.clone())],
            Some(Value::Bool(false)) => vec![cx.unobservable("cond_false", otherwise.clone())],
            Some(_) => Vec::new(),
            None => cx
                .premises(e)
                .into_iter()
                .map(|p| {
                    let target = cond(p.target().clone(), then.clone(), otherwise.clone());
                    cx.pass("cond_1", p, target)
                })
                .collect(),
        }
    }
}

pub struct CondLoop;

impl Component for CondLoop {
    fn construct(&self) -> &'static Construct {
        &COND_LOOP
    }

    fn imports(&self) -> &'static [&'static str] {
        &["Cmd.cond", "Cmd.seq", "Cmd.skip"]
    }

    fn rules(&self) -> &'static [RuleSpec] {
        const RULES: &[RuleSpec] = &[RuleSpec::new("cond_loop_unfold", Unlabeled)];
        RULES
    }

    fn local_step(&self, rt: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition> {
        let [Arg::Term(e), Arg::Term(c)] = rt.args() else {
            return Vec::new();
        };
        let again = seq(c.clone(), rt.embed().clone());
        vec![cx.unobservable("cond_loop_unfold", cond(e.clone(), again, skip()))]
    }
}

pub struct Throw;

impl Component for Throw {
    fn construct(&self) -> &'static Construct {
        &THROW
    }

    fn imports(&self) -> &'static [&'static str] {
        &["Cmd.throwing"]
    }

    fn rules(&self) -> &'static [RuleSpec] {
        const RULES: &[RuleSpec] = &[
            RuleSpec::new("throw_1", Premise),
            RuleSpec::new("throw_2", Unlabeled),
        ];
        RULES
    }

    fn local_step(&self, rt: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition> {
        let [Arg::Term(e)] = rt.args() else {
            return Vec::new();
        };
        if let Some(v) = literal(e) {
            return vec![cx.unobservable("throw_2", throwing(v.clone()))];
        }
        cx.premises(e)
            .into_iter()
            .map(|p| {
                let target = throw(p.target().clone());
                cx.pass("throw_1", p, target)
            })
            .collect()
    }
}

/// Handlers are restricted to `abs(eq(e), body)`.
pub struct Catch;

impl Component for Catch {
    fn construct(&self) -> &'static Construct {
        &CATCH
    }

    fn imports(&self) -> &'static [&'static str] {
        &["Cmd.skip", "Cmd.throwing"]
    }

    fn rules(&self) -> &'static [RuleSpec] {
        const RULES: &[RuleSpec] = &[
            RuleSpec::new("catch_1", Premise),
            RuleSpec::new("catch_skip", Unlabeled),
            RuleSpec::new("catch_match", Unlabeled),
            RuleSpec::new("catch_rethrow", Unlabeled),
            RuleSpec::new("catch_prm", Premise),
        ];
        RULES
    }

    fn local_step(&self, rt: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition> {
        let [Arg::Term(c), Arg::Term(h)] = rt.args() else {
            return Vec::new();
        };
        if c.is(&SKIP) {
            return vec![cx.unobservable("catch_skip", skip())];
        }
        if !c.is(&THROWING) {
            return cx
                .premises(c)
                .into_iter()
                .map(|p| {
                    let target = catch(p.target().clone(), h.clone());
                    cx.pass("catch_1", p, target)
                })
                .collect();
        }
        let Some(thrown) = c.args()[0].as_value() else {
            return Vec::new();
        };
        let Some([Arg::Term(prm), Arg::Term(body)]) = ABS.project(h) else {
            return Vec::new();
        };
        let Some([Arg::Term(pattern)]) = EQ.project(prm) else {
            return Vec::new();
        };
        match literal(pattern) {
            Some(w) if w == thrown => vec![cx.unobservable("catch_match", body.clone())],
            Some(_) => vec![cx.unobservable("catch_rethrow", c.clone())],
            None => cx
                .premises(pattern)
                .into_iter()
                .map(|p| {
                    let handler = abs(eq(p.target().clone()), body.clone());
                    cx.pass("catch_prm", p, catch(c.clone(), handler))
                })
                .collect(),
        }
    }
}
