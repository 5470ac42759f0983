//! Test fixtures: a deliberately nondeterministic component.

use crate::components::{Component, RuleContext};
use crate::step::{RuleKind, RuleSpec, Transition};
use crate::terms::syntax::{seq, skip};
use crate::terms::{Construct, Restricted, Sort};

pub static FORK: Construct = Construct::new("Cmd.fork", Sort::Cmd, &[]);

/// `fork` steps to `skip` or to `seq(skip, skip)`.
pub struct Fork;

impl Component for Fork {
    fn construct(&self) -> &'static Construct {
        &FORK
    }

    fn imports(&self) -> &'static [&'static str] {
        &["Cmd.skip", "Cmd.seq"]
    }

    fn rules(&self) -> &'static [RuleSpec] {
        const RULES: &[RuleSpec] = &[
            RuleSpec::new("fork_left", RuleKind::Unlabeled),
            RuleSpec::new("fork_right", RuleKind::Unlabeled),
        ];
        RULES
    }

    fn local_step(&self, _: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition> {
        vec![
            cx.unobservable("fork_left", skip()),
            cx.unobservable("fork_right", seq(skip(), skip())),
        ]
    }
}
