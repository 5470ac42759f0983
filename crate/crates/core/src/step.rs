//! Transitions and step relations.

use std::fmt;
use std::sync::Arc;

use crate::labels::{Label, Objects};
use crate::terms::{Construct, Restricted, Term};

/// How a rule treats labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// Axiom without a label: the whole label is an identity.
    Unlabeled,
    /// Axiom that builds its mentioned arrows; the rest is an identity.
    Axiom,
    /// One-premise rule; the unmentioned part of the premise label is passed
    /// through to the conclusion unchanged.
    Premise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleSpec {
    pub name: &'static str,
    pub kind: RuleKind,
}

impl RuleSpec {
    pub const fn new(name: &'static str, kind: RuleKind) -> Self {
        Self { name, kind }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleId {
    pub construct: &'static str,
    pub rule: &'static str,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.construct, self.rule)
    }
}

/// One element of a step relation, together with the premise it was derived
/// from (if the rule has one).
#[derive(Debug, Clone)]
pub struct Transition {
    pub source: Term,
    pub label: Label,
    pub rule: RuleId,
    pub kind: RuleKind,
    pub target: Term,
    pub premise: Option<Arc<Transition>>,
}

impl Transition {
    /// Same label and same target; rules and derivations are not compared.
    pub fn same_step(&self, other: &Transition) -> bool {
        self.target == other.target && self.label == other.label
    }
}

/// A global step relation on terms: all transitions from `term` whose labels
/// start at `source`.
pub trait Step {
    fn step(&self, term: &Term, source: &Objects) -> Vec<Transition>;
}

/// A step relation restricted to the terms of one construct.
pub trait LocalStep {
    fn construct(&self) -> &'static Construct;
    fn local_step(&self, rt: &Restricted, source: &Objects) -> Vec<Transition>;
}

impl<S: Step + ?Sized> Step for &S {
    fn step(&self, term: &Term, source: &Objects) -> Vec<Transition> {
        (**self).step(term, source)
    }
}

/// Restricts a global step relation to one construct.
pub struct Localized<S> {
    construct: &'static Construct,
    step: S,
}

pub fn localize<S: Step>(construct: &'static Construct, step: S) -> Localized<S> {
    Localized { construct, step }
}

impl<S: Step> LocalStep for Localized<S> {
    fn construct(&self) -> &'static Construct {
        self.construct
    }

    fn local_step(&self, rt: &Restricted, source: &Objects) -> Vec<Transition> {
        if rt.construct() != self.construct {
            return Vec::new();
        }
        self.step.step(rt.embed(), source)
    }
}

/// Extends a local step relation to the whole sort, permitting no steps from
/// terms built by other constructs.
pub struct Globalized<L> {
    local: L,
}

pub fn globalize<L: LocalStep>(local: L) -> Globalized<L> {
    Globalized { local }
}

impl<L: LocalStep> Step for Globalized<L> {
    fn step(&self, term: &Term, source: &Objects) -> Vec<Transition> {
        match self.local.construct().restrict(term) {
            Some(rt) => self.local.local_step(&rt, source),
            None => Vec::new(),
        }
    }
}

impl<L: LocalStep + ?Sized> LocalStep for &L {
    fn construct(&self) -> &'static Construct {
        (**self).construct()
    }

    fn local_step(&self, rt: &Restricted, source: &Objects) -> Vec<Transition> {
        (**self).local_step(rt, source)
    }
}
