//! The component repository.
//!
//! A component bundles one construct with its local step rules, the entities
//! its rules mention and the components it imports. Rules never see a full
//! label: [`RuleContext`] hands them the mentioned arrows and keeps the rest
//! opaque, so a rule can only pass the unmentioned part through or leave it
//! an identity.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::labels::{
    identity_unchecked, EntityKind, Label, LabelSignature, MentionSet, MentionedLabel, Objects,
};
use crate::step::{RuleId, RuleKind, RuleSpec, Step, Transition};
use crate::terms::syntax::LIT;
use crate::terms::{Arg, Construct, Restricted, Term};
use crate::value::Value;

mod binding;
mod control;
mod effects;

pub use binding::{Bind, Block, BoundId};
pub use control::{Catch, Cond, CondLoop, Seq, Skip, Throw, Throwing};
pub use effects::{Assign, Deref, Emit};

pub const ENV_ENTITY: &str = "ρ";
pub const STORE_ENTITY: &str = "σ";
pub const OUT_ENTITY: &str = "out";

/// The payload of `lit v`.
pub(crate) fn literal(t: &Term) -> Option<&Value> {
    LIT.project(t).and_then(|a| a.first()).and_then(Arg::as_value)
}

pub trait Component: Send + Sync {
    fn construct(&self) -> &'static Construct;

    /// The label box: entities the rules read or write, with their kinds.
    fn mentions(&self) -> &'static [(&'static str, EntityKind)] {
        &[]
    }

    fn imports(&self) -> &'static [&'static str] {
        &[]
    }

    fn rules(&self) -> &'static [RuleSpec];

    fn local_step(&self, rt: &Restricted, cx: &RuleContext<'_>) -> Vec<Transition>;

    fn id(&self) -> &'static str {
        self.construct().id()
    }
}

/// A premise derived through the global step handle. Rules see its target
/// and the arrows of their mentioned entities.
pub struct Premise {
    mentioned: MentionedLabel,
    derivation: Arc<Transition>,
}

impl Premise {
    pub fn target(&self) -> &Term {
        &self.derivation.target
    }

    pub fn mentioned(&self) -> &MentionedLabel {
        &self.mentioned
    }
}

/// Everything a rule may use: the source objects of mentioned entities, the
/// global step handle and label builders that respect the mentioned/opaque
/// split.
pub struct RuleContext<'a> {
    signature: &'a Arc<LabelSignature>,
    mention: &'a MentionSet,
    source: &'a Objects,
    step: &'a dyn Step,
    term: &'a Term,
}

impl<'a> RuleContext<'a> {
    pub(crate) fn new(
        signature: &'a Arc<LabelSignature>,
        mention: &'a MentionSet,
        source: &'a Objects,
        step: &'a dyn Step,
        term: &'a Term,
    ) -> Self {
        Self {
            signature,
            mention,
            source,
            step,
            term,
        }
    }

    fn rule(&self, name: &'static str) -> RuleId {
        RuleId {
            construct: self.term.id(),
            rule: name,
        }
    }

    fn mentioned_index(&self, entity: &str) -> Option<usize> {
        self.signature
            .index_of(entity)
            .filter(|&i| self.mention.contains(i))
    }

    /// Source object of a mentioned read-only or read-write entity.
    pub fn object(&self, entity: &str) -> Option<&Value> {
        self.mentioned_index(entity).and_then(|i| self.source.get(i))
    }

    /// The mentioned part of the identity label at the source objects.
    pub fn identity_mentioned(&self) -> MentionedLabel {
        identity_unchecked(self.signature, self.source).mentioned_part(self.mention)
    }

    fn transition(
        &self,
        rule: &'static str,
        kind: RuleKind,
        label: Label,
        target: Term,
        premise: Option<Arc<Transition>>,
    ) -> Transition {
        Transition {
            source: self.term.clone(),
            label,
            rule: self.rule(rule),
            kind,
            target,
            premise,
        }
    }

    /// An unlabeled axiom: the whole label is the identity at the source.
    pub fn unobservable(&self, rule: &'static str, target: Term) -> Transition {
        let label = identity_unchecked(self.signature, self.source);
        self.transition(rule, RuleKind::Unlabeled, label, target, None)
    }

    /// An axiom with the given mentioned arrows; unmentioned entities stay
    /// identities.
    pub fn axiom(&self, rule: &'static str, mentioned: MentionedLabel, target: Term) -> Transition {
        let (_, rest) = identity_unchecked(self.signature, self.source).into_split(self.mention);
        let label = Label::join(mentioned, rest);
        self.transition(rule, RuleKind::Axiom, label, target, None)
    }

    /// Steps a subterm at the current source objects.
    pub fn premises(&self, child: &Term) -> Vec<Premise> {
        self.derive(child, self.source)
    }

    /// Steps a subterm with some mentioned source objects replaced.
    pub fn premises_with(&self, child: &Term, updates: &[(&str, Value)]) -> Vec<Premise> {
        let mut objects = self.source.clone();
        for (entity, value) in updates {
            match self.mentioned_index(entity) {
                Some(i) => objects.set(i, value.clone()),
                None => return Vec::new(),
            }
        }
        self.derive(child, &objects)
    }

    fn derive(&self, child: &Term, objects: &Objects) -> Vec<Premise> {
        self.step
            .step(child, objects)
            .into_iter()
            .map(|t| Premise {
                mentioned: t.label.mentioned_part(self.mention),
                derivation: Arc::new(t),
            })
            .collect()
    }

    /// Conclusion whose label equals the premise label.
    pub fn pass(&self, rule: &'static str, premise: Premise, target: Term) -> Transition {
        let label = premise.derivation.label.clone();
        self.transition(rule, RuleKind::Premise, label, target, Some(premise.derivation))
    }

    /// Conclusion with rebuilt mentioned arrows; the unmentioned part of the
    /// premise label is carried over unchanged.
    pub fn conclude(
        &self,
        rule: &'static str,
        premise: Premise,
        mentioned: MentionedLabel,
        target: Term,
    ) -> Transition {
        let opaque = premise.derivation.label.opaque_part(self.mention);
        let label = Label::join(mentioned, opaque);
        self.transition(rule, RuleKind::Premise, label, target, Some(premise.derivation))
    }
}

/// A collection of components languages are assembled from.
#[derive(Clone, Default)]
pub struct Repository {
    components: Vec<Arc<dyn Component>>,
}

impl Repository {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The shipped components.
    pub fn standard() -> Self {
        Self::empty()
            .with(Skip)
            .with(Seq)
            .with(Cond)
            .with(CondLoop)
            .with(Throw)
            .with(Throwing)
            .with(Catch)
            .with(Block)
            .with(Bind)
            .with(BoundId)
            .with(Assign)
            .with(Deref)
            .with(Emit)
    }

    pub fn with(mut self, component: impl Component + 'static) -> Self {
        self.components.push(Arc::new(component));
        self
    }

    pub fn get(&self, id: &str) -> Option<&Arc<dyn Component>> {
        self.components.iter().find(|c| c.id() == id)
    }

    pub fn components(&self) -> &[Arc<dyn Component>] {
        &self.components
    }
}

/// Human-readable manifest entry, one line per field, each prefixed with the
/// component id.
pub fn describe(c: &dyn Component) -> String {
    let id = c.id();
    let construct = c.construct();
    let params = construct
        .params()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    let list = |items: Vec<String>| {
        if items.is_empty() {
            "-".to_string()
        } else {
            items.join(" ")
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, "{id} signature: ({params}) -> {}", construct.sort());
    let _ = writeln!(
        out,
        "{id} mentioned: {}",
        list(c.mentions().iter().map(|(n, _)| n.to_string()).collect())
    );
    let _ = writeln!(
        out,
        "{id} imports: {}",
        list(c.imports().iter().map(|s| s.to_string()).collect())
    );
    let _ = writeln!(
        out,
        "{id} rules: {}",
        list(c.rules().iter().map(|r| r.name.to_string()).collect())
    );
    out
}
