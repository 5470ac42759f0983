//! Languages assembled from components, their global step relation and a
//! small-step driver.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::components::{Component, Repository, RuleContext};
use crate::definition::LanguageDefinition;
use crate::labels::{
    compose, identity_unchecked, EntityKind, Label, LabelError, LabelSignature, MentionSet,
    Objects,
};
use crate::step::{LocalStep, RuleId, Step, Transition};
use crate::terms::{syntax, Construct, Grammar, Param, Restricted, Seeds, Sort, Term};
use crate::value::Value;

pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("component `{0}` is listed twice")]
    DuplicateComponent(String),
    #[error("component `{component}` imports `{import}`, which is not part of the language")]
    MissingImport { component: String, import: String },
    #[error("component `{component}` needs entity `{entity}`: {reason}")]
    EntityMismatch {
        component: String,
        entity: String,
        reason: String,
    },
    #[error("component `{component}` needs sort `{sort}`, which is not declared")]
    UndeclaredSort { component: String, sort: Sort },
    #[error("component `{component}` has sort {actual}, but is listed under {listed}")]
    WrongSort {
        component: String,
        listed: Sort,
        actual: Sort,
    },
    #[error(transparent)]
    Signature(#[from] LabelError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("nondeterministic step from {term}: rules {}", list_rules(.rules))]
    Nondeterministic { term: Term, rules: Vec<RuleId> },
    #[error("trace labels do not compose: {0}")]
    Composability(LabelError),
    #[error("initial objects: {0}")]
    Objects(LabelError),
}

fn list_rules(rules: &[RuleId]) -> String {
    rules
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

struct Bound {
    component: Arc<dyn Component>,
    mention: MentionSet,
}

/// A composed language. Its global step relation dispatches every term to
/// the component owning the term's construct; that component receives the
/// language itself as its handle on the global step.
pub struct Language {
    signature: Arc<LabelSignature>,
    sorts: Vec<Sort>,
    components: Vec<Bound>,
    grammar: Grammar,
    seeds: Seeds,
}

impl Language {
    pub fn build(def: &LanguageDefinition, repo: &Repository) -> Result<Self, BuildError> {
        let signature = LabelSignature::new(def.entities.clone())?;
        let mut components: Vec<Bound> = Vec::new();
        for (listed, ids) in &def.components {
            for id in ids {
                let component = repo
                    .get(id)
                    .ok_or_else(|| BuildError::UnknownComponent(id.clone()))?;
                if components.iter().any(|b| b.component.id() == id) {
                    return Err(BuildError::DuplicateComponent(id.clone()));
                }
                let actual = component.construct().sort();
                if actual != *listed {
                    return Err(BuildError::WrongSort {
                        component: id.clone(),
                        listed: *listed,
                        actual,
                    });
                }
                let mention = bind_mentions(component.as_ref(), &signature)?;
                components.push(Bound {
                    component: Arc::clone(component),
                    mention,
                });
            }
        }
        for b in &components {
            let c = b.component.as_ref();
            for import in c.imports() {
                if !components.iter().any(|o| o.component.id() == *import) {
                    return Err(BuildError::MissingImport {
                        component: c.id().to_string(),
                        import: import.to_string(),
                    });
                }
            }
            let construct = c.construct();
            let needed = std::iter::once(construct.sort()).chain(construct.params().iter().filter_map(
                |p| match p {
                    Param::Sort(s) => Some(*s),
                    _ => None,
                },
            ));
            for sort in needed {
                if !def.sorts.contains(&sort) {
                    return Err(BuildError::UndeclaredSort {
                        component: c.id().to_string(),
                        sort,
                    });
                }
            }
        }
        let mut productions: Vec<&'static Construct> = Vec::new();
        for sort in &def.sorts {
            productions.extend(syntax::data_constructs(*sort).iter().copied());
            productions.extend(
                components
                    .iter()
                    .map(|b| b.component.construct())
                    .filter(|c| c.sort() == *sort),
            );
        }
        Ok(Self {
            signature,
            sorts: def.sorts.clone(),
            components,
            grammar: Grammar::new(productions),
            seeds: def.seeds.clone(),
        })
    }

    pub fn signature(&self) -> &Arc<LabelSignature> {
        &self.signature
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn seeds(&self) -> &Seeds {
        &self.seeds
    }

    pub fn components(&self) -> impl Iterator<Item = &dyn Component> {
        self.components.iter().map(|b| b.component.as_ref())
    }

    pub fn component(&self, id: &str) -> Option<&dyn Component> {
        self.bound(id).map(|b| b.component.as_ref())
    }

    fn bound(&self, id: &str) -> Option<&Bound> {
        self.components.iter().find(|b| b.component.id() == id)
    }

    /// The component whose construct built `term`, if any. Data constructs
    /// such as `lit` have no owner.
    pub fn owner(&self, term: &Term) -> Option<&dyn Component> {
        self.owner_bound(term).map(|b| b.component.as_ref())
    }

    fn owner_bound(&self, term: &Term) -> Option<&Bound> {
        let c = term.construct();
        self.components
            .iter()
            .find(|b| std::ptr::eq(b.component.construct(), c))
            .or_else(|| self.bound(c.id()))
    }

    /// Runs the owning component's rules on `rt` with `step` as the global
    /// step handle.
    pub fn local_step_via(&self, rt: &Restricted, source: &Objects, step: &dyn Step) -> Vec<Transition> {
        match self.owner_bound(rt.embed()) {
            Some(b) => run_component(&self.signature, b, rt, source, step),
            None => Vec::new(),
        }
    }

    /// Union over every component whose construct built `term`, with `step`
    /// as the global step handle.
    pub fn union_step_via(&self, term: &Term, source: &Objects, step: &dyn Step) -> Vec<Transition> {
        let mut out = Vec::new();
        for b in &self.components {
            if let Some(rt) = b.component.construct().restrict(term) {
                out.extend(run_component(&self.signature, b, &rt, source, step));
            }
        }
        out
    }

    /// Entities mentioned by a component of this language.
    pub fn mention_set(&self, id: &str) -> Option<&MentionSet> {
        self.bound(id).map(|b| &b.mention)
    }

    /// The local step relation of one component, tied to this language's
    /// global step.
    pub fn local(&self, id: &str) -> Option<ComponentStep<'_>> {
        self.bound(id).map(|bound| ComponentStep {
            lang: self,
            bound,
            step: self,
        })
    }

    /// Objects from a name -> value assignment. Map-valued entities that are
    /// not assigned default to the empty map.
    pub fn objects(&self, assignment: &BTreeMap<String, Value>) -> Result<Objects, LabelError> {
        let mut full = assignment.clone();
        let defaults = Objects::empty(&self.signature);
        for (e, d) in self.signature.entities().iter().zip(defaults.values()) {
            if e.kind != EntityKind::WriteOnly && !full.contains_key(&e.name) {
                if let Some(d) = d {
                    full.insert(e.name.clone(), d.clone());
                }
            }
        }
        Objects::from_assignment(&self.signature, &full)
    }

    /// Explicit union of every component's globalized local step, recursing
    /// through the union itself.
    pub fn brute(&self) -> BruteStep<'_> {
        BruteStep { lang: self }
    }
}

fn bind_mentions(c: &dyn Component, sig: &LabelSignature) -> Result<MentionSet, BuildError> {
    let mismatch = |entity: &str, reason: String| BuildError::EntityMismatch {
        component: c.id().to_string(),
        entity: entity.to_string(),
        reason,
    };
    for (name, kind) in c.mentions() {
        match sig.entity(name) {
            None => return Err(mismatch(name, "not declared".into())),
            Some(e) if e.kind != *kind => {
                return Err(mismatch(
                    name,
                    format!("declared {}, expected {}", e.kind, kind),
                ))
            }
            Some(_) => {}
        }
    }
    let names: Vec<&str> = c.mentions().iter().map(|(n, _)| *n).collect();
    Ok(sig.mention(&names)?)
}

fn run_component(
    sig: &Arc<LabelSignature>,
    b: &Bound,
    rt: &Restricted,
    source: &Objects,
    step: &dyn Step,
) -> Vec<Transition> {
    let cx = RuleContext::new(sig, &b.mention, source, step, rt.embed());
    b.component.local_step(rt, &cx)
}

impl Step for Language {
    fn step(&self, term: &Term, source: &Objects) -> Vec<Transition> {
        let Some(b) = self.owner_bound(term) else {
            return Vec::new();
        };
        match b.component.construct().restrict(term) {
            Some(rt) => run_component(&self.signature, b, &rt, source, self),
            None => Vec::new(),
        }
    }
}

/// One component's rules with a chosen global step handle.
pub struct ComponentStep<'a> {
    lang: &'a Language,
    bound: &'a Bound,
    step: &'a dyn Step,
}

impl<'a> ComponentStep<'a> {
    /// The same rules with a different handle for premises.
    pub fn with_step(&self, step: &'a dyn Step) -> Self {
        Self {
            lang: self.lang,
            bound: self.bound,
            step,
        }
    }
}

impl LocalStep for ComponentStep<'_> {
    fn construct(&self) -> &'static Construct {
        self.bound.component.construct()
    }

    fn local_step(&self, rt: &Restricted, source: &Objects) -> Vec<Transition> {
        if rt.construct() != self.construct() {
            return Vec::new();
        }
        run_component(&self.lang.signature, self.bound, rt, source, self.step)
    }
}

pub struct BruteStep<'a> {
    lang: &'a Language,
}

impl Step for BruteStep<'_> {
    fn step(&self, term: &Term, source: &Objects) -> Vec<Transition> {
        self.lang.union_step_via(term, source, self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    /// `skip`, `throwing v` or a value.
    Completed(Term),
    Stuck(Term),
    FuelExhausted(Term),
}

impl Outcome {
    pub fn term(&self) -> &Term {
        match self {
            Outcome::Completed(t) | Outcome::Stuck(t) | Outcome::FuelExhausted(t) => t,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Completed(_) => "completed",
            Outcome::Stuck(_) => "stuck",
            Outcome::FuelExhausted(_) => "fuel_exhausted",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub initial: Objects,
    pub steps: Vec<Transition>,
    pub outcome: Outcome,
    /// All step labels composed; the identity at `initial` for an empty trace.
    pub composed: Label,
}

impl Trace {
    pub fn final_objects(&self) -> Objects {
        self.composed.target()
    }
}

/// Runs `term` until no step applies or `fuel` steps have been taken.
pub fn run_trace(
    lang: &Language,
    term: &Term,
    init: &Objects,
    fuel: usize,
) -> Result<Trace, EngineError> {
    init.check(&lang.signature).map_err(EngineError::Objects)?;
    let mut current = term.clone();
    let mut objects = init.clone();
    let mut composed = identity_unchecked(&lang.signature, init);
    let mut steps = Vec::new();
    let outcome = loop {
        let mut next = lang.step(&current, &objects);
        match next.len() {
            0 if current.is_terminal() => break Outcome::Completed(current),
            0 => break Outcome::Stuck(current),
            1 if steps.len() >= fuel => break Outcome::FuelExhausted(current),
            1 => {
                let t = next.pop().expect("one transition");
                composed = compose(&composed, &t.label).map_err(EngineError::Composability)?;
                objects = t.label.target();
                current = t.target.clone();
                steps.push(t);
            }
            _ => {
                return Err(EngineError::Nondeterministic {
                    term: current,
                    rules: next.iter().map(|t| t.rule).collect(),
                })
            }
        }
    };
    Ok(Trace {
        initial: init.clone(),
        steps,
        outcome,
        composed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::definition::standard_entities;
    use crate::labels::{EntityArrow, EntitySpec};
    use crate::terms::syntax::*;
    use crate::terms::{desugar_break, desugar_while};

    fn full() -> Language {
        Language::build(&LanguageDefinition::full(), &Repository::standard()).unwrap()
    }

    fn run(lang: &Language, t: &Term) -> Trace {
        let init = lang.objects(&BTreeMap::new()).unwrap();
        run_trace(lang, t, &init, DEFAULT_FUEL).unwrap()
    }

    #[test]
    fn builds_skip_seq() {
        let def = LanguageDefinition::skip_seq(vec![
            EntitySpec::read_only("ρ"),
            EntitySpec::read_write("σ"),
        ]);
        let lang = Language::build(&def, &Repository::standard()).unwrap();
        assert_eq!(lang.components().count(), 2);
        assert_eq!(lang.grammar().constructs().len(), 2);
    }

    #[test]
    fn build_errors() {
        let repo = Repository::standard();
        let missing = LanguageDefinition::new(vec![], &[(Sort::Cmd, &["Cmd.seq"])]);
        assert!(matches!(
            Language::build(&missing, &repo),
            Err(BuildError::MissingImport { import, .. }) if import == "Cmd.skip"
        ));
        let unknown = LanguageDefinition::new(vec![], &[(Sort::Cmd, &["Cmd.goto"])]);
        assert!(matches!(
            Language::build(&unknown, &repo),
            Err(BuildError::UnknownComponent(_))
        ));
        let no_env = LanguageDefinition::new(
            vec![EntitySpec::read_write("σ")],
            &[(Sort::Exp, &["Exp.block"]), (Sort::Dcl, &[])],
        );
        assert!(matches!(
            Language::build(&no_env, &repo),
            Err(BuildError::EntityMismatch { entity, .. }) if entity == "ρ"
        ));
        let wrong_kind = LanguageDefinition::new(
            vec![EntitySpec::read_write("ρ")],
            &[(Sort::Exp, &["Exp.block"]), (Sort::Dcl, &[])],
        );
        assert!(matches!(
            Language::build(&wrong_kind, &repo),
            Err(BuildError::EntityMismatch { .. })
        ));
        let no_dcl = LanguageDefinition::new(
            vec![EntitySpec::read_only("ρ")],
            &[(Sort::Exp, &["Exp.block"])],
        );
        assert!(matches!(
            Language::build(&no_dcl, &repo),
            Err(BuildError::UndeclaredSort { sort: Sort::Dcl, .. })
        ));
        let twice = LanguageDefinition::new(vec![], &[(Sort::Cmd, &["Cmd.skip", "Cmd.skip"])]);
        assert!(matches!(
            Language::build(&twice, &repo),
            Err(BuildError::DuplicateComponent(_))
        ));
        let misplaced = LanguageDefinition::new(vec![], &[(Sort::Exp, &["Cmd.skip"])]);
        assert!(matches!(
            Language::build(&misplaced, &repo),
            Err(BuildError::WrongSort { .. })
        ));
    }

    #[test]
    fn block_reads_updated_environment() {
        let lang = full();
        let rho0 = Value::map([("x", Value::Int(1))]);
        let init = lang
            .objects(&BTreeMap::from([("ρ".to_string(), rho0.clone())]))
            .unwrap();
        let t = block(env(Value::map([("x", Value::Int(2))])), boundid("x"));
        let steps = lang.step(&t, &init);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].target, block(env(Value::map([("x", Value::Int(2))])), lit(2)));
        assert_eq!(steps[0].label.arrow("ρ"), Some(&EntityArrow::Ro(rho0)));
        let premise = steps[0].premise.as_ref().unwrap();
        assert_eq!(
            premise.label.arrow("ρ"),
            Some(&EntityArrow::Ro(Value::map([("x", Value::Int(2))])))
        );
    }

    #[test]
    fn assignments_thread_the_store() {
        let lang = full();
        let t = seq(assign("x", lit(1)), assign("x", lit(2)));
        let trace = run(&lang, &t);
        assert_eq!(trace.outcome, Outcome::Completed(skip()));
        assert_eq!(
            trace.composed.arrow("σ"),
            Some(&EntityArrow::Rw {
                pre: Value::empty_map(),
                post: Value::map([("x", Value::Int(2))]),
            })
        );
    }

    #[test]
    fn emissions_concatenate() {
        let lang = full();
        let trace = run(&lang, &seq(emit(lit(1)), emit(lit(2))));
        assert_eq!(
            trace.composed.arrow("out"),
            Some(&EntityArrow::Wo(vec![Value::Int(1), Value::Int(2)]))
        );
    }

    #[test]
    fn while_loops() {
        let lang = full();
        let t = desugar_while(lit(false), skip()).unwrap();
        let trace = run(&lang, &t);
        assert_eq!(trace.outcome, Outcome::Completed(skip()));
        assert_eq!(trace.steps.len(), 3);

        let t = desugar_while(lit(true), desugar_break()).unwrap();
        let trace = run(&lang, &t);
        assert_eq!(trace.outcome, Outcome::Completed(skip()));
        assert!(crate::labels::is_unobservable(&trace.composed));
    }

    #[test]
    fn outcomes() {
        let lang = full();
        assert!(matches!(run(&lang, &seq(emit(boundid("nope")), skip())).outcome, Outcome::Stuck(_)));
        assert!(matches!(
            run(&lang, &seq(throw(lit(1)), skip())).outcome,
            Outcome::Completed(t) if t == throwing(Value::Int(1))
        ));
        let init = lang.objects(&BTreeMap::new()).unwrap();
        let looping = cond_loop(lit(true), skip());
        let trace = run_trace(&lang, &looping, &init, 7).unwrap();
        assert!(matches!(trace.outcome, Outcome::FuelExhausted(_)));
        assert_eq!(trace.steps.len(), 7);
    }

    #[test]
    fn objects_default_to_empty_maps() {
        let lang = full();
        let o = lang.objects(&BTreeMap::new()).unwrap();
        assert_eq!(o.values().len(), standard_entities().len());
        assert!(lang
            .objects(&BTreeMap::from([("out".to_string(), Value::Int(1))]))
            .is_err());
    }

    #[test]
    fn brute_union_matches_dispatch() {
        let lang = full();
        let init = lang.objects(&BTreeMap::new()).unwrap();
        let t = seq(seq(skip(), emit(lit(1))), skip());
        let a = lang.step(&t, &init);
        let b = lang.brute().step(&t, &init);
        assert_eq!(a.len(), 1);
        assert!(a[0].same_step(&b[0]));
    }
}
