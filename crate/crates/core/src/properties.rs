//! Meta-theory checks.
//!
//! * Determinism, checked modularly (each term is handed to the component
//!   owning its construct, whose local step must be deterministic given a
//!   deterministic step on subterms) or by brute force (the explicit union of
//!   every component's globalized local step). Mode `Both` runs the two side
//!   by side and insists they agree.
//! * Admissibility of configuration properties with respect to
//!   `globalize(localize(C, S))`.
//! * Category laws of labels on seeded random samples.
//! * The label-discipline audit of generated transitions and traces.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::engine::{Language, Trace};
use crate::labels::{
    assemble, compose, identity_label, is_unobservable, project_mentioned, project_unmentioned,
    EntityArrow, EntityKind, EntitySpec, Label, LabelSignature, ObjectDomain, Objects,
};
use crate::step::{globalize, LocalStep, RuleKind, Step, Transition};
use crate::terms::{Enumerator, Sort, Term};
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Modular,
    Brute,
    Both,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Modular => "modular",
            Mode::Brute => "brute",
            Mode::Both => "both",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "modular" => Some(Mode::Modular),
            "brute" => Some(Mode::Brute),
            "both" => Some(Mode::Both),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropertyError {
    #[error("modular and brute-force checks disagree at {term}: {detail}")]
    HarnessDisagreement { term: String, detail: String },
    #[error("transitions start from different configurations")]
    SourceMismatch,
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
}

/// Two distinct outcomes from one configuration.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub term: Term,
    pub objects: Objects,
    pub first: Transition,
    pub second: Transition,
    /// A subterm was already nondeterministic at the point the owning
    /// component stepped it.
    pub inherited: bool,
}

#[derive(Debug, Clone)]
pub struct DeterminismReport {
    pub mode: Mode,
    pub sort: Sort,
    pub depth: usize,
    pub signature: Arc<LabelSignature>,
    pub terms_checked: u64,
    pub contexts_checked: u64,
    pub counterexamples: Vec<Counterexample>,
    pub audit: AuditReport,
    /// False when the deadline cut the enumeration short.
    pub complete: bool,
    pub elapsed: Duration,
}

impl DeterminismReport {
    fn new(mode: Mode, sort: Sort, depth: usize, signature: &Arc<LabelSignature>) -> Self {
        Self {
            mode,
            sort,
            depth,
            signature: Arc::clone(signature),
            terms_checked: 0,
            contexts_checked: 0,
            counterexamples: Vec::new(),
            audit: AuditReport::default(),
            complete: true,
            elapsed: Duration::ZERO,
        }
    }

    /// Every term was checked and none has two distinct outcomes.
    pub fn is_deterministic(&self) -> bool {
        self.complete && self.counterexamples.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct CheckOptions {
    pub deadline: Option<Duration>,
    /// Source objects to check under; defaults to [`seed_objects`].
    pub objects: Option<Vec<Objects>>,
    /// Audit every generated transition.
    pub audit: bool,
}

/// Same label and target. Both transitions must start from the same term
/// and the same objects.
pub fn det_pair_check(t1: &Transition, t2: &Transition) -> Result<bool, PropertyError> {
    if t1.source != t2.source || t1.label.source() != t2.label.source() {
        return Err(PropertyError::SourceMismatch);
    }
    Ok(t1.same_step(t2))
}

fn divergent(ts: &[Transition]) -> Option<(&Transition, &Transition)> {
    let (first, rest) = ts.split_first()?;
    rest.iter().find(|t| !t.same_step(first)).map(|t| (first, t))
}

fn same_outcomes(a: &[Transition], b: &[Transition]) -> bool {
    a.iter().all(|x| b.iter().any(|y| x.same_step(y)))
        && b.iter().all(|y| a.iter().any(|x| x.same_step(y)))
}

/// All maps over `{x, y}` with values in `{0, 1}`, for every entity with
/// objects; write-only entities have none.
pub fn seed_objects(sig: &LabelSignature) -> Vec<Objects> {
    let slot = [None, Some(0), Some(1)];
    let mut maps = Vec::new();
    for x in slot {
        for y in slot {
            let entries = [("x", x), ("y", y)]
                .into_iter()
                .filter_map(|(k, v)| v.map(|v| (k, Value::Int(v))));
            maps.push(Value::map(entries));
        }
    }
    let mut rows: Vec<Vec<Option<Value>>> = vec![Vec::new()];
    for e in sig.entities() {
        let choices: Vec<Option<Value>> = match (e.kind, e.domain) {
            (EntityKind::WriteOnly, _) => vec![None],
            (_, ObjectDomain::Map | ObjectDomain::Any) => maps.iter().cloned().map(Some).collect(),
            (_, ObjectDomain::Values) => vec![Some(Value::Unit)],
        };
        rows = rows
            .into_iter()
            .flat_map(|row| {
                choices.iter().map(move |c| {
                    let mut r = row.clone();
                    r.push(c.clone());
                    r
                })
            })
            .collect();
    }
    rows.into_iter().map(Objects::new).collect()
}

const CACHE_LIMIT: usize = 1 << 18;

/// A stepped subterm, its transitions and whether they were deterministic.
type Memo = (Term, Vec<Transition>, bool);

/// Global step used while checking. Subterm results are memoized per seed
/// context, and every nondeterministic subterm result is flagged.
struct Checker<'l> {
    lang: &'l Language,
    union: bool,
    seeds: &'l [Objects],
    current: Cell<usize>,
    cache: RefCell<HashMap<(usize, usize), Memo>>,
    subterm_nondet: Cell<bool>,
    audit: Option<RefCell<AuditReport>>,
}

impl<'l> Checker<'l> {
    fn new(lang: &'l Language, union: bool, seeds: &'l [Objects]) -> Self {
        Self {
            lang,
            union,
            seeds,
            current: Cell::new(0),
            cache: RefCell::new(HashMap::new()),
            subterm_nondet: Cell::new(false),
            audit: None,
        }
    }

    /// Audits every transition once, when it is first derived. Premises
    /// always go through `step`, so whole derivations get covered.
    fn audited(mut self) -> Self {
        self.audit = Some(RefCell::new(AuditReport::default()));
        self
    }

    fn record(&self, ts: &[Transition]) {
        if let Some(audit) = &self.audit {
            let mut audit = audit.borrow_mut();
            for t in ts {
                audit_rule(self.lang, t, &mut audit);
            }
        }
    }

    fn audit_report(&self) -> AuditReport {
        self.audit.as_ref().map(|a| a.borrow().clone()).unwrap_or_default()
    }

    fn dispatch(&self, term: &Term, source: &Objects) -> Vec<Transition> {
        if self.union {
            return self.lang.union_step_via(term, source, self);
        }
        let Some(owner) = self.lang.owner(term) else {
            return Vec::new();
        };
        match owner.construct().restrict(term) {
            Some(rt) => self.lang.local_step_via(&rt, source, self),
            None => Vec::new(),
        }
    }

    fn begin(&self, context: usize) {
        self.current.set(context);
        self.subterm_nondet.set(false);
    }

    /// Transitions from `term` at seed context `context`, and whether a
    /// subterm stepped along the way was nondeterministic.
    fn top(&self, term: &Term, context: usize) -> (Vec<Transition>, bool) {
        self.begin(context);
        let ts = self.dispatch(term, &self.seeds[context]);
        self.record(&ts);
        (ts, self.subterm_nondet.get())
    }
}

impl Step for Checker<'_> {
    fn step(&self, term: &Term, source: &Objects) -> Vec<Transition> {
        let context = self.current.get();
        let key = (term.addr(), context);
        let cacheable = *source == self.seeds[context];
        if cacheable {
            if let Some((_, ts, det)) = self.cache.borrow().get(&key) {
                if !det {
                    self.subterm_nondet.set(true);
                }
                return ts.clone();
            }
        }
        let ts = self.dispatch(term, source);
        self.record(&ts);
        let det = divergent(&ts).is_none();
        if !det {
            self.subterm_nondet.set(true);
        }
        if cacheable {
            let mut cache = self.cache.borrow_mut();
            if cache.len() >= CACHE_LIMIT {
                cache.clear();
            }
            // The stored term keeps its address from being reused.
            cache.insert(key, (term.clone(), ts.clone(), det));
        }
        ts
    }
}

fn counterexample(
    term: &Term,
    objects: &Objects,
    ts: &[Transition],
    inherited: bool,
) -> Option<Counterexample> {
    divergent(ts).map(|(a, b)| Counterexample {
        term: term.clone(),
        objects: objects.clone(),
        first: a.clone(),
        second: b.clone(),
        inherited,
    })
}

pub fn check_global_determinism(
    lang: &Language,
    sort: Sort,
    depth: usize,
    mode: Mode,
) -> Result<DeterminismReport, PropertyError> {
    check_global_determinism_with(lang, sort, depth, mode, &CheckOptions::default())
}

pub fn check_global_determinism_with(
    lang: &Language,
    sort: Sort,
    depth: usize,
    mode: Mode,
    opts: &CheckOptions,
) -> Result<DeterminismReport, PropertyError> {
    let seeds = opts
        .objects
        .clone()
        .unwrap_or_else(|| seed_objects(lang.signature()));
    let (mut modular, mut brute) = (Checker::new(lang, false, &seeds), Checker::new(lang, true, &seeds));
    if opts.audit {
        modular = modular.audited();
        brute = brute.audited();
    }
    let mut report = DeterminismReport::new(mode, sort, depth, lang.signature());
    let start = Instant::now();
    let mut enumerator = Enumerator::new(lang.grammar(), lang.seeds());
    for term in enumerator.stream(sort, depth) {
        if let Some(limit) = opts.deadline {
            if report.terms_checked.is_multiple_of(64) && start.elapsed() > limit {
                report.complete = false;
                break;
            }
        }
        report.terms_checked += 1;
        for (context, objects) in seeds.iter().enumerate() {
            report.contexts_checked += 1;
            let m = (mode != Mode::Brute).then(|| modular.top(&term, context));
            let b = (mode != Mode::Modular).then(|| brute.top(&term, context));
            let found = match (&m, &b) {
                (Some((mt, mi)), Some((bt, _))) => {
                    let mc = counterexample(&term, objects, mt, *mi);
                    let verdicts_agree = mc.is_some() == divergent(bt).is_some();
                    if !verdicts_agree || (mc.is_some() && !same_outcomes(mt, bt)) {
                        return Err(PropertyError::HarnessDisagreement {
                            term: term.to_string(),
                            detail: format!(
                                "modular found {} transitions, brute force {}",
                                mt.len(),
                                bt.len()
                            ),
                        });
                    }
                    mc
                }
                (Some((ts, inherited)), None) | (None, Some((ts, inherited))) => {
                    counterexample(&term, objects, ts, *inherited)
                }
                (None, None) => None,
            };
            report.counterexamples.extend(found);
        }
    }
    report.audit.merge(&modular.audit_report());
    report.audit.merge(&brute.audit_report());
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Determinism of one component's local step, assuming the global step is
/// deterministic on the subterms it steps. Configurations where that
/// assumption fails are skipped.
pub fn check_local_determinism(
    lang: &Language,
    component: &str,
    depth: usize,
) -> Result<DeterminismReport, PropertyError> {
    let owner = lang
        .component(component)
        .ok_or_else(|| PropertyError::UnknownComponent(component.to_string()))?;
    let construct = owner.construct();
    let local = lang.local(component).expect("component is bound");
    let seeds = seed_objects(lang.signature());
    let checker = Checker::new(lang, false, &seeds);
    let local = local.with_step(&checker);
    let start = Instant::now();
    let mut report = DeterminismReport::new(Mode::Modular, construct.sort(), depth, lang.signature());
    let mut enumerator = Enumerator::new(lang.grammar(), lang.seeds());
    for term in enumerator.stream(construct.sort(), depth) {
        let Some(rt) = construct.restrict(&term) else {
            continue;
        };
        report.terms_checked += 1;
        for (context, objects) in seeds.iter().enumerate() {
            checker.begin(context);
            let ts = local.local_step(&rt, objects);
            if checker.subterm_nondet.get() {
                continue;
            }
            report.contexts_checked += 1;
            report
                .counterexamples
                .extend(counterexample(&term, objects, &ts, false));
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// A configuration property evaluated against a step relation.
pub trait PropertyCheck {
    fn name(&self) -> &str;
    fn holds(&self, step: &dyn Step, term: &Term, objects: &Objects) -> bool;
}

/// At most one distinct (label, target) pair.
pub struct Determinism;

impl PropertyCheck for Determinism {
    fn name(&self) -> &str {
        "determinism"
    }

    fn holds(&self, step: &dyn Step, term: &Term, objects: &Objects) -> bool {
        divergent(&step.step(term, objects)).is_none()
    }
}

/// Following the first available transition, the run stops within
/// `max_steps` steps. Not admissible: a localized relation stops as soon as
/// the term leaves the construct.
pub struct BoundedRun {
    pub max_steps: usize,
}

impl PropertyCheck for BoundedRun {
    fn name(&self) -> &str {
        "bounded-run"
    }

    fn holds(&self, step: &dyn Step, term: &Term, objects: &Objects) -> bool {
        let mut term = term.clone();
        let mut objects = objects.clone();
        for _ in 0..=self.max_steps {
            let Some(t) = step.step(&term, &objects).into_iter().next() else {
                return true;
            };
            objects = t.label.target();
            term = t.target;
        }
        false
    }
}

#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub property: String,
    pub samples_checked: usize,
    /// Samples where the property holds under the localized relation but
    /// not under the global one.
    pub failures: Vec<(Term, Objects)>,
}

impl AdmissibilityReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each sample `(γ, objects)` built by a component `C`, checks
/// `P(globalize(localize(C, S)), γ) ⇒ P(S, γ)`. Samples without an owning
/// component are ignored.
pub fn check_admissibility(
    prop: &dyn PropertyCheck,
    lang: &Language,
    samples: &[(Term, Objects)],
) -> AdmissibilityReport {
    let mut report = AdmissibilityReport {
        property: prop.name().to_string(),
        samples_checked: 0,
        failures: Vec::new(),
    };
    for (term, objects) in samples {
        let Some(owner) = lang.owner(term) else {
            continue;
        };
        let local = lang.local(owner.id()).expect("owner is bound");
        let localized = globalize(&local);
        report.samples_checked += 1;
        if prop.holds(&localized, term, objects) && !prop.holds(lang, term, objects) {
            report.failures.push((term.clone(), objects.clone()));
        }
    }
    report
}

/// Every enumerated term of `sort` up to `depth` under every seed context.
pub fn samples(lang: &Language, sort: Sort, depth: usize) -> Vec<(Term, Objects)> {
    let seeds = seed_objects(lang.signature());
    let mut enumerator = Enumerator::new(lang.grammar(), lang.seeds());
    enumerator
        .up_to(sort, depth)
        .into_iter()
        .flat_map(|t| seeds.iter().map(move |o| (t.clone(), o.clone())))
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct AuditReport {
    pub transitions_checked: u64,
    pub traces_checked: u64,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn violation(&mut self, msg: String) {
        if self.violations.len() < 100 {
            self.violations.push(msg);
        }
    }

    pub fn merge(&mut self, other: &AuditReport) {
        self.transitions_checked += other.transitions_checked;
        self.traces_checked += other.traces_checked;
        for v in &other.violations {
            self.violation(v.clone());
        }
    }
}

/// Checks a transition and its premise chain against the label discipline
/// of the rule kinds: unlabeled rules are unobservable, axioms leave the
/// unmentioned part an identity and premise rules pass it through unchanged.
pub fn audit_transition(lang: &Language, t: &Transition, report: &mut AuditReport) {
    let mut next = Some(t);
    while let Some(t) = next {
        audit_rule(lang, t, report);
        next = t.premise.as_deref();
    }
}

/// The conclusion of `t` alone, against its immediate premise.
fn audit_rule(lang: &Language, t: &Transition, report: &mut AuditReport) {
    report.transitions_checked += 1;
    let Some(mention) = lang.mention_set(t.rule.construct) else {
        report.violation(format!("{}: rule of an unknown component", t.rule));
        return;
    };
    let ok = match (t.kind, &t.premise) {
        (RuleKind::Unlabeled, None) => is_unobservable(&t.label),
        (RuleKind::Axiom, None) => t.label.opaque_is_identity(mention),
        (RuleKind::Premise, Some(p)) => t.label.same_opaque(&p.label, mention),
        _ => false,
    };
    if !ok {
        report.violation(format!(
            "{} from {} breaks the {:?} label discipline",
            t.rule, t.source, t.kind
        ));
    }
}

/// Audits every step and checks that consecutive labels compose.
pub fn audit_trace(lang: &Language, trace: &Trace, report: &mut AuditReport) {
    report.traces_checked += 1;
    let Ok(mut acc) = identity_label(lang.signature(), &trace.initial) else {
        report.violation("trace starts from ill-formed objects".into());
        return;
    };
    for (i, t) in trace.steps.iter().enumerate() {
        audit_transition(lang, t, report);
        match compose(&acc, &t.label) {
            Ok(l) => acc = l,
            Err(e) => report.violation(format!("step {}: {e}", i + 1)),
        }
    }
    if acc != trace.composed {
        report.violation("recorded composed label differs from the fold".into());
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawResult {
    pub name: &'static str,
    pub checked: u64,
    pub failures: u64,
}

#[derive(Debug, Clone)]
pub struct LawReport {
    pub samples: usize,
    pub seed: u64,
    pub laws: Vec<LawResult>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.laws.iter().all(|l| l.failures == 0)
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.name == name)
    }
}

struct Tally(Vec<LawResult>);

impl Tally {
    fn record(&mut self, name: &'static str, ok: bool) {
        let entry = match self.0.iter().position(|l| l.name == name) {
            Some(i) => &mut self.0[i],
            None => {
                self.0.push(LawResult {
                    name,
                    checked: 0,
                    failures: 0,
                });
                self.0.last_mut().expect("just pushed")
            }
        };
        entry.checked += 1;
        entry.failures += u64::from(!ok);
    }
}

fn random_value(rng: &mut ChaCha8Rng) -> Value {
    Value::Int(rng.random_range(0..3))
}

fn random_object(rng: &mut ChaCha8Rng, e: &EntitySpec) -> Value {
    if e.domain == ObjectDomain::Any && rng.random_bool(0.25) {
        return random_value(rng);
    }
    let mut entries = Vec::new();
    for k in ["x", "y", "z"] {
        if rng.random_bool(0.5) {
            entries.push((k, random_value(rng)));
        }
    }
    Value::map(entries)
}

fn random_objects(rng: &mut ChaCha8Rng, sig: &LabelSignature) -> Objects {
    Objects::new(
        sig.entities()
            .iter()
            .map(|e| match e.kind {
                EntityKind::WriteOnly => None,
                _ => Some(random_object(rng, e)),
            })
            .collect(),
    )
}

/// A random label whose source is `from`. About a third of the read-write
/// and write-only arrows are identities.
fn random_label(rng: &mut ChaCha8Rng, sig: &Arc<LabelSignature>, from: &Objects) -> Label {
    let arrows = sig
        .entities()
        .iter()
        .zip(from.values())
        .map(|(e, o)| match e.kind {
            EntityKind::ReadOnly => EntityArrow::Ro(o.clone().expect("object")),
            EntityKind::ReadWrite => {
                let pre = o.clone().expect("object");
                let post = if rng.random_bool(1.0 / 3.0) {
                    pre.clone()
                } else {
                    random_object(rng, e)
                };
                EntityArrow::Rw { pre, post }
            }
            EntityKind::WriteOnly => {
                let n = if rng.random_bool(1.0 / 3.0) {
                    0
                } else {
                    rng.random_range(1..4)
                };
                EntityArrow::Wo((0..n).map(|_| random_value(rng)).collect())
            }
        })
        .collect();
    Label::new(Arc::clone(sig), arrows).expect("kind-aligned arrows")
}

fn random_mention(rng: &mut ChaCha8Rng, sig: &LabelSignature) -> Vec<String> {
    sig.entities()
        .iter()
        .filter(|_| rng.random_bool(0.5))
        .map(|e| e.name.clone())
        .collect()
}

/// Whether `a` then `b` is defined, decided entity by entity.
fn composable(a: &Label, b: &Label) -> bool {
    a.arrows().iter().zip(b.arrows()).all(|(x, y)| match (x, y) {
        (EntityArrow::Ro(p), EntityArrow::Ro(q)) => p == q,
        (EntityArrow::Rw { post, .. }, EntityArrow::Rw { pre, .. }) => post == pre,
        (EntityArrow::Wo(_), EntityArrow::Wo(_)) => true,
        _ => false,
    })
}

/// Category laws on `samples` random labels drawn from `seed`.
pub fn check_category_laws(sig: &Arc<LabelSignature>, samples: usize, seed: u64) -> LawReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally(Vec::new());
    for _ in 0..samples {
        let o = random_objects(&mut rng, sig);
        let a = random_label(&mut rng, sig, &o);
        let b = random_label(&mut rng, sig, &a.target());
        let c = random_label(&mut rng, sig, &b.target());
        let ab = compose(&a, &b);
        let bc = compose(&b, &c);

        let assoc = match (&ab, &bc) {
            (Ok(ab), Ok(bc)) => match (compose(ab, &c), compose(&a, bc)) {
                (Ok(l), Ok(r)) => l == r,
                _ => false,
            },
            _ => false,
        };
        tally.record("associativity", assoc);

        let left = identity_label(sig, &a.source())
            .ok()
            .and_then(|id| compose(&id, &a).ok());
        tally.record("left_identity", left.as_ref() == Some(&a));
        let right = identity_label(sig, &a.target())
            .ok()
            .and_then(|id| compose(&a, &id).ok());
        tally.record("right_identity", right.as_ref() == Some(&a));

        let elsewhere = random_objects(&mut rng, sig);
        let other = random_label(&mut rng, sig, &elsewhere);
        tally.record(
            "composability",
            compose(&a, &other).is_ok() == composable(&a, &other),
        );

        let id_a = identity_label(sig, &a.source()).expect("well-formed objects");
        tally.record("unobservability", is_unobservable(&a) == (a == id_a));

        let m = random_mention(&mut rng, sig);
        let pm = project_mentioned(&a, &m).expect("known names");
        let pu = project_unmentioned(&a, &m).expect("known names");
        tally.record(
            "iso_assemble_project",
            assemble(&pm, &pu, sig).as_ref() == Ok(&a),
        );
        let pu_other = project_unmentioned(&other, &m).expect("known names");
        let mixed = assemble(&pm, &pu_other, sig);
        tally.record(
            "iso_project_assemble",
            mixed.is_ok_and(|l| {
                project_mentioned(&l, &m).as_ref() == Ok(&pm)
                    && project_unmentioned(&l, &m).as_ref() == Ok(&pu_other)
            }),
        );

        if let Ok(ab) = &ab {
            let pm_b = project_mentioned(&b, &m).expect("known names");
            let pu_b = project_unmentioned(&b, &m).expect("known names");
            tally.record(
                "functor_mentioned",
                project_mentioned(ab, &m).ok() == pm.compose(&pm_b).ok(),
            );
            tally.record(
                "functor_unmentioned",
                project_unmentioned(ab, &m).ok() == pu.compose(sig, &pu_b).ok(),
            );
        }
        tally.record(
            "functor_identity",
            project_mentioned(&id_a, &m).is_ok_and(|p| p.is_unobservable())
                && project_unmentioned(&id_a, &m).is_ok_and(|p| p.is_unobservable()),
        );
    }
    LawReport {
        samples,
        seed,
        laws: tally.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::Repository;
    use crate::definition::LanguageDefinition;
    use crate::fixtures::Fork;
    use crate::labels::LabelSignature;
    use crate::terms::syntax::*;

    fn skip_seq() -> Language {
        let def = LanguageDefinition::skip_seq(vec![
            EntitySpec::read_only("ρ"),
            EntitySpec::read_write("σ"),
        ]);
        Language::build(&def, &Repository::standard()).unwrap()
    }

    fn with_fork() -> Language {
        let def = LanguageDefinition::new(
            vec![EntitySpec::read_only("ρ")],
            &[(Sort::Cmd, &["Cmd.skip", "Cmd.seq", "Cmd.fork"])],
        );
        Language::build(&def, &Repository::standard().with(Fork)).unwrap()
    }

    #[test]
    fn seeds_cover_small_maps() {
        let sig = LabelSignature::standard(&["ρ", "σ", "out"]);
        let seeds = seed_objects(&sig);
        assert_eq!(seeds.len(), 81);
        assert!(seeds.iter().all(|o| o.values()[2].is_none()));
        assert_eq!(seed_objects(&LabelSignature::standard(&[])).len(), 1);
    }

    #[test]
    fn pair_check() {
        let lang = skip_seq();
        let o = &seed_objects(lang.signature())[0];
        let t = lang.step(&seq(skip(), skip()), o).remove(0);
        assert!(det_pair_check(&t, &t).unwrap());
        let mut other = t.clone();
        other.target = seq(skip(), skip());
        assert!(!det_pair_check(&t, &other).unwrap());
        let mut moved = t.clone();
        moved.source = skip();
        assert_eq!(det_pair_check(&t, &moved), Err(PropertyError::SourceMismatch));
    }

    #[test]
    fn skip_seq_is_deterministic() {
        let lang = skip_seq();
        let r = check_global_determinism(&lang, Sort::Cmd, 4, Mode::Both).unwrap();
        assert!(r.is_deterministic());
        assert_eq!(r.terms_checked, 26);
        assert_eq!(r.contexts_checked, 26 * 81);
        let local = check_local_determinism(&lang, "Cmd.seq", 4).unwrap();
        assert!(local.is_deterministic());
        assert_eq!(local.terms_checked, 25);
    }

    #[test]
    fn fork_is_caught_by_both_modes() {
        let lang = with_fork();
        let r = check_global_determinism(&lang, Sort::Cmd, 2, Mode::Both).unwrap();
        let terms: Vec<String> = r
            .counterexamples
            .iter()
            .step_by(9)
            .map(|c| c.term.to_string())
            .collect();
        assert!(terms.contains(&"fork".to_string()));
        assert!(terms.contains(&"(seq fork skip)".to_string()));
        let local = check_local_determinism(&lang, "Cmd.fork", 1).unwrap();
        assert_eq!(local.counterexamples.len(), 9);
        let seq_local = check_local_determinism(&lang, "Cmd.seq", 3).unwrap();
        assert!(seq_local.is_deterministic());
    }

    #[test]
    fn determinism_is_admissible_and_bounded_runs_are_not() {
        let lang = skip_seq();
        let s = samples(&lang, Sort::Cmd, 3);
        let r = check_admissibility(&Determinism, &lang, &s);
        assert!(r.holds());
        assert_eq!(r.samples_checked, 5 * 81);

        let full =
            Language::build(&LanguageDefinition::full(), &Repository::standard()).unwrap();
        let o = full.objects(&Default::default()).unwrap();
        let sample = vec![(cond_loop(lit(false), skip()), o)];
        let r = check_admissibility(&BoundedRun { max_steps: 1 }, &full, &sample);
        assert_eq!(r.failures.len(), 1);
        assert!(check_admissibility(&Determinism, &full, &[]).holds());
    }

    #[test]
    fn laws_hold_on_random_labels() {
        let sig = LabelSignature::standard(&["ρ", "σ", "out"]);
        let r = check_category_laws(&sig, 500, 7);
        assert!(r.holds(), "{:?}", r.laws);
        assert!(r.law("functor_unmentioned").unwrap().checked == 500);
    }

    #[test]
    fn audit_flags_broken_discipline() {
        let lang = skip_seq();
        let o = &seed_objects(lang.signature())[4];
        let mut t = lang.step(&seq(seq(skip(), skip()), skip()), o).remove(0);
        let mut report = AuditReport::default();
        audit_transition(&lang, &t, &mut report);
        assert!(report.is_clean());
        assert_eq!(report.transitions_checked, 2);
        let pre = Value::empty_map();
        let post = Value::map([("x", Value::Int(9))]);
        t.label = Label::new(
            Arc::clone(lang.signature()),
            vec![
                t.label.arrows()[0].clone(),
                EntityArrow::Rw { pre, post },
            ],
        )
        .unwrap();
        audit_transition(&lang, &t, &mut report);
        assert!(!report.is_clean());
    }
}
