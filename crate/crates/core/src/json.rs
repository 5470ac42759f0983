//! JSON encodings of values, labels, traces and reports.
//!
//! Trace files are JSON Lines: one object per step followed by a summary.
//!
//! ```text
//! {"step":1,"rule":"Cmd.seq/seq_1","from":"(seq skip skip)","to":"skip","label":{...}}
//! {"outcome":"completed","term":"skip","steps":1,"composed_label":{...}}
//! ```
//!
//! In a label, a read-only entity maps to its object, a read-write entity to
//! `{"pre": .., "post": ..}` and a write-only entity to its emission list.

use serde_json::{json, Map, Value as Json};

use crate::engine::Trace;
use crate::labels::{EntityArrow, Label, LabelSignature, Objects};
use crate::properties::{Counterexample, DeterminismReport, LawReport};
use crate::step::Transition;
use crate::value::Value;

pub fn value(v: &Value) -> Json {
    match v {
        Value::Int(i) => json!(i),
        Value::Bool(b) => json!(b),
        Value::Sym(s) => json!(s),
        Value::Map(m) => Json::Object(m.iter().map(|(k, v)| (k.clone(), value(v))).collect()),
        Value::Unit => Json::Null,
    }
}

pub fn arrow(a: &EntityArrow) -> Json {
    match a {
        EntityArrow::Ro(o) => value(o),
        EntityArrow::Rw { pre, post } => json!({ "pre": value(pre), "post": value(post) }),
        EntityArrow::Wo(vs) => Json::Array(vs.iter().map(value).collect()),
    }
}

pub fn label(l: &Label) -> Json {
    Json::Object(
        l.signature()
            .entities()
            .iter()
            .zip(l.arrows())
            .map(|(e, a)| (e.name.clone(), arrow(a)))
            .collect(),
    )
}

/// Objects of read-only and read-write entities by name.
pub fn objects(sig: &LabelSignature, o: &Objects) -> Json {
    let mut out = Map::new();
    for (e, v) in sig.entities().iter().zip(o.values()) {
        if let Some(v) = v {
            out.insert(e.name.clone(), value(v));
        }
    }
    Json::Object(out)
}

pub fn step_line(n: usize, t: &Transition) -> Json {
    json!({
        "step": n,
        "rule": t.rule.to_string(),
        "from": t.source.to_string(),
        "to": t.target.to_string(),
        "label": label(&t.label),
    })
}

pub fn summary_line(trace: &Trace) -> Json {
    json!({
        "outcome": trace.outcome.as_str(),
        "term": trace.outcome.term().to_string(),
        "steps": trace.steps.len(),
        "composed_label": label(&trace.composed),
    })
}

/// The whole trace as JSON Lines, newline-terminated.
pub fn trace_jsonl(trace: &Trace) -> String {
    let mut out = String::new();
    for (i, t) in trace.steps.iter().enumerate() {
        out.push_str(&step_line(i + 1, t).to_string());
        out.push('\n');
    }
    out.push_str(&summary_line(trace).to_string());
    out.push('\n');
    out
}

fn transition(t: &Transition) -> Json {
    json!({
        "rule": t.rule.to_string(),
        "to": t.target.to_string(),
        "label": label(&t.label),
    })
}

fn counterexample(sig: &LabelSignature, c: &Counterexample) -> Json {
    json!({
        "term": c.term.to_string(),
        "objects": objects(sig, &c.objects),
        "t1": transition(&c.first),
        "t2": transition(&c.second),
        "inherited": c.inherited,
    })
}

pub fn determinism_report(r: &DeterminismReport) -> Json {
    json!({
        "mode": r.mode.as_str(),
        "sort": r.sort.as_str(),
        "depth": r.depth,
        "terms_checked": r.terms_checked,
        "contexts_checked": r.contexts_checked,
        "complete": r.complete,
        "counterexamples": r
            .counterexamples
            .iter()
            .map(|c| counterexample(&r.signature, c))
            .collect::<Vec<_>>(),
    })
}

pub fn law_report(r: &LawReport) -> Json {
    json!({
        "samples": r.samples,
        "seed": r.seed,
        "laws": r
            .laws
            .iter()
            .map(|l| json!({ "law": l.name, "checked": l.checked, "failures": l.failures }))
            .collect::<Vec<_>>(),
    })
}
