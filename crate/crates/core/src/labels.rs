//! Label categories.
//!
//! A label is one arrow of the product category built from the declared
//! entities. Each entity contributes an elementary category determined by its
//! permission:
//!
//! * read-only: discrete category, the only arrows are identities;
//! * read-write: codiscrete pre-order, exactly one arrow `(pre, post)` between
//!   any two objects;
//! * write-only: one object `*`, arrows are emission lists (the free monoid).
//!
//! Components see labels through the mentioned/unmentioned split: a
//! [`MentionedLabel`] exposes the arrows of the entities a component declares,
//! an [`OpaqueLabel`] holds the rest and can only be compared or tested for
//! unobservability.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::value::Value;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("labels are not composable at entity `{entity}`")]
    NotComposable { entity: String },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntityKind {
    ReadOnly,
    ReadWrite,
    WriteOnly,
}

impl EntityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::ReadOnly => "read_only",
            EntityKind::ReadWrite => "read_write",
            EntityKind::WriteOnly => "write_only",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "read_only" | "ro" => Some(EntityKind::ReadOnly),
            "read_write" | "rw" => Some(EntityKind::ReadWrite),
            "write_only" | "wo" => Some(EntityKind::WriteOnly),
            _ => None,
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What the objects (or, for write-only entities, the emissions) of an entity are.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectDomain {
    /// Finite maps identifier -> value (environments, stores).
    Map,
    /// Any value.
    Any,
    /// Lists of emitted values; only meaningful for write-only entities.
    Values,
}

impl ObjectDomain {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectDomain::Map => "map",
            ObjectDomain::Any => "value",
            ObjectDomain::Values => "values",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "map" => Some(ObjectDomain::Map),
            "value" => Some(ObjectDomain::Any),
            "values" => Some(ObjectDomain::Values),
            _ => None,
        }
    }

    fn admits(self, v: &Value) -> bool {
        match self {
            ObjectDomain::Map => matches!(v, Value::Map(_)),
            ObjectDomain::Any | ObjectDomain::Values => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EntitySpec {
    pub name: String,
    pub kind: EntityKind,
    pub domain: ObjectDomain,
}

impl EntitySpec {
    pub fn new(name: impl Into<String>, kind: EntityKind, domain: ObjectDomain) -> Self {
        Self {
            name: name.into(),
            kind,
            domain,
        }
    }

    pub fn read_only(name: impl Into<String>) -> Self {
        Self::new(name, EntityKind::ReadOnly, ObjectDomain::Map)
    }

    pub fn read_write(name: impl Into<String>) -> Self {
        Self::new(name, EntityKind::ReadWrite, ObjectDomain::Map)
    }

    pub fn write_only(name: impl Into<String>) -> Self {
        Self::new(name, EntityKind::WriteOnly, ObjectDomain::Values)
    }
}

/// Ordered entity declarations; declaration order is the canonical order of
/// every label over this signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LabelSignature {
    entities: Vec<EntitySpec>,
}

impl LabelSignature {
    pub fn new(entities: Vec<EntitySpec>) -> Result<Arc<Self>, LabelError> {
        for (i, e) in entities.iter().enumerate() {
            if entities[..i].iter().any(|o| o.name == e.name) {
                return Err(LabelError::InvalidSignature(format!(
                    "duplicate entity `{}`",
                    e.name
                )));
            }
            let ok = match e.kind {
                EntityKind::WriteOnly => e.domain == ObjectDomain::Values,
                _ => e.domain != ObjectDomain::Values,
            };
            if !ok {
                return Err(LabelError::InvalidSignature(format!(
                    "entity `{}` of kind {} cannot have domain {}",
                    e.name,
                    e.kind,
                    e.domain.as_str()
                )));
            }
        }
        Ok(Arc::new(Self { entities }))
    }

    /// The signature `{ρ: read-only env, σ: read-write store, out: write-only}`
    /// truncated to the given names, in that order.
    pub fn standard(names: &[&str]) -> Arc<Self> {
        let all = [
            EntitySpec::read_only("ρ"),
            EntitySpec::read_write("σ"),
            EntitySpec::write_only("out"),
        ];
        let picked = all
            .into_iter()
            .filter(|e| names.contains(&e.name.as_str()))
            .collect();
        Self::new(picked).expect("standard entities are well formed")
    }

    pub fn entities(&self) -> &[EntitySpec] {
        &self.entities
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entities.iter().position(|e| e.name == name)
    }

    pub fn entity(&self, name: &str) -> Option<&EntitySpec> {
        self.entities.iter().find(|e| e.name == name)
    }

    /// Resolves a set of entity names to canonical positions.
    pub fn mention<S: AsRef<str>>(&self, names: &[S]) -> Result<MentionSet, LabelError> {
        let mut indices = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            let i = self
                .index_of(n)
                .ok_or_else(|| LabelError::SignatureMismatch(format!("unknown entity `{n}`")))?;
            if !indices.contains(&i) {
                indices.push(i);
            }
        }
        indices.sort_unstable();
        Ok(MentionSet { indices })
    }
}

/// A set of entities resolved against one signature, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MentionSet {
    indices: Vec<usize>,
}

impl MentionSet {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EntityArrow {
    Ro(Value),
    Rw { pre: Value, post: Value },
    Wo(Vec<Value>),
}

impl EntityArrow {
    pub fn kind(&self) -> EntityKind {
        match self {
            EntityArrow::Ro(_) => EntityKind::ReadOnly,
            EntityArrow::Rw { .. } => EntityKind::ReadWrite,
            EntityArrow::Wo(_) => EntityKind::WriteOnly,
        }
    }

    /// Identity arrow at an object; write-only entities ignore the object.
    pub fn identity(kind: EntityKind, object: Option<&Value>) -> Option<Self> {
        match kind {
            EntityKind::ReadOnly => object.map(|o| EntityArrow::Ro(o.clone())),
            EntityKind::ReadWrite => object.map(|o| EntityArrow::Rw {
                pre: o.clone(),
                post: o.clone(),
            }),
            EntityKind::WriteOnly => Some(EntityArrow::Wo(Vec::new())),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            EntityArrow::Ro(_) => true,
            EntityArrow::Rw { pre, post } => pre == post,
            EntityArrow::Wo(out) => out.is_empty(),
        }
    }

    /// Source object; `None` stands for the single write-only object `*`.
    pub fn source(&self) -> Option<&Value> {
        match self {
            EntityArrow::Ro(o) => Some(o),
            EntityArrow::Rw { pre, .. } => Some(pre),
            EntityArrow::Wo(_) => None,
        }
    }

    pub fn target(&self) -> Option<&Value> {
        match self {
            EntityArrow::Ro(o) => Some(o),
            EntityArrow::Rw { post, .. } => Some(post),
            EntityArrow::Wo(_) => None,
        }
    }

    /// Diagrammatic composition: `self` first, then `next`.
    pub fn then(&self, next: &EntityArrow) -> Option<EntityArrow> {
        match (self, next) {
            (EntityArrow::Ro(a), EntityArrow::Ro(b)) if a == b => Some(EntityArrow::Ro(a.clone())),
            (EntityArrow::Rw { pre, post }, EntityArrow::Rw { pre: pre2, post: post2 })
                if post == pre2 =>
            {
                Some(EntityArrow::Rw {
                    pre: pre.clone(),
                    post: post2.clone(),
                })
            }
            (EntityArrow::Wo(a), EntityArrow::Wo(b)) => {
                let mut out = Vec::with_capacity(a.len() + b.len());
                out.extend_from_slice(a);
                out.extend_from_slice(b);
                Some(EntityArrow::Wo(out))
            }
            _ => None,
        }
    }
}

/// Objects of the label category, one per entity in canonical order
/// (`None` for the write-only object `*`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Objects(Vec<Option<Value>>);

impl Objects {
    pub fn new(values: Vec<Option<Value>>) -> Self {
        Objects(values)
    }

    /// Builds objects from a name -> value assignment. Every read-only and
    /// read-write entity must be assigned; write-only entities must not be.
    pub fn from_assignment(
        sig: &LabelSignature,
        assignment: &BTreeMap<String, Value>,
    ) -> Result<Self, LabelError> {
        if let Some(unknown) = assignment.keys().find(|k| sig.index_of(k).is_none()) {
            return Err(LabelError::SignatureMismatch(format!(
                "unknown entity `{unknown}`"
            )));
        }
        let mut out = Vec::with_capacity(sig.len());
        for e in sig.entities() {
            match (e.kind, assignment.get(&e.name)) {
                (EntityKind::WriteOnly, None) => out.push(None),
                (EntityKind::WriteOnly, Some(_)) => {
                    return Err(LabelError::SignatureMismatch(format!(
                        "write-only entity `{}` takes no object",
                        e.name
                    )))
                }
                (_, None) => {
                    return Err(LabelError::SignatureMismatch(format!(
                        "missing object for entity `{}`",
                        e.name
                    )))
                }
                (_, Some(v)) => out.push(Some(v.clone())),
            }
        }
        let objects = Objects(out);
        objects.check(sig)?;
        Ok(objects)
    }

    /// Empty maps for every map-valued entity, unit for the rest.
    pub fn empty(sig: &LabelSignature) -> Self {
        Objects(
            sig.entities()
                .iter()
                .map(|e| match (e.kind, e.domain) {
                    (EntityKind::WriteOnly, _) => None,
                    (_, ObjectDomain::Map) => Some(Value::empty_map()),
                    _ => Some(Value::Unit),
                })
                .collect(),
        )
    }

    pub fn values(&self) -> &[Option<Value>] {
        &self.0
    }

    pub fn get(&self, index: usize) -> Option<&Value> {
        self.0.get(index).and_then(Option::as_ref)
    }

    pub(crate) fn set(&mut self, index: usize, value: Value) {
        self.0[index] = Some(value);
    }

    pub fn check(&self, sig: &LabelSignature) -> Result<(), LabelError> {
        if self.0.len() != sig.len() {
            return Err(LabelError::SignatureMismatch(format!(
                "expected {} objects, found {}",
                sig.len(),
                self.0.len()
            )));
        }
        for (e, o) in sig.entities().iter().zip(&self.0) {
            let ok = match (e.kind, o) {
                (EntityKind::WriteOnly, None) => true,
                (EntityKind::WriteOnly, Some(_)) | (_, None) => false,
                (_, Some(v)) => e.domain.admits(v),
            };
            if !ok {
                return Err(LabelError::SignatureMismatch(format!(
                    "object for entity `{}` does not match its domain",
                    e.name
                )));
            }
        }
        Ok(())
    }
}

/// One arrow per declared entity, kind-aligned with the signature.
#[derive(Debug, Clone, Eq)]
pub struct Label {
    signature: Arc<LabelSignature>,
    arrows: Arc<[EntityArrow]>,
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.signature, &other.signature) || self.signature == other.signature)
            && self.arrows == other.arrows
    }
}

impl std::hash::Hash for Label {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.arrows.hash(state);
    }
}

impl Label {
    pub fn new(signature: Arc<LabelSignature>, arrows: Vec<EntityArrow>) -> Result<Self, LabelError> {
        if arrows.len() != signature.len() {
            return Err(LabelError::SignatureMismatch(format!(
                "expected {} arrows, found {}",
                signature.len(),
                arrows.len()
            )));
        }
        for (e, a) in signature.entities().iter().zip(&arrows) {
            if e.kind != a.kind() {
                return Err(LabelError::SignatureMismatch(format!(
                    "entity `{}` is {} but arrow is {}",
                    e.name,
                    e.kind,
                    a.kind()
                )));
            }
            let objects_ok = match a {
                EntityArrow::Ro(o) => e.domain.admits(o),
                EntityArrow::Rw { pre, post } => e.domain.admits(pre) && e.domain.admits(post),
                EntityArrow::Wo(_) => true,
            };
            if !objects_ok {
                return Err(LabelError::SignatureMismatch(format!(
                    "arrow for entity `{}` leaves its object domain",
                    e.name
                )));
            }
        }
        Ok(Self {
            signature,
            arrows: arrows.into(),
        })
    }

    pub fn signature(&self) -> &Arc<LabelSignature> {
        &self.signature
    }

    pub fn arrows(&self) -> &[EntityArrow] {
        &self.arrows
    }

    pub fn arrow(&self, name: &str) -> Option<&EntityArrow> {
        self.signature.index_of(name).map(|i| &self.arrows[i])
    }

    pub fn source(&self) -> Objects {
        Objects(self.arrows.iter().map(|a| a.source().cloned()).collect())
    }

    pub fn target(&self) -> Objects {
        Objects(self.arrows.iter().map(|a| a.target().cloned()).collect())
    }
}

/// Identity arrow at the given objects: read-only arrows carry the object,
/// read-write arrows have `pre = post`, write-only arrows emit nothing.
pub fn identity_label(sig: &Arc<LabelSignature>, objects: &Objects) -> Result<Label, LabelError> {
    objects.check(sig)?;
    Ok(identity_unchecked(sig, objects))
}

pub(crate) fn identity_unchecked(sig: &Arc<LabelSignature>, objects: &Objects) -> Label {
    let arrows = sig
        .entities()
        .iter()
        .zip(objects.values())
        .map(|(e, o)| EntityArrow::identity(e.kind, o.as_ref()).expect("objects checked"))
        .collect();
    Label {
        signature: Arc::clone(sig),
        arrows,
    }
}

/// `a` followed by `b`. Fails at the first entity where the target of `a`
/// differs from the source of `b`.
pub fn compose(a: &Label, b: &Label) -> Result<Label, LabelError> {
    if a.signature != b.signature {
        return Err(LabelError::SignatureMismatch(
            "composing labels over different signatures".into(),
        ));
    }
    let arrows = compose_arrows(&a.signature, &[], &a.arrows, &b.arrows)?;
    Ok(Label {
        signature: Arc::clone(&a.signature),
        arrows: arrows.into(),
    })
}

fn compose_arrows(
    sig: &LabelSignature,
    indices: &[usize],
    a: &[EntityArrow],
    b: &[EntityArrow],
) -> Result<Vec<EntityArrow>, LabelError> {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(pos, (x, y))| {
            x.then(y).ok_or_else(|| {
                let idx = if indices.is_empty() { pos } else { indices[pos] };
                LabelError::NotComposable {
                    entity: sig.entities()[idx].name.clone(),
                }
            })
        })
        .collect()
}

/// No read-write change and no write-only emission.
pub fn is_unobservable(l: &Label) -> bool {
    l.arrows.iter().all(EntityArrow::is_identity)
}

/// The arrows of the mentioned entities. Components read and rebuild these.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MentionedLabel {
    signature: Arc<LabelSignature>,
    indices: Vec<usize>,
    arrows: Vec<EntityArrow>,
}

impl MentionedLabel {
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.indices
            .iter()
            .map(|&i| self.signature.entities()[i].name.as_str())
    }

    pub fn arrows(&self) -> &[EntityArrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    fn position(&self, name: &str) -> Option<usize> {
        let idx = self.signature.index_of(name)?;
        self.indices.iter().position(|&i| i == idx)
    }

    pub fn get(&self, name: &str) -> Option<&EntityArrow> {
        self.position(name).map(|p| &self.arrows[p])
    }

    /// Replaces the arrow of a mentioned entity; the kind must not change.
    pub fn set(&mut self, name: &str, arrow: EntityArrow) -> Result<(), LabelError> {
        let p = self
            .position(name)
            .ok_or_else(|| LabelError::SignatureMismatch(format!("entity `{name}` not mentioned")))?;
        if self.arrows[p].kind() != arrow.kind() {
            return Err(LabelError::SignatureMismatch(format!(
                "entity `{name}` expects a {} arrow",
                self.arrows[p].kind()
            )));
        }
        self.arrows[p] = arrow;
        Ok(())
    }

    pub fn is_unobservable(&self) -> bool {
        self.arrows.iter().all(EntityArrow::is_identity)
    }

    pub fn compose(&self, next: &MentionedLabel) -> Result<MentionedLabel, LabelError> {
        if self.indices != next.indices {
            return Err(LabelError::SignatureMismatch("different mentioned sets".into()));
        }
        Ok(MentionedLabel {
            signature: Arc::clone(&self.signature),
            indices: self.indices.clone(),
            arrows: compose_arrows(&self.signature, &self.indices, &self.arrows, &next.arrows)?,
        })
    }
}

/// The unmentioned part of a label. Deliberately offers nothing but equality
/// and the unobservability test.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpaqueLabel {
    indices: Vec<usize>,
    arrows: Vec<EntityArrow>,
}

impl OpaqueLabel {
    pub fn is_unobservable(&self) -> bool {
        self.arrows.iter().all(EntityArrow::is_identity)
    }

    pub(crate) fn compose(
        &self,
        sig: &LabelSignature,
        next: &OpaqueLabel,
    ) -> Result<OpaqueLabel, LabelError> {
        if self.indices != next.indices {
            return Err(LabelError::SignatureMismatch("different opaque sets".into()));
        }
        Ok(OpaqueLabel {
            indices: self.indices.clone(),
            arrows: compose_arrows(sig, &self.indices, &self.arrows, &next.arrows)?,
        })
    }
}

impl Label {
    /// Whether the unmentioned parts of two labels are equal, without
    /// building the projections.
    pub(crate) fn same_opaque(&self, other: &Label, m: &MentionSet) -> bool {
        self.arrows.len() == other.arrows.len()
            && self
                .arrows
                .iter()
                .zip(other.arrows.iter())
                .enumerate()
                .all(|(i, (a, b))| m.contains(i) || a == b)
    }

    pub(crate) fn opaque_is_identity(&self, m: &MentionSet) -> bool {
        self.arrows
            .iter()
            .enumerate()
            .all(|(i, a)| m.contains(i) || a.is_identity())
    }

    /// Moves the arrows into the mentioned/unmentioned parts.
    pub(crate) fn into_split(self, m: &MentionSet) -> (MentionedLabel, OpaqueLabel) {
        let n = self.arrows.len();
        let mut mentioned = Vec::with_capacity(m.indices.len());
        let mut opaque_idx = Vec::with_capacity(n - m.indices.len());
        let mut opaque = Vec::with_capacity(n - m.indices.len());
        for (i, a) in self.arrows.iter().cloned().enumerate() {
            if m.contains(i) {
                mentioned.push(a);
            } else {
                opaque_idx.push(i);
                opaque.push(a);
            }
        }
        (
            MentionedLabel {
                signature: self.signature,
                indices: m.indices.clone(),
                arrows: mentioned,
            },
            OpaqueLabel {
                indices: opaque_idx,
                arrows: opaque,
            },
        )
    }

    /// Inverse of `into_split` for parts known to tile the signature.
    pub(crate) fn join(m: MentionedLabel, u: OpaqueLabel) -> Label {
        debug_assert_eq!(m.indices.len() + u.indices.len(), m.signature.len());
        if m.indices.is_empty() {
            return Label {
                signature: m.signature,
                arrows: u.arrows.into(),
            };
        }
        if u.indices.is_empty() {
            return Label {
                signature: m.signature,
                arrows: m.arrows.into(),
            };
        }
        let mut arrows = Vec::with_capacity(m.signature.len());
        let mut ms = m.indices.iter().zip(m.arrows).peekable();
        let mut us = u.indices.iter().zip(u.arrows).peekable();
        loop {
            let take_m = match (ms.peek(), us.peek()) {
                (Some((i, _)), Some((j, _))) => i < j,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            let next = if take_m { ms.next() } else { us.next() };
            arrows.push(next.expect("peeked").1);
        }
        Label {
            signature: m.signature,
            arrows: arrows.into(),
        }
    }

    pub(crate) fn mentioned_part(&self, m: &MentionSet) -> MentionedLabel {
        MentionedLabel {
            signature: Arc::clone(&self.signature),
            indices: m.indices.clone(),
            arrows: m.indices.iter().map(|&i| self.arrows[i].clone()).collect(),
        }
    }

    pub(crate) fn opaque_part(&self, m: &MentionSet) -> OpaqueLabel {
        let (indices, arrows) = self
            .arrows
            .iter()
            .enumerate()
            .filter(|(i, _)| !m.contains(*i))
            .map(|(i, a)| (i, a.clone()))
            .unzip();
        OpaqueLabel { indices, arrows }
    }
}

pub fn project_mentioned<S: AsRef<str>>(l: &Label, m: &[S]) -> Result<MentionedLabel, LabelError> {
    let set = l.signature.mention(m)?;
    Ok(l.mentioned_part(&set))
}

pub fn project_unmentioned<S: AsRef<str>>(l: &Label, m: &[S]) -> Result<OpaqueLabel, LabelError> {
    let set = l.signature.mention(m)?;
    Ok(l.opaque_part(&set))
}

/// Inverse of the projection pair: rebuilds the full label from its
/// mentioned and unmentioned parts.
pub fn assemble(
    m: &MentionedLabel,
    u: &OpaqueLabel,
    sig: &Arc<LabelSignature>,
) -> Result<Label, LabelError> {
    if *m.signature != **sig {
        return Err(LabelError::SignatureMismatch(
            "mentioned part belongs to another signature".into(),
        ));
    }
    let n = sig.len();
    if m.indices.len() + u.indices.len() != n {
        return Err(LabelError::SignatureMismatch(format!(
            "parts cover {} of {} entities",
            m.indices.len() + u.indices.len(),
            n
        )));
    }
    let mut slots: Vec<Option<EntityArrow>> = vec![None; n];
    for (&i, a) in m.indices.iter().zip(&m.arrows).chain(u.indices.iter().zip(&u.arrows)) {
        if i >= n || slots[i].is_some() {
            return Err(LabelError::SignatureMismatch(
                "parts do not tile the signature".into(),
            ));
        }
        slots[i] = Some(a.clone());
    }
    let arrows = slots.into_iter().map(|a| a.expect("tiled")).collect();
    Label::new(Arc::clone(sig), arrows)
}
