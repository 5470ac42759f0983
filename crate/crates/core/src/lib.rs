//! Component-based modular structural operational semantics.
//!
//! Languages are assembled from independent components, each contributing one
//! construct and its local transition rules. Transition labels are arrows of a
//! product category of read-only, read-write and write-only entities.

pub mod components;
pub mod definition;
pub mod engine;
pub mod fixtures;
pub mod json;
pub mod labels;
pub mod properties;
pub mod sexp;
pub mod step;
pub mod terms;
pub mod value;

pub use components::{Component, Repository};
pub use definition::LanguageDefinition;
pub use engine::{run_trace, Language, Outcome, Trace};
pub use labels::{Label, LabelSignature, Objects};
pub use terms::{Sort, Term};
pub use value::Value;
