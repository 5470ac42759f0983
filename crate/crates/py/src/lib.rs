//! Python bindings. Reports come back as plain dicts and lists with the same
//! shape as the CLI's JSON output.

use std::collections::BTreeMap;
use std::time::Duration;

use msos_core::components::{describe, ENV_ENTITY, STORE_ENTITY};
use msos_core::engine::DEFAULT_FUEL;
use msos_core::fixtures::Fork;
use msos_core::json;
use msos_core::labels::LabelSignature;
use msos_core::properties::{self, CheckOptions, Mode};
use msos_core::sexp::parse_term;
use msos_core::{run_trace, Language, LanguageDefinition, Objects, Repository, Sort, Term, Trace, Value};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyInt, PyString};

create_exception!(msos, MsosError, PyException, "Parse, build or run failure.");

fn err(e: impl std::fmt::Display) -> PyErr {
    MsosError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn value(ob: &Bound<'_, PyAny>) -> PyResult<Value> {
    if ob.is_instance_of::<PyBool>() {
        return Ok(Value::Bool(ob.extract()?));
    }
    if ob.is_instance_of::<PyInt>() {
        return Ok(Value::Int(ob.extract()?));
    }
    if ob.is_instance_of::<PyString>() {
        let s: String = ob.extract()?;
        return Value::parse_literal(&s)
            .filter(|v| matches!(v, Value::Sym(_)))
            .ok_or_else(|| PyValueError::new_err(format!("`{s}` is not a symbol")));
    }
    if let Ok(d) = ob.cast::<PyDict>() {
        let mut entries = Vec::new();
        for (k, v) in d.iter() {
            entries.push((k.extract::<String>()?, value(&v)?));
        }
        return Ok(Value::map(entries.iter().map(|(k, v)| (k.as_str(), v.clone()))));
    }
    Err(PyValueError::new_err("expected bool, int, str or dict"))
}

fn bindings(d: Option<&Bound<'_, PyDict>>) -> PyResult<Option<Value>> {
    d.map(|d| value(d.as_any())).transpose()
}

/// A program term.
#[pyclass(name = "Term", module = "msos", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyTerm(Term);

#[pymethods]
impl PyTerm {
    #[getter]
    fn construct(&self) -> &'static str {
        self.0.id()
    }

    #[getter]
    fn sort(&self) -> &'static str {
        self.0.sort().as_str()
    }

    #[getter]
    fn height(&self) -> usize {
        self.0.height()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term({})", self.0)
    }
}

/// A language assembled from the built-in components.
#[pyclass(name = "Language", module = "msos", frozen)]
struct PyLanguage(Language);

impl PyLanguage {
    fn term(&self, program: &Bound<'_, PyAny>) -> PyResult<Term> {
        if let Ok(t) = program.cast::<PyTerm>() {
            return Ok(t.get().0.clone());
        }
        let src: String = program.extract()?;
        parse_term(&src, self.0.grammar()).map_err(err)
    }

    fn objects(&self, env: Option<&Bound<'_, PyDict>>, store: Option<&Bound<'_, PyDict>>) -> PyResult<Objects> {
        let mut init = BTreeMap::new();
        for (entity, v) in [(ENV_ENTITY, bindings(env)?), (STORE_ENTITY, bindings(store)?)] {
            if let Some(v) = v {
                init.insert(entity.to_string(), v);
            }
        }
        self.0.objects(&init).map_err(err)
    }

    fn execute(
        &self,
        program: &Bound<'_, PyAny>,
        env: Option<&Bound<'_, PyDict>>,
        store: Option<&Bound<'_, PyDict>>,
        fuel: usize,
    ) -> PyResult<Trace> {
        let term = self.term(program)?;
        let init = self.objects(env, store)?;
        run_trace(&self.0, &term, &init, fuel).map_err(err)
    }
}

fn build(src: &str, with_fixtures: bool) -> PyResult<PyLanguage> {
    let def = LanguageDefinition::from_toml(src).map_err(err)?;
    let repo = if with_fixtures {
        Repository::standard().with(Fork)
    } else {
        Repository::standard()
    };
    Language::build(&def, &repo).map(PyLanguage).map_err(err)
}

#[pymethods]
impl PyLanguage {
    #[staticmethod]
    #[pyo3(signature = (text, with_fixtures = false))]
    fn from_toml(text: &str, with_fixtures: bool) -> PyResult<Self> {
        build(text, with_fixtures)
    }

    #[staticmethod]
    #[pyo3(signature = (path, with_fixtures = false))]
    fn from_file(path: std::path::PathBuf, with_fixtures: bool) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path).map_err(|e| err(format!("{}: {e}", path.display())))?;
        build(&text, with_fixtures)
    }

    #[getter]
    fn entities(&self) -> Vec<(String, &'static str)> {
        self.0
            .signature()
            .entities()
            .iter()
            .map(|e| (e.name.clone(), e.kind.as_str()))
            .collect()
    }

    #[getter]
    fn sorts(&self) -> Vec<&'static str> {
        self.0.sorts().iter().map(|s| s.as_str()).collect()
    }

    #[getter]
    fn components(&self) -> Vec<&'static str> {
        self.0.components().map(|c| c.id()).collect()
    }

    fn parse(&self, program: &str) -> PyResult<PyTerm> {
        parse_term(program, self.0.grammar()).map(PyTerm).map_err(err)
    }

    /// Runs to completion and returns the summary line as a dict.
    #[pyo3(signature = (program, env = None, store = None, fuel = DEFAULT_FUEL))]
    fn run<'py>(
        &self,
        py: Python<'py>,
        program: &Bound<'py, PyAny>,
        env: Option<&Bound<'py, PyDict>>,
        store: Option<&Bound<'py, PyDict>>,
        fuel: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let trace = self.execute(program, env, store, fuel)?;
        to_py(py, &json::summary_line(&trace))
    }

    /// Every step followed by the summary, one dict each.
    #[pyo3(signature = (program, env = None, store = None, fuel = DEFAULT_FUEL))]
    fn trace<'py>(
        &self,
        py: Python<'py>,
        program: &Bound<'py, PyAny>,
        env: Option<&Bound<'py, PyDict>>,
        store: Option<&Bound<'py, PyDict>>,
        fuel: usize,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let trace = self.execute(program, env, store, fuel)?;
        let mut lines: Vec<_> = trace
            .steps
            .iter()
            .enumerate()
            .map(|(i, t)| json::step_line(i + 1, t))
            .collect();
        lines.push(json::summary_line(&trace));
        lines.iter().map(|l| to_py(py, l)).collect()
    }

    /// The trace as JSON Lines text, byte-identical to `msos trace`.
    #[pyo3(signature = (program, env = None, store = None, fuel = DEFAULT_FUEL))]
    fn trace_jsonl(
        &self,
        program: &Bound<'_, PyAny>,
        env: Option<&Bound<'_, PyDict>>,
        store: Option<&Bound<'_, PyDict>>,
        fuel: usize,
    ) -> PyResult<String> {
        Ok(json::trace_jsonl(&self.execute(program, env, store, fuel)?))
    }

    #[pyo3(signature = (sort = "Cmd", depth = 4, mode = "both", timeout = None))]
    fn check_determinism<'py>(
        &self,
        py: Python<'py>,
        sort: &str,
        depth: usize,
        mode: &str,
        timeout: Option<f64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let sort = Sort::parse(sort).ok_or_else(|| PyValueError::new_err(format!("unknown sort `{sort}`")))?;
        let mode = Mode::parse(mode).ok_or_else(|| PyValueError::new_err(format!("unknown mode `{mode}`")))?;
        let opts = CheckOptions {
            deadline: timeout.map(Duration::from_secs_f64),
            ..CheckOptions::default()
        };
        let lang = &self.0;
        let report = py
            .detach(|| properties::check_global_determinism_with(lang, sort, depth, mode, &opts))
            .map_err(err)?;
        to_py(py, &json::determinism_report(&report))
    }
}

#[pyfunction]
#[pyo3(signature = (samples = 10_000, seed = 42, entities = None))]
fn check_category_laws<'py>(
    py: Python<'py>,
    samples: usize,
    seed: u64,
    entities: Option<Vec<String>>,
) -> PyResult<Bound<'py, PyAny>> {
    let names = entities.unwrap_or_else(|| vec![ENV_ENTITY.into(), STORE_ENTITY.into(), "out".into()]);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let sig = LabelSignature::standard(&names);
    let report = py.detach(|| properties::check_category_laws(&sig, samples, seed));
    to_py(py, &json::law_report(&report))
}

/// Descriptions of every built-in component.
#[pyfunction]
#[pyo3(signature = (with_fixtures = false))]
fn components(with_fixtures: bool) -> Vec<String> {
    let repo = if with_fixtures {
        Repository::standard().with(Fork)
    } else {
        Repository::standard()
    };
    repo.components().iter().map(|c| describe(c.as_ref())).collect()
}

#[pymodule]
fn msos(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLanguage>()?;
    m.add_class::<PyTerm>()?;
    m.add_function(wrap_pyfunction!(check_category_laws, m)?)?;
    m.add_function(wrap_pyfunction!(components, m)?)?;
    m.add("MsosError", m.py().get_type::<MsosError>())?;
    Ok(())
}
