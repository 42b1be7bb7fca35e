//! Python bindings for `apnlab`.
//!
//! Exposes finite fields, function tables built from family descriptors or
//! lookup tables, the APN checks, Gamma-ranks, the trinomial parameter
//! search and the lemma verifiers. Precondition failures raise `ValueError`,
//! exceeded memory budgets raise `MemoryError`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;

use apnlab::analysis::{self, verify_key_lemma, verify_resultant_identity, IdentityMode};
use apnlab::bitlinalg::BitLinAlgError;
use apnlab::families::{self, FamilyId, SRange};
use apnlab::gf2n::{FieldElement, FieldSpec};
use apnlab::invariants::{self, CodeFormat, InvariantError, RankMode};
use apnlab::vbf::FunctionTable;
use pyo3::exceptions::{PyMemoryError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn invariant_err(e: InvariantError) -> PyErr {
    match e {
        InvariantError::LinAlg(BitLinAlgError::BudgetExceeded { .. }) => PyMemoryError::new_err(e.to_string()),
        other => value_err(other),
    }
}

/// GF(2^n) with a fixed modulus; elements are ints holding polynomial-basis bits.
#[pyclass(name = "Field", module = "apnlab", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyField {
    inner: FieldSpec,
}

impl PyField {
    fn el(&self, bits: u32) -> PyResult<FieldElement> {
        self.inner.element(bits).map_err(value_err)
    }
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (n, modulus=None, primitive=None))]
    fn new(n: u32, modulus: Option<u64>, primitive: Option<u32>) -> PyResult<Self> {
        let mut inner = FieldSpec::new(n, modulus).map_err(value_err)?;
        if let Some(g) = primitive {
            inner = inner.with_primitive(FieldElement(g)).map_err(value_err)?;
        }
        Ok(PyField { inner })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.inner.modulus()
    }

    #[getter]
    fn primitive(&self) -> u32 {
        self.inner.primitive().0
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.add(self.el(a)?, self.el(b)?).0)
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.mul(self.el(a)?, self.el(b)?).0)
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        Ok(self.inner.inv(self.el(a)?).map_err(value_err)?.0)
    }

    fn pow(&self, a: u32, e: u64) -> PyResult<u32> {
        Ok(self.inner.pow(self.el(a)?, e).0)
    }

    /// Relative trace onto GF(2^m).
    fn trace(&self, m: u32, a: u32) -> PyResult<u32> {
        Ok(self.inner.trace(m, self.el(a)?).map_err(value_err)?.0)
    }

    fn is_primitive(&self, a: u32) -> PyResult<bool> {
        Ok(self.inner.is_primitive(self.el(a)?))
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.inner.header())
    }
}

/// A function on GF(2^n) stored as its lookup table.
#[pyclass(name = "Function", module = "apnlab", frozen)]
pub struct PyFunction {
    table: FunctionTable,
    descriptor: Option<String>,
}

#[pymethods]
impl PyFunction {
    /// Builds a family instance from a JSON5 descriptor such as `{tag:"Gold", n:7, i:1}`.
    #[staticmethod]
    fn from_descriptor(descriptor: &str) -> PyResult<Self> {
        let id = FamilyId::parse(descriptor).map_err(value_err)?;
        let inst = id.build().map_err(value_err)?;
        Ok(PyFunction {
            table: inst.table,
            descriptor: Some(inst.id.to_string()),
        })
    }

    #[staticmethod]
    fn from_lut(field: &PyField, lut: Vec<u32>) -> PyResult<Self> {
        let table = FunctionTable::from_lut(&field.inner, lut).map_err(value_err)?;
        Ok(PyFunction {
            table,
            descriptor: None,
        })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.table.n()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField {
            inner: self.table.field().clone(),
        }
    }

    /// Canonical descriptor, when built from one.
    #[getter]
    fn descriptor(&self) -> Option<String> {
        self.descriptor.clone()
    }

    fn lut(&self) -> Vec<u32> {
        self.table.lut().to_vec()
    }

    fn __call__(&self, z: u32) -> PyResult<u32> {
        let z = self.table.field().element(z).map_err(value_err)?;
        Ok(self.table.at(z).0)
    }

    fn is_apn(&self) -> bool {
        analysis::is_apn(&self.table)
    }

    /// Exact only for functions of algebraic degree at most 2.
    fn is_apn_quadratic(&self) -> bool {
        analysis::is_apn_quadratic(&self.table)
    }

    /// Differential uniformity.
    fn delta(&self) -> u32 {
        analysis::ddt(&self.table).delta
    }

    /// DDT entry value -> number of pairs (a != 0, b) with that entry.
    fn ddt_histogram(&self) -> BTreeMap<u32, u64> {
        analysis::ddt(&self.table).histogram
    }

    #[pyo3(signature = (out_of_core=false))]
    fn gamma_rank(&self, out_of_core: bool) -> PyResult<usize> {
        let mode = if out_of_core {
            RankMode::OutOfCore
        } else {
            RankMode::Auto
        };
        let label = self.descriptor.as_deref().unwrap_or("lut");
        invariants::gamma_rank(&self.table, label, mode)
            .map(|r| r.gamma_rank)
            .map_err(invariant_err)
    }

    /// Writes the code generator matrix; `format` is "plain-bits" or "script".
    fn export_code(&self, path: &str, format: &str) -> PyResult<()> {
        let fmt = match format {
            "plain-bits" => CodeFormat::PlainBits,
            "script" => CodeFormat::Script,
            other => return Err(value_err(format!("unknown format {other:?}"))),
        };
        let file = File::create(path).map_err(value_err)?;
        invariants::export_code(&self.table, BufWriter::new(file), fmt).map_err(invariant_err)
    }

    fn __repr__(&self) -> String {
        match &self.descriptor {
            Some(d) => format!("Function({d})"),
            None => format!("Function(lut over GF(2^{}))", self.table.n()),
        }
    }
}

/// Number of roots of z^3 + a z + b in GF(2^m).
#[pyfunction]
fn cubic_root_count(field: &PyField, a: u32, b: u32) -> PyResult<u32> {
    Ok(analysis::cubic_root_count(&field.inner, field.el(a)?, field.el(b)?).root_count)
}

/// Valid (s, mu) for the trinomial family over GF(2^{3m}).
#[pyfunction]
#[pyo3(signature = (m, narrow_s=false))]
fn search_trinomial(m: u32, narrow_s: bool) -> PyResult<Vec<(u32, u32)>> {
    let range = if narrow_s { SRange::BelowM } else { SRange::BelowThreeM };
    let found = families::search_trinomial_params(m, range).map_err(value_err)?;
    Ok(found.into_iter().map(|(s, mu)| (s, mu.0)).collect())
}

/// Full sweep of the resultant identity over GF(2^m); returns whether every check held.
#[pyfunction]
fn verify_resultant(m: u32) -> PyResult<bool> {
    Ok(verify_resultant_identity(m, IdentityMode::FullSweep)
        .map_err(value_err)?
        .passed())
}

/// Checks the key-lemma claims and factorizations at one nonzero point `a`.
#[pyfunction]
fn verify_key_lemma_at(m: u32, s: u32, mu: u32, v: u32, a: u32) -> PyResult<bool> {
    let r = verify_key_lemma(m, s, FieldElement(mu), FieldElement(v), FieldElement(a)).map_err(value_err)?;
    Ok(r.all_hold())
}

/// Table rows for n = 8 or 9 as dicts (no ranks are computed).
#[pyfunction]
fn representative_rows<'py>(py: Python<'py>, n: u32) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = families::representative_rows(n).map_err(value_err)?;
    rows.iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("row", r.row)?;
            d.set_item("function", r.label)?;
            d.set_item("reference", r.reference)?;
            d.set_item("published_gamma_rank", r.published_gamma_rank)?;
            d.set_item("descriptor", r.id.to_string())?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "apnlab")]
fn apnlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyFunction>()?;
    m.add_function(wrap_pyfunction!(cubic_root_count, m)?)?;
    m.add_function(wrap_pyfunction!(search_trinomial, m)?)?;
    m.add_function(wrap_pyfunction!(verify_resultant, m)?)?;
    m.add_function(wrap_pyfunction!(verify_key_lemma_at, m)?)?;
    m.add_function(wrap_pyfunction!(representative_rows, m)?)?;
    Ok(())
}
