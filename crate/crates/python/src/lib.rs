use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use spherical::dl::{dim_lower, to_upper, Element, LoopBound};
use spherical::expr::parse_class;
use spherical::facts::FactsFile;
use spherical::loopspace::{enumerate_basis, max_suspension, suspend, BasisQuery, SuspensionDepth};
use spherical::nishida::{is_a_annihilated, sq_dual, Annihilation};
use spherical::pipeline::enumerate_candidates;
use spherical::tables::{emit_table, Format, TableKind};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A homogeneous or mixed class in `H_*(QS^n; F_2)`.
#[pyclass(name = "Element", module = "spherical_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyElement {
    inner: Element,
}

#[pymethods]
impl PyElement {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_class(text).map(|inner| PyElement { inner }).map_err(value_err)
    }

    /// `Q^{upper} x_n`, normalised.
    #[staticmethod]
    fn from_upper(n: u32, upper: Vec<u32>) -> Self {
        PyElement { inner: Element::from_upper(n, &upper) }
    }

    /// `Q_{lower} x_n`, outermost index first.
    #[staticmethod]
    fn from_lower(n: u32, lower: Vec<u32>) -> Self {
        PyElement { inner: Element::from_lower(n, &lower) }
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    /// Dimension, or `None` for zero and mixed-degree sums.
    #[getter]
    fn dim(&self) -> Option<u32> {
        self.inner.dim()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn is_decomposable(&self) -> bool {
        self.inner.is_decomposable()
    }

    fn square(&self) -> Self {
        PyElement { inner: self.inner.square() }
    }

    fn sq(&self, r: u32) -> Self {
        PyElement { inner: sq_dual(r, &self.inner) }
    }

    fn suspend(&self, steps: u32) -> Self {
        PyElement { inner: suspend(&self.inner, steps) }
    }

    fn __add__(&self, other: &PyElement) -> PyResult<Self> {
        if self.inner.n() != other.inner.n() {
            return Err(PyValueError::new_err("classes over different spheres"));
        }
        Ok(PyElement { inner: self.inner.add(&other.inner) })
    }

    fn __mul__(&self, other: &PyElement) -> PyResult<Self> {
        if self.inner.n() != other.inner.n() {
            return Err(PyValueError::new_err("classes over different spheres"));
        }
        Ok(PyElement { inner: self.inner.mul(&other.inner) })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({:?})", self.inner.to_string())
    }
}

#[pyfunction]
fn parse(text: &str) -> PyResult<PyElement> {
    PyElement::new(text)
}

#[pyfunction(name = "sq_dual")]
fn py_sq_dual(r: u32, e: &PyElement) -> PyElement {
    e.sq(r)
}

/// `(True, None, None)` when annihilated, otherwise `(False, r, image)`.
#[pyfunction(name = "is_a_annihilated")]
fn py_is_a_annihilated(e: &PyElement) -> PyResult<(bool, Option<u32>, Option<PyElement>)> {
    match is_a_annihilated(&e.inner).map_err(value_err)? {
        Annihilation::Annihilated => Ok((true, None, None)),
        Annihilation::Witness { r, image } => Ok((false, Some(r), Some(PyElement { inner: image }))),
    }
}

/// Largest number of suspensions that keep the class nonzero (`None` when
/// stable) and the image there.
#[pyfunction(name = "max_suspension")]
fn py_max_suspension(e: &PyElement) -> (Option<u32>, PyElement) {
    let m = max_suspension(&e.inner);
    let depth = match m.depth {
        SuspensionDepth::Stable => None,
        SuspensionDepth::Finite(k) => Some(k),
    };
    (depth, PyElement { inner: m.image })
}

#[pyfunction(name = "dim_lower")]
fn py_dim_lower(lower: Vec<u32>, n: u32) -> u32 {
    dim_lower(&lower, n)
}

#[pyfunction(name = "to_upper")]
fn py_to_upper(lower: Vec<u32>, n: u32) -> Vec<u32> {
    to_upper(&lower, n).0
}

/// Generators `(dim, text)` of `H_* Omega^l S^{n+l}` up to `max_dim`; pass
/// `l=None` for `QS^n`.
#[pyfunction]
#[pyo3(signature = (n, max_dim, l=None))]
fn basis(n: u32, max_dim: u32, l: Option<u32>) -> PyResult<Vec<(u32, String)>> {
    let bound = l.map_or(LoopBound::Infinite, LoopBound::Finite);
    let q = BasisQuery::new(bound, n, max_dim).map_err(value_err)?;
    Ok(enumerate_basis(&q).iter().map(|w| (w.dim(n), w.display(n))).collect())
}

/// Candidate sequences `(J, extra)` at loop bound `l`.
#[pyfunction]
fn candidates(l: u32) -> PyResult<Vec<(Vec<u32>, bool)>> {
    Ok(enumerate_candidates(l).map_err(value_err)?.into_iter().map(|c| (c.j, c.extra)).collect())
}

/// The elimination report as a JSON string.
#[pyfunction]
#[pyo3(signature = (l, n_from, n_to, facts_json=None))]
fn run_elimination(l: u32, n_from: u32, n_to: u32, facts_json: Option<&str>) -> PyResult<String> {
    let facts = match facts_json {
        Some(text) => FactsFile::from_json(text).map_err(value_err)?,
        None => FactsFile::default(),
    };
    let report = spherical::pipeline::run_elimination(l, n_from, n_to, &facts).map_err(value_err)?;
    Ok(report.to_json())
}

/// Regenerates a table; returns `(document, has_discrepancies)`.
#[pyfunction]
#[pyo3(signature = (kind, format="text", l=8, n_from=1, n_to=32))]
fn table(kind: &str, format: &str, l: u32, n_from: u32, n_to: u32) -> PyResult<(String, bool)> {
    let kind = match kind {
        "lemma81" => TableKind::Lemma81,
        "degenerate43" => TableKind::Degenerate43,
        "mod4-44" => TableKind::Mod4,
        "nondegenerate45" => TableKind::Nondegenerate,
        other => return Err(PyValueError::new_err(format!("unknown table {other}"))),
    };
    let format = match format {
        "text" => Format::Text,
        "csv" => Format::Csv,
        "json" => Format::Json,
        "latex" => Format::Latex,
        other => return Err(PyValueError::new_err(format!("unknown format {other}"))),
    };
    if n_from == 0 || n_from >= n_to {
        return Err(PyValueError::new_err("table sweeps need 0 < n_from < n_to"));
    }
    let out = emit_table(kind, format, l, n_from..=n_to).map_err(value_err)?;
    Ok((out.document, out.has_discrepancies))
}

#[pymodule]
fn spherical_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyElement>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(py_sq_dual, m)?)?;
    m.add_function(wrap_pyfunction!(py_is_a_annihilated, m)?)?;
    m.add_function(wrap_pyfunction!(py_max_suspension, m)?)?;
    m.add_function(wrap_pyfunction!(py_dim_lower, m)?)?;
    m.add_function(wrap_pyfunction!(py_to_upper, m)?)?;
    m.add_function(wrap_pyfunction!(basis, m)?)?;
    m.add_function(wrap_pyfunction!(candidates, m)?)?;
    m.add_function(wrap_pyfunction!(run_elimination, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    Ok(())
}
