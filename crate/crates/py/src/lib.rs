//! Python bindings: posets, incidence algebra elements, involutions and
//! Jordan *-derivations, all exchanged through the plain-text formats.

use std::sync::Arc;

use incalg_core::starmaps::{
    basis_label, decompose_jsd, inner_star_derivation, is_inner, jordan_witness, jsd_space_basis,
    star_derivation_space_basis, star_derivation_witness,
};
use incalg_core::text::{
    format_element, format_involution_spec, format_linear_map, format_poset, parse_element, parse_involution_spec,
    parse_linear_map, parse_poset,
};
use incalg_core::{factor_involution, Error, Field};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.kind()))
}

fn field(name: &str) -> PyResult<Field> {
    name.parse().map_err(err)
}

fn pair(poset: &incalg_core::Poset, j: Option<(usize, usize)>) -> Option<(String, String)> {
    j.map(|(a, b)| (basis_label(poset, a), basis_label(poset, b)))
}

#[pyclass(frozen, skip_from_py_object, module = "incalg")]
#[derive(Clone)]
struct Poset {
    inner: Arc<incalg_core::Poset>,
}

#[pymethods]
impl Poset {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Poset { inner: Arc::new(parse_poset(text).map_err(err)?) })
    }

    #[staticmethod]
    fn chain(n: usize) -> Self {
        Poset { inner: Arc::new(incalg_core::Poset::chain(n)) }
    }

    /// Every poset on `n` elements, one per isomorphism class.
    #[staticmethod]
    fn enumerate(n: usize) -> Vec<Poset> {
        incalg_core::Poset::enumerate_all(n)
            .into_iter()
            .map(|p| Poset { inner: Arc::new(p) })
            .collect()
    }

    #[getter]
    fn elements(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    #[getter]
    fn covers(&self) -> Vec<(String, String)> {
        let p = &self.inner;
        p.covers().iter().map(|&(x, y)| (p.name(x).to_owned(), p.name(y).to_owned())).collect()
    }

    /// Dimension of the incidence algebra: the number of pairs `x ≤ y`.
    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dim()
    }

    fn leq(&self, x: &str, y: &str) -> PyResult<bool> {
        let p = &self.inner;
        Ok(p.leq(p.index_of(x).map_err(err)?, p.index_of(y).map_err(err)?))
    }

    /// Order-reversing involutions, each as its list of orbits.
    fn involutions(&self) -> Vec<Vec<(String, String)>> {
        let p = &self.inner;
        p.involutions()
            .iter()
            .map(|l| l.swaps(p).into_iter().map(|(a, b)| (a.to_owned(), b.to_owned())).collect())
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        format_poset(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Poset(elements={:?}, covers={})", self.inner.names(), self.inner.covers().len())
    }
}

#[pyclass(frozen, skip_from_py_object, module = "incalg")]
#[derive(Clone)]
struct Element {
    inner: incalg_core::Element,
}

impl Element {
    fn wrap(r: incalg_core::Result<incalg_core::Element>) -> PyResult<Self> {
        r.map(|inner| Element { inner }).map_err(err)
    }
}

#[pymethods]
impl Element {
    /// Parses lines `x y value`; unlisted entries are zero.
    #[new]
    #[pyo3(signature = (poset, text, field = "Q"))]
    fn new(poset: &Poset, text: &str, field: &str) -> PyResult<Self> {
        Element::wrap(parse_element(&poset.inner, self::field(field)?, text))
    }

    #[staticmethod]
    #[pyo3(signature = (poset, field = "Q"))]
    fn delta(poset: &Poset, field: &str) -> PyResult<Self> {
        Ok(Element { inner: incalg_core::Element::delta(&poset.inner, self::field(field)?) })
    }

    #[staticmethod]
    #[pyo3(signature = (poset, field = "Q"))]
    fn zeta(poset: &Poset, field: &str) -> PyResult<Self> {
        Ok(Element { inner: incalg_core::Element::zeta(&poset.inner, self::field(field)?) })
    }

    #[staticmethod]
    #[pyo3(signature = (poset, x, y, field = "Q"))]
    fn basis(poset: &Poset, x: &str, y: &str, field: &str) -> PyResult<Self> {
        Element::wrap(incalg_core::Element::basis_by_name(&poset.inner, self::field(field)?, x, y))
    }

    fn get(&self, x: &str, y: &str) -> PyResult<String> {
        let p = self.inner.poset();
        let (x, y) = (p.index_of(x).map_err(err)?, p.index_of(y).map_err(err)?);
        Ok(self.inner.get(x, y).to_string())
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn inverse(&self) -> PyResult<Self> {
        Element::wrap(self.inner.invert())
    }

    fn hadamard(&self, other: &Element) -> PyResult<Self> {
        Element::wrap(self.inner.hadamard(&other.inner))
    }

    fn __add__(&self, other: &Element) -> PyResult<Self> {
        Element::wrap(self.inner.add(&other.inner))
    }

    fn __sub__(&self, other: &Element) -> PyResult<Self> {
        Element::wrap(self.inner.sub(&other.inner))
    }

    /// Convolution product.
    fn __mul__(&self, other: &Element) -> PyResult<Self> {
        Element::wrap(self.inner.convolve(&other.inner))
    }

    fn __neg__(&self) -> Self {
        Element { inner: self.inner.neg() }
    }

    fn __eq__(&self, other: &Element) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        format_element(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.inner)
    }
}

#[pyclass(frozen, skip_from_py_object, module = "incalg")]
#[derive(Clone)]
struct LinearMap {
    inner: incalg_core::LinearMap,
}

#[pymethods]
impl LinearMap {
    /// Parses lines `e x y -> literal`; unlisted images are zero.
    #[new]
    #[pyo3(signature = (poset, text, field = "Q"))]
    fn new(poset: &Poset, text: &str, field: &str) -> PyResult<Self> {
        let inner = parse_linear_map(&poset.inner, self::field(field)?, text).map_err(err)?;
        Ok(LinearMap { inner })
    }

    fn __call__(&self, f: &Element) -> PyResult<Element> {
        Element::wrap(self.inner.apply(&f.inner))
    }

    fn image(&self, x: &str, y: &str) -> PyResult<Element> {
        let p = self.inner.poset();
        let (x, y) = (p.index_of(x).map_err(err)?, p.index_of(y).map_err(err)?);
        Element::wrap(self.inner.image_of(x, y))
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __add__(&self, other: &LinearMap) -> PyResult<Self> {
        Ok(LinearMap { inner: self.inner.add(&other.inner).map_err(err)? })
    }

    fn __sub__(&self, other: &LinearMap) -> PyResult<Self> {
        Ok(LinearMap { inner: self.inner.sub(&other.inner).map_err(err)? })
    }

    fn __eq__(&self, other: &LinearMap) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        format_linear_map(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("LinearMap(dim={})", self.inner.dim())
    }
}

#[pyclass(frozen, skip_from_py_object, module = "incalg")]
#[derive(Clone)]
struct InvolutionSpec {
    inner: incalg_core::InvolutionSpec,
}

#[pymethods]
impl InvolutionSpec {
    /// Parses `lambda:`, `sigma:` and `mu:` sections. Validity is not
    /// checked here; see `validate`.
    #[new]
    #[pyo3(signature = (poset, text, field = "Q"))]
    fn new(poset: &Poset, text: &str, field: &str) -> PyResult<Self> {
        let inner = parse_involution_spec(&poset.inner, self::field(field)?, text).map_err(err)?;
        Ok(InvolutionSpec { inner })
    }

    /// Factors an involution given by its action on the basis.
    #[staticmethod]
    fn factor(map: &LinearMap) -> PyResult<Self> {
        Ok(InvolutionSpec { inner: factor_involution(&map.inner).map_err(err)? })
    }

    fn validate(&self) -> bool {
        self.inner.validate()
    }

    fn validation_failure(&self) -> Option<String> {
        self.inner.validation_failure()
    }

    #[getter]
    fn mu(&self) -> Element {
        Element { inner: self.inner.mu().clone() }
    }

    #[getter]
    fn sigma(&self) -> Element {
        Element { inner: self.inner.sigma().as_element().clone() }
    }

    #[getter]
    fn lambda_(&self) -> Vec<(String, String)> {
        let p = self.inner.poset();
        self.inner.lambda().swaps(p).into_iter().map(|(a, b)| (a.to_owned(), b.to_owned())).collect()
    }

    fn matrix(&self) -> LinearMap {
        LinearMap { inner: self.inner.matrix() }
    }

    fn __call__(&self, f: &Element) -> PyResult<Element> {
        Element::wrap(self.inner.apply(&f.inner))
    }

    fn __str__(&self) -> String {
        format_involution_spec(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("InvolutionSpec(valid={})", self.inner.validate())
    }
}

/// Basis of the Jordan *-derivations of `theta`.
#[pyfunction]
fn jsd_basis(theta: &InvolutionSpec) -> PyResult<Vec<LinearMap>> {
    let basis = jsd_space_basis(&theta.inner).map_err(err)?;
    Ok(basis.into_iter().map(|inner| LinearMap { inner }).collect())
}

/// Basis of the *-derivations of `theta`.
#[pyfunction]
fn star_basis(theta: &InvolutionSpec) -> PyResult<Vec<LinearMap>> {
    let basis = star_derivation_space_basis(&theta.inner).map_err(err)?;
    Ok(basis.into_iter().map(|inner| LinearMap { inner }).collect())
}

#[pyfunction]
fn inner_derivation(f: &Element, theta: &InvolutionSpec) -> PyResult<LinearMap> {
    Ok(LinearMap { inner: inner_star_derivation(&f.inner, &theta.inner).map_err(err)? })
}

/// Basis pair where the Jordan identity fails, or None.
#[pyfunction]
fn jordan_failure(d: &LinearMap, theta: &InvolutionSpec) -> PyResult<Option<(String, String)>> {
    let w = jordan_witness(&d.inner, &theta.inner).map_err(err)?;
    Ok(pair(d.inner.poset(), w))
}

#[pyfunction]
fn is_jordan(d: &LinearMap, theta: &InvolutionSpec) -> PyResult<bool> {
    Ok(jordan_failure(d, theta)?.is_none())
}

/// Basis pair where the *-derivation identity fails, or None.
#[pyfunction]
fn star_failure(d: &LinearMap, theta: &InvolutionSpec) -> PyResult<Option<(String, String)>> {
    let w = star_derivation_witness(&d.inner, &theta.inner).map_err(err)?;
    Ok(pair(d.inner.poset(), w))
}

/// `f` with `d = Δ_f`, or None when `d` is not inner.
#[pyfunction]
fn inner_element(d: &LinearMap, theta: &InvolutionSpec) -> PyResult<Option<Element>> {
    Ok(is_inner(&d.inner, &theta.inner).map_err(err)?.map(|inner| Element { inner }))
}

/// Splits a Jordan *-derivation into inner and transposed parts.
#[pyfunction]
fn decompose<'py>(py: Python<'py>, d: &LinearMap, theta: &InvolutionSpec) -> PyResult<Bound<'py, PyDict>> {
    let dec = decompose_jsd(&d.inner, &theta.inner).map_err(err)?;
    let p = d.inner.poset();
    let out = PyDict::new(py);
    out.set_item("inner_f", Element { inner: dec.inner_f })?;
    out.set_item("inner_part", LinearMap { inner: dec.inner_part })?;
    out.set_item("transposed_part", LinearMap { inner: dec.transposed_part })?;
    let gamma = PyDict::new(py);
    for (y, c) in &dec.gamma {
        gamma.set_item(p.name(*y), c.to_string())?;
    }
    out.set_item("gamma", gamma)?;
    out.set_item("residual_zero", dec.residual.is_zero())?;
    Ok(out)
}

#[pymodule]
fn incalg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poset>()?;
    m.add_class::<Element>()?;
    m.add_class::<LinearMap>()?;
    m.add_class::<InvolutionSpec>()?;
    m.add_function(wrap_pyfunction!(jsd_basis, m)?)?;
    m.add_function(wrap_pyfunction!(star_basis, m)?)?;
    m.add_function(wrap_pyfunction!(inner_derivation, m)?)?;
    m.add_function(wrap_pyfunction!(jordan_failure, m)?)?;
    m.add_function(wrap_pyfunction!(is_jordan, m)?)?;
    m.add_function(wrap_pyfunction!(star_failure, m)?)?;
    m.add_function(wrap_pyfunction!(inner_element, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    Ok(())
}
