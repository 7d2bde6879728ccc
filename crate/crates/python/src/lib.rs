//! Python bindings: `import blaschke_lab`.
//!
//! Complex numbers cross as Python `complex`. Invalid input raises
//! `ValueError`; root-finder and other numerical failures raise
//! `ArithmeticError`.

use blaschke_core::hyperbolic::{self, HullKind};
use blaschke_core::lab::{self, SequenceMode, SequenceSpec};
use blaschke_core::verify::{self, SuiteConfig};
use blaschke_core::{Complex64, Error};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. }
        | Error::CircleStraddle(_)
        | Error::WindingNotInteger { .. }
        | Error::ExtractionAmbiguity(_)
        | Error::RotationUndefined(_)
        | Error::BoundaryProximity(_)
        | Error::ContourThroughFiber { .. } => PyArithmeticError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

type PyRes<T> = PyResult<T>;

fn wrap<T>(r: blaschke_core::Result<T>) -> PyRes<T> {
    r.map_err(to_py)
}

#[pyclass(name = "DiscAutomorphism", module = "blaschke_lab", frozen)]
struct PyDiscAutomorphism {
    inner: blaschke_core::DiscAutomorphism,
}

#[pymethods]
impl PyDiscAutomorphism {
    /// `z -> gamma (a - z) / (1 - conj(a) z)`.
    #[new]
    #[pyo3(signature = (a, gamma = Complex64::new(1.0, 0.0)))]
    fn new(a: Complex64, gamma: Complex64) -> PyRes<Self> {
        Ok(Self {
            inner: wrap(blaschke_core::DiscAutomorphism::new(a, gamma))?,
        })
    }

    #[staticmethod]
    fn involution(a: Complex64) -> PyRes<Self> {
        Ok(Self {
            inner: wrap(blaschke_core::DiscAutomorphism::involution(a))?,
        })
    }

    #[staticmethod]
    fn rotation(g: Complex64) -> PyRes<Self> {
        Ok(Self {
            inner: wrap(blaschke_core::DiscAutomorphism::rotation(g))?,
        })
    }

    #[getter]
    fn a(&self) -> Complex64 {
        self.inner.a()
    }

    #[getter]
    fn gamma(&self) -> Complex64 {
        self.inner.gamma()
    }

    fn __call__(&self, z: Complex64) -> PyRes<Complex64> {
        wrap(self.inner.eval(z))
    }

    fn derivative(&self, z: Complex64) -> PyRes<Complex64> {
        wrap(self.inner.derivative(z))
    }

    /// `self ∘ other`.
    fn compose(&self, other: PyRef<'_, Self>) -> Self {
        Self {
            inner: self.inner.compose(&other.inner),
        }
    }

    fn inverse(&self) -> Self {
        Self {
            inner: self.inner.inverse(),
        }
    }

    #[pyo3(signature = (tol = 1e-12))]
    fn is_identity(&self, tol: f64) -> bool {
        self.inner.is_identity(tol)
    }

    fn __repr__(&self) -> String {
        format!(
            "DiscAutomorphism(a={}, gamma={})",
            self.inner.a(),
            self.inner.gamma()
        )
    }
}

#[pyclass(name = "BlaschkeProduct", module = "blaschke_lab", frozen)]
struct PyBlaschkeProduct {
    inner: blaschke_core::FiniteBlaschkeProduct,
}

#[pymethods]
impl PyBlaschkeProduct {
    /// `gamma * prod (z_k - z) / (1 - conj(z_k) z)`.
    #[new]
    fn new(gamma: Complex64, zeros: Vec<Complex64>) -> PyRes<Self> {
        Ok(Self {
            inner: wrap(blaschke_core::FiniteBlaschkeProduct::new(gamma, zeros))?,
        })
    }

    /// `z^n`.
    #[staticmethod]
    fn monomial(n: usize) -> PyRes<Self> {
        Ok(Self {
            inner: wrap(blaschke_core::FiniteBlaschkeProduct::monomial(n))?,
        })
    }

    /// Product of `T_a^m` over `(a, m)` pairs.
    #[staticmethod]
    fn from_factors(factors: Vec<(Complex64, usize)>) -> PyRes<Self> {
        Ok(Self {
            inner: wrap(blaschke_core::FiniteBlaschkeProduct::from_factors(&factors))?,
        })
    }

    /// Seeded random product with zeros in `|z| < radius`.
    #[staticmethod]
    #[pyo3(signature = (order, seed, radius = 0.9))]
    fn random(order: usize, seed: u64, radius: f64) -> PyRes<Self> {
        if order == 0 || !(radius > 0.0 && radius < 1.0) {
            return Err(PyValueError::new_err("need order >= 1 and 0 < radius < 1"));
        }
        let mut rng = blaschke_core::random::rng(seed);
        Ok(Self {
            inner: blaschke_core::random::product(&mut rng, order, radius),
        })
    }

    #[getter]
    fn gamma(&self) -> Complex64 {
        self.inner.gamma()
    }

    #[getter]
    fn zeros(&self) -> Vec<Complex64> {
        self.inner.zeros().to_vec()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn __call__(&self, z: Complex64) -> PyRes<Complex64> {
        wrap(self.inner.eval(z))
    }

    fn derivative(&self, z: Complex64) -> PyRes<Complex64> {
        wrap(self.inner.derivative(z))
    }

    fn log_derivative(&self, z: Complex64) -> PyRes<Complex64> {
        wrap(self.inner.log_derivative(z))
    }

    fn boundary_derivative_modulus(&self, theta: f64) -> f64 {
        self.inner.boundary_derivative_modulus(theta)
    }

    fn one_minus_modulus_sq(&self, z: Complex64) -> f64 {
        self.inner.one_minus_modulus_sq(z)
    }

    /// `(interior, exterior)`, each a list of `(point, multiplicity)`.
    #[allow(clippy::type_complexity)]
    fn critical_points(&self) -> PyRes<(Vec<(Complex64, usize)>, Vec<(Complex64, usize)>)> {
        let set = wrap(self.inner.critical_points())?;
        Ok((set.interior, set.exterior))
    }

    /// Solutions of `B(z) = c` with multiplicity.
    fn fiber(&self, c: Complex64) -> PyRes<Vec<Complex64>> {
        wrap(self.inner.fiber_solve(c))
    }

    /// Interior critical points as `(point, multiplicity, in_hull)`.
    #[pyo3(signature = (tol = 1e-8))]
    fn hull_check(&self, tol: f64) -> PyRes<Vec<(Complex64, usize, bool)>> {
        Ok(wrap(lab::hull_check(&self.inner, tol))?
            .into_iter()
            .map(|h| (h.point, h.multiplicity, h.in_hull))
            .collect())
    }

    fn renormalized_conjugate(&self, a: Complex64, gamma: Complex64) -> PyRes<Self> {
        Ok(Self {
            inner: wrap(lab::renormalized_conjugate(&self.inner, a, gamma))?,
        })
    }

    fn fatou_quotient(&self, z: Complex64) -> PyRes<f64> {
        wrap(lab::fatou_quotient(&self.inner, z))
    }

    fn __repr__(&self) -> String {
        format!(
            "BlaschkeProduct(gamma={}, zeros={:?})",
            self.inner.gamma(),
            self.inner.zeros()
        )
    }
}

#[pyclass(name = "HyperbolicHull", module = "blaschke_lab", frozen)]
struct PyHyperbolicHull {
    inner: hyperbolic::HyperbolicHull,
}

#[pymethods]
impl PyHyperbolicHull {
    /// Counterclockwise Poincaré vertices.
    #[getter]
    fn vertices(&self) -> Vec<Complex64> {
        self.inner.poincare_vertices.clone()
    }

    #[getter]
    fn klein_vertices(&self) -> Vec<Complex64> {
        self.inner.klein_vertices.clone()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind {
            HullKind::Point => "point",
            HullKind::Segment => "segment",
            HullKind::Polygon => "polygon",
        }
    }

    #[pyo3(signature = (z, tol = 1e-8))]
    fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.inner.contains(z, tol)
    }

    fn excess(&self, z: Complex64) -> f64 {
        self.inner.excess(z)
    }

    #[pyo3(signature = (samples = 64))]
    fn boundary_samples(&self, samples: usize) -> Vec<Complex64> {
        self.inner.boundary_samples(samples)
    }
}

#[pyfunction]
fn hyperbolic_convex_hull(points: Vec<Complex64>) -> PyRes<PyHyperbolicHull> {
    Ok(PyHyperbolicHull {
        inner: wrap(hyperbolic::hyperbolic_convex_hull(&points))?,
    })
}

#[pyfunction]
fn geodesic_point(z1: Complex64, z2: Complex64, t: f64) -> Complex64 {
    hyperbolic::geodesic_point(z1, z2, t)
}

#[pyfunction]
fn pseudo_hyperbolic_distance(z1: Complex64, z2: Complex64) -> f64 {
    hyperbolic::pseudo_hyperbolic_distance(z1, z2)
}

#[pyfunction]
fn collinearity_residual(z1: Complex64, z2: Complex64, z3: Complex64) -> PyRes<f64> {
    wrap(hyperbolic::collinearity_residual(z1, z2, z3))
}

#[pyfunction]
fn poincare_to_klein(p: Complex64) -> PyRes<Complex64> {
    wrap(hyperbolic::poincare_to_klein(p))
}

#[pyfunction]
fn klein_to_poincare(k: Complex64) -> PyRes<Complex64> {
    wrap(hyperbolic::klein_to_poincare(k))
}

/// Roots of `sum coeffs[i] z^i` as `(root, multiplicity)`.
#[pyfunction]
fn find_roots(coeffs: Vec<Complex64>) -> PyRes<Vec<(Complex64, usize)>> {
    let p = blaschke_core::Polynomial::new(coeffs);
    Ok(wrap(blaschke_core::polyroots::find_roots(&p))?
        .roots
        .into_iter()
        .map(|r| (r.location, r.multiplicity))
        .collect())
}

/// One dict per sequence term: `k, a, gamma, sup_deviation, rotation`.
#[pyfunction]
#[pyo3(signature = (b, gamma0, mode, rate, count, radius = 0.9, grid = lab::DEFAULT_GRID))]
#[allow(clippy::too_many_arguments)]
fn convergence_experiment<'py>(
    py: Python<'py>,
    b: PyRef<'_, PyBlaschkeProduct>,
    gamma0: Complex64,
    mode: &str,
    rate: f64,
    count: usize,
    radius: f64,
    grid: usize,
) -> PyRes<Vec<Bound<'py, PyDict>>> {
    let mode: SequenceMode = wrap(mode.parse())?;
    let spec = wrap(SequenceSpec::new(gamma0, mode, rate, count))?;
    let records = wrap(lab::convergence_experiment(&b.inner, &spec, radius, grid))?;
    records
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("k", r.k)?;
            d.set_item("a", r.a)?;
            d.set_item("gamma", r.gamma)?;
            d.set_item("sup_deviation", r.sup_deviation)?;
            d.set_item("rotation", r.rotation_constant)?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (count = 14))]
fn counterexample_run(py: Python<'_>, count: usize) -> PyRes<Bound<'_, PyDict>> {
    let r = wrap(lab::counterexample_run(count))?;
    let d = PyDict::new(py);
    d.set_item("even_limit_deviation", r.even_limit_deviation)?;
    d.set_item("odd_limit_deviation", r.odd_limit_deviation)?;
    d.set_item("unrenormalized_oscillation", r.unrenormalized_oscillation)?;
    d.set_item("renormalized_deviation", r.renormalized_deviation)?;
    Ok(d)
}

/// `(valence, residual, radius)`; the radius defaults to halfway between
/// the fiber and the circle.
#[pyfunction]
#[pyo3(signature = (b, w, radius = None, samples = lab::DEFAULT_VALENCE_NODES))]
fn valence(
    b: PyRef<'_, PyBlaschkeProduct>,
    w: Complex64,
    radius: Option<f64>,
    samples: usize,
) -> PyRes<(usize, f64, f64)> {
    let radius = radius.unwrap_or_else(|| lab::default_valence_radius(&b.inner, w));
    let r = wrap(lab::valence(&b.inner, w, radius, samples))?;
    Ok((r.valence, r.residual, r.radius))
}

/// `(delta, witness_pair or None)`.
#[pyfunction]
#[pyo3(signature = (b, m, samples = 64))]
fn separation_estimate(
    b: PyRef<'_, PyBlaschkeProduct>,
    m: f64,
    samples: usize,
) -> PyRes<(f64, Option<(Complex64, Complex64)>)> {
    let est = wrap(lab::separation_estimate(&b.inner, m, samples))?;
    Ok((est.delta, est.witness_pair))
}

/// `(m, n, critical_point, collinearity_residual)` per exponent pair.
#[pyfunction]
fn density_family(
    a: Complex64,
    b: Complex64,
    pairs: Vec<(usize, usize)>,
) -> PyRes<Vec<(usize, usize, Complex64, f64)>> {
    Ok(wrap(lab::density_family(a, b, &pairs))?
        .into_iter()
        .map(|p| (p.m, p.n, p.critical_point, p.collinearity_residual))
        .collect())
}

/// Runs every property suite; returns `(id, name, passed, worst)` tuples.
#[pyfunction]
#[pyo3(signature = (seed = verify::DEFAULT_SEED, trials = None))]
fn run_suites(seed: u64, trials: Option<usize>) -> Vec<(usize, String, bool, f64)> {
    let cfg = SuiteConfig {
        seed,
        trials,
        ..SuiteConfig::default()
    };
    verify::run_all(&cfg)
        .into_iter()
        .map(|r| (r.id, r.name, r.passed, r.worst))
        .collect()
}

#[pymodule]
fn blaschke_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDiscAutomorphism>()?;
    m.add_class::<PyBlaschkeProduct>()?;
    m.add_class::<PyHyperbolicHull>()?;
    m.add_function(wrap_pyfunction!(hyperbolic_convex_hull, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic_point, m)?)?;
    m.add_function(wrap_pyfunction!(pseudo_hyperbolic_distance, m)?)?;
    m.add_function(wrap_pyfunction!(collinearity_residual, m)?)?;
    m.add_function(wrap_pyfunction!(poincare_to_klein, m)?)?;
    m.add_function(wrap_pyfunction!(klein_to_poincare, m)?)?;
    m.add_function(wrap_pyfunction!(find_roots, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_run, m)?)?;
    m.add_function(wrap_pyfunction!(valence, m)?)?;
    m.add_function(wrap_pyfunction!(separation_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(density_family, m)?)?;
    m.add_function(wrap_pyfunction!(run_suites, m)?)?;
    Ok(())
}
