//! Numerical experiments on finite Blaschke products.
//!
//! The central object is the renormalized conjugate
//! `f = T_{B(a gamma), conj(gamma)} ∘ B ∘ T_{a, gamma}`, which fixes the
//! origin and tends to the rotation by `B'(gamma0) / |B'(gamma0)|` whenever
//! `a gamma -> gamma0` on the circle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::FiniteBlaschkeProduct;
use crate::error::{Error, Result};
use crate::hyperbolic::{collinearity_residual, hyperbolic_convex_hull};
use crate::moebius::{unimodular, DiscAutomorphism};

/// Default number of radii in the sup-norm grid; angles are four times this.
pub const DEFAULT_GRID: usize = 24;
pub const DEFAULT_VALENCE_NODES: usize = 4096;
const VALENCE_RESIDUAL: f64 = 0.05;
const CONTOUR_GAP: f64 = 1e-6;
const EXTRA_POINT_TOL: f64 = 1e-7;
const GOLDEN_FRACTION: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceMode {
    /// `a_k = (1 - rate^k) gamma0`, `gamma_k = 1`.
    Radial,
    /// `a_k = (1 - rate^k) gamma0 e^{-i rate^k}`, `gamma_k = e^{i rate^k}`.
    Spiral,
    /// `a_k = (1 - rate^k) gamma0 gamma_k`, `gamma_k = (-1)^k`.
    Alternating,
}

impl std::str::FromStr for SequenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "radial" => Ok(Self::Radial),
            "spiral" => Ok(Self::Spiral),
            "alternating" => Ok(Self::Alternating),
            other => Err(Error::InvalidParameter(format!(
                "unknown sequence mode {other:?}"
            ))),
        }
    }
}

/// Closed-form sequence `(a_k, gamma_k)`, `k = 1..=count`, with
/// `a_k gamma_k -> gamma0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub gamma0: Complex64,
    pub mode: SequenceMode,
    pub rate: f64,
    pub count: usize,
}

impl SequenceSpec {
    pub fn new(gamma0: Complex64, mode: SequenceMode, rate: f64, count: usize) -> Result<Self> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rate {rate} not in (0, 1)"
            )));
        }
        if count == 0 {
            return Err(Error::InvalidParameter("count must be positive".into()));
        }
        Ok(Self {
            gamma0: unimodular(gamma0)?,
            mode,
            rate,
            count,
        })
    }

    pub fn term(&self, k: usize) -> (Complex64, Complex64) {
        let eps = self.rate.powi(k as i32);
        let radius = 1.0 - eps;
        match self.mode {
            SequenceMode::Radial => (self.gamma0 * radius, Complex64::new(1.0, 0.0)),
            SequenceMode::Spiral => (
                self.gamma0 * Complex64::from_polar(radius, -eps),
                Complex64::from_polar(1.0, eps),
            ),
            SequenceMode::Alternating => {
                let g = Complex64::new(if k.is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0);
                (self.gamma0 * g * radius, g)
            }
        }
    }

    pub fn terms(&self) -> Vec<(usize, Complex64, Complex64)> {
        (1..=self.count)
            .map(|k| {
                let (a, g) = self.term(k);
                (k, a, g)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub k: usize,
    pub a: Complex64,
    pub gamma: Complex64,
    pub sup_deviation: f64,
    pub rotation_constant: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValenceReport {
    pub w: Complex64,
    pub radius: f64,
    pub winding_integral: Complex64,
    pub valence: usize,
    pub residual: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationEstimate {
    pub m: f64,
    /// `f64::INFINITY` when no fiber has two points in the annulus.
    pub delta: f64,
    pub witness_pair: Option<(Complex64, Complex64)>,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleResult {
    /// `sup |g_k(z) - z|` on `|z| <= 0.5` at the last even `k`.
    pub even_limit_deviation: f64,
    /// `sup |g_k(z) + z|` on `|z| <= 0.5` at the last odd `k`.
    pub odd_limit_deviation: f64,
    /// `sup |g_count - g_{count-1}|` on `|z| <= 0.9`.
    pub unrenormalized_oscillation: f64,
    /// `sup |f_count(z) - z|` on `|z| <= 0.5`.
    pub renormalized_deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityPoint {
    pub m: usize,
    pub n: usize,
    pub critical_point: Complex64,
    pub collinearity_residual: f64,
    /// Whether the point lies on the geodesic segment between the two zeros.
    pub between: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HullCheck {
    pub point: Complex64,
    pub multiplicity: usize,
    pub in_hull: bool,
    /// Klein distance outside the hull; negative inside a polygon.
    pub excess: f64,
}

/// `grid` radii `r i / grid` (`i = 1..=grid`) times `4 grid` equally spaced
/// angles.
pub fn polar_grid(r: f64, grid: usize) -> Vec<Complex64> {
    let angles = 4 * grid;
    (1..=grid)
        .flat_map(|i| {
            let radius = r * i as f64 / grid as f64;
            (0..angles).map(move |j| Complex64::from_polar(radius, TAU * j as f64 / angles as f64))
        })
        .collect()
}

fn sup_norm<F: Fn(Complex64) -> Complex64>(points: &[Complex64], f: F) -> f64 {
    points.iter().map(|&z| f(z).norm()).fold(0.0, f64::max)
}

/// `B'(gamma0) / |B'(gamma0)|` from the rational derivative on the circle.
pub fn rotation_constant(b: &FiniteBlaschkeProduct, gamma0: Complex64) -> Result<Complex64> {
    let d = b.derivative(unimodular(gamma0)?)?;
    if !(d.norm() > 1e-300) {
        return Err(Error::RotationUndefined(d.norm()));
    }
    Ok(d / d.norm())
}

/// `T_{B(a gamma), conj(gamma)} ∘ B ∘ T_{a, gamma}` as an exact product.
///
/// The fiber over `B(a gamma)` always contains `a gamma` itself, which maps
/// to the origin; that point is inserted exactly.
pub fn renormalized_conjugate(
    b: &FiniteBlaschkeProduct,
    a: Complex64,
    gamma: Complex64,
) -> Result<FiniteBlaschkeProduct> {
    conjugate_with_outer_rotation(b, a, gamma, true)
}

/// Same as [`renormalized_conjugate`] with the outer rotation dropped:
/// `T_{B(a gamma)} ∘ B ∘ T_{a, gamma}`.
pub fn unrenormalized_conjugate(
    b: &FiniteBlaschkeProduct,
    a: Complex64,
    gamma: Complex64,
) -> Result<FiniteBlaschkeProduct> {
    conjugate_with_outer_rotation(b, a, gamma, false)
}

fn conjugate_with_outer_rotation(
    b: &FiniteBlaschkeProduct,
    a: Complex64,
    gamma: Complex64,
    renormalize: bool,
) -> Result<FiniteBlaschkeProduct> {
    let inner = DiscAutomorphism::new(a, gamma)?;
    let base = a * inner.gamma();
    let c = b.eval(base)?;
    let outer_gamma = if renormalize {
        inner.gamma().conj()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let outer = DiscAutomorphism::new(c, outer_gamma)?;
    let mut fiber = b.fiber_solve(c)?;
    let snapped = fiber
        .iter()
        .enumerate()
        .min_by(|x, y| (*x.1 - base).norm().total_cmp(&(*y.1 - base).norm()))
        .map(|(i, _)| i)
        .expect("fiber of a nonempty product is nonempty");
    fiber[snapped] = base;
    let probed = b.conjugate_from_fiber(&inner, &outer, fiber)?;
    let mut zeros = probed.zeros().to_vec();
    zeros[snapped] = Complex64::new(0.0, 0.0);

    // The probe value loses relative accuracy like 1/(1 - |a|) because the
    // outer map divides two small quantities. When the origin is a simple
    // zero, f'(0) = gamma_out gamma_in (1 - |a|^2) B'(a gamma) / (1 - |c|^2)
    // fixes the constant without cancellation.
    let others: Complex64 = zeros
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != snapped)
        .map(|(_, z)| *z)
        .product::<Complex64>()
        * -1.0;
    let slope = outer.gamma() * inner.gamma() * (1.0 - a.norm_sqr()) * b.derivative(base)?
        / b.one_minus_modulus_sq(base);
    let gamma = if others.norm() > 1e-8 && slope.norm() > 1e-8 {
        slope / others
    } else {
        probed.gamma()
    };
    FiniteBlaschkeProduct::new_derived(gamma / gamma.norm(), zeros)
}

/// `f'(0)` of the renormalized conjugate and
/// `(1 - |a gamma|^2) / (1 - |B(a gamma)|^2) B'(a gamma)`.
///
/// The left side is differentiated from a product form whose constant comes
/// from a probe value, so it does not reuse the right-hand formula.
pub fn derivative_at_zero_identity(
    b: &FiniteBlaschkeProduct,
    a: Complex64,
    gamma: Complex64,
) -> Result<(Complex64, Complex64)> {
    let inner = DiscAutomorphism::new(a, gamma)?;
    let c = b.eval(a * inner.gamma())?;
    let outer = DiscAutomorphism::new(c, inner.gamma().conj())?;
    let f = b.conjugate_by(&inner, &outer)?;
    let lhs = f.derivative(Complex64::new(0.0, 0.0))?;
    let base = a * unimodular(gamma)?;
    let rhs = (1.0 - base.norm_sqr()) / b.one_minus_modulus_sq(base) * b.derivative(base)?;
    Ok((lhs, rhs))
}

/// Sup-norm distance of each renormalized conjugate from the limiting
/// rotation, over the polar grid of radius `r`.
pub fn convergence_experiment(
    b: &FiniteBlaschkeProduct,
    spec: &SequenceSpec,
    r: f64,
    grid: usize,
) -> Result<Vec<ConvergenceRecord>> {
    let terms: Vec<(Complex64, Complex64)> =
        spec.terms().into_iter().map(|(_, a, g)| (a, g)).collect();
    convergence_from_terms(b, &terms, spec.gamma0, r, grid)
}

/// [`convergence_experiment`] for an explicit list of `(a_k, gamma_k)`;
/// records are numbered from 1.
pub fn convergence_from_terms(
    b: &FiniteBlaschkeProduct,
    terms: &[(Complex64, Complex64)],
    gamma0: Complex64,
    r: f64,
    grid: usize,
) -> Result<Vec<ConvergenceRecord>> {
    if !(r > 0.0 && r <= 0.95) {
        return Err(Error::InvalidParameter(format!(
            "grid radius {r} not in (0, 0.95]"
        )));
    }
    if grid == 0 {
        return Err(Error::InvalidParameter("grid must be positive".into()));
    }
    let rot = rotation_constant(b, gamma0)?;
    let points = polar_grid(r, grid);
    terms
        .iter()
        .enumerate()
        .map(|(i, &(a, gamma))| {
            let f = renormalized_conjugate(b, a, gamma)?;
            let sup_deviation = sup_norm(&points, |z| f.eval_unchecked(z) - rot * z);
            Ok(ConvergenceRecord {
                k: i + 1,
                a,
                gamma: unimodular(gamma)?,
                sup_deviation,
                rotation_constant: rot,
            })
        })
        .collect()
}

/// `B(z) = z^2`, `gamma_k = (-1)^k`, `a_k = (-1)^k (1 - 2^-k)` so that
/// `a_k gamma_k -> 1`.
pub fn counterexample_run(count: usize) -> Result<CounterexampleResult> {
    if count < 6 {
        return Err(Error::InvalidParameter(format!("count {count} < 6")));
    }
    let b = FiniteBlaschkeProduct::monomial(2)?;
    let spec = SequenceSpec::new(
        Complex64::new(1.0, 0.0),
        SequenceMode::Alternating,
        0.5,
        count,
    )?;
    let inner_grid = polar_grid(0.5, DEFAULT_GRID);
    let outer_grid = polar_grid(0.9, DEFAULT_GRID);

    let unrenormalized = |k: usize| {
        let (a, g) = spec.term(k);
        unrenormalized_conjugate(&b, a, g)
    };
    let last_even = if count.is_multiple_of(2) {
        count
    } else {
        count - 1
    };
    let last_odd = if count % 2 == 1 { count } else { count - 1 };

    let even = unrenormalized(last_even)?;
    let odd = unrenormalized(last_odd)?;
    let even_limit_deviation = sup_norm(&inner_grid, |z| even.eval_unchecked(z) - z);
    let odd_limit_deviation = sup_norm(&inner_grid, |z| odd.eval_unchecked(z) + z);

    let current = unrenormalized(count)?;
    let previous = unrenormalized(count - 1)?;
    let unrenormalized_oscillation = sup_norm(&outer_grid, |z| {
        current.eval_unchecked(z) - previous.eval_unchecked(z)
    });

    let (a, g) = spec.term(count);
    let f = renormalized_conjugate(&b, a, g)?;
    let renormalized_deviation = sup_norm(&inner_grid, |z| f.eval_unchecked(z) - z);

    Ok(CounterexampleResult {
        even_limit_deviation,
        odd_limit_deviation,
        unrenormalized_oscillation,
        renormalized_deviation,
    })
}

/// `(1 - |z|^2) |B'(z)| / (1 - |B(z)|^2)`.
///
/// The factor `1 - |z|^2` is cancelled analytically against the
/// factor-by-factor expansion of `1 - |B(z)|^2`, so the quotient keeps full
/// relative precision near the circle.
pub fn fatou_quotient(b: &FiniteBlaschkeProduct, z: Complex64) -> Result<f64> {
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisc(z));
    }
    let value = b.eval(z)?.norm();
    if value >= 1.0 - 1e-13 {
        return Err(Error::BoundaryProximity(value));
    }
    Ok(b.derivative(z)?.norm() / b.schwarz_pick_denominator(z))
}

/// Minimum of the quotient over `angles` equally spaced points on each
/// circle `|z| = r`.
pub fn fatou_limit_scan(
    b: &FiniteBlaschkeProduct,
    radii: &[f64],
    angles: usize,
) -> Result<Vec<(f64, f64)>> {
    if angles == 0 {
        return Err(Error::InvalidParameter("angles must be positive".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("radii must increase".into()));
    }
    radii
        .iter()
        .map(|&r| {
            if !(0.0..1.0).contains(&r) {
                return Err(Error::InvalidParameter(format!("radius {r} not in [0, 1)")));
            }
            let mut min = f64::INFINITY;
            for j in 0..angles {
                let z = Complex64::from_polar(r, TAU * j as f64 / angles as f64);
                min = min.min(fatou_quotient(b, z)?);
            }
            Ok((r, min))
        })
        .collect()
}

fn winding_integral(
    b: &FiniteBlaschkeProduct,
    w: Complex64,
    radius: f64,
    samples: usize,
) -> Result<(Complex64, f64)> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut gap = f64::INFINITY;
    for j in 0..samples {
        let z = Complex64::from_polar(radius, TAU * j as f64 / samples as f64);
        let diff = b.eval(z)? - w;
        gap = gap.min(diff.norm());
        sum += b.derivative(z)? * z / diff;
    }
    Ok((sum / samples as f64, gap))
}

/// Number of solutions of `B(z) = w` inside `|z| < radius`, by the
/// trapezoidal rule for `(1 / 2 pi i) ∮ B' / (B - w)`. The node count is
/// doubled once if the result is not within 0.05 of an integer.
pub fn valence(
    b: &FiniteBlaschkeProduct,
    w: Complex64,
    radius: f64,
    samples: usize,
) -> Result<ValenceReport> {
    if !(w.norm() < 1.0) {
        return Err(Error::OutsideDisc(w));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "radius {radius} not in (0, 1)"
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let mut nodes = samples;
    for attempt in 0..2 {
        let (integral, gap) = winding_integral(b, w, radius, nodes)?;
        if gap <= CONTOUR_GAP {
            return Err(Error::ContourThroughFiber { radius, gap });
        }
        let count = integral.re.round().max(0.0);
        let residual = (integral - count).norm();
        if residual <= VALENCE_RESIDUAL || attempt == 1 {
            if residual > VALENCE_RESIDUAL {
                return Err(Error::WindingNotInteger {
                    residual,
                    samples: nodes,
                });
            }
            return Ok(ValenceReport {
                w,
                radius,
                winding_integral: integral,
                valence: count as usize,
                residual,
                samples: nodes,
            });
        }
        nodes *= 2;
    }
    unreachable!()
}

/// `0.5 (1 + max |fiber point|)`, or `1 - 1e-3` if the fiber cannot be
/// computed.
pub fn default_valence_radius(b: &FiniteBlaschkeProduct, w: Complex64) -> f64 {
    match b.fiber_solve(w) {
        Ok(fiber) => 0.5 * (1.0 + fiber.iter().map(|z| z.norm()).fold(0.0, f64::max)),
        Err(_) => 1.0 - 1e-3,
    }
}

/// Smallest distance between two distinct points of one fiber inside the
/// annulus `m <= |z| <= 1/m`, over `samples` base points on the circles
/// `|a| = m` and `|a| = (1 + m) / 2` at golden-ratio angles. Each fiber is
/// also reflected across the circle to cover the outer half of the annulus.
pub fn separation_estimate(
    b: &FiniteBlaschkeProduct,
    m: f64,
    samples: usize,
) -> Result<SeparationEstimate> {
    let max_zero = b.max_zero_modulus();
    if !(m > max_zero && m < 1.0) {
        return Err(Error::InvalidAnnulus { m, max_zero });
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let radii = [m, 0.5 * (1.0 + m)];
    let slack = 1e-12;
    let in_annulus = |z: &Complex64| {
        let r = z.norm();
        r >= m - slack && r <= 1.0 / m + slack
    };
    let mut best = f64::INFINITY;
    let mut witness = None;
    for i in 0..samples {
        let theta = TAU * (i as f64 * GOLDEN_FRACTION).fract();
        let base = Complex64::from_polar(radii[i % radii.len()], theta);
        let mut fiber = b.fiber_solve(b.eval(base)?)?;
        if let Some(nearest) = fiber
            .iter_mut()
            .min_by(|x, y| (**x - base).norm().total_cmp(&(**y - base).norm()))
        {
            *nearest = base;
        }
        let inside: Vec<Complex64> = fiber.into_iter().filter(in_annulus).collect();
        let outside: Vec<Complex64> = inside.iter().map(|z| 1.0 / z.conj()).collect();
        for set in [&inside, &outside] {
            for (p, &z1) in set.iter().enumerate() {
                for &z2 in &set[p + 1..] {
                    let d = (z1 - z2).norm();
                    if d < best {
                        best = d;
                        witness = Some((z1, z2));
                    }
                }
            }
        }
    }
    Ok(SeparationEstimate {
        m,
        delta: best,
        witness_pair: witness,
        samples,
    })
}

/// Interior critical points of `B` with their membership in the hyperbolic
/// hull of the zeros.
pub fn hull_check(b: &FiniteBlaschkeProduct, tol: f64) -> Result<Vec<HullCheck>> {
    let hull = hyperbolic_convex_hull(b.zeros())?;
    Ok(b.critical_points()?
        .interior
        .into_iter()
        .map(|(point, multiplicity)| {
            let excess = hull.excess(point);
            HullCheck {
                point,
                multiplicity,
                in_hull: excess <= tol,
                excess,
            }
        })
        .collect())
}

/// For each `(m, n)`, the critical point of `T_a^m T_b^n` other than `a`
/// and `b`, with its collinearity residual against `a` and `b`.
pub fn density_family(
    a: Complex64,
    b: Complex64,
    exponent_pairs: &[(usize, usize)],
) -> Result<Vec<DensityPoint>> {
    if (a - b).norm() <= EXTRA_POINT_TOL {
        return Err(Error::Degenerate((a - b).norm()));
    }
    let segment = hyperbolic_convex_hull(&[a, b])?;
    exponent_pairs
        .iter()
        .map(|&(m, n)| {
            if m == 0 || n == 0 {
                return Err(Error::InvalidParameter("exponents must be positive".into()));
            }
            let prod = FiniteBlaschkeProduct::from_factors(&[(a, m), (b, n)])?;
            let extra: Vec<(Complex64, usize)> = prod
                .critical_points()?
                .interior
                .into_iter()
                .filter(|(z, _)| {
                    (*z - a).norm() > EXTRA_POINT_TOL && (*z - b).norm() > EXTRA_POINT_TOL
                })
                .collect();
            let c = match extra.as_slice() {
                [(c, 1)] => *c,
                _ => {
                    return Err(Error::ExtractionAmbiguity(format!(
                        "(m, n) = ({m}, {n}) leaves {extra:?}"
                    )))
                }
            };
            Ok(DensityPoint {
                m,
                n,
                critical_point: c,
                collinearity_residual: collinearity_residual(a, b, c)?,
                between: segment.contains(c, 1e-8),
            })
        })
        .collect()
}

/// Interior critical points of `T_a^m T_b^n T_c^p`, each checked against
/// the hyperbolic hull of `{a, b, c}` with Klein tolerance `1e-8`.
pub fn density_family3(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    exponents: (usize, usize, usize),
) -> Result<Vec<HullCheck>> {
    let (m, n, p) = exponents;
    if m == 0 || n == 0 || p == 0 {
        return Err(Error::InvalidParameter("exponents must be positive".into()));
    }
    let prod = FiniteBlaschkeProduct::from_factors(&[(a, m), (b, n), (c, p)])?;
    hull_check(&prod, 1e-8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z2() -> FiniteBlaschkeProduct {
        FiniteBlaschkeProduct::monomial(2).unwrap()
    }

    #[test]
    fn sequence_terms_approach_gamma0() {
        let g0 = Complex64::from_polar(1.0, 0.8);
        for mode in [
            SequenceMode::Radial,
            SequenceMode::Spiral,
            SequenceMode::Alternating,
        ] {
            let spec = SequenceSpec::new(g0, mode, 0.5, 30).unwrap();
            for (k, a, g) in spec.terms() {
                assert!(a.norm() < 1.0);
                assert!((g.norm() - 1.0).abs() < 1e-15);
                assert!(((a * g) - g0).norm() <= 2.0 * 0.5f64.powi(k as i32));
            }
        }
        assert!(SequenceSpec::new(g0, SequenceMode::Radial, 1.0, 3).is_err());
        assert!("sideways".parse::<SequenceMode>().is_err());
    }

    #[test]
    fn renormalized_conjugate_of_automorphism_is_rotation() {
        let b = FiniteBlaschkeProduct::new(c(0.0, 1.0), vec![c(0.3, -0.4)]).unwrap();
        let f = renormalized_conjugate(&b, c(0.6, 0.2), Complex64::from_polar(1.0, 0.3)).unwrap();
        assert_eq!(f.zeros(), &[c(0.0, 0.0)]);
        let (lhs, rhs) =
            derivative_at_zero_identity(&b, c(0.6, 0.2), Complex64::from_polar(1.0, 0.3)).unwrap();
        assert_abs_diff_eq!(lhs.norm(), 1.0, epsilon = 1e-12);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn renormalized_conjugate_of_square() {
        let f = renormalized_conjugate(&z2(), c(0.9, 0.0), c(1.0, 0.0)).unwrap();
        assert!(f.eval(c(0.0, 0.0)).unwrap().norm() < 1e-10);
        let expected = 0.19 * 1.8 / 0.3439;
        let d = f.derivative(c(0.0, 0.0)).unwrap();
        assert!((d - c(expected, 0.0)).norm() < 1e-12);
        // the other zero is T_a(-a) = 2a / (1 + a^2)
        assert!(f
            .zeros()
            .iter()
            .any(|z| (z - c(1.8 / 1.81, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn derivative_identity_for_square_at_origin() {
        let (_, rhs) = derivative_at_zero_identity(&z2(), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(rhs.norm(), 0.0);
    }

    #[test]
    fn derivative_identity_random_cubic() {
        let b = FiniteBlaschkeProduct::new(
            Complex64::from_polar(1.0, 2.0),
            vec![c(0.2, 0.5), c(-0.4, -0.1), c(0.6, -0.3)],
        )
        .unwrap();
        let (lhs, rhs) =
            derivative_at_zero_identity(&b, c(0.0, 0.7), Complex64::from_polar(1.0, 1.0)).unwrap();
        assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn convergence_for_square_radial() {
        let spec = SequenceSpec::new(c(1.0, 0.0), SequenceMode::Radial, 0.5, 12).unwrap();
        let recs = convergence_experiment(&z2(), &spec, 0.5, DEFAULT_GRID).unwrap();
        assert_eq!(recs.len(), 12);
        for w in recs.windows(2) {
            assert!(w[1].sup_deviation < w[0].sup_deviation);
        }
        assert!(recs[11].sup_deviation < 1e-6);
        assert!((recs[0].rotation_constant - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn alternating_renormalized_sequence_converges() {
        let spec = SequenceSpec::new(c(1.0, 0.0), SequenceMode::Alternating, 0.5, 12).unwrap();
        let recs = convergence_experiment(&z2(), &spec, 0.5, DEFAULT_GRID).unwrap();
        assert!(recs[11].sup_deviation < 1e-6);
        assert!(recs[10].sup_deviation < 1e-6);
    }

    #[test]
    fn convergence_order_one_trend() {
        let b = FiniteBlaschkeProduct::new(c(1.0, 0.0), vec![c(0.4, 0.2)]).unwrap();
        let g0 = Complex64::from_polar(1.0, 2.5);
        let spec = SequenceSpec::new(g0, SequenceMode::Spiral, 0.5, 10).unwrap();
        let recs = convergence_experiment(&b, &spec, 0.9, 8).unwrap();
        for r in &recs {
            assert!((r.rotation_constant.norm() - 1.0).abs() < 1e-12);
        }
        assert!(recs.last().unwrap().sup_deviation < recs[0].sup_deviation);
    }

    #[test]
    fn counterexample_limits() {
        let out = counterexample_run(14).unwrap();
        assert!(out.even_limit_deviation < 1e-6, "{out:?}");
        assert!(out.odd_limit_deviation < 1e-6, "{out:?}");
        assert!(out.renormalized_deviation < 1e-6, "{out:?}");
        assert!(out.unrenormalized_oscillation > 1.0, "{out:?}");
        assert!(counterexample_run(5).is_err());
    }

    #[test]
    fn fatou_quotient_examples() {
        let t = FiniteBlaschkeProduct::new(c(0.0, 1.0), vec![c(-0.5, 0.6)]).unwrap();
        for z in [c(0.0, 0.0), c(0.9, 0.1), c(-0.3, -0.9)] {
            assert_abs_diff_eq!(fatou_quotient(&t, z).unwrap(), 1.0, epsilon = 1e-12);
        }
        assert_eq!(fatou_quotient(&z2(), c(0.0, 0.0)).unwrap(), 0.0);
        // (1 - r^2) 2r / (1 - r^4) = 2r / (1 + r^2)
        let q = fatou_quotient(&z2(), c(0.99, 0.0)).unwrap();
        assert_abs_diff_eq!(q, 1.98 / 1.9801, epsilon = 1e-14);
        assert!(fatou_quotient(&z2(), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn fatou_scan_square() {
        let radii = [0.5, 0.9, 0.99];
        let scan = fatou_limit_scan(&z2(), &radii, 64).unwrap();
        for (r, min) in scan {
            assert_abs_diff_eq!(min, 2.0 * r / (1.0 + r * r), epsilon = 1e-14);
        }
        assert!(fatou_limit_scan(&z2(), &[0.9, 0.5], 8).is_err());
    }

    #[test]
    fn valence_examples() {
        for n in 1..6 {
            let b = FiniteBlaschkeProduct::monomial(n).unwrap();
            let rep = valence(&b, c(0.1, 0.0), 0.9, DEFAULT_VALENCE_NODES).unwrap();
            assert_eq!(rep.valence, n);
            assert!(rep.residual < 0.05);
        }
        let t = FiniteBlaschkeProduct::new(c(1.0, 0.0), vec![c(0.2, 0.3)]).unwrap();
        let w = c(-0.4, 0.1);
        let r = default_valence_radius(&t, w);
        assert_eq!(valence(&t, w, r, DEFAULT_VALENCE_NODES).unwrap().valence, 1);
        // radius below the fiber point encloses nothing
        let inner = t.fiber_solve(w).unwrap()[0].norm() * 0.5;
        assert_eq!(valence(&t, w, inner, 256).unwrap().valence, 0);
    }

    #[test]
    fn valence_contour_through_fiber() {
        let b = z2();
        // fiber of 0.25 is {0.5, -0.5}; the node at angle 0 hits 0.5
        assert!(matches!(
            valence(&b, c(0.25, 0.0), 0.5, 64),
            Err(Error::ContourThroughFiber { .. })
        ));
    }

    #[test]
    fn separation_examples() {
        let est = separation_estimate(&z2(), 0.8, 32).unwrap();
        assert!(est.delta >= 1.6 - 1e-9, "{est:?}");
        let (p, q) = est.witness_pair.unwrap();
        assert!((z2().eval(p).unwrap() - z2().eval(q).unwrap()).norm() < 1e-8);

        let t = FiniteBlaschkeProduct::new(c(1.0, 0.0), vec![c(0.1, 0.1)]).unwrap();
        let est = separation_estimate(&t, 0.5, 16).unwrap();
        assert!(est.delta.is_infinite());
        assert!(est.witness_pair.is_none());

        assert!(matches!(
            separation_estimate(&t, 0.1, 4),
            Err(Error::InvalidAnnulus { .. })
        ));
    }

    #[test]
    fn density_symmetric_pair() {
        let pts = density_family(c(0.5, 0.0), c(-0.5, 0.0), &[(1, 1), (2, 1), (1, 2)]).unwrap();
        assert!(pts[0].critical_point.norm() < 1e-15);
        assert!(pts[0].collinearity_residual < 1e-15);
        let (c21, c12) = (pts[1].critical_point, pts[2].critical_point);
        assert!(c21.im.abs() < 1e-14 && c12.im.abs() < 1e-14);
        assert!((c21 + c12).norm() < 1e-12);
        assert!((c21 - c12).norm() > 1e-3);
        assert!(pts.iter().all(|p| p.between));
    }

    #[test]
    fn density_sweep_is_collinear() {
        let pairs: Vec<(usize, usize)> =
            (1..=6).flat_map(|m| (1..=6).map(move |n| (m, n))).collect();
        for p in density_family(c(0.0, 0.4), c(0.6, 0.0), &pairs).unwrap() {
            assert!(p.collinearity_residual < 1e-8, "{p:?}");
            assert!(p.between, "{p:?}");
        }
    }

    #[test]
    fn density3_examples() {
        let checks = density_family3(c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.5), (1, 1, 1)).unwrap();
        assert_eq!(checks.iter().map(|h| h.multiplicity).sum::<usize>(), 2);
        assert!(checks.iter().all(|h| h.in_hull));

        let r = 0.6;
        let rot = Complex64::from_polar(1.0, TAU / 3.0);
        let (a, b, cc) = (c(r, 0.0), c(r, 0.0) * rot, c(r, 0.0) * rot * rot);
        let pts: Vec<Complex64> = density_family3(a, b, cc, (1, 1, 1))
            .unwrap()
            .iter()
            .map(|h| h.point)
            .collect();
        for &p in &pts {
            assert!(pts.iter().any(|&q| (q - p * rot).norm() < 1e-10));
        }
    }
}
