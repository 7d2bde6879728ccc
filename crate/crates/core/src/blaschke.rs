//! Finite Blaschke products `B(z) = gamma * prod (z_k - z) / (1 - conj(z_k) z)`.
//!
//! A product is stored by its unimodular constant and its zeros; the
//! numerator and denominator polynomials are only expanded when a root
//! finder needs them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{unimodular, DiscAutomorphism};
use crate::polyroots::{find_roots, mul_linear, Polynomial};

/// Largest zero modulus accepted by [`FiniteBlaschkeProduct::new`].
pub const MAX_ZERO_MODULUS: f64 = 1.0 - 1e-12;
/// Points within this distance of the unit circle are neither inside nor
/// outside when critical points are classified.
pub const CIRCLE_BAND: f64 = 1e-9;
const POLE_TOL: f64 = 1e-14;
const ZERO_TOL: f64 = 1e-12;
const DISTINCT_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteBlaschkeProduct {
    gamma: Complex64,
    zeros: Vec<Complex64>,
}

/// Zeros of `B'` split by the unit circle. Multiplicities are carried
/// alongside each location.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalSet {
    pub interior: Vec<(Complex64, usize)>,
    pub exterior: Vec<(Complex64, usize)>,
}

impl CriticalSet {
    pub fn interior_count(&self) -> usize {
        self.interior.iter().map(|(_, m)| m).sum()
    }

    pub fn exterior_count(&self) -> usize {
        self.exterior.iter().map(|(_, m)| m).sum()
    }

    /// Interior points repeated by multiplicity.
    pub fn interior_points(&self) -> Vec<Complex64> {
        self.interior
            .iter()
            .flat_map(|&(z, m)| std::iter::repeat_n(z, m))
            .collect()
    }
}

impl FiniteBlaschkeProduct {
    pub fn new(gamma: Complex64, zeros: Vec<Complex64>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::EmptyZeroSet);
        }
        if let Some(&z) = zeros.iter().find(|z| !(z.norm() < MAX_ZERO_MODULUS)) {
            return Err(Error::OutsideDisc(z));
        }
        Ok(Self {
            gamma: unimodular(gamma)?,
            zeros,
        })
    }

    /// Products built by conjugation may carry zeros much closer to the
    /// circle than user input is allowed to; only `|z| < 1` is required.
    pub(crate) fn new_derived(gamma: Complex64, zeros: Vec<Complex64>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::EmptyZeroSet);
        }
        if let Some(&z) = zeros.iter().find(|z| !(z.norm() < 1.0)) {
            return Err(Error::OutsideDisc(z));
        }
        Ok(Self {
            gamma: unimodular(gamma)?,
            zeros,
        })
    }

    /// `B(z) = z^n`: `n` zeros at the origin with `gamma = (-1)^n`.
    pub fn monomial(n: usize) -> Result<Self> {
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        Self::new(Complex64::new(sign, 0.0), vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn from_automorphism(t: &DiscAutomorphism) -> Self {
        Self {
            gamma: t.gamma(),
            zeros: vec![t.a()],
        }
    }

    /// `prod_i T_{a_i}^{m_i}` with `gamma = 1`.
    pub fn from_factors(factors: &[(Complex64, usize)]) -> Result<Self> {
        let zeros = factors
            .iter()
            .flat_map(|&(a, m)| std::iter::repeat_n(a, m))
            .collect();
        Self::new(Complex64::new(1.0, 0.0), zeros)
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn order(&self) -> usize {
        self.zeros.len()
    }

    pub fn max_zero_modulus(&self) -> f64 {
        self.zeros.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Equality as functions: same order and values within `tol` on a
    /// fixed set of interior points. Derived `PartialEq` compares the
    /// stored representation instead.
    pub fn same_function(&self, other: &Self, tol: f64) -> bool {
        if self.order() != other.order() {
            return false;
        }
        (0..16).all(|j| {
            let r = [0.0, 0.3, 0.6, 0.85][j % 4];
            let z = Complex64::from_polar(r, 0.7 + j as f64 * 0.41);
            (self.eval_unchecked(z) - other.eval_unchecked(z)).norm() <= tol
        })
    }

    /// Zeros grouped with their multiplicities, in order of first appearance.
    pub fn distinct_zeros(&self) -> Vec<(Complex64, usize)> {
        let mut out: Vec<(Complex64, usize)> = Vec::new();
        for &z in &self.zeros {
            match out
                .iter_mut()
                .find(|(w, _)| (*w - z).norm() <= DISTINCT_ZERO_TOL)
            {
                Some(entry) => entry.1 += 1,
                None => out.push((z, 1)),
            }
        }
        out
    }

    fn check_poles(&self, z: Complex64) -> Result<()> {
        for zk in &self.zeros {
            let d = (1.0 - zk.conj() * z).norm();
            if d < POLE_TOL {
                return Err(Error::PoleProximity { z, distance: d });
            }
        }
        Ok(())
    }

    /// Value at `z`. Defined everywhere except near the reflected poles
    /// `1/conj(z_k)`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_poles(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().fold(self.gamma, |acc, &zk| {
            acc * (zk - z) / (1.0 - zk.conj() * z)
        })
    }

    /// `P(z) = gamma prod (z_k - z)` and `Q(z) = prod (1 - conj(z_k) z)`
    /// together with their derivatives, accumulated by the product rule.
    fn numerator_denominator(&self, z: Complex64) -> [Complex64; 4] {
        let mut p = self.gamma;
        let mut dp = Complex64::new(0.0, 0.0);
        let mut q = Complex64::new(1.0, 0.0);
        let mut dq = Complex64::new(0.0, 0.0);
        for &zk in &self.zeros {
            let f = zk - z;
            dp = dp * f - p;
            p *= f;
            let g = 1.0 - zk.conj() * z;
            dq = dq * g - zk.conj() * q;
            q *= g;
        }
        [p, dp, q, dq]
    }

    /// `B'(z) = (P'Q - PQ') / Q^2`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.check_poles(z)?;
        let [p, dp, q, dq] = self.numerator_denominator(z);
        Ok((dp * q - p * dq) / (q * q))
    }

    /// `B'/B = sum (1 - |z_k|^2) / ((1 - conj(z_k) z)(z - z_k))`.
    pub fn log_derivative(&self, z: Complex64) -> Result<Complex64> {
        self.check_poles(z)?;
        let mut sum = Complex64::new(0.0, 0.0);
        for &zk in &self.zeros {
            let d = (z - zk).norm();
            if d <= ZERO_TOL {
                return Err(Error::ZeroProximity { z, distance: d });
            }
            sum += (1.0 - zk.norm_sqr()) / ((1.0 - zk.conj() * z) * (z - zk));
        }
        Ok(sum)
    }

    /// `|B'(e^{i theta})| = sum (1 - |z_k|^2) / |e^{i theta} - z_k|^2`.
    pub fn boundary_derivative_modulus(&self, theta: f64) -> f64 {
        let w = Complex64::from_polar(1.0, theta);
        // |w - z|^2 = 1 - 2 Re(conj(w) z) + |z|^2, exact when z = 0
        self.zeros
            .iter()
            .map(|zk| {
                let m = zk.norm_sqr();
                (1.0 - m) / (1.0 - 2.0 * (w.conj() * zk).re + m)
            })
            .sum()
    }

    /// Expanded `P(z) = gamma prod (z_k - z)`.
    pub fn numerator_poly(&self) -> Polynomial {
        let mut c = vec![self.gamma];
        for &zk in &self.zeros {
            c = mul_linear(&c, zk, Complex64::new(-1.0, 0.0));
        }
        Polynomial::new(c)
    }

    /// Expanded `Q(z) = prod (1 - conj(z_k) z)`.
    pub fn denominator_poly(&self) -> Polynomial {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &zk in &self.zeros {
            c = mul_linear(&c, Complex64::new(1.0, 0.0), -zk.conj());
        }
        Polynomial::new(c)
    }

    /// `N = P'Q - PQ'`, the numerator of `B'`, of degree at most `2n - 2`.
    pub fn derivative_numerator(&self) -> Polynomial {
        let p = self.numerator_poly();
        let q = self.denominator_poly();
        p.derivative().mul(&q).sub(&p.mul(&q.derivative()))
    }

    /// `N` with the factors `(zeta - z)^(m-1) (1 - conj(zeta) z)^(m-1)` of
    /// each distinct zero `zeta` of multiplicity `m` divided out, up to a
    /// constant:
    ///
    /// `sum_i m_i (1 - |zeta_i|^2) prod_{j != i} (zeta_j - z)(1 - conj(zeta_j) z)`.
    ///
    /// Built from the logarithmic derivative, so no cancellation occurs.
    pub fn reduced_derivative_numerator(&self) -> Polynomial {
        let distinct = self.distinct_zeros();
        let zero = Complex64::new(0.0, 0.0);
        let mut total = vec![zero];
        let mut magnitude = vec![0.0f64];
        for (i, &(zi, mi)) in distinct.iter().enumerate() {
            let mut term = vec![Complex64::new(mi as f64 * (1.0 - zi.norm_sqr()), 0.0)];
            for (j, &(zj, _)) in distinct.iter().enumerate() {
                if j != i {
                    term = mul_linear(&term, zj, Complex64::new(-1.0, 0.0));
                    term = mul_linear(&term, Complex64::new(1.0, 0.0), -zj.conj());
                }
            }
            if total.len() < term.len() {
                total.resize(term.len(), zero);
                magnitude.resize(term.len(), 0.0);
            }
            for ((t, m), c) in total.iter_mut().zip(magnitude.iter_mut()).zip(term) {
                *t += c;
                *m += c.norm();
            }
        }
        // coefficients that cancel down to rounding level are exact zeros
        for (t, m) in total.iter_mut().zip(magnitude) {
            if t.norm() <= 16.0 * f64::EPSILON * m {
                *t = zero;
            }
        }
        Polynomial::new(total)
    }

    /// All zeros of the numerator of `B'`, split at the unit circle.
    ///
    /// A zero of `B` with multiplicity `m` contributes itself `m - 1` times
    /// inside and its reflection `m - 1` times outside; the remaining points
    /// come from the root finder. Interior multiplicities sum to `n - 1`.
    pub fn critical_points(&self) -> Result<CriticalSet> {
        let mut interior = Vec::new();
        let mut exterior = Vec::new();
        let mut push = |z: Complex64, m: usize| -> Result<()> {
            let r = z.norm();
            if (r - 1.0).abs() < CIRCLE_BAND {
                return Err(Error::CircleStraddle(z));
            }
            let side = if r < 1.0 {
                &mut interior
            } else {
                &mut exterior
            };
            side.push((z, m));
            Ok(())
        };
        for (z, m) in self.distinct_zeros() {
            if m > 1 {
                push(z, m - 1)?;
                if z.norm() > 0.0 {
                    push(1.0 / z.conj(), m - 1)?;
                }
            }
        }
        let distinct = self.distinct_zeros();
        let reduced = self.reduced_derivative_numerator();
        if reduced.degree() > 0 {
            for root in find_roots(&reduced)?.roots {
                let z = if root.multiplicity == 1 {
                    polish_critical_point(&distinct, root.location)
                } else {
                    root.location
                };
                push(z, root.multiplicity)?;
            }
        }
        Ok(CriticalSet { interior, exterior })
    }

    /// `gamma prod (z_k - w) - c prod (1 - conj(z_k) w)`.
    pub fn fiber_poly(&self, c: Complex64) -> Polynomial {
        self.numerator_poly().sub(&self.denominator_poly().scale(c))
    }

    /// The `n` solutions of `B(w) = c`, repeated by multiplicity.
    pub fn fiber_solve(&self, c: Complex64) -> Result<Vec<Complex64>> {
        if !(c.norm() < 1.0) {
            return Err(Error::OutsideDisc(c));
        }
        let roots = find_roots(&self.fiber_poly(c))?;
        Ok(roots
            .roots
            .iter()
            .flat_map(|r| {
                let w = if r.multiplicity == 1 {
                    self.polish_fiber_point(r.location, c)
                } else {
                    r.location
                };
                std::iter::repeat_n(w, r.multiplicity)
            })
            .collect())
    }

    /// Newton on `B(w) - c` in product form; keeps the best iterate.
    fn polish_fiber_point(&self, w0: Complex64, c: Complex64) -> Complex64 {
        let mut best = w0;
        let mut best_res = (self.eval_unchecked(w0) - c).norm();
        let mut w = w0;
        for _ in 0..4 {
            let Ok(d) = self.derivative(w) else { break };
            let step = (self.eval_unchecked(w) - c) / d;
            if !step.is_finite() {
                break;
            }
            w -= step;
            let res = (self.eval_unchecked(w) - c).norm();
            if res < best_res && w.norm() < 1.0 {
                best = w;
                best_res = res;
            } else {
                break;
            }
        }
        best
    }

    /// `outer ∘ B ∘ inner` as a Blaschke product of the same order.
    ///
    /// The zeros are `inner^{-1}` of the fiber of `B` over `outer^{-1}(0)`;
    /// the constant is recovered from the value at a probe point.
    pub fn conjugate_by(
        &self,
        inner: &DiscAutomorphism,
        outer: &DiscAutomorphism,
    ) -> Result<FiniteBlaschkeProduct> {
        let fiber = self.fiber_solve(outer.a())?;
        self.conjugate_from_fiber(inner, outer, fiber)
    }

    pub(crate) fn conjugate_from_fiber(
        &self,
        inner: &DiscAutomorphism,
        outer: &DiscAutomorphism,
        fiber: Vec<Complex64>,
    ) -> Result<FiniteBlaschkeProduct> {
        let back = inner.inverse();
        let zeros: Vec<Complex64> = fiber
            .into_iter()
            .map(|w| {
                let z = back.eval(w)?;
                // rounding may push a zero that hugs the circle onto it
                let r = z.norm();
                Ok(if r >= 1.0 {
                    z * ((1.0 - f64::EPSILON) / r)
                } else {
                    z
                })
            })
            .collect::<Result<_>>()?;
        let target = |z: Complex64| -> Result<Complex64> { outer.eval(self.eval(inner.eval(z)?)?) };
        let probes = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.37, 0.11),
            Complex64::new(-0.23, 0.41),
            Complex64::new(0.05, -0.52),
        ];
        let unit = FiniteBlaschkeProduct {
            gamma: Complex64::new(1.0, 0.0),
            zeros,
        };
        for p in probes {
            let value = target(p)?;
            let base = unit.eval_unchecked(p);
            if value.norm() > 1e-8 && base.norm() > 1e-8 {
                return FiniteBlaschkeProduct::new_derived(value / base, unit.zeros);
            }
        }
        Err(Error::InvalidParameter(
            "no probe point avoids the zeros of the conjugate".into(),
        ))
    }

    /// `1 - |B(z)|^2`, summed factor by factor so nothing cancels:
    /// `sum_k (1 - |b_k|^2) prod_{j<k} |b_j|^2`.
    pub fn one_minus_modulus_sq(&self, z: Complex64) -> f64 {
        let s = 1.0 - z.norm_sqr();
        let mut prefix = 1.0;
        let mut total = 0.0;
        for &zk in &self.zeros {
            let den = (1.0 - zk.conj() * z).norm_sqr();
            let one_minus_bk = (1.0 - zk.norm_sqr()) * s / den;
            total += one_minus_bk * prefix;
            prefix *= (zk - z).norm_sqr() / den;
        }
        total
    }

    /// Same sum with the common factor `1 - |z|^2` removed.
    pub(crate) fn schwarz_pick_denominator(&self, z: Complex64) -> f64 {
        let mut prefix = 1.0;
        let mut total = 0.0;
        for &zk in &self.zeros {
            let den = (1.0 - zk.conj() * z).norm_sqr();
            total += (1.0 - zk.norm_sqr()) / den * prefix;
            prefix *= (zk - z).norm_sqr() / den;
        }
        total
    }
}

/// `B'/B = sum m (1 - |zeta|^2) / ((z - zeta)(1 - conj(zeta) z))` and its
/// derivative.
fn log_derivative_terms(distinct: &[(Complex64, usize)], z: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut slope = Complex64::new(0.0, 0.0);
    for &(zeta, m) in distinct {
        let weight = m as f64 * (1.0 - zeta.norm_sqr());
        let den = (z - zeta) * (1.0 - zeta.conj() * z);
        value += weight / den;
        slope -= weight * (1.0 - 2.0 * zeta.conj() * z + zeta.norm_sqr()) / (den * den);
    }
    (value, slope)
}

/// Newton on the partial-fraction form of `B'/B`, which is far better
/// conditioned than the expanded numerator when zeros cluster. Steps are
/// kept only while `|B'/B|` shrinks.
fn polish_critical_point(distinct: &[(Complex64, usize)], z0: Complex64) -> Complex64 {
    let (mut value, mut slope) = log_derivative_terms(distinct, z0);
    let mut z = z0;
    for _ in 0..4 {
        let next = z - value / slope;
        if !next.is_finite() {
            break;
        }
        let (v, s) = log_derivative_terms(distinct, next);
        if !(v.norm() < value.norm()) {
            break;
        }
        z = next;
        value = v;
        slope = s;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pair() -> FiniteBlaschkeProduct {
        FiniteBlaschkeProduct::new(c(1.0, 0.0), vec![c(0.5, 0.0), c(-0.5, 0.0)]).unwrap()
    }

    fn order4() -> FiniteBlaschkeProduct {
        FiniteBlaschkeProduct::new(
            Complex64::from_polar(1.0, 0.7),
            vec![c(0.3, 0.2), c(-0.6, 0.1), c(0.1, -0.8), c(0.45, 0.45)],
        )
        .unwrap()
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(
            FiniteBlaschkeProduct::new(c(1.0, 0.0), vec![]),
            Err(Error::EmptyZeroSet)
        );
        assert!(FiniteBlaschkeProduct::new(c(1.0, 0.0), vec![c(1.0, 0.0)]).is_err());
        assert!(FiniteBlaschkeProduct::new(c(1.0, 0.0), vec![c(1.0 - 1e-13, 0.0)]).is_err());
        assert!(FiniteBlaschkeProduct::new(c(0.0, 0.0), vec![c(0.1, 0.0)]).is_err());
    }

    #[test]
    fn monomial_is_power() {
        let b = FiniteBlaschkeProduct::monomial(2).unwrap();
        assert_eq!(b.eval(c(0.0, 0.5)).unwrap(), c(-0.25, 0.0));
        let b3 = FiniteBlaschkeProduct::monomial(3).unwrap();
        let z = c(0.3, -0.4);
        assert!((b3.eval(z).unwrap() - z * z * z).norm() < 1e-16);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(pair().eval(c(0.0, 0.0)).unwrap(), c(-0.25, 0.0));
        let b = order4();
        for &z in b.zeros() {
            assert_eq!(b.eval(z).unwrap().norm(), 0.0);
        }
        assert!(matches!(
            pair().eval(c(2.0, 0.0)),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn derivative_examples() {
        let b = FiniteBlaschkeProduct::monomial(2).unwrap();
        assert!((b.derivative(c(1.0, 0.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        // one-sided radial difference: B(1) - B(1-h) = 2h - h^2
        let h = 1e-6;
        let fd = (b.eval(c(1.0, 0.0)).unwrap() - b.eval(c(1.0 - h, 0.0)).unwrap()) / h;
        assert!((fd - c(2.0, 0.0)).norm() < 2e-6);

        let t = FiniteBlaschkeProduct::new(c(0.0, 1.0), vec![c(0.3, -0.5)]).unwrap();
        for k in 0..32 {
            let z = Complex64::from_polar(0.999 * (k % 4) as f64 / 3.0, k as f64);
            assert!(t.derivative(z).unwrap().norm() > 0.1);
        }
    }

    #[test]
    fn derivative_against_central_differences() {
        let b = order4();
        let h = 1e-6;
        for k in 0..10 {
            let z = Complex64::from_polar(0.85 * ((k as f64 + 0.5) / 10.0).sqrt(), 2.4 * k as f64);
            let fd = (b.eval(z + h).unwrap() - b.eval(z - h).unwrap()) / (2.0 * h);
            let d = b.derivative(z).unwrap();
            assert!((fd - d).norm() / d.norm() < 1e-6, "{z}");
        }
    }

    #[test]
    fn log_derivative_examples() {
        let b1 = FiniteBlaschkeProduct::monomial(1).unwrap();
        assert!((b1.log_derivative(c(0.5, 0.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        let b2 = FiniteBlaschkeProduct::monomial(2).unwrap();
        assert!((b2.log_derivative(c(0.5, 0.0)).unwrap() - c(4.0, 0.0)).norm() < 1e-15);

        let b = pair();
        let z = c(0.0, 0.2);
        let ratio = b.derivative(z).unwrap() / b.eval(z).unwrap();
        let ld = b.log_derivative(z).unwrap();
        assert!((ratio - ld).norm() <= 1e-10 * ld.norm());
        assert!(matches!(
            b.log_derivative(c(0.5, 0.0)),
            Err(Error::ZeroProximity { .. })
        ));
    }

    #[test]
    fn boundary_derivative_examples() {
        for n in 1..6 {
            let b = FiniteBlaschkeProduct::monomial(n).unwrap();
            assert_eq!(b.boundary_derivative_modulus(1.234), n as f64);
        }
        let b = FiniteBlaschkeProduct::new(c(1.0, 0.0), vec![c(0.5, 0.0)]).unwrap();
        assert_abs_diff_eq!(b.boundary_derivative_modulus(0.0), 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            b.boundary_derivative_modulus(std::f64::consts::PI),
            1.0 / 3.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            b.derivative(c(1.0, 0.0)).unwrap().norm(),
            3.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn reduced_numerator_divides_full_numerator() {
        let b = FiniteBlaschkeProduct::new(
            c(0.0, 1.0),
            vec![c(0.3, 0.1), c(0.3, 0.1), c(-0.2, 0.5), c(0.0, -0.6)],
        )
        .unwrap();
        let full = b.derivative_numerator();
        let reduced = b.reduced_derivative_numerator();
        let z0 = c(0.3, 0.1);
        let extra = Polynomial::new(vec![z0, c(-1.0, 0.0)])
            .mul(&Polynomial::new(vec![c(1.0, 0.0), -z0.conj()]));
        let rebuilt = reduced.mul(&extra);
        assert_eq!(full.degree(), rebuilt.degree());
        let ratio = full.leading() / rebuilt.leading();
        for (a, r) in full.coeffs().iter().zip(rebuilt.coeffs()) {
            assert!((a - r * ratio).norm() < 1e-12, "{a} vs {}", r * ratio);
        }
    }

    #[test]
    fn critical_points_of_monomials() {
        for n in 1..7 {
            let cs = FiniteBlaschkeProduct::monomial(n)
                .unwrap()
                .critical_points()
                .unwrap();
            if n == 1 {
                assert!(cs.interior.is_empty());
            } else {
                assert_eq!(cs.interior, vec![(c(0.0, 0.0), n - 1)]);
            }
            assert!(cs.exterior.is_empty());
        }
    }

    #[test]
    fn critical_points_of_symmetric_pair() {
        let cs = pair().critical_points().unwrap();
        assert_eq!(cs.interior.len(), 1);
        assert_eq!(cs.interior[0].1, 1);
        assert!(cs.interior[0].0.norm() < 1e-15);
    }

    #[test]
    fn critical_points_of_two_factor_family() {
        let (a, b) = (c(0.0, 0.4), c(0.6, 0.0));
        let prod = FiniteBlaschkeProduct::from_factors(&[(a, 3), (b, 2)]).unwrap();
        let cs = prod.critical_points().unwrap();
        assert_eq!(cs.interior_count(), 4);
        assert!(cs.interior.contains(&(a, 2)));
        assert!(cs.interior.contains(&(b, 1)));
        let extra: Vec<_> = cs
            .interior
            .iter()
            .filter(|(z, _)| (*z - a).norm() > 1e-7 && (*z - b).norm() > 1e-7)
            .collect();
        assert_eq!(extra.len(), 1);
        assert!(prod.derivative(extra[0].0).unwrap().norm() < 1e-12);
    }

    #[test]
    fn critical_points_pair_under_reflection() {
        let b = order4();
        let cs = b.critical_points().unwrap();
        assert_eq!(cs.interior_count(), 3);
        assert_eq!(cs.exterior_count(), 3);
        for &(z, _) in &cs.interior {
            let r = 1.0 / z.conj();
            assert!(cs.exterior.iter().any(|(w, _)| (*w - r).norm() < 1e-8));
            assert!(b.derivative(z).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn same_function_ignores_zero_order() {
        let p = pair();
        let q = FiniteBlaschkeProduct::new(c(1.0, 0.0), vec![c(-0.5, 0.0), c(0.5, 0.0)]).unwrap();
        assert_ne!(p, q);
        assert!(p.same_function(&q, 1e-14));
        let r = FiniteBlaschkeProduct::new(c(-1.0, 0.0), vec![c(-0.5, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(!p.same_function(&r, 1e-6));
        assert!(!p.same_function(&FiniteBlaschkeProduct::monomial(3).unwrap(), 1e-6));
    }

    #[test]
    fn fiber_examples() {
        let b = FiniteBlaschkeProduct::monomial(2).unwrap();
        let mut f = b.fiber_solve(c(0.25, 0.0)).unwrap();
        f.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        assert!((f[0] - c(-0.5, 0.0)).norm() < 1e-14);
        assert!((f[1] - c(0.5, 0.0)).norm() < 1e-14);

        let t = DiscAutomorphism::involution(c(0.2, -0.3)).unwrap();
        let bt = FiniteBlaschkeProduct::from_automorphism(&t);
        let w = c(0.1, 0.6);
        let f = bt.fiber_solve(w).unwrap();
        assert_eq!(f.len(), 1);
        assert!((f[0] - t.eval(w).unwrap()).norm() < 1e-14);

        let b3 =
            FiniteBlaschkeProduct::new(c(0.6, 0.8), vec![c(0.1, 0.2), c(-0.7, 0.0), c(0.3, -0.6)])
                .unwrap();
        let target = c(-0.35, 0.22);
        let f = b3.fiber_solve(target).unwrap();
        assert_eq!(f.len(), 3);
        for w in f {
            assert!(w.norm() < 1.0);
            assert!((b3.eval(w).unwrap() - target).norm() < 1e-8);
        }
    }

    #[test]
    fn conjugate_by_identity_is_unchanged() {
        let b = order4();
        let id = DiscAutomorphism::identity();
        let f = b.conjugate_by(&id, &id).unwrap();
        assert!((f.gamma() - b.gamma()).norm() < 1e-12);
        for &z in b.zeros() {
            assert!(f.zeros().iter().any(|w| (w - z).norm() < 1e-12));
        }
    }

    #[test]
    fn conjugate_by_inner_automorphism_transports_zeros() {
        let b = order4();
        let (a, g) = (c(0.2, 0.35), Complex64::from_polar(1.0, -1.1));
        let inner = DiscAutomorphism::new(a, g).unwrap();
        let f = b
            .conjugate_by(&inner, &DiscAutomorphism::identity())
            .unwrap();
        let ta = DiscAutomorphism::involution(a).unwrap();
        for &z in b.zeros() {
            let moved = ta.eval(g.conj() * z).unwrap();
            assert!(f.zeros().iter().any(|w| (w - moved).norm() < 1e-10));
        }
        for k in 0..50 {
            let z = Complex64::from_polar(0.95 * ((k as f64 + 0.5) / 50.0).sqrt(), 2.4 * k as f64);
            let nested = b.eval(inner.eval(z).unwrap()).unwrap();
            assert!((f.eval(z).unwrap() - nested).norm() < 1e-10);
        }
    }

    #[test]
    fn conjugate_renormalized_has_zero_at_origin() {
        let b = FiniteBlaschkeProduct::monomial(2).unwrap();
        let a = c(0.9, 0.0);
        let inner = DiscAutomorphism::new(a, c(1.0, 0.0)).unwrap();
        let outer = DiscAutomorphism::new(b.eval(a).unwrap(), c(1.0, 0.0)).unwrap();
        let f = b.conjugate_by(&inner, &outer).unwrap();
        assert!(f.eval(c(0.0, 0.0)).unwrap().norm() < 1e-10);
    }

    #[test]
    fn one_minus_modulus_matches_direct() {
        let b = order4();
        for z in [c(0.1, 0.2), c(-0.5, 0.3), c(0.0, -0.7)] {
            let direct = 1.0 - b.eval(z).unwrap().norm_sqr();
            assert!((b.one_minus_modulus_sq(z) - direct).abs() < 1e-14);
        }
    }
}
