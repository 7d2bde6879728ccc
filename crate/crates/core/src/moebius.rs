//! Automorphisms of the unit disc, `T(z) = gamma (a - z) / (1 - conj(a) z)`.
//!
//! Every automorphism is stored by its zero `a` and a unimodular factor
//! `gamma`. The identity is `(0, -1)`, and the rotation `z -> g z` is
//! `(0, -g)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible modulus for the zero of an automorphism.
pub const MAX_INTERIOR_MODULUS: f64 = 1.0 - 1e-15;

const POLE_TOL: f64 = 1e-14;

/// Divide by the modulus. Fails on zero or non-finite input.
pub fn unimodular(g: Complex64) -> Result<Complex64> {
    let r = g.norm();
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::BadUnimodular(g));
    }
    Ok(g / r)
}

/// The automorphism `T_{a,gamma}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscAutomorphism {
    a: Complex64,
    gamma: Complex64,
}

impl DiscAutomorphism {
    pub fn new(a: Complex64, gamma: Complex64) -> Result<Self> {
        if !(a.norm() < MAX_INTERIOR_MODULUS) {
            return Err(Error::OutsideDisc(a));
        }
        Ok(Self {
            a,
            gamma: unimodular(gamma)?,
        })
    }

    /// `T_a = T_{a,1}`, the involution swapping `a` and `0`.
    pub fn involution(a: Complex64) -> Result<Self> {
        Self::new(a, Complex64::new(1.0, 0.0))
    }

    /// Rotation `z -> g z`, stored as `T_{0,-g}`.
    pub fn rotation(g: Complex64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), -g)
    }

    pub fn identity() -> Self {
        Self {
            a: Complex64::new(0.0, 0.0),
            gamma: Complex64::new(-1.0, 0.0),
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.a.norm() <= tol && (self.gamma + 1.0).norm() <= tol
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + 1e-9 {
            return Err(Error::OutsideClosedDisc(z));
        }
        let den = 1.0 - self.a.conj() * z;
        if den.norm() < POLE_TOL {
            return Err(Error::PoleProximity {
                z,
                distance: den.norm(),
            });
        }
        Ok(self.gamma * (self.a - z) / den)
    }

    /// `self ∘ inner`.
    ///
    /// With `T_{a,g}` written as the matrix `[[-g, g a], [-conj(a), 1]]`
    /// the composite is the matrix product; dividing through by the
    /// lower-right entry recovers the `(a, gamma)` pair.
    pub fn compose(&self, inner: &DiscAutomorphism) -> DiscAutomorphism {
        let (s, t) = (self, inner);
        let p = s.gamma * t.gamma - s.gamma * s.a * t.a.conj();
        let r = s.a.conj() * t.gamma - t.a.conj();
        // |d| > |r| for disc automorphisms, so d never vanishes.
        let d = 1.0 - s.a.conj() * t.gamma * t.a;
        let mut a = -(r / d).conj();
        if a.norm() < 1e-15 {
            a = Complex64::new(0.0, 0.0);
        }
        let gamma = -p / d;
        DiscAutomorphism {
            a,
            gamma: gamma / gamma.norm(),
        }
    }

    /// The inverse map, `(a gamma, conj(gamma))`.
    pub fn inverse(&self) -> DiscAutomorphism {
        DiscAutomorphism {
            a: self.a * self.gamma,
            gamma: self.gamma.conj(),
        }
    }

    /// Derivative at `z`: `-gamma (1 - |a|^2) / (1 - conj(a) z)^2`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let den = 1.0 - self.a.conj() * z;
        if den.norm() < POLE_TOL {
            return Err(Error::PoleProximity {
                z,
                distance: den.norm(),
            });
        }
        Ok(-self.gamma * (1.0 - self.a.norm_sqr()) / (den * den))
    }
}

/// The estimate `|gamma0 - T_{a,gamma}(z)| <= 2 |gamma0 - a gamma| / (1 - |z|)`,
/// both sides evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitBound {
    pub bound: f64,
    pub deviation: f64,
}

impl LimitBound {
    pub fn holds(&self) -> bool {
        self.deviation <= self.bound + 1e-12
    }
}

pub fn automorphism_limit_bound(
    a: Complex64,
    gamma: Complex64,
    gamma0: Complex64,
    z: Complex64,
) -> Result<LimitBound> {
    if z.norm() >= 1.0 {
        return Err(Error::OutsideDisc(z));
    }
    let t = DiscAutomorphism::new(a, gamma)?;
    let gamma0 = unimodular(gamma0)?;
    let bound = 2.0 * (gamma0 - a * t.gamma).norm() / (1.0 - z.norm());
    let deviation = (gamma0 - t.eval(z)?).norm();
    Ok(LimitBound { bound, deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rho_one_is_identity() {
        let t = DiscAutomorphism::new(c(0.0, 0.0), c(-1.0, 0.0)).unwrap();
        for z in [c(0.3, -0.2), c(0.0, 0.9), c(-0.7, 0.1)] {
            assert_eq!(t.eval(z).unwrap(), z);
        }
    }

    #[test]
    fn involution_twice_is_identity() {
        let t = DiscAutomorphism::involution(c(0.5, 0.0)).unwrap();
        let w = t.eval(t.eval(c(0.3, 0.0)).unwrap()).unwrap();
        assert_abs_diff_eq!(w.re, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(w.im, 0.0, epsilon = 1e-15);
        assert!(t.compose(&t).is_identity(1e-12));
        assert_eq!(t.eval(c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn compose_with_identity() {
        let t = DiscAutomorphism::new(c(0.2, -0.4), c(0.0, 1.0)).unwrap();
        let id = DiscAutomorphism::identity();
        for u in [id.compose(&t), t.compose(&id)] {
            assert!((u.a() - t.a()).norm() < 1e-15);
            assert!((u.gamma() - t.gamma()).norm() < 1e-15);
        }
    }

    #[test]
    fn compose_matches_nested_evaluation() {
        let s = DiscAutomorphism::new(c(0.0, 0.3), c(0.0, 1.0)).unwrap();
        let t = DiscAutomorphism::new(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let u = s.compose(&t);
        // golden-angle spiral of 20 points in the disc
        for k in 0..20 {
            let r = 0.95 * ((k as f64 + 0.5) / 20.0).sqrt();
            let z = Complex64::from_polar(r, 2.399963229728653 * k as f64);
            let nested = s.eval(t.eval(z).unwrap()).unwrap();
            assert!((u.eval(z).unwrap() - nested).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_round_trips() {
        let t = DiscAutomorphism::involution(c(0.5, 0.0)).unwrap();
        assert_eq!(t.inverse(), t);
        assert_eq!(
            DiscAutomorphism::identity().inverse(),
            DiscAutomorphism::identity()
        );

        let t = DiscAutomorphism::new(
            c(0.4, 0.1),
            Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3),
        )
        .unwrap();
        let inv = t.inverse();
        assert!(t.compose(&inv).is_identity(1e-12));
        for k in 0..20 {
            let r = 0.9 * ((k as f64 + 0.5) / 20.0).sqrt();
            let z = Complex64::from_polar(r, 2.399963229728653 * k as f64);
            assert!((inv.eval(t.eval(z).unwrap()).unwrap() - z).norm() < 1e-12);
        }
    }

    #[test]
    fn eval_rejects_pole() {
        let t = DiscAutomorphism::involution(c(0.5, 0.0)).unwrap();
        // 1/conj(a) = 2 is outside the closed disc
        assert!(matches!(
            t.eval(c(2.0, 0.0)),
            Err(Error::OutsideClosedDisc(_))
        ));
        let t = DiscAutomorphism::involution(c(1.0 - 2e-15, 0.0)).unwrap();
        assert!(matches!(
            t.eval(c(1.0, 0.0)),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn construction_validates() {
        assert!(DiscAutomorphism::new(c(1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(DiscAutomorphism::new(c(0.1, 0.0), c(0.0, 0.0)).is_err());
        let t = DiscAutomorphism::new(c(0.1, 0.0), c(3.0, 4.0)).unwrap();
        assert!((t.gamma().norm() - 1.0).abs() < 1e-15);
        // T(a) = 0 and T(0) = a gamma
        assert_eq!(t.eval(t.a()).unwrap(), c(0.0, 0.0));
        assert!((t.eval(c(0.0, 0.0)).unwrap() - t.a() * t.gamma()).norm() < 1e-16);
    }

    #[test]
    fn limit_bound_examples() {
        let one = c(1.0, 0.0);
        // At z = 0 the deviation is |gamma0 - a gamma| and the bound twice that.
        let a = c(0.999, 0.0);
        let lb = automorphism_limit_bound(a, one, one, c(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(lb.deviation, 0.001, epsilon = 1e-15);
        assert_abs_diff_eq!(lb.bound, 0.002, epsilon = 1e-15);

        // a = 0.9, z = 0.5: bound 2 * 0.1 / 0.5 = 0.4; T(0.5) = 0.4 / 0.55.
        let lb = automorphism_limit_bound(c(0.9, 0.0), one, one, c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(lb.bound, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(lb.deviation, 1.0 - 0.4 / 0.55, epsilon = 1e-15);
        assert!(lb.holds());

        let a = Complex64::from_polar(0.99, 0.01);
        let lb = automorphism_limit_bound(a, one, one, c(-0.3, 0.0)).unwrap();
        let direct = (one - (a - c(-0.3, 0.0)) / (1.0 - a.conj() * c(-0.3, 0.0))).norm();
        assert_abs_diff_eq!(lb.deviation, direct, epsilon = 1e-15);
        assert!(lb.holds());

        assert!(automorphism_limit_bound(c(0.9, 0.0), one, one, c(1.0, 0.0)).is_err());
    }
}
