//! Poincaré-disc geometry: geodesics, collinearity, pseudo-hyperbolic
//! distance and hyperbolic convex hulls.
//!
//! Hulls are computed in the Klein model, where geodesics are straight
//! chords and hyperbolic convexity is ordinary convexity.
//!
//! Membership tolerances are Klein-model Euclidean distances. Near a point
//! `p` with `|p| = r` the Klein map stretches radial lengths by
//! `2 (1 - r^2) / (1 + r^2)^2` and tangential lengths by `2 / (1 + r^2)`, so
//! a Klein tolerance `tol` covers at least a Poincaré distance of
//! `tol * (1 + r^2) / 2` in every direction.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{unimodular, DiscAutomorphism};

const COLLINEAR_CUTOFF: f64 = 1e-12;
const DEDUP_DISTANCE: f64 = 1e-12;
const COINCIDENT_DISTANCE: f64 = 1e-10;

fn require_interior(z: Complex64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisc(z))
    }
}

/// The geodesic `{ z : gamma (a - z) / (1 - conj(a) z) in [-1, 1] }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    a: Complex64,
    gamma: Complex64,
}

impl Geodesic {
    /// Canonical form: `Im gamma >= 0`, and `gamma = 1` when it is real.
    pub fn new(a: Complex64, gamma: Complex64) -> Result<Self> {
        require_interior(a)?;
        let mut gamma = unimodular(gamma)?;
        if gamma.im < 0.0 {
            gamma = -gamma;
        }
        if gamma.im.abs() <= 1e-12 {
            gamma = Complex64::new(1.0, 0.0);
        }
        Ok(Self { a, gamma })
    }

    /// The geodesic through two distinct disc points.
    pub fn through(z1: Complex64, z2: Complex64) -> Result<Self> {
        require_interior(z1)?;
        require_interior(z2)?;
        let u = (z1 - z2) / (1.0 - z1.conj() * z2);
        if u.norm() <= COINCIDENT_DISTANCE {
            return Err(Error::Degenerate(u.norm()));
        }
        // gamma * u must be real
        Self::new(z1, u.conj())
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    fn chart(&self, z: Complex64) -> Complex64 {
        self.gamma * (self.a - z) / (1.0 - self.a.conj() * z)
    }

    /// Signed side: the imaginary part of the chart coordinate.
    pub fn side(&self, z: Complex64) -> f64 {
        self.chart(z).im
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.side(z).abs() <= tol
    }

    /// The point with chart coordinate `t` in `[-1, 1]`.
    pub fn point(&self, t: f64) -> Complex64 {
        let t = Complex64::new(t, 0.0);
        let w = t / self.gamma;
        (self.a - w) / (1.0 - self.a.conj() * w)
    }
}

/// The point at parameter `t` on the geodesic segment from `z1` to `z2`:
/// `(z1 - u t) / (1 - conj(z1) u t)` with `u = (z1 - z2) / (1 - conj(z1) z2)`.
pub fn geodesic_point(z1: Complex64, z2: Complex64, t: f64) -> Complex64 {
    let u = (z1 - z2) / (1.0 - z1.conj() * z2);
    let ut = u * t;
    (z1 - ut) / (1.0 - z1.conj() * ut)
}

/// `|Im q| / |q|` where `q` is the ratio of the pseudo-hyperbolic
/// displacements from `z1` to `z2` and to `z3`. Zero exactly when the
/// three points lie on one geodesic.
pub fn collinearity_residual(z1: Complex64, z2: Complex64, z3: Complex64) -> Result<f64> {
    for (p, q) in [(z1, z2), (z1, z3), (z2, z3)] {
        let d = pseudo_hyperbolic_distance(p, q);
        if d <= COINCIDENT_DISTANCE {
            return Err(Error::Degenerate(d));
        }
    }
    let q = ((z1 - z2) / (1.0 - z1.conj() * z2)) / ((z1 - z3) / (1.0 - z1.conj() * z3));
    Ok(q.im.abs() / (q.norm() + 1e-300))
}

/// `|z1 - z2| / |1 - conj(z1) z2|`.
pub fn pseudo_hyperbolic_distance(z1: Complex64, z2: Complex64) -> f64 {
    ((z1 - z2) / (1.0 - z1.conj() * z2)).norm()
}

/// `2 p / (1 + |p|^2)`.
pub fn poincare_to_klein(p: Complex64) -> Result<Complex64> {
    require_interior(p)?;
    Ok(p * 2.0 / (1.0 + p.norm_sqr()))
}

/// `k / (1 + sqrt(1 - |k|^2))`.
pub fn klein_to_poincare(k: Complex64) -> Result<Complex64> {
    require_interior(k)?;
    Ok(k / (1.0 + (1.0 - k.norm_sqr()).sqrt()))
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HullKind {
    Point,
    Segment,
    Polygon,
}

/// Hyperbolic convex hull of finitely many disc points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicHull {
    /// Counterclockwise; two endpoints for a segment, one for a point.
    pub poincare_vertices: Vec<Complex64>,
    pub klein_vertices: Vec<Complex64>,
    pub kind: HullKind,
}

/// Monotone chain on the Klein images, vertices mapped back to the disc.
pub fn hyperbolic_convex_hull(points: &[Complex64]) -> Result<HyperbolicHull> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut unique: Vec<Complex64> = Vec::with_capacity(points.len());
    for &p in points {
        require_interior(p)?;
        if !unique
            .iter()
            .any(|&q| pseudo_hyperbolic_distance(p, q) <= DEDUP_DISTANCE)
        {
            unique.push(p);
        }
    }
    let mut pairs: Vec<(Complex64, Complex64)> = unique
        .iter()
        .map(|&p| Ok((poincare_to_klein(p)?, p)))
        .collect::<Result<_>>()?;
    pairs.sort_by(|x, y| {
        x.0.re
            .partial_cmp(&y.0.re)
            .unwrap_or(Ordering::Equal)
            .then(x.0.im.partial_cmp(&y.0.im).unwrap_or(Ordering::Equal))
    });

    if pairs.len() == 1 {
        return Ok(HyperbolicHull {
            poincare_vertices: vec![pairs[0].1],
            klein_vertices: vec![pairs[0].0],
            kind: HullKind::Point,
        });
    }

    let chain = |iter: &mut dyn Iterator<Item = &(Complex64, Complex64)>| {
        let mut out: Vec<(Complex64, Complex64)> = Vec::new();
        for &p in iter {
            while out.len() >= 2
                && cross(out[out.len() - 2].0, out[out.len() - 1].0, p.0) <= COLLINEAR_CUTOFF
            {
                out.pop();
            }
            out.push(p);
        }
        out
    };
    let mut lower = chain(&mut pairs.iter());
    let mut upper = chain(&mut pairs.iter().rev());
    lower.pop();
    upper.pop();
    lower.extend(upper);

    if lower.len() <= 2 {
        let (first, last) = (pairs[0], pairs[pairs.len() - 1]);
        return Ok(HyperbolicHull {
            poincare_vertices: vec![first.1, last.1],
            klein_vertices: vec![first.0, last.0],
            kind: HullKind::Segment,
        });
    }
    Ok(HyperbolicHull {
        poincare_vertices: lower.iter().map(|p| p.1).collect(),
        klein_vertices: lower.iter().map(|p| p.0).collect(),
        kind: HullKind::Polygon,
    })
}

fn distance_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

impl HyperbolicHull {
    /// Klein-model membership with Euclidean tolerance `tol`.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.excess(z) <= tol
    }

    /// How far the Klein image of `z` lies outside the hull: the largest
    /// signed distance past an edge line for a polygon (negative inside),
    /// the Euclidean distance for a point or segment. Infinite off the disc.
    pub fn excess(&self, z: Complex64) -> f64 {
        let Ok(k) = poincare_to_klein(z) else {
            return f64::INFINITY;
        };
        let v = &self.klein_vertices;
        match self.kind {
            HullKind::Point => (k - v[0]).norm(),
            HullKind::Segment => distance_to_segment(k, v[0], v[1]),
            HullKind::Polygon => (0..v.len())
                .map(|i| {
                    let (a, b) = (v[i], v[(i + 1) % v.len()]);
                    -cross(a, b, k) / (b - a).norm()
                })
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Boundary edges as pairs of Poincaré endpoints.
    pub fn edges(&self) -> Vec<(Complex64, Complex64)> {
        let v = &self.poincare_vertices;
        match self.kind {
            HullKind::Point => vec![],
            HullKind::Segment => vec![(v[0], v[1])],
            HullKind::Polygon => (0..v.len()).map(|i| (v[i], v[(i + 1) % v.len()])).collect(),
        }
    }

    /// Points along every boundary geodesic, `samples` per edge, including
    /// both endpoints.
    pub fn boundary_samples(&self, samples: usize) -> Vec<Complex64> {
        if self.kind == HullKind::Point {
            return self.poincare_vertices.clone();
        }
        let samples = samples.max(2);
        self.edges()
            .into_iter()
            .flat_map(|(a, b)| {
                (0..samples).map(move |j| geodesic_point(a, b, j as f64 / (samples - 1) as f64))
            })
            .collect()
    }

    /// Image of the hull under an automorphism, recomputed from the mapped
    /// vertices.
    pub fn transformed(&self, t: &DiscAutomorphism) -> Result<HyperbolicHull> {
        let mapped = self
            .poincare_vertices
            .iter()
            .map(|&p| t.eval(p))
            .collect::<Result<Vec<_>>>()?;
        hyperbolic_convex_hull(&mapped)
    }
}

/// Free-function form of [`HyperbolicHull::contains`].
pub fn hull_contains(hull: &HyperbolicHull, z: Complex64, tol: f64) -> bool {
    hull.contains(z, tol)
}
