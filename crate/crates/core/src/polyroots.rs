//! All complex roots of a complex polynomial.
//!
//! Aberth–Ehrlich simultaneous iteration from equally spaced starting points
//! on the Cauchy-bound circle, Newton polishing, then clustering of nearby
//! roots into multiple roots.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

const TRIM_RELATIVE: f64 = 1e-14;
const MAX_SWEEPS: usize = 200;
const START_ANGLE: f64 = 0.4;
const RESIDUAL_TOL: f64 = 1e-8;
const CLUSTER_TOL: f64 = 1e-7;
/// Wider linkage radii tried after the base clustering; a merge at these
/// radii is only accepted if the centroid passes the derivative test.
const WIDE_LINKAGE: [f64; 5] = [1e-6, 1e-5, 1e-4, 1e-3, 1e-2];
const MULTIPLICITY_TOL: f64 = 1e-9;

/// Polynomial with complex coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Trims high-degree coefficients below `1e-14` times the largest
    /// modulus. An empty or all-zero list becomes the zero constant.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        while coeffs.len() > 1 && coeffs.last().unwrap().norm() <= TRIM_RELATIVE * max {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            coeffs = mul_linear(&coeffs, -r, Complex64::new(1.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `1 + max |a_i / a_n|`.
    pub fn cauchy_bound(&self) -> f64 {
        let lead = self.leading().norm();
        let n = self.degree();
        1.0 + self.coeffs[..n]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::new(vec![Complex64::new(0.0, 0.0)]);
        }
        Polynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Polynomial::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(zero)
                        - other.coeffs.get(i).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    /// `sum |a_i| |z|^i`, the scale against which `|p(z)|` is judged.
    pub fn abs_eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// Backward-error residual `|p(z)| / sum |a_i| |z|^i`.
    pub fn relative_residual(&self, z: Complex64) -> f64 {
        let s = self.abs_eval(z);
        if s == 0.0 {
            return 0.0;
        }
        self.eval(z).norm() / s
    }

    /// Newton correction `p(z) / p'(z)`. Outside the unit circle the
    /// reversed polynomial is evaluated at `1/z` to avoid overflow.
    fn newton_ratio(&self, z: Complex64) -> Complex64 {
        let n = self.degree();
        if z.norm() <= 1.0 {
            let (p, dp) = horner_with_derivative(&self.coeffs, z);
            p / dp
        } else {
            let y = 1.0 / z;
            let rev: Vec<Complex64> = self.coeffs.iter().rev().copied().collect();
            let (r, dr) = horner_with_derivative(&rev, y);
            z * r / (r * n as f64 - y * dr)
        }
    }

    /// Taylor coefficients `p^(j)(c) / j!`, `j = 0..=degree`.
    fn taylor_at(&self, c: Complex64) -> Vec<Complex64> {
        let mut t = self.coeffs.clone();
        let n = t.len();
        for j in 0..n {
            for i in (j + 1..n).rev() {
                let carry = t[i] * c;
                t[i - 1] += carry;
            }
        }
        t
    }

    fn abs_taylor_at(&self, r: f64) -> Vec<f64> {
        let mut t: Vec<f64> = self.coeffs.iter().map(|c| c.norm()).collect();
        let n = t.len();
        for j in 0..n {
            for i in (j + 1..n).rev() {
                let carry = t[i] * r;
                t[i - 1] += carry;
            }
        }
        t
    }
}

fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Multiply by `(c0 + c1 z)`.
pub(crate) fn mul_linear(coeffs: &[Complex64], c0: Complex64, c1: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
    for (i, &a) in coeffs.iter().enumerate() {
        out[i] += a * c0;
        out[i + 1] += a * c1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub location: Complex64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Backward-error residual of each root, in the same order.
    pub residuals: Vec<f64>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Every root repeated according to its multiplicity.
    pub fn flattened(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.location, r.multiplicity))
            .collect()
    }
}

/// Outcome of [`polish_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polished {
    pub root: Complex64,
    pub stalled: bool,
}

/// Newton refinement of a single root.
///
/// Succeeds once `|p(z)| <= 1e-12 max|a_i|`. If that is never reached the
/// guess comes back unchanged with `stalled` set.
pub fn polish_root(p: &Polynomial, guess: Complex64) -> Polished {
    let target = 1e-12 * p.max_coeff_modulus();
    let mut z = guess;
    let mut res = p.eval(z).norm();
    if res <= target {
        return Polished {
            root: z,
            stalled: false,
        };
    }
    if p.degree() == 0 {
        return Polished {
            root: guess,
            stalled: true,
        };
    }
    for _ in 0..100 {
        let step = p.newton_ratio(z);
        if !step.is_finite() {
            break;
        }
        z -= step;
        res = p.eval(z).norm();
        if res <= target {
            return Polished {
                root: z,
                stalled: false,
            };
        }
    }
    Polished {
        root: guess,
        stalled: true,
    }
}

/// All roots of `p` with multiplicities.
///
/// Exact zero low-order coefficients are split off as roots at the origin.
/// The result is deterministic for a given input.
pub fn find_roots(p: &Polynomial) -> Result<RootSet> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::DegreeTooLow(0));
    }
    let zero = Complex64::new(0.0, 0.0);
    let lead_zeros = p.coeffs.iter().take_while(|c| **c == zero).count();
    let reduced = Polynomial {
        coeffs: p.coeffs[lead_zeros..].to_vec(),
    };

    let mut clusters: Vec<Cluster> = Vec::new();
    if lead_zeros > 0 {
        clusters.push(Cluster {
            centroid: zero,
            members: lead_zeros,
        });
    }
    if reduced.degree() > 0 {
        let approx = aberth(&reduced)?;
        clusters.extend(cluster_roots(&reduced, &approx));
    }

    let mut roots = Vec::with_capacity(clusters.len());
    let mut residuals = Vec::with_capacity(clusters.len());
    let mut worst = 0.0f64;
    for cl in clusters {
        let res = p.relative_residual(cl.centroid);
        worst = worst.max(res);
        roots.push(Root {
            location: cl.centroid,
            multiplicity: cl.members,
        });
        residuals.push(res);
    }
    if !(worst <= RESIDUAL_TOL) {
        return Err(Error::NonConvergence {
            residual: worst,
            sweeps: MAX_SWEEPS,
        });
    }
    Ok(RootSet { roots, residuals })
}

fn aberth(p: &Polynomial) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let lead = p.leading();
    if n == 1 {
        return Ok(vec![-p.coeffs[0] / lead]);
    }
    let radius = p.cauchy_bound();
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / n as f64 + START_ANGLE))
        .collect();
    let mut done = vec![false; n];
    for _ in 0..MAX_SWEEPS {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let ratio = p.newton_ratio(z[i]);
            if ratio == Complex64::new(0.0, 0.0) {
                done[i] = true;
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| 1.0 / (z[i] - z[j]))
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    if z.iter().any(|w| !w.is_finite()) {
        return Err(Error::NonConvergence {
            residual: f64::INFINITY,
            sweeps: MAX_SWEEPS,
        });
    }
    Ok(z)
}

/// A few Newton steps, keeping the iterate with the smallest residual.
fn newton_polish_simple(p: &Polynomial, z0: Complex64) -> Complex64 {
    let mut best = z0;
    let mut best_res = p.relative_residual(z0);
    let mut z = z0;
    for _ in 0..8 {
        let step = p.newton_ratio(z);
        if !step.is_finite() {
            break;
        }
        z -= step;
        let res = p.relative_residual(z);
        if res < best_res {
            best = z;
            best_res = res;
        } else {
            break;
        }
    }
    best
}

#[derive(Debug, Clone)]
struct Cluster {
    centroid: Complex64,
    members: usize,
}

fn scale_of(z: Complex64) -> f64 {
    z.norm().max(1.0)
}

fn cluster_roots(p: &Polynomial, roots: &[Complex64]) -> Vec<Cluster> {
    let mut clusters: Vec<Cluster> = linkage(
        roots
            .iter()
            .map(|&z| Cluster {
                centroid: z,
                members: 1,
            })
            .collect(),
        CLUSTER_TOL,
    )
    .into_iter()
    .map(|group| merge(&group))
    .collect();

    for &radius in &WIDE_LINKAGE {
        let groups = linkage(clusters.clone(), radius);
        let mut next = Vec::with_capacity(groups.len());
        for group in groups {
            if group.len() == 1 {
                next.extend(group);
                continue;
            }
            let mut merged = merge(&group);
            merged.centroid = refine_on_derivative(p, merged.centroid, merged.members);
            if is_multiple_root(p, merged.centroid, merged.members) {
                next.push(merged);
            } else {
                next.extend(group);
            }
        }
        clusters = next;
    }

    clusters
        .into_iter()
        .map(|cl| Cluster {
            centroid: if cl.members > 1 {
                polish_multiple(p, cl.centroid, cl.members)
            } else {
                newton_polish_simple(p, cl.centroid)
            },
            ..cl
        })
        .collect()
}

/// Single-linkage groups of clusters whose centroids are within
/// `tol * max(1, |z|)`. Group order follows first appearance.
fn linkage(items: Vec<Cluster>, tol: f64) -> Vec<Vec<Cluster>> {
    let n = items.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut i = i;
        while parent[i] != r {
            let next = parent[i];
            parent[i] = r;
            i = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (items[i].centroid, items[j].centroid);
            if (a - b).norm() <= tol * scale_of(a).max(scale_of(b)) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut order: Vec<usize> = Vec::new();
    let mut groups: Vec<Vec<Cluster>> = Vec::new();
    for (i, item) in items.into_iter().enumerate() {
        let r = find(&mut parent, i);
        match order.iter().position(|&o| o == r) {
            Some(g) => groups[g].push(item),
            None => {
                order.push(r);
                groups.push(vec![item]);
            }
        }
    }
    groups
}

fn merge(group: &[Cluster]) -> Cluster {
    let members: usize = group.iter().map(|c| c.members).sum();
    let centroid = group
        .iter()
        .map(|c| c.centroid * c.members as f64)
        .sum::<Complex64>()
        / members as f64;
    Cluster { centroid, members }
}

/// `p^(j)(c)` is negligible for every `j < k`, relative to the same
/// derivative of the absolute-value polynomial.
fn is_multiple_root(p: &Polynomial, c: Complex64, k: usize) -> bool {
    if k > p.degree() {
        return false;
    }
    let t = p.taylor_at(c);
    let s = p.abs_taylor_at(c.norm());
    (0..k).all(|j| t[j].norm() <= MULTIPLICITY_TOL * s[j])
}

/// A root of multiplicity `k` of `p` is a simple root of `p^(k-1)`; Newton
/// there recovers full precision for a cluster centroid.
fn refine_on_derivative(p: &Polynomial, z0: Complex64, k: usize) -> Complex64 {
    let mut d = p.clone();
    for _ in 1..k {
        d = d.derivative();
    }
    if d.degree() == 0 {
        return z0;
    }
    let mut z = z0;
    for _ in 0..20 {
        let step = d.newton_ratio(z);
        if !step.is_finite() {
            return z0;
        }
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    if (z - z0).norm() <= 1e-2 * scale_of(z0) {
        z
    } else {
        z0
    }
}

/// Newton with the multiplicity factor, `z - k p / p'`.
fn polish_multiple(p: &Polynomial, z0: Complex64, k: usize) -> Complex64 {
    let mut best = z0;
    let mut best_res = p.relative_residual(z0);
    let mut z = z0;
    for _ in 0..8 {
        let step = p.newton_ratio(z) * k as f64;
        if !step.is_finite() {
            break;
        }
        z -= step;
        let res = p.relative_residual(z);
        if res < best_res {
            best = z;
            best_res = res;
        } else {
            break;
        }
    }
    best
}
