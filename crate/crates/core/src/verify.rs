//! Property suites over seeded random products.
//!
//! Each suite returns a [`CriterionReport`] with the number of checks, the
//! worst value of its headline metric and, on failure, the first offending
//! instance. Tolerances live in one [`Tolerances`] value so that callers can
//! override them by name.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blaschke::FiniteBlaschkeProduct;
use crate::error::{Error, Result};
use crate::hyperbolic::{
    hyperbolic_convex_hull, klein_to_poincare, poincare_to_klein, pseudo_hyperbolic_distance,
};
use crate::lab::{self, SequenceMode, SequenceSpec};
use crate::random::{self, ProductRng};

pub const DEFAULT_SEED: u64 = 1_729;
/// Geometric rate of the convergence suite; the sequence has 14 terms.
pub const CONVERGENCE_RATE: f64 = 0.3;
pub const CONVERGENCE_COUNT: usize = 14;
const ZERO_RADIUS: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub hull_klein: f64,
    pub reflection: f64,
    pub convergence_sup: f64,
    pub rotation: f64,
    pub derivative_identity: f64,
    pub boundary_derivative: f64,
    pub schwarz_pick: f64,
    pub fatou_order_one: f64,
    pub fatou_limit: f64,
    pub valence_residual: f64,
    pub fiber_match: f64,
    pub separation_bound: f64,
    pub collinearity: f64,
    pub klein_round_trip: f64,
    pub equivariance: f64,
    pub euclidean_hull: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hull_klein: 1e-8,
            reflection: 1e-8,
            convergence_sup: 1e-6,
            rotation: 1e-12,
            derivative_identity: 1e-9,
            boundary_derivative: 1e-10,
            schwarz_pick: 1e-12,
            fatou_order_one: 1e-12,
            fatou_limit: 1e-3,
            valence_residual: 0.05,
            fiber_match: 1e-8,
            separation_bound: 1e-9,
            collinearity: 1e-8,
            klein_round_trip: 1e-12,
            equivariance: 1e-8,
            euclidean_hull: 1e-9,
        }
    }
}

impl Tolerances {
    pub const NAMES: &'static [&'static str] = &[
        "hull_klein",
        "reflection",
        "convergence_sup",
        "rotation",
        "derivative_identity",
        "boundary_derivative",
        "schwarz_pick",
        "fatou_order_one",
        "fatou_limit",
        "valence_residual",
        "fiber_match",
        "separation_bound",
        "collinearity",
        "klein_round_trip",
        "equivariance",
        "euclidean_hull",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "hull_klein" => &mut self.hull_klein,
            "reflection" => &mut self.reflection,
            "convergence_sup" => &mut self.convergence_sup,
            "rotation" => &mut self.rotation,
            "derivative_identity" => &mut self.derivative_identity,
            "boundary_derivative" => &mut self.boundary_derivative,
            "schwarz_pick" => &mut self.schwarz_pick,
            "fatou_order_one" => &mut self.fatou_order_one,
            "fatou_limit" => &mut self.fatou_limit,
            "valence_residual" => &mut self.valence_residual,
            "fiber_match" => &mut self.fiber_match,
            "separation_bound" => &mut self.separation_bound,
            "collinearity" => &mut self.collinearity,
            "klein_round_trip" => &mut self.klein_round_trip,
            "equivariance" => &mut self.equivariance,
            "euclidean_hull" => &mut self.euclidean_hull,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance {name}={value}")));
        }
        let slot = self
            .slot(name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown tolerance {name:?}")))?;
        *slot = value;
        Ok(())
    }

    /// Applies `name=value,name=value` overrides; blank input changes nothing.
    pub fn apply_overrides(&mut self, spec: &str) -> Result<()> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("override {item:?} lacks '='")))?;
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("override {item:?} is not a number"))
            })?;
            self.set(name.trim(), value)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Replaces the primary trial count of every suite when set.
    pub trials: Option<usize>,
    pub tolerances: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            trials: None,
            tolerances: Tolerances::default(),
        }
    }
}

impl SuiteConfig {
    fn rng(&self, criterion: usize) -> ProductRng {
        random::rng(
            self.seed
                .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(criterion as u64)),
        )
    }

    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub detail: String,
    pub product: Option<FiniteBlaschkeProduct>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    /// Worst value of the metric named in `metric`.
    pub worst: f64,
    pub metric: String,
    pub failure: Option<Failure>,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<28} checks={:<6} {}={:.3e}{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checks,
            self.metric,
            self.worst,
            match &self.failure {
                Some(f) => format!("  first failure: {}", f.detail),
                None => String::new(),
            }
        )
    }
}

struct Tally {
    checks: usize,
    worst: f64,
    failure: Option<Failure>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: 0,
            worst: f64::NEG_INFINITY,
            failure: None,
        }
    }

    fn metric(&mut self, value: f64) {
        self.worst = self.worst.max(value);
    }

    fn check(
        &mut self,
        ok: bool,
        product: Option<&FiniteBlaschkeProduct>,
        detail: impl FnOnce() -> String,
    ) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(Failure {
                detail: detail(),
                product: product.cloned(),
            });
        }
    }

    fn error(&mut self, err: Error, product: Option<&FiniteBlaschkeProduct>) {
        self.check(false, product, || format!("error: {err}"));
    }

    fn finish(self, id: usize, name: &str, metric: &str) -> CriterionReport {
        CriterionReport {
            id,
            name: name.to_string(),
            passed: self.failure.is_none() && self.checks > 0,
            checks: self.checks,
            worst: self.worst,
            metric: metric.to_string(),
            failure: self.failure,
        }
    }
}

fn random_corpus(rng: &mut ProductRng, trials: usize) -> Vec<FiniteBlaschkeProduct> {
    (0..trials)
        .map(|_| random::product_in(rng, 2..=8, ZERO_RADIUS))
        .collect()
}

/// Criterion 1: every interior critical point lies in the hyperbolic hull of
/// the zeros.
pub fn hull_containment(cfg: &SuiteConfig) -> CriterionReport {
    let tol = cfg.tolerances.hull_klein;
    let mut t = Tally::new();
    for b in random_corpus(&mut cfg.rng(1), cfg.trials(200)) {
        match lab::hull_check(&b, tol) {
            Ok(checks) => {
                for h in checks {
                    t.metric(h.excess);
                    t.check(h.in_hull, Some(&b), || {
                        format!(
                            "critical point {} is {:.3e} outside the hull",
                            h.point, h.excess
                        )
                    });
                }
            }
            Err(e) => t.error(e, Some(&b)),
        }
    }
    t.finish(1, "hull containment", "max_klein_excess")
}

/// Criterion 2: `n - 1` interior critical points counted with multiplicity,
/// and the exterior ones are their reflections.
pub fn critical_count_reflection(cfg: &SuiteConfig) -> CriterionReport {
    let tol = cfg.tolerances.reflection;
    let mut t = Tally::new();
    t.metric(0.0);
    for b in random_corpus(&mut cfg.rng(1), cfg.trials(200)) {
        let set = match b.critical_points() {
            Ok(s) => s,
            Err(e) => {
                t.error(e, Some(&b));
                continue;
            }
        };
        let n = b.order();
        t.check(set.interior_count() == n - 1, Some(&b), || {
            format!(
                "{} interior critical points for order {n}",
                set.interior_count()
            )
        });

        let mut unmatched: Vec<(Complex64, usize)> = set.interior.clone();
        for &(w, m) in &set.exterior {
            // |w conj(z) - 1| is scale free and symmetric under reflection
            let best = unmatched
                .iter()
                .enumerate()
                .filter(|(_, (_, left))| *left >= m)
                .map(|(i, (z, _))| (i, (w * z.conj() - 1.0).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1));
            match best {
                Some((i, err)) => {
                    t.metric(err);
                    t.check(err <= tol, Some(&b), || {
                        format!("exterior {w} misses its reflection by {err:.3e}")
                    });
                    unmatched[i].1 -= m;
                }
                None => t.check(false, Some(&b), || format!("exterior {w} has no partner")),
            }
        }
        // whatever is left reflects to infinity, which only the origin does
        for (z, left) in unmatched {
            if left > 0 {
                t.check(z.norm() <= 1e-6, Some(&b), || {
                    format!("interior {z} has no exterior reflection")
                });
            }
        }
    }
    t.finish(2, "critical count and reflection", "max_reflection_error")
}

fn rotation_reference(b: &FiniteBlaschkeProduct, gamma0: Complex64) -> Result<Complex64> {
    let d = b.log_derivative(gamma0)? * b.eval(gamma0)?;
    Ok(d / d.norm())
}

/// Criterion 3: renormalized conjugates converge to the rotation by
/// `B'(gamma0) / |B'(gamma0)|` along radial and spiral sequences.
pub fn convergence(cfg: &SuiteConfig) -> CriterionReport {
    let tol = cfg.tolerances;
    let mut rng = cfg.rng(3);
    let mut products = vec![FiniteBlaschkeProduct::monomial(2).expect("order 2")];
    products.extend(random_corpus(&mut rng, cfg.trials(10)));
    let mut t = Tally::new();
    for b in &products {
        let gamma0 = random::unimodular(&mut rng);
        let reference = match rotation_reference(b, gamma0) {
            Ok(r) => r,
            Err(e) => {
                t.error(e, Some(b));
                continue;
            }
        };
        for mode in [SequenceMode::Radial, SequenceMode::Spiral] {
            let spec = SequenceSpec::new(gamma0, mode, CONVERGENCE_RATE, CONVERGENCE_COUNT)
                .expect("valid constants");
            let records = match lab::convergence_experiment(b, &spec, 0.9, lab::DEFAULT_GRID) {
                Ok(r) => r,
                Err(e) => {
                    t.error(e, Some(b));
                    continue;
                }
            };
            let last = records.last().expect("count > 0");
            t.metric(last.sup_deviation);
            t.check(last.sup_deviation < tol.convergence_sup, Some(b), || {
                format!("{mode:?}: final sup deviation {:.3e}", last.sup_deviation)
            });
            let tail = &records[records.len() - 6..];
            t.check(
                tail.windows(2)
                    .all(|w| w[1].sup_deviation < w[0].sup_deviation),
                Some(b),
                || {
                    let devs: Vec<String> = tail
                        .iter()
                        .map(|r| format!("{:.2e}", r.sup_deviation))
                        .collect();
                    format!("{mode:?}: tail not decreasing [{}]", devs.join(", "))
                },
            );
            let err = (last.rotation_constant - reference).norm();
            t.check(err <= tol.rotation, Some(b), || {
                format!("rotation constant off by {err:.3e}")
            });
        }
    }
    t.finish(3, "conjugate convergence", "max_final_sup")
}

/// Criterion 4: the un-renormalized sequence for `z^2` splits into `z` and
/// `-z`, the renormalized one tends to `z`.
pub fn counterexample(cfg: &SuiteConfig) -> CriterionReport {
    let tol = cfg.tolerances.convergence_sup;
    let mut t = Tally::new();
    match lab::counterexample_run(CONVERGENCE_COUNT) {
        Ok(out) => {
            let worst = out
                .even_limit_deviation
                .max(out.odd_limit_deviation)
                .max(out.renormalized_deviation);
            t.metric(worst);
            t.check(out.even_limit_deviation < tol, None, || {
                format!("even limit deviation {:.3e}", out.even_limit_deviation)
            });
            t.check(out.odd_limit_deviation < tol, None, || {
                format!("odd limit deviation {:.3e}", out.odd_limit_deviation)
            });
            t.check(out.renormalized_deviation < tol, None, || {
                format!("renormalized deviation {:.3e}", out.renormalized_deviation)
            });
            t.check(out.unrenormalized_oscillation > 1.0, None, || {
                format!("oscillation only {:.3e}", out.unrenormalized_oscillation)
            });
        }
        Err(e) => t.error(e, None),
    }
    t.finish(4, "counterexample", "max_limit_deviation")
}

/// Criterion 5: `f'(0) = (1 - |a gamma|^2) B'(a gamma) / (1 - |B(a gamma)|^2)`.
pub fn derivative_identity(cfg: &SuiteConfig) -> CriterionReport {
    let tol = cfg.tolerances.derivative_identity;
    let mut rng = cfg.rng(5);
    let mut t = Tally::new();
    for _ in 0..cfg.trials(100) {
        let b = random::product_in(&mut rng, 1..=8, ZERO_RADIUS);
        let a = random::disc_point(&mut rng, ZERO_RADIUS);
        let gamma = random::unimodular(&mut rng);
        match lab::derivative_at_zero_identity(&b, a, gamma) {
            Ok((lhs, rhs)) => {
                let rel = (lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);
                t.metric(rel);
                t.check(rel <= tol, Some(&b), || {
                    format!("a = {a}, gamma = {gamma}: f'(0) = {lhs}, formula {rhs}")
                });
            }
            Err(e) => t.error(e, Some(&b)),
        }
    }
    t.finish(5, "derivative identity", "max_relative_residual")
}

/// Criterion 6: `|B'(e^{i theta})| = sum (1 - |z_k|^2) / |e^{i theta} - z_k|^2`.
pub fn boundary_derivative(cfg: &SuiteConfig) -> CriterionReport {
    let tol = cfg.tolerances.boundary_derivative;
    let mut rng = cfg.rng(6);
    let mut t = Tally::new();
    let angles: Vec<f64> = (0..36).map(|j| TAU * j as f64 / 36.0).collect();
    for _ in 0..cfg.trials(50) {
        let b = random::product_in(&mut rng, 1..=8, ZERO_RADIUS);
        for &theta in &angles {
            let formula = b.boundary_derivative_modulus(theta);
            match b.derivative(Complex64::from_polar(1.0, theta)) {
                Ok(d) => {
                    let rel = (formula - d.norm()).abs() / d.norm();
                    t.metric(rel);
                    t.check(rel < tol, Some(&b), || {
                        format!(
                            "theta = {theta}: formula {formula}, derivative {}",
                            d.norm()
                        )
                    });
                }
                Err(e) => t.error(e, Some(&b)),
            }
        }
    }
    for n in 1..=10 {
        let b = FiniteBlaschkeProduct::monomial(n).expect("n >= 1");
        for &theta in &angles {
            let value = b.boundary_derivative_modulus(theta);
            t.check(value == n as f64, Some(&b), || {
                format!("z^{n} at theta = {theta} gives {value}")
            });
        }
    }
    t.finish(6, "boundary derivative", "max_relative_error")
}

/// Criterion 7: the Schwarz–Pick quotient is at most 1, equals 1 for single
/// factors, and tends to 1 at the circle.
pub fn fatou(cfg: &SuiteConfig) -> CriterionReport {
    let tol = cfg.tolerances;
    let mut rng = cfg.rng(7);
    let mut t = Tally::new();
    let radii = [0.0, 0.5, 0.9, 0.99, 0.999, 1.0 - 1e-4];
    let mut products: Vec<FiniteBlaschkeProduct> = (0..cfg.trials(50))
        .map(|_| random::product_in(&mut rng, 1..=10, ZERO_RADIUS))
        .collect();
    products.extend((0..10).map(|_| random::product(&mut rng, 1, ZERO_RADIUS)));
    for b in &products {
        for &r in &radii {
            for j in 0..72 {
                let z = Complex64::from_polar(r, TAU * (j as f64 + 0.5) / 72.0);
                match lab::fatou_quotient(b, z) {
                    Ok(q) => {
                        t.check(q <= 1.0 + tol.schwarz_pick, Some(b), || {
                            format!("quotient {q} at {z}")
                        });
                        if b.order() == 1 {
                            t.check((q - 1.0).abs() <= tol.fatou_order_one, Some(b), || {
                                format!("order-1 quotient {q} at {z}")
                            });
                        }
                    }
                    Err(e) => t.error(e, Some(b)),
                }
            }
        }
        match lab::fatou_limit_scan(b, &[1.0 - 1e-4], 720) {
            Ok(scan) => {
                let gap = 1.0 - scan[0].1;
                t.metric(gap);
                t.check(gap <= tol.fatou_limit, Some(b), || {
                    format!("scan minimum {} at r = 1 - 1e-4", scan[0].1)
                });
            }
            Err(e) => t.error(e, Some(b)),
        }
    }
    t.finish(7, "fatou quotient", "max_boundary_gap")
}

/// Criterion 8: the winding count of `B - w` equals the order and the
/// number of fiber points inside the contour.
pub fn valence(cfg: &SuiteConfig) -> CriterionReport {
    let tol = cfg.tolerances;
    let mut rng = cfg.rng(8);
    let mut t = Tally::new();
    for _ in 0..cfg.trials(20) {
        let b = random::product_in(&mut rng, 1..=6, ZERO_RADIUS);
        let w = random::disc_point(&mut rng, ZERO_RADIUS);
        let radius = lab::default_valence_radius(&b, w);
        let report = match lab::valence(&b, w, radius, lab::DEFAULT_VALENCE_NODES) {
            Ok(r) => r,
            Err(e) => {
                t.error(e, Some(&b));
                continue;
            }
        };
        t.metric(report.residual);
        t.check(report.valence == b.order(), Some(&b), || {
            format!(
                "w = {w}: valence {} for order {}",
                report.valence,
                b.order()
            )
        });
        t.check(report.residual < tol.valence_residual, Some(&b), || {
            format!("w = {w}: residual {}", report.residual)
        });
        match b.fiber_solve(w) {
            Ok(fiber) => {
                let inside = fiber.iter().filter(|z| z.norm() < radius).count();
                t.check(inside == report.valence, Some(&b), || {
                    format!(
                        "w = {w}: {inside} fiber points inside, winding {}",
                        report.valence
                    )
                });
            }
            Err(e) => t.error(e, Some(&b)),
        }
    }
    t.finish(8, "valence", "max_integer_residual")
}

/// Criterion 9: fibers stay uniformly separated in an annulus at the circle.
pub fn separation(cfg: &SuiteConfig) -> CriterionReport {
    let tol = cfg.tolerances;
    let mut t = Tally::new();
    t.metric(0.0);
    for b in random_corpus(&mut cfg.rng(9), cfg.trials(20)) {
        let m = b.max_zero_modulus() + 0.05;
        let est = match lab::separation_estimate(&b, m, 64) {
            Ok(e) => e,
            Err(e) => {
                t.error(e, Some(&b));
                continue;
            }
        };
        t.check(est.delta > 0.0 && est.delta.is_finite(), Some(&b), || {
            format!("M = {m}: delta = {}", est.delta)
        });
        let Some((z1, z2)) = est.witness_pair else {
            t.check(false, Some(&b), || format!("M = {m}: no witness pair"));
            continue;
        };
        let in_annulus = |z: Complex64| z.norm() >= m - 1e-12 && z.norm() <= 1.0 / m + 1e-12;
        let values = b.eval(z1).and_then(|v1| Ok((v1, b.eval(z2)?)));
        match values {
            Ok((v1, v2)) => {
                let mismatch = (v1 - v2).norm();
                t.metric(mismatch);
                t.check(
                    mismatch <= tol.fiber_match
                        && (z1 - z2).norm() == est.delta
                        && in_annulus(z1)
                        && in_annulus(z2),
                    Some(&b),
                    || format!("witness ({z1}, {z2}) invalid: |B(z1) - B(z2)| = {mismatch:.3e}"),
                );
            }
            Err(e) => t.error(e, Some(&b)),
        }
    }
    let square = FiniteBlaschkeProduct::monomial(2).expect("order 2");
    match lab::separation_estimate(&square, 0.8, 64) {
        Ok(est) => t.check(
            est.delta >= 1.6 - tol.separation_bound,
            Some(&square),
            || format!("z^2 at M = 0.8: delta = {}", est.delta),
        ),
        Err(e) => t.error(e, Some(&square)),
    }
    t.finish(9, "fiber separation", "max_witness_mismatch")
}

fn distinct_pair(rng: &mut ProductRng) -> (Complex64, Complex64) {
    loop {
        let a = random::disc_point(rng, ZERO_RADIUS);
        let b = random::disc_point(rng, ZERO_RADIUS);
        if pseudo_hyperbolic_distance(a, b) > 0.05 {
            return (a, b);
        }
    }
}

/// Criterion 10: two-factor critical points sit on the geodesic through the
/// zeros; three-factor ones sit in the triangle.
pub fn density(cfg: &SuiteConfig) -> CriterionReport {
    let tol = cfg.tolerances;
    let mut rng = cfg.rng(10);
    let mut t = Tally::new();
    let pairs: Vec<(usize, usize)> = (1..=6).flat_map(|m| (1..=6).map(move |n| (m, n))).collect();
    for _ in 0..cfg.trials(10) {
        let (a, b) = distinct_pair(&mut rng);
        match lab::density_family(a, b, &pairs) {
            Ok(points) => {
                for p in points {
                    t.metric(p.collinearity_residual);
                    t.check(p.collinearity_residual < tol.collinearity, None, || {
                        format!(
                            "a = {a}, b = {b}, (m, n) = ({}, {}): residual {:.3e}",
                            p.m, p.n, p.collinearity_residual
                        )
                    });
                }
            }
            Err(e) => t.error(e, None),
        }
    }
    for _ in 0..3 {
        let (a, b) = distinct_pair(&mut rng);
        let c = loop {
            let c = random::disc_point(&mut rng, ZERO_RADIUS);
            if pseudo_hyperbolic_distance(a, c) > 0.05 && pseudo_hyperbolic_distance(b, c) > 0.05 {
                break c;
            }
        };
        for m in 1..=4 {
            for n in 1..=4 {
                for p in 1..=4 {
                    match lab::density_family3(a, b, c, (m, n, p)) {
                        Ok(checks) => {
                            for h in checks {
                                t.check(h.excess <= tol.hull_klein, None, || {
                                    format!(
                                        "({a}, {b}, {c}) with ({m}, {n}, {p}): {} is {:.3e} outside",
                                        h.point, h.excess
                                    )
                                });
                            }
                        }
                        Err(e) => t.error(e, None),
                    }
                }
            }
        }
    }
    t.finish(10, "density families", "max_collinearity")
}

/// Counterclockwise convex hull (Euclidean), collinear points dropped.
fn euclidean_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts = points.to_vec();
    pts.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| ((a - o).conj() * (b - o)).im;
    let mut hull: Vec<Complex64> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn euclidean_excess(hull: &[Complex64], z: Complex64) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (z - hull[0]).norm(),
        2 => {
            let (a, b) = (hull[0], hull[1]);
            let t = (((z - a) * (b - a).conj()).re / (b - a).norm_sqr()).clamp(0.0, 1.0);
            (z - (a + (b - a) * t)).norm()
        }
        n => (0..n)
            .map(|i| {
                let (a, b) = (hull[i], hull[(i + 1) % n]);
                -((b - a).conj() * (z - a)).im / (b - a).norm()
            })
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

fn random_set(rng: &mut ProductRng) -> Vec<Complex64> {
    let size = rng.gen_range(3..=8);
    (0..size)
        .map(|_| random::disc_point(rng, ZERO_RADIUS))
        .collect()
}

/// Criterion 11: Klein round trip, automorphism equivariance of hulls, and
/// hyperbolic hulls inside the Euclidean hull of the set and the origin.
pub fn geometry(cfg: &SuiteConfig) -> CriterionReport {
    let tol = cfg.tolerances;
    let mut rng = cfg.rng(11);
    let mut t = Tally::new();
    t.metric(0.0);
    for _ in 0..cfg.trials(1000) {
        // recovering p from k costs about eps / (1 - |p|)^2, so the sample
        // stops short of the circle
        let p = random::disc_point(&mut rng, 0.999);
        match poincare_to_klein(p).and_then(klein_to_poincare) {
            Ok(q) => {
                let err = (p - q).norm();
                t.check(err <= tol.klein_round_trip, None, || {
                    format!("round trip of {p} is off by {err:.3e}")
                });
            }
            Err(e) => t.error(e, None),
        }
    }

    let sets = cfg.trials(50);
    for _ in 0..sets {
        let set = random_set(&mut rng);
        let auto = random::automorphism(&mut rng, 0.8);
        let back = auto.inverse();
        let moved: Result<Vec<Complex64>> = set.iter().map(|&z| auto.eval(z)).collect();
        let hulls =
            moved.and_then(|m| Ok((hyperbolic_convex_hull(&set)?, hyperbolic_convex_hull(&m)?)));
        let (h1, h2) = match hulls {
            Ok(h) => h,
            Err(e) => {
                t.error(e, None);
                continue;
            }
        };
        for (from, to, map) in [(&h1, &h2, &auto), (&h2, &h1, &back)] {
            for z in from.boundary_samples(16) {
                let excess = map.eval(z).map(|w| to.excess(w)).unwrap_or(f64::INFINITY);
                t.metric(excess);
                t.check(excess <= tol.equivariance, None, || {
                    format!("set {set:?}: image of boundary point {z} is {excess:.3e} outside")
                });
            }
        }
    }

    for _ in 0..sets {
        let set = random_set(&mut rng);
        let hull = match hyperbolic_convex_hull(&set) {
            Ok(h) => h,
            Err(e) => {
                t.error(e, None);
                continue;
            }
        };
        let mut with_origin = set.clone();
        with_origin.push(Complex64::new(0.0, 0.0));
        let outer = euclidean_hull(&with_origin);
        for z in hull.boundary_samples(32) {
            let excess = euclidean_excess(&outer, z);
            t.metric(excess);
            t.check(excess <= tol.euclidean_hull, None, || {
                format!("set {set:?}: hull point {z} is {excess:.3e} outside the Euclidean hull")
            });
        }
    }
    t.finish(11, "geometry kernel", "max_hull_excess")
}

pub type Suite = fn(&SuiteConfig) -> CriterionReport;

/// All suites in criterion order.
pub const ALL: [Suite; 11] = [
    hull_containment,
    critical_count_reflection,
    convergence,
    counterexample,
    derivative_identity,
    boundary_derivative,
    fatou,
    valence,
    separation,
    density,
    geometry,
];

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionReport> {
    ALL.iter().map(|suite| suite(cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let mut tol = Tolerances::default();
        tol.apply_overrides("hull_klein=1e-6, fatou_limit=0.01")
            .unwrap();
        assert_eq!(tol.hull_klein, 1e-6);
        assert_eq!(tol.fatou_limit, 0.01);
        tol.apply_overrides("").unwrap();
        assert!(tol.apply_overrides("nope=1").is_err());
        assert!(tol.apply_overrides("hull_klein").is_err());
        assert!(tol.apply_overrides("hull_klein=-1").is_err());
        for name in Tolerances::NAMES {
            assert!(Tolerances::default().set(name, 1.0).is_ok());
        }
    }

    #[test]
    fn euclidean_hull_of_square() {
        let pts = [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.5, 0.5),
        ];
        let hull = euclidean_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(euclidean_excess(&hull, Complex64::new(0.5, 0.5)) < 0.0);
        assert!((euclidean_excess(&hull, Complex64::new(2.0, 0.5)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn small_suites_pass() {
        let cfg = SuiteConfig {
            trials: Some(3),
            ..SuiteConfig::default()
        };
        for suite in ALL {
            let report = suite(&cfg);
            assert!(report.passed, "{}", report.line());
        }
    }

    #[test]
    fn tightened_tolerance_fails_with_instance() {
        let mut cfg = SuiteConfig {
            trials: Some(2),
            ..SuiteConfig::default()
        };
        cfg.tolerances.boundary_derivative = 0.0;
        let report = boundary_derivative(&cfg);
        assert!(!report.passed);
        assert!(report.failure.unwrap().product.is_some());
    }
}
