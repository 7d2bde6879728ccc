use blaschke_core::hyperbolic::{
    geodesic_point, hyperbolic_convex_hull, klein_to_poincare, poincare_to_klein,
    pseudo_hyperbolic_distance,
};
use blaschke_core::lab;
use blaschke_core::{Complex64, DiscAutomorphism, FiniteBlaschkeProduct, Polynomial};
use proptest::prelude::*;

fn disc_point(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn unimodular() -> impl Strategy<Value = Complex64> {
    (0.0..std::f64::consts::TAU).prop_map(|t| Complex64::from_polar(1.0, t))
}

fn product(max_order: usize) -> impl Strategy<Value = FiniteBlaschkeProduct> {
    (
        unimodular(),
        prop::collection::vec(disc_point(0.9), 1..=max_order),
    )
        .prop_map(|(g, zeros)| FiniteBlaschkeProduct::new(g, zeros).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn involutions_square_to_identity(a in disc_point(0.95), z in disc_point(0.99)) {
        let t = DiscAutomorphism::involution(a).unwrap();
        let back = t.eval(t.eval(z).unwrap()).unwrap();
        prop_assert!((back - z).norm() < 1e-12);
    }

    #[test]
    fn automorphisms_preserve_the_circle(a in disc_point(0.95), g in unimodular(), w in unimodular()) {
        let t = DiscAutomorphism::new(a, g).unwrap();
        prop_assert!((t.eval(w).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn composition_matches_pointwise(
        a1 in disc_point(0.9), g1 in unimodular(),
        a2 in disc_point(0.9), g2 in unimodular(),
        z in disc_point(0.9),
    ) {
        let s = DiscAutomorphism::new(a1, g1).unwrap();
        let t = DiscAutomorphism::new(a2, g2).unwrap();
        let direct = s.eval(t.eval(z).unwrap()).unwrap();
        prop_assert!((s.compose(&t).eval(z).unwrap() - direct).norm() < 1e-10);
        prop_assert!(s.compose(&s.inverse()).is_identity(1e-12));
    }

    #[test]
    fn pseudo_distance_is_invariant(a in disc_point(0.9), g in unimodular(), z in disc_point(0.9), w in disc_point(0.9)) {
        let t = DiscAutomorphism::new(a, g).unwrap();
        let before = pseudo_hyperbolic_distance(z, w);
        let after = pseudo_hyperbolic_distance(t.eval(z).unwrap(), t.eval(w).unwrap());
        prop_assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn reflection_identity(b in product(6), z in disc_point(0.95)) {
        prop_assume!(z.norm() > 1e-3);
        let star = 1.0 / z.conj();
        let lhs = b.eval(star).unwrap();
        let rhs = 1.0 / b.eval(z).unwrap().conj();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0));
    }

    #[test]
    fn modulus_below_one_inside(b in product(6), z in disc_point(0.999)) {
        prop_assert!(b.eval(z).unwrap().norm() < 1.0 + 1e-15);
        prop_assert!(b.one_minus_modulus_sq(z) >= 0.0);
    }

    #[test]
    fn klein_round_trip(z in disc_point(0.999)) {
        let k = poincare_to_klein(z).unwrap();
        prop_assert!(k.norm() < 1.0);
        prop_assert!((klein_to_poincare(k).unwrap() - z).norm() < 1e-12);
    }

    #[test]
    fn geodesic_points_are_collinear_in_klein(z1 in disc_point(0.9), z2 in disc_point(0.9), t in 0.0..1.0f64) {
        prop_assume!((z1 - z2).norm() > 1e-3);
        let p = geodesic_point(z1, z2, t);
        let hull = hyperbolic_convex_hull(&[z1, z2]).unwrap();
        prop_assert!(hull.contains(p, 1e-10));
    }

    #[test]
    fn hull_contains_its_points(points in prop::collection::vec(disc_point(0.9), 1..10)) {
        let hull = hyperbolic_convex_hull(&points).unwrap();
        for &p in &points {
            prop_assert!(hull.contains(p, 1e-10));
        }
    }

    #[test]
    fn critical_points_in_hull(b in product(7)) {
        for h in lab::hull_check(&b, 1e-8).unwrap() {
            prop_assert!(h.in_hull, "{:?}", h);
        }
        prop_assert_eq!(b.critical_points().unwrap().interior_count(), b.order() - 1);
    }

    #[test]
    fn fibers_have_order_points(b in product(6), c in disc_point(0.9)) {
        let fiber = b.fiber_solve(c).unwrap();
        prop_assert_eq!(fiber.len(), b.order());
        for w in fiber {
            prop_assert!(w.norm() < 1.0);
            prop_assert!((b.eval(w).unwrap() - c).norm() < 1e-8);
        }
    }

    #[test]
    fn roots_of_products_are_recovered(roots in prop::collection::vec(disc_point(2.0), 1..8)) {
        let p = Polynomial::from_roots(&roots);
        let found = blaschke_core::polyroots::find_roots(&p).unwrap();
        prop_assert_eq!(found.total_multiplicity(), roots.len());
        for w in found.flattened() {
            prop_assert!(p.relative_residual(w) <= 1e-8);
        }
    }

    #[test]
    fn schwarz_pick_quotient_at_most_one(b in product(8), z in disc_point(0.999)) {
        prop_assert!(lab::fatou_quotient(&b, z).unwrap() <= 1.0 + 1e-12);
    }
}
