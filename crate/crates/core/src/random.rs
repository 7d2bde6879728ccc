//! Reproducible random products.
//!
//! All generators draw from `ChaCha8Rng::seed_from_u64(seed)`: zeros are
//! uniform on a disc of the given radius by rejection from the enclosing
//! square, unimodular constants are uniform in angle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::FiniteBlaschkeProduct;
use crate::moebius::DiscAutomorphism;

pub type ProductRng = ChaCha8Rng;

pub fn rng(seed: u64) -> ProductRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn disc_point<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm_sqr() < 1.0 {
            return z * radius;
        }
    }
}

pub fn unimodular<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))
}

pub fn product<R: Rng>(rng: &mut R, order: usize, radius: f64) -> FiniteBlaschkeProduct {
    let gamma = unimodular(rng);
    let zeros = (0..order).map(|_| disc_point(rng, radius)).collect();
    FiniteBlaschkeProduct::new(gamma, zeros).expect("radius < 1 gives interior zeros")
}

/// Order drawn uniformly from `orders`.
pub fn product_in<R: Rng>(
    rng: &mut R,
    orders: std::ops::RangeInclusive<usize>,
    radius: f64,
) -> FiniteBlaschkeProduct {
    let order = rng.gen_range(orders);
    product(rng, order, radius)
}

pub fn automorphism<R: Rng>(rng: &mut R, radius: f64) -> DiscAutomorphism {
    let a = disc_point(rng, radius);
    DiscAutomorphism::new(a, unimodular(rng)).expect("radius < 1 gives an interior point")
}
