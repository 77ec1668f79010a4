//! Seeded fixtures shared by the benchmarks.

use ffmc_core::{Field, MatF, MatPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gf(q: u64) -> Field {
    Field::with_order(q).expect("supported field order")
}

pub fn random_matrix(field: &Field, n: usize, seed: u64) -> MatF {
    let mut r = rng(seed);
    let q = field.order();
    MatF::from_fn(field, n, n, |_, _| field.from_u64_wrapping(r.random_range(0..q)))
}

/// Random `n x k` matrix polynomial with entries of degree at most `deg`.
pub fn random_matpoly(field: &Field, n: usize, k: usize, deg: usize, seed: u64) -> MatPoly {
    MatPoly::random(field, n, k, deg, &mut rng(seed))
}

/// Random monic member of `M_{n,k}(F_q[x]; d)`.
pub fn random_monic(field: &Field, n: usize, k: usize, d: usize, seed: u64) -> MatPoly {
    let mut r = rng(seed);
    let q = field.order();
    let lower: Vec<MatF> = (0..d)
        .map(|_| MatF::from_fn(field, n, k, |_, _| field.from_u64_wrapping(r.random_range(0..q))))
        .collect();
    MatPoly::monic_from_lower(field, n, k, &lower).expect("shapes agree")
}
