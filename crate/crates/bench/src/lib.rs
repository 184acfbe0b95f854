//! Fixed workloads shared by the benchmarks.

use std::sync::Arc;

use mvtop_core::fibration::random_square;
use mvtop_core::models;
use mvtop_core::{CommutingSquare, FiniteSpace, MultiMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn circle() -> Arc<FiniteSpace> {
    Arc::new(models::circle4())
}

pub fn sphere() -> Arc<FiniteSpace> {
    Arc::new(models::sphere6())
}

pub fn cone_of_circle() -> Arc<FiniteSpace> {
    Arc::new(models::cone(&models::circle4()).expect("valid model"))
}

/// Seeded random maps between seeded random spaces on `n` points.
pub fn random_pairs(n: usize, count: usize, seed: u64) -> Vec<(MultiMap, MultiMap)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let x =
                Arc::new(models::random_space(n, seed.wrapping_add(i as u64)).expect("valid size"));
            let f = models::random_map(&x, &x, &mut rng);
            let g = models::random_map(&x, &x, &mut rng);
            (f, g)
        })
        .collect()
}

/// Lifting problems for the antipode over random three-point domains.
pub fn antipode_squares(count: usize, seed: u64) -> Vec<CommutingSquare> {
    let rho = models::antipode();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let w =
                Arc::new(models::random_space(3, seed.wrapping_add(i as u64)).expect("valid size"));
            random_square(&rho, &w, 2, &mut rng).expect("valid square")
        })
        .collect()
}
