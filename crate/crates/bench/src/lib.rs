//! Seeded inputs shared by the benchmarks.

use cloneforge_core::{GroupElement, PLMap, Permutation, SymmetricSystem, ThompsonGroup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn maps(d: u32, carets: usize, count: usize, seed: u64) -> Vec<PLMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| PLMap::random(d, carets, &mut rng)).collect()
}

pub fn pairs(
    g: &ThompsonGroup<SymmetricSystem>,
    carets: usize,
    count: usize,
    seed: u64,
) -> Vec<GroupElement<Permutation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| g.random_element(carets, &mut rng).unwrap())
        .collect()
}
