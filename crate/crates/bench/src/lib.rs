//! Fixtures shared by the criterion benchmarks.

use lintomo_core::instance::{random_image, ValueMode};
use lintomo_core::value::rational_to_f64;
use lintomo_core::{project, validate_directions, DirectionSet, Grid, LineSumTable, Rational};

/// Directions used by the scaling benchmarks, in the order they are added.
pub const POOL: [(i64, i64); 8] = [(1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2), (3, 1), (1, 3)];

pub fn directions(count: usize) -> DirectionSet {
    validate_directions(&POOL[..count]).expect("pool directions are distinct and primitive")
}

/// Line sums of a seeded integer image, exact.
pub fn exact_sums(m: usize, n: usize, dirs: &DirectionSet, seed: u64) -> LineSumTable<Rational> {
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let grid = Grid::new(m, n).expect("nonempty grid");
    project(&random_image(grid, ValueMode::Integer, &mut rng), dirs)
}

/// The same sums in `f64`.
pub fn float_sums(m: usize, n: usize, dirs: &DirectionSet, seed: u64) -> LineSumTable<f64> {
    exact_sums(m, n, dirs, seed).map(rational_to_f64)
}
