//! Seeded random test instances.

use num::{BigInt, Integer};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, TomoError};
use crate::grid::{validate_directions, DirectionSet, Grid, GridImage};
use crate::projector::{project, LineSumTable};
use crate::value::{Rational, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirSpec {
    Explicit(Vec<(i64, i64)>),
    /// `count` distinct primitive directions with components in `-max_component..=max_component`.
    Random { count: usize, max_component: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueMode {
    /// Integers in `-9..=9`.
    Integer,
    /// Reduced fractions with denominator at most 16.
    Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub f: GridImage<Rational>,
    pub dirs: DirectionSet,
    pub sums: LineSumTable<Rational>,
}

/// Canonical primitive directions with both components bounded by `max_component`
/// in absolute value, in a fixed order.
pub fn candidate_directions(max_component: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    if max_component < 1 {
        return out;
    }
    out.push((0, 1));
    for a in 1..=max_component {
        for b in -max_component..=max_component {
            if a.gcd(&b) == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Draws `count` distinct directions.
pub fn sample_directions(count: usize, max_component: i64, rng: &mut impl Rng) -> Result<DirectionSet> {
    if count == 0 {
        return Err(TomoError::EmptySet);
    }
    let pool = candidate_directions(max_component);
    if pool.len() < count {
        return Err(TomoError::InfeasibleDirectionSpec { count, max_component });
    }
    let chosen: Vec<(i64, i64)> = pool.choose_multiple(rng, count).copied().collect();
    validate_directions(&chosen)
}

pub fn random_image(grid: Grid, mode: ValueMode, rng: &mut impl Rng) -> GridImage<Rational> {
    GridImage::from_fn(grid, |_, _| match mode {
        ValueMode::Integer => Rational::from_i64(rng.gen_range(-9..=9)),
        ValueMode::Rational => {
            let den = rng.gen_range(1..=16i64);
            Rational::new(BigInt::from(rng.gen_range(-9 * den..=9 * den)), BigInt::from(den))
        }
    })
}

/// Deterministic instance for a seed: directions, a random image and its line sums.
pub fn generate_instance(m: usize, n: usize, spec: &DirSpec, mode: ValueMode, seed: u64) -> Result<Instance> {
    let grid = Grid::new(m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs = match spec {
        DirSpec::Explicit(raw) => validate_directions(raw)?,
        DirSpec::Random { count, max_component } => sample_directions(*count, *max_component, &mut rng)?,
    };
    let f = random_image(grid, mode, &mut rng);
    let sums = project(&f, &dirs);
    Ok(Instance { f, dirs, sums })
}
