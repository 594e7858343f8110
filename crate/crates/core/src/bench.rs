//! Operation-count scaling runs.
//!
//! Each row reconstructs an integer-valued image in `f64` arithmetic wrapped
//! in [`Counted`], so the tallies are exact and deterministic. A row is only
//! recorded after its residuals have been checked to be zero.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, TomoError};
use crate::grid::{validate_directions, DirectionSet, Grid, GridImage};
use crate::instance::{random_image, ValueMode};
use crate::projector::{all_zero, project};
use crate::reconstruct::{reconstruct_with, ReconstructOptions};
use crate::value::{op_count, rational_to_f64, reset_op_count, Counted, OpCount};

/// Default acceptance band for successive op-count ratios.
pub const DEFAULT_BAND: (f64, f64) = (1.6, 2.6);

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub m: usize,
    pub n: usize,
    /// Number of directions, axis directions included.
    pub d: usize,
    pub ops: OpCount,
    pub op_total: u64,
    pub visited: u64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// `(from_row, to_row, op_total ratio)`.
    pub ratios: Vec<(usize, usize, f64)>,
    /// Least-squares slope through the origin of `op_total` against `d*m*n`.
    pub slope: f64,
    pub band: (f64, f64),
    pub pass: bool,
}

impl BenchReport {
    fn assemble(rows: Vec<BenchRow>, pairs: &[(usize, usize)], band: (f64, f64)) -> Self {
        let ratios: Vec<(usize, usize, f64)> =
            pairs.iter().map(|&(i, j)| (i, j, rows[j].op_total as f64 / rows[i].op_total as f64)).collect();
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for r in &rows {
            let x = (r.d * r.m * r.n) as f64;
            sxy += x * r.op_total as f64;
            sxx += x * x;
        }
        let pass = ratios.iter().all(|&(_, _, r)| r >= band.0 && r <= band.1);
        BenchReport { rows, ratios, slope: if sxx > 0.0 { sxy / sxx } else { 0.0 }, band, pass }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,d,op_total,adds,subs,muls,divs,compares,assigns,visited,wall_ms\n");
        for r in &self.rows {
            let o = &r.ops;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{:.3}\n",
                r.m, r.n, r.d, r.op_total, o.adds, o.subs, o.muls, o.divs, o.compares, o.assigns, r.visited, r.wall_ms
            ));
        }
        out
    }
}

/// Reconstructs one counted instance and returns its row.
pub fn measure(grid: Grid, dirs: &DirectionSet, seed: u64, use_stream_order: bool) -> Result<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f: GridImage<f64> = random_image(grid, ValueMode::Integer, &mut rng).map(rational_to_f64);
    let sums = project(&f, dirs).map(|v| Counted(*v));
    let opts = ReconstructOptions { check_safety: false, use_stream_order, trace: false };
    reset_op_count();
    let start = Instant::now();
    let rec = reconstruct_with(&sums, &BTreeMap::new(), opts)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let ops = op_count();
    if !all_zero(&rec.residual) {
        return Err(TomoError::InconsistentInput(rec.residual.nonzero_count()));
    }
    Ok(BenchRow { m: grid.m(), n: grid.n(), d: dirs.len(), op_total: ops.total(), ops, visited: rec.stats.visited, wall_ms })
}

/// Rows at `m, 2m, 4m, ...` (`doublings` doublings) for fixed `n` and directions.
pub fn bench_linearity(
    base_m: usize,
    base_n: usize,
    dirs: &DirectionSet,
    doublings: usize,
    seed: u64,
    band: (f64, f64),
    use_stream_order: bool,
) -> Result<BenchReport> {
    let mut rows = Vec::with_capacity(doublings + 1);
    for i in 0..=doublings {
        rows.push(measure(Grid::new(base_m << i, base_n)?, dirs, seed + i as u64, use_stream_order)?);
    }
    let pairs: Vec<(usize, usize)> = (1..rows.len()).map(|i| (i - 1, i)).collect();
    Ok(BenchReport::assemble(rows, &pairs, band))
}

/// Rows for the first `c` directions of `pool`, for each `c` in `counts`, on a
/// fixed grid. Ratios are reported for every pair `(c, 2c)` present.
pub fn bench_direction_doubling(
    grid: Grid,
    pool: &[(i64, i64)],
    counts: &[usize],
    seed: u64,
    band: (f64, f64),
) -> Result<BenchReport> {
    let mut rows = Vec::with_capacity(counts.len());
    for (i, &c) in counts.iter().enumerate() {
        let dirs = validate_directions(&pool[..c.min(pool.len())])?;
        rows.push(measure(grid, &dirs, seed + i as u64, false)?);
    }
    let mut pairs = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        if let Some(j) = counts.iter().position(|&x| x == 2 * c) {
            pairs.push((i, j));
        }
    }
    Ok(BenchReport::assemble(rows, &pairs, band))
}
