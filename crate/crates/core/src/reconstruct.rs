//! Linear-time reconstruction from line sums.
//!
//! Valid instances (`M < m`, `N < n`) are solved column by column: the
//! free-choice block is filled first, then the starting points of the
//! [`Side::Columns`] plan are shifted right one column at a time. Every
//! unresolved point met this way is the only unresolved point on the line of
//! its assigned direction, so its value is the current residual of that line.
//!
//! The points left over (all of them when `m <= M`) are then resolved by
//! sweeping the [`Side::Rows`] plan downwards, placed so that its right edge
//! coincides with the right edge of the grid. When `m > M` but `n <= N` the
//! problem is transposed first.

use std::collections::BTreeMap;

use crate::error::{Result, TomoError};
use crate::geometry::{build_plan, stream_order, OrderedPoint, Side, TraversalPlan};
use crate::ghost::free_block;
use crate::grid::{is_valid, Direction, DirectionSet, Grid, GridImage};
use crate::projector::{all_zero, LineSumTable};
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReconstructOptions {
    /// Before each assignment, check that every other point of the line is
    /// already resolved. Costs a walk along the line.
    pub check_safety: bool,
    /// Use the streaming order instead of sorting the starting points.
    pub use_stream_order: bool,
    /// Record every assignment.
    pub trace: bool,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions { check_safety: cfg!(debug_assertions), use_stream_order: false, trace: false }
    }
}

/// One assignment. `source` and `side` are `None` for free-block values.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEvent<V> {
    pub p: usize,
    pub q: usize,
    pub source: Option<Direction>,
    /// Sweep that made the assignment, in the coordinates of the solved problem.
    pub side: Option<Side>,
    pub value: V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReconstructStats {
    /// Candidate points examined by the sweep.
    pub visited: u64,
    /// Points assigned from a line residual.
    pub from_lines: usize,
    /// Points taken from the free-choice block.
    pub free: usize,
    pub transposed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction<V> {
    pub image: GridImage<V>,
    /// Line sums left after subtracting the image; all zero iff the input was consistent.
    pub residual: LineSumTable<V>,
    pub trace: Vec<TraceEvent<V>>,
    pub stats: ReconstructStats,
}

/// Reconstructs an image with the given line sums, taking `free_values` on
/// the free-choice block (zero where absent).
///
/// Fails with [`TomoError::InconsistentInput`] if the sums are not the sums of
/// any image.
pub fn reconstruct<V: Value>(
    sums: &LineSumTable<V>,
    free_values: &BTreeMap<(usize, usize), V>,
) -> Result<GridImage<V>> {
    let rec = reconstruct_with(sums, free_values, ReconstructOptions::default())?;
    verify_residuals(&rec)?;
    Ok(rec.image)
}

/// Like [`reconstruct`] but only accepts instances with `m <= M` or `n <= N`.
pub fn reconstruct_nonvalid<V: Value>(sums: &LineSumTable<V>) -> Result<GridImage<V>> {
    if is_valid(sums.grid(), sums.directions()) {
        return Err(TomoError::NotNonvalid);
    }
    reconstruct(sums, &BTreeMap::new())
}

/// Errors if any residual line sum is nonzero.
pub fn verify_residuals<V: Value>(rec: &Reconstruction<V>) -> Result<()> {
    if all_zero(&rec.residual) {
        Ok(())
    } else {
        Err(TomoError::InconsistentInput(rec.residual.nonzero_count()))
    }
}

/// Full reconstruction report. Inconsistent input is not an error here; it
/// shows up as nonzero residuals.
pub fn reconstruct_with<V: Value>(
    sums: &LineSumTable<V>,
    free_values: &BTreeMap<(usize, usize), V>,
    opts: ReconstructOptions,
) -> Result<Reconstruction<V>> {
    let grid = sums.grid();
    let dirs = sums.directions();
    let block = free_block(grid, dirs);
    if let Some(&(p, q)) = free_values.keys().find(|&&(p, q)| !block.contains(p, q)) {
        return Err(TomoError::FreeValueOutsideBlock(p, q));
    }

    let m_sum = dirs.horizontal_sum();
    let n_sum = dirs.vertical_sum();
    if grid.m() as i64 > m_sum && grid.n() as i64 <= n_sum {
        let free_t = free_values.iter().map(|(&(p, q), v)| ((q, p), v.clone())).collect();
        let rec = reconstruct_with(&sums.transposed(), &free_t, opts)?;
        return Ok(Reconstruction {
            image: rec.image.transposed(),
            residual: rec.residual.transposed(),
            trace: rec
                .trace
                .into_iter()
                .map(|e| TraceEvent { p: e.q, q: e.p, source: e.source.map(|d| d.transposed().0), ..e })
                .collect(),
            stats: ReconstructStats { transposed: true, ..rec.stats },
        });
    }

    let mut state = Sweep::new(sums, opts);
    if grid.m() as i64 > m_sum {
        for (p, q) in block.points() {
            let v = free_values.get(&(p, q)).cloned().unwrap_or_else(V::zero);
            state.place_free(p, q, v);
        }
        let plan = build_plan(grid, dirs, Side::Columns);
        let order = schedule(&plan, opts);
        let idx = state.line_indices(&plan);
        let m = grid.m() as i64;
        for t in (1 - plan.reach()).min(0)..m - m_sum {
            for o in &order {
                state.stats.visited += 1;
                let (p, q) = (o.point.0 + t, o.point.1);
                if (0..m).contains(&p) && !state.done(p, q) {
                    state.resolve(p, q, idx[o.dir], plan.side);
                }
            }
        }
    }
    {
        let plan = build_plan(grid, dirs, Side::Rows);
        let order = schedule(&plan, opts);
        let idx = state.line_indices(&plan);
        let u = grid.m() as i64 - m_sum;
        for t in (1 - plan.reach()).min(0)..grid.n() as i64 {
            for o in &order {
                state.stats.visited += 1;
                let (p, q) = (o.point.0 + u, o.point.1 + t);
                if grid.contains(p, q) && !state.done(p, q) {
                    state.resolve(p, q, idx[o.dir], plan.side);
                }
            }
        }
    }
    Ok(state.finish())
}

fn schedule(plan: &TraversalPlan, opts: ReconstructOptions) -> Vec<OrderedPoint> {
    if opts.use_stream_order {
        stream_order(plan)
    } else {
        plan.order.clone()
    }
}

struct Sweep<V> {
    grid: Grid,
    residual: LineSumTable<V>,
    values: Vec<Option<V>>,
    opts: ReconstructOptions,
    trace: Vec<TraceEvent<V>>,
    stats: ReconstructStats,
}

impl<V: Value> Sweep<V> {
    fn new(sums: &LineSumTable<V>, opts: ReconstructOptions) -> Self {
        let grid = sums.grid();
        Sweep {
            grid,
            residual: sums.clone(),
            values: vec![None; grid.area()],
            opts,
            trace: Vec::new(),
            stats: ReconstructStats::default(),
        }
    }

    /// Table index of the direction used for each plan index.
    fn line_indices(&self, plan: &TraversalPlan) -> Vec<usize> {
        let dirs: &DirectionSet = self.residual.directions();
        plan.directions.iter().map(|d| d.and_then(|d| dirs.index_of(d)).unwrap_or(usize::MAX)).collect()
    }

    fn done(&self, p: i64, q: i64) -> bool {
        self.values[self.grid.index(p as usize, q as usize)].is_some()
    }

    fn place_free(&mut self, p: usize, q: usize, v: V) {
        self.residual.subtract_unchecked(p as i64, q as i64, &v);
        if self.opts.trace {
            self.trace.push(TraceEvent { p, q, source: None, side: None, value: v.clone() });
        }
        self.stats.free += 1;
        let i = self.grid.index(p, q);
        self.values[i] = Some(v);
    }

    fn resolve(&mut self, p: i64, q: i64, line: usize, side: Side) {
        let dir = self.residual.lines()[line].dir;
        if self.opts.check_safety {
            self.assert_last_on_line(p, q, dir);
        }
        let v = self.residual.get(line, p, q).clone();
        self.residual.subtract_unchecked(p, q, &v);
        if self.opts.trace {
            self.trace.push(TraceEvent { p: p as usize, q: q as usize, source: Some(dir), side: Some(side), value: v.clone() });
        }
        self.stats.from_lines += 1;
        let i = self.grid.index(p as usize, q as usize);
        self.values[i] = Some(v);
    }

    fn assert_last_on_line(&self, p: i64, q: i64, dir: Direction) {
        for sign in [-1, 1] {
            let (mut x, mut y) = (p + sign * dir.a(), q + sign * dir.b());
            while self.grid.contains(x, y) {
                assert!(self.done(x, y), "({p},{q}) resolved along {dir} before ({x},{y})");
                x += sign * dir.a();
                y += sign * dir.b();
            }
        }
    }

    fn finish(self) -> Reconstruction<V> {
        let grid = self.grid;
        let values = self
            .values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.unwrap_or_else(|| panic!("point {:?} never resolved", grid.point(i))))
            .collect();
        Reconstruction {
            image: GridImage::from_values(grid, values).expect("sized to grid"),
            residual: self.residual,
            trace: self.trace,
            stats: self.stats,
        }
    }
}
