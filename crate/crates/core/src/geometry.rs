//! Corner regions and traversal schedules.
//!
//! The values in a corner of the grid are forced by the line sums: walking
//! the points of a corner region in order of increasing weight, each point is
//! the last unresolved point on one of its lines. A [`TraversalPlan`] records,
//! for every row (or column) just inside the border chain, the starting point,
//! its weight and the direction whose line resolves it. Shifting those points
//! one step at a time sweeps the whole grid.
//!
//! Two sides exist. [`Side::Columns`] combines the upper-left and lower-left
//! corners and sweeps left to right; [`Side::Rows`] combines the upper-left
//! and upper-right corners (after the axes swap roles) and sweeps downwards.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use num::Integer;
use serde::Serialize;

use crate::grid::{Direction, DirectionSet, Grid};

/// Vertices of the staircase bounding the left corner regions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BorderChain {
    /// `(P_h, Q_h)` for `h = 0..=k`.
    pub upper: Vec<(i64, i64)>,
    /// `(P*_k, Q*_k)`.
    pub lower_anchor: (i64, i64),
    /// `(P_h, Q_h)` for `h = k+1..=d`.
    pub lower: Vec<(i64, i64)>,
}

impl BorderChain {
    /// `Q_k`, the first row below the upper-left region.
    pub fn upper_end(&self) -> (i64, i64) {
        *self.upper.last().expect("chain always has P_0")
    }

    /// `(P_d, Q_d)`: last lower point, or `(P_k, Q_k)` if there are no lower directions.
    pub fn last(&self) -> (i64, i64) {
        self.lower.last().copied().unwrap_or_else(|| self.upper_end())
    }

    /// `(P_h, Q_h)` by 1-based index into the lower list, with `h = k` meaning the anchor.
    fn lower_prev(&self, idx: usize) -> (i64, i64) {
        if idx == 0 {
            self.lower_anchor
        } else {
            self.lower[idx - 1]
        }
    }
}

/// Border points of the upper-left and lower-left regions.
pub fn border_points(grid: Grid, dirs: &DirectionSet) -> BorderChain {
    let p0: i64 = dirs.upper().iter().map(|d| d.0).sum();
    let mut upper = vec![(p0, 0)];
    for &(a, b) in dirs.upper() {
        let (p, q) = *upper.last().unwrap();
        upper.push((p - a, q + b));
    }
    let lower_b: i64 = dirs.lower().iter().map(|d| d.1).sum();
    let lower_anchor = (0, grid.n() as i64 - 1 - lower_b);
    let mut lower = Vec::with_capacity(dirs.lower().len());
    let mut prev = lower_anchor;
    for &(a, b) in dirs.lower() {
        prev = (prev.0 + a, prev.1 + b);
        lower.push(prev);
    }
    BorderChain { upper, lower_anchor, lower }
}

/// An exact, unreduced fraction compared by cross-multiplication.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Weight {
    pub num: i64,
    pub den: i64,
}

impl Weight {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "weight denominator must be positive");
        Weight { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Weight {}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Weight of `(p, q)` with respect to the upper-left region:
/// `min_h (b_h p + a_h q) / (b_h P_h + a_h Q_h)`. `None` without upper directions.
pub fn weight(p: i64, q: i64, chain: &BorderChain, dirs: &DirectionSet) -> Option<Weight> {
    dirs.upper()
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let (ph, qh) = chain.upper[i + 1];
            Weight::new(b * p + a * q, b * ph + a * qh)
        })
        .min()
}

/// Indices `h` (1-based) attaining the minimum in [`weight`].
pub fn minimizing_directions(p: i64, q: i64, chain: &BorderChain, dirs: &DirectionSet) -> Vec<usize> {
    let Some(w) = weight(p, q, chain, dirs) else { return vec![] };
    dirs.upper()
        .iter()
        .enumerate()
        .filter(|&(i, &(a, b))| {
            let (ph, qh) = chain.upper[i + 1];
            Weight::new(b * p + a * q, b * ph + a * qh) == w
        })
        .map(|(i, _)| i + 1)
        .collect()
}

/// `(x, y)` with `a x + b y = gcd(a, b)`, from the recursive extended Euclidean algorithm.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64) {
    if b == 0 {
        (1, 0)
    } else {
        let (x, y) = extended_gcd(b, a.rem_euclid(b));
        (y, x - a.div_euclid(b) * y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// Upper-left and lower-left regions; one entry per row. Sweeps columns.
    Columns,
    /// Upper-left and upper-right regions after swapping axis roles; one entry
    /// per column of an `M`-wide grid. Sweeps rows.
    Rows,
}

/// A starting point just inside the border chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlanEntry {
    /// Row (for [`Side::Columns`]) or column (for [`Side::Rows`]) index `h`.
    pub line: i64,
    /// `r_h`, the coordinate along the line.
    pub start: i64,
    pub weight: Weight,
    /// 1-based diagonal index `s(h)` into [`TraversalPlan::direction`].
    pub dir: usize,
}

impl PlanEntry {
    /// Grid point `(p, q)` of the entry on the given side.
    pub fn point(&self, side: Side) -> (i64, i64) {
        match side {
            Side::Columns => (self.start, self.line),
            Side::Rows => (self.line, self.start),
        }
    }
}

/// One segment of the border chain and the rows/columns it serves.
///
/// The weight numerator of an entry is `alpha * r + beta * h + const`, with
/// `alpha * bezout.0 + beta * bezout.1 = 1` and `range.1 - range.0 + 1 = |alpha|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub dir: usize,
    pub range: (i64, i64),
    pub alpha: i64,
    pub beta: i64,
    pub bezout: (i64, i64),
    /// Index into `entries` of the minimal-weight entry.
    pub seed: usize,
}

/// A point of the traversal order with the direction used to resolve it
/// (`0` for the axis direction).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrderedPoint {
    pub point: (i64, i64),
    pub dir: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraversalPlan {
    pub side: Side,
    /// Border chain as used by this side (reordered and mirrored for [`Side::Rows`]).
    pub chain: BorderChain,
    /// `directions[s]` is the direction with index `s`; `directions[0]` is the
    /// axis direction if present.
    pub directions: Vec<Option<Direction>>,
    /// Positive `(a_h, b_h)` in this side's index order (entry 0 unused).
    pub pairs: Vec<(i64, i64)>,
    pub entries: Vec<PlanEntry>,
    pub segments: Vec<Segment>,
    /// Point resolved by the axis direction, appended after the sorted entries.
    pub axis_point: Option<(i64, i64)>,
    /// Entries by increasing weight (ties by increasing `h`), then the axis point.
    pub order: Vec<OrderedPoint>,
}

impl TraversalPlan {
    pub fn direction(&self, s: usize) -> Option<Direction> {
        self.directions[s]
    }

    /// Largest extent of the chain along the sweep axis: `max(P_0, P_d)` for
    /// columns, `max(Q_0, Q_d)` for rows.
    pub fn reach(&self) -> i64 {
        let first = self.chain.upper[0];
        let last = self.chain.last();
        match self.side {
            Side::Columns => first.0.max(last.0),
            Side::Rows => first.1.max(last.1),
        }
    }

    /// `h -> r_h`.
    pub fn starts(&self) -> BTreeMap<i64, i64> {
        self.entries.iter().map(|e| (e.line, e.start)).collect()
    }

    /// `h -> w(r_h, h)`.
    pub fn weights(&self) -> BTreeMap<i64, Weight> {
        self.entries.iter().map(|e| (e.line, e.weight)).collect()
    }

    /// `h -> s(h)`, including the axis line.
    pub fn assignment(&self) -> BTreeMap<i64, usize> {
        let mut s: BTreeMap<i64, usize> = self.entries.iter().map(|e| (e.line, e.dir)).collect();
        if let Some(pt) = self.axis_point {
            let h = match self.side {
                Side::Columns => pt.1,
                Side::Rows => pt.0,
            };
            s.insert(h, 0);
        }
        s
    }

    pub fn order_points(&self) -> Vec<(i64, i64)> {
        self.order.iter().map(|o| o.point).collect()
    }

    /// JSON-friendly snapshot.
    pub fn dump(&self) -> PlanDump {
        PlanDump {
            side: self.side,
            directions: self
                .directions
                .iter()
                .map(|d| d.map(|d| [d.a(), d.b()]))
                .collect(),
            border: self.chain.clone(),
            starts: self.starts(),
            weights: self.weights().into_iter().map(|(h, w)| (h, w.to_string())).collect(),
            s: self.assignment(),
            order: self.order.iter().map(|o| [o.point.0, o.point.1]).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanDump {
    pub side: Side,
    pub directions: Vec<Option<[i64; 2]>>,
    pub border: BorderChain,
    pub starts: BTreeMap<i64, i64>,
    pub weights: BTreeMap<i64, String>,
    pub s: BTreeMap<i64, usize>,
    pub order: Vec<[i64; 2]>,
}

fn sort_entries(entries: &[PlanEntry], side: Side, axis_point: Option<(i64, i64)>) -> Vec<OrderedPoint> {
    let mut idx: Vec<usize> = (0..entries.len()).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (&entries[i], &entries[j]);
        a.weight.cmp(&b.weight).then(a.line.cmp(&b.line))
    });
    let mut order: Vec<OrderedPoint> =
        idx.into_iter().map(|i| OrderedPoint { point: entries[i].point(side), dir: entries[i].dir }).collect();
    if let Some(point) = axis_point {
        order.push(OrderedPoint { point, dir: 0 });
    }
    order
}

struct PlanBuilder {
    entries: Vec<PlanEntry>,
    segments: Vec<Segment>,
}

impl PlanBuilder {
    /// Adds the entries of one segment. `start_of(h)` gives `r_h`, `num_of(r, h)`
    /// the weight numerator.
    #[allow(clippy::too_many_arguments)]
    fn segment(
        &mut self,
        dir: usize,
        range: (i64, i64),
        alpha: i64,
        beta: i64,
        bezout: (i64, i64),
        den: i64,
        start_of: impl Fn(i64) -> i64,
        num_of: impl Fn(i64, i64) -> i64,
    ) {
        let first = self.entries.len();
        for h in range.0..=range.1 {
            let r = start_of(h);
            self.entries.push(PlanEntry { line: h, start: r, weight: Weight::new(num_of(r, h), den), dir });
        }
        if self.entries.len() > first {
            let seed = (first..self.entries.len())
                .min_by(|&i, &j| {
                    let (a, b) = (&self.entries[i], &self.entries[j]);
                    a.weight.cmp(&b.weight).then(a.line.cmp(&b.line))
                })
                .unwrap();
            debug_assert_eq!(alpha * bezout.0 + beta * bezout.1, 1);
            self.segments.push(Segment { dir, range, alpha, beta, bezout, seed });
        }
    }
}

/// `ceil((num - den) / den)`, i.e. `ceil(num/den - 1)`.
fn ceil_minus_one(num: i64, den: i64) -> i64 {
    Integer::div_ceil(&(num - den), &den)
}

/// Starting points, weights, direction assignment and order for one side.
///
/// For [`Side::Columns`] this is the left-to-right schedule of an `m x n`
/// grid. For [`Side::Rows`] the schedule covers an `M`-wide grid of `n` rows
/// where `M` is the horizontal sum of `dirs`.
pub fn build_plan(grid: Grid, dirs: &DirectionSet, side: Side) -> TraversalPlan {
    match side {
        Side::Columns => build_columns(grid, dirs),
        Side::Rows => build_rows(grid, dirs),
    }
}

fn build_columns(grid: Grid, dirs: &DirectionSet) -> TraversalPlan {
    let n = grid.n() as i64;
    let k = dirs.k();
    let chain = border_points(grid, dirs);
    let mut b = PlanBuilder { entries: vec![], segments: vec![] };

    for (i, &(a, bb)) in dirs.upper().iter().enumerate() {
        let h_idx = i + 1;
        let (p0, q0) = chain.upper[i];
        let (p1, q1) = chain.upper[i + 1];
        let (t, u) = extended_gcd(bb, a);
        b.segment(
            h_idx,
            (q0, q1 - 1),
            bb,
            a,
            (t, u),
            bb * p1 + a * q1,
            |h| ceil_minus_one((q1 - h) * p0 + (h - q0) * p1, q1 - q0),
            |r, h| bb * r + a * h,
        );
    }
    for (i, &(a, bb)) in dirs.lower().iter().enumerate() {
        let h_idx = k + 1 + i;
        let (p0, q0) = chain.lower_prev(i);
        let (p1, q1) = chain.lower[i];
        let (x, y) = extended_gcd(a, bb);
        b.segment(
            h_idx,
            (q0 + 1, q1),
            bb,
            -a,
            (y, -x),
            bb * p1 + a * (n - 1 - q1),
            |h| ceil_minus_one((q1 - h) * p0 + (h - q0) * p1, q1 - q0),
            |r, h| bb * r + a * (n - 1 - h),
        );
    }

    let axis_point = dirs.has_vertical().then_some((0, chain.lower_anchor.1));
    let mut directions = vec![dirs.has_vertical().then_some(Direction::VERTICAL)];
    directions.extend((1..=dirs.d()).map(|h| Some(dirs.diagonal(h))));
    let mut pairs = vec![(0, 0)];
    pairs.extend(dirs.upper().iter().chain(dirs.lower()).copied());
    let order = sort_entries(&b.entries, Side::Columns, axis_point);
    TraversalPlan {
        side: Side::Columns,
        chain,
        directions,
        pairs,
        entries: b.entries,
        segments: b.segments,
        axis_point,
        order,
    }
}

fn build_rows(grid: Grid, dirs: &DirectionSet) -> TraversalPlan {
    let n = grid.n() as i64;
    let width = dirs.horizontal_sum();
    let k = dirs.k();
    let d = dirs.d();
    let base = border_points(grid, dirs);

    // Reverse both slope chains; mirror the lower-left chain into the upper-right corner.
    let upper: Vec<_> = base.upper.iter().rev().copied().collect();
    let mut mirrored: Vec<(i64, i64)> = std::iter::once(base.lower_anchor)
        .chain(base.lower.iter().copied())
        .rev()
        .map(|(p, q)| (width - p - 1, n - q - 1))
        .collect();
    let lower_anchor = mirrored.remove(0);
    let chain = BorderChain { upper, lower_anchor, lower: mirrored };

    let mut pairs = vec![(0, 0)];
    pairs.extend(dirs.upper().iter().rev().copied());
    pairs.extend(dirs.lower().iter().rev().copied());
    let mut directions = vec![dirs.has_horizontal().then_some(Direction::HORIZONTAL)];
    directions.extend((1..=k).rev().map(|h| Some(dirs.diagonal(h))));
    directions.extend((k + 1..=d).rev().map(|h| Some(dirs.diagonal(h))));

    let mut b = PlanBuilder { entries: vec![], segments: vec![] };
    for (h_idx, &(a, bb)) in pairs.iter().enumerate().take(k + 1).skip(1) {
        let (p0, q0) = chain.upper[h_idx - 1];
        let (p1, q1) = chain.upper[h_idx];
        b.segment(
            h_idx,
            (p0, p1 - 1),
            a,
            bb,
            extended_gcd(a, bb),
            a * q1 + bb * p1,
            |h| ceil_minus_one((p1 - h) * q0 + (h - p0) * q1, p1 - p0),
            |r, h| a * r + bb * h,
        );
    }
    for (h_idx, &(a, bb)) in pairs.iter().enumerate().skip(k + 1) {
        let (p0, q0) = chain.lower_prev(h_idx - k - 1);
        let (p1, q1) = chain.lower[h_idx - k - 1];
        let (x, y) = extended_gcd(bb, a);
        b.segment(
            h_idx,
            (p0 + 1, p1),
            a,
            -bb,
            (y, -x),
            a * q1 + bb * (width - 1 - p1),
            |h| ceil_minus_one((p1 - h) * q0 + (h - p0) * q1, p1 - p0),
            |r, h| a * r + bb * (width - 1 - h),
        );
    }

    let axis_point = dirs.has_horizontal().then_some((chain.lower_anchor.0, 0));
    let order = sort_entries(&b.entries, Side::Rows, axis_point);
    TraversalPlan {
        side: Side::Rows,
        chain,
        directions,
        pairs,
        entries: b.entries,
        segments: b.segments,
        axis_point,
        order,
    }
}

/// One vector of the streaming procedure:
/// `(r, h, numerator, denominator, R, S, T, U)`.
pub type StreamVector = [i64; 8];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamTrace {
    /// Seed vectors, one per segment, in segment order.
    pub initial: Vec<StreamVector>,
    /// State of the line before each step: `(r, h, numerator, denominator)`
    /// by increasing weight.
    pub rows: Vec<Vec<[i64; 4]>>,
    pub order: Vec<OrderedPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct StreamState {
    weight: Weight,
    line: i64,
    start: i64,
    segment: usize,
}

impl Ord for StreamState {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight.cmp(&other.weight).then(self.line.cmp(&other.line))
    }
}

impl PartialOrd for StreamState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The traversal order produced without sorting all entries: one vector per
/// direction starts at its minimal-weight entry and steps to the entry whose
/// weight numerator is one larger, using a Bezout pair of the segment.
pub fn stream_order(plan: &TraversalPlan) -> Vec<OrderedPoint> {
    stream(plan, false).order
}

/// [`stream_order`] with the seed vectors and every intermediate state.
pub fn stream_trace(plan: &TraversalPlan) -> StreamTrace {
    stream(plan, true)
}

fn stream(plan: &TraversalPlan, record: bool) -> StreamTrace {
    let side = plan.side;
    let mut heap = BinaryHeap::with_capacity(plan.segments.len());
    let mut initial = Vec::new();
    for (i, seg) in plan.segments.iter().enumerate() {
        let e = plan.entries[seg.seed];
        heap.push(Reverse(StreamState { weight: e.weight, line: e.line, start: e.start, segment: i }));
        if record {
            initial.push([
                e.start,
                e.line,
                e.weight.num,
                e.weight.den,
                seg.range.0,
                seg.range.1,
                seg.bezout.0,
                seg.bezout.1,
            ]);
        }
    }
    let mut rows = Vec::new();
    let mut order = Vec::with_capacity(plan.entries.len() + 1);
    while let Some(Reverse(state)) = heap.pop() {
        if record {
            let mut row = vec![[state.start, state.line, state.weight.num, state.weight.den]];
            let mut rest: Vec<_> = heap.iter().map(|r| r.0).collect();
            rest.sort();
            row.extend(rest.iter().map(|s| [s.start, s.line, s.weight.num, s.weight.den]));
            rows.push(row);
        }
        let seg = &plan.segments[state.segment];
        let entry = PlanEntry { line: state.line, start: state.start, weight: state.weight, dir: seg.dir };
        order.push(OrderedPoint { point: entry.point(side), dir: seg.dir });
        let num = state.weight.num + 1;
        if num >= state.weight.den {
            continue;
        }
        let (t, u) = seg.bezout;
        let len = seg.range.1 - seg.range.0 + 1;
        let line = seg.range.0 + (state.line + u - seg.range.0).rem_euclid(len);
        let j = (line - state.line - u) / seg.alpha;
        let start = state.start + t - j * seg.beta;
        debug_assert_eq!(seg.alpha * (start - state.start) + seg.beta * (line - state.line), 1);
        heap.push(Reverse(StreamState {
            weight: Weight::new(num, state.weight.den),
            line,
            start,
            segment: state.segment,
        }));
    }
    if let Some(point) = plan.axis_point {
        order.push(OrderedPoint { point, dir: 0 });
    }
    StreamTrace { initial, rows, order }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::validate_directions;

    fn worked_example() -> (Grid, DirectionSet) {
        let ds = validate_directions(&[(0, 1), (1, 0), (1, 1), (-1, 1), (-3, -1), (-1, -3), (5, -1), (7, 5)]).unwrap();
        (Grid::new(21, 16).unwrap(), ds)
    }

    fn three_dirs() -> DirectionSet {
        validate_directions(&[(3, -2), (4, -3), (1, -2)]).unwrap()
    }

    #[test]
    fn border_points_of_three_direction() {
        let chain = border_points(Grid::new(10, 8).unwrap(), &three_dirs());
        assert_eq!(chain.upper, vec![(8, 0), (5, 2), (1, 5), (0, 7)]);
        assert!(chain.lower.is_empty());
    }

    #[test]
    fn border_points_of_worked_example() {
        let (grid, ds) = worked_example();
        let chain = border_points(grid, &ds);
        assert_eq!(chain.upper, vec![(6, 0), (1, 1), (0, 2)]);
        assert_eq!(chain.lower_anchor, (0, 5));
        assert_eq!(chain.lower, vec![(1, 8), (2, 9), (9, 14), (12, 15)]);
        assert_eq!(chain.upper_end().1, ds.negative_vertical_sum());
    }

    #[test]
    fn border_points_single_direction() {
        let ds = validate_directions(&[(1, -1)]).unwrap();
        let chain = border_points(Grid::new(3, 3).unwrap(), &ds);
        assert_eq!(chain.upper, vec![(1, 0), (0, 1)]);
    }

    #[test]
    fn weights_at_known_points() {
        let (grid, ds) = worked_example();
        let chain = border_points(grid, &ds);
        assert_eq!(weight(5, 0, &chain, &ds), Some(Weight::new(5, 6)));
        assert_eq!(weight(0, 1, &chain, &ds), Some(Weight::new(1, 2)));
        assert_eq!(weight(0, 0, &chain, &ds).unwrap().num, 0);
        let three = three_dirs();
        let chain = border_points(Grid::new(10, 8).unwrap(), &three);
        assert!(weight(8, 0, &chain, &three).unwrap().is_one());
        let none = validate_directions(&[(1, 1)]).unwrap();
        assert_eq!(weight(0, 0, &border_points(grid, &none), &none), None);
    }

    #[test]
    fn weight_one_exactly_on_border() {
        let ds = three_dirs();
        let grid = Grid::new(14, 12).unwrap();
        let chain = border_points(grid, &ds);
        for (p, q) in grid.points() {
            let w = weight(p as i64, q as i64, &chain, &ds).unwrap();
            let on_border = chain.upper.contains(&(p as i64, q as i64));
            assert_eq!(w.is_one(), on_border, "({p},{q}) weight {w}");
        }
    }

    #[test]
    fn minimizer_lies_in_its_triangle() {
        for raw in [vec![(3, -2), (4, -3), (1, -2)], vec![(5, -1), (1, -1)], vec![(2, -1), (3, -2), (1, -1), (1, -3)]] {
            let ds = validate_directions(&raw).unwrap();
            let grid = Grid::new(16, 16).unwrap();
            let chain = border_points(grid, &ds);
            for (p, q) in grid.points() {
                let (p, q) = (p as i64, q as i64);
                if p == 0 && q == 0 {
                    continue;
                }
                let expected: Vec<usize> = (1..=ds.k())
                    .filter(|&h| {
                        let (p0, q0) = chain.upper[h - 1];
                        let (p1, q1) = chain.upper[h];
                        q0 * p <= q * p0 && q * p1 <= q1 * p
                    })
                    .collect();
                assert_eq!(minimizing_directions(p, q, &chain, &ds), expected, "({p},{q}) for {raw:?}");
            }
        }
    }

    #[test]
    fn three_direction_12x7_rightmost_order() {
        let plan = build_plan(Grid::new(12, 7).unwrap(), &three_dirs(), Side::Columns);
        assert_eq!(plan.order_points(), vec![(0, 5), (0, 6), (4, 2), (7, 0), (3, 3), (6, 1), (2, 4)]);
        let s = plan.assignment();
        assert_eq!(s.values().copied().collect::<Vec<_>>(), vec![1, 1, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn worked_example_column_plan() {
        let (grid, ds) = worked_example();
        let plan = build_plan(grid, &ds, Side::Columns);
        let starts: Vec<_> = plan.starts().into_iter().collect();
        assert_eq!(
            starts,
            vec![(0, 5), (1, 0), (6, 0), (7, 0), (8, 0), (9, 1), (10, 3), (11, 4), (12, 6), (13, 7), (14, 8), (15, 11)]
        );
        let w = plan.weights();
        let got: Vec<String> = w.values().map(|w| format!("{:.3}", w.to_f64())).collect();
        assert_eq!(got, ["0.833", "0.500", "0.900", "0.800", "0.700", "0.875", "0.962", "0.923", "0.981", "0.942", "0.904", "0.917"]);
        let s: Vec<_> = plan.assignment().into_iter().collect();
        assert_eq!(
            s,
            vec![(0, 1), (1, 2), (5, 0), (6, 3), (7, 3), (8, 3), (9, 4), (10, 5), (11, 5), (12, 5), (13, 5), (14, 5), (15, 6)]
        );
        assert_eq!(
            plan.order_points(),
            vec![(0, 1), (0, 8), (0, 7), (5, 0), (1, 9), (0, 6), (8, 14), (11, 15), (4, 11), (7, 13), (3, 10), (6, 12), (0, 5)]
        );
    }

    #[test]
    fn worked_example_row_plan() {
        let (grid, ds) = worked_example();
        let plan = build_plan(grid, &ds, Side::Rows);
        assert_eq!(plan.direction(0), Some(Direction::HORIZONTAL));
        assert_eq!(&plan.pairs[1..], &[(1, 1), (5, 1), (3, 1), (7, 5), (1, 1), (1, 3)]);
        assert_eq!(plan.chain.upper, vec![(0, 2), (1, 1), (6, 0)]);
        assert_eq!(plan.chain.lower_anchor, (6, 0));
        assert_eq!(plan.chain.lower, vec![(9, 1), (16, 6), (17, 7), (18, 10)]);
        let starts: Vec<_> = plan.starts().into_values().collect();
        assert_eq!(starts, vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 3, 3, 4, 5, 5, 6, 9]);
        let got: Vec<String> = plan.weights().values().map(|w| format!("{:.3}", w.to_f64())).collect();
        assert_eq!(
            got,
            [
                "0.500", "0.167", "0.333", "0.500", "0.667", "0.833", "0.917", "0.833", "0.750", "0.904", "0.942",
                "0.981", "0.885", "0.923", "0.962", "0.865", "0.875", "0.900"
            ]
        );
        let s: Vec<_> = plan.assignment().into_values().collect();
        assert_eq!(s, vec![1, 2, 2, 2, 2, 2, 0, 3, 3, 3, 4, 4, 4, 4, 4, 4, 4, 5, 6]);
        assert_eq!(
            plan.order_points(),
            vec![
                (1, 0), (2, 0), (0, 1), (3, 0), (4, 0), (9, 0), (5, 0), (8, 0), (16, 5), (17, 6), (13, 3), (18, 9),
                (10, 1), (7, 0), (14, 4), (11, 2), (15, 5), (12, 3), (6, 0)
            ]
        );
    }

    #[test]
    fn bezout_pairs() {
        for a in 1..30 {
            for b in 1..30 {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let (x, y) = extended_gcd(a, b);
                assert_eq!(a * x + b * y, 1);
            }
        }
    }

    #[test]
    fn worked_example_stream_table() {
        let (grid, ds) = worked_example();
        let plan = build_plan(grid, &ds, Side::Columns);
        let trace = stream_trace(&plan);
        let mut initial = trace.initial.clone();
        initial.sort_by(|x, y| Weight::new(x[2], x[3]).cmp(&Weight::new(y[2], y[3])));
        assert_eq!(
            initial,
            vec![
                [0, 1, 1, 2, 1, 1, 0, 1],
                [0, 8, 7, 10, 6, 8, 0, -1],
                [5, 0, 5, 6, 0, 0, 1, 0],
                [1, 9, 7, 8, 9, 9, 1, 0],
                [8, 14, 47, 52, 10, 14, 3, 2],
                [11, 15, 11, 12, 15, 15, 1, 0],
            ]
        );
        let firsts: Vec<[i64; 4]> = trace.rows.iter().map(|r| r[0]).collect();
        assert_eq!(
            firsts,
            vec![
                [0, 1, 1, 2], [0, 8, 7, 10], [0, 7, 8, 10], [5, 0, 5, 6], [1, 9, 7, 8], [0, 6, 9, 10],
                [8, 14, 47, 52], [11, 15, 11, 12], [4, 11, 48, 52], [7, 13, 49, 52], [3, 10, 50, 52], [6, 12, 51, 52]
            ]
        );
        assert_eq!(trace.rows[7], vec![[11, 15, 11, 12], [4, 11, 48, 52]]);
        assert_eq!(trace.order, plan.order);
    }
}
