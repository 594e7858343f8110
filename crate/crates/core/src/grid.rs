//! Grids, lattice directions and images.
//!
//! Points are `(p, q)` with `0 <= p < m` (x, rightward) and `0 <= q < n`
//! (y, downward); the origin is the upper-left corner.

use std::cmp::Ordering;
use std::fmt;

use num::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    m: usize,
    n: usize,
}

impl Grid {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(TomoError::EmptyGrid(m, n));
        }
        Ok(Grid { m, n })
    }

    /// Number of columns.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of rows.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn area(&self) -> usize {
        self.m * self.n
    }

    pub fn contains(&self, p: i64, q: i64) -> bool {
        p >= 0 && q >= 0 && (p as usize) < self.m && (q as usize) < self.n
    }

    /// Row-major index of `(p, q)`.
    pub fn index(&self, p: usize, q: usize) -> usize {
        debug_assert!(p < self.m && q < self.n);
        q * self.m + p
    }

    pub fn point(&self, index: usize) -> (usize, usize) {
        (index % self.m, index / self.m)
    }

    pub fn transposed(&self) -> Grid {
        Grid { m: self.n, n: self.m }
    }

    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |q| (0..self.m).map(move |p| (p, q)))
    }
}

/// A primitive lattice direction in canonical form: `a > 0`, or `(a, b) = (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction {
    a: i64,
    b: i64,
}

impl Direction {
    /// Canonicalizes `(a, b)`, identifying it with `(-a, -b)`.
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a == 0 && b == 0 {
            return Err(TomoError::ZeroVector);
        }
        if a.gcd(&b) != 1 {
            return Err(TomoError::NonPrimitive(a, b));
        }
        let (a, b) = if a < 0 || (a == 0 && b < 0) { (-a, -b) } else { (a, b) };
        Ok(Direction { a, b })
    }

    pub const HORIZONTAL: Direction = Direction { a: 1, b: 0 };
    pub const VERTICAL: Direction = Direction { a: 0, b: 1 };

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// Offset `c` of the line `a*y = b*x + c` through `(p, q)`.
    pub fn offset(&self, p: i64, q: i64) -> i64 {
        self.a * q - self.b * p
    }

    /// Smallest and largest offsets of lines meeting the grid.
    pub fn offset_range(&self, grid: Grid) -> (i64, i64) {
        let (m, n) = (grid.m as i64 - 1, grid.n as i64 - 1);
        let corners = [self.offset(0, 0), self.offset(m, 0), self.offset(0, n), self.offset(m, n)];
        (*corners.iter().min().unwrap(), *corners.iter().max().unwrap())
    }

    /// The same direction after swapping the coordinate axes, together with the
    /// sign `s` such that offsets map as `c' = -s * c`.
    pub fn transposed(&self) -> (Direction, i64) {
        let swapped = Direction::new(self.b, self.a).expect("transpose of a primitive direction");
        let sign = if swapped.a == self.b { 1 } else { -1 };
        (swapped, sign)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Compares the slopes `b1/a1` and `b2/a2` of two positive pairs.
fn slope_cmp(x: &(i64, i64), y: &(i64, i64)) -> Ordering {
    (x.1 as i128 * y.0 as i128).cmp(&(y.1 as i128 * x.0 as i128))
}

/// A validated, canonically ordered set of directions.
///
/// Diagonal directions are stored as positive pairs `(a, b)`: the `upper`
/// list stands for directions `(a, -b)` ordered by increasing `b/a`, the
/// `lower` list for directions `(a, b)` ordered by decreasing `b/a`. The axis
/// directions are flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectionSet {
    upper: Vec<(i64, i64)>,
    lower: Vec<(i64, i64)>,
    horizontal: bool,
    vertical: bool,
}

/// Canonicalizes and orders a raw list of directions.
pub fn validate_directions(raw: &[(i64, i64)]) -> Result<DirectionSet> {
    if raw.is_empty() {
        return Err(TomoError::EmptySet);
    }
    let mut seen = std::collections::HashSet::new();
    let mut set = DirectionSet { upper: vec![], lower: vec![], horizontal: false, vertical: false };
    for &(a, b) in raw {
        let d = Direction::new(a, b)?;
        if !seen.insert(d) {
            return Err(TomoError::Duplicate(a, b));
        }
        match (d.a, d.b) {
            (1, 0) => set.horizontal = true,
            (0, 1) => set.vertical = true,
            (a, b) if b < 0 => set.upper.push((a, -b)),
            (a, b) => set.lower.push((a, b)),
        }
    }
    set.upper.sort_by(slope_cmp);
    set.lower.sort_by(|x, y| slope_cmp(y, x));
    Ok(set)
}

impl DirectionSet {
    /// Number of directions `(a, -b)` with `a, b > 0`.
    pub fn k(&self) -> usize {
        self.upper.len()
    }

    /// Number of non-axis directions.
    pub fn d(&self) -> usize {
        self.upper.len() + self.lower.len()
    }

    /// Total number of directions including axis directions.
    pub fn len(&self) -> usize {
        self.d() + self.horizontal as usize + self.vertical as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn upper(&self) -> &[(i64, i64)] {
        &self.upper
    }

    pub fn lower(&self) -> &[(i64, i64)] {
        &self.lower
    }

    pub fn has_horizontal(&self) -> bool {
        self.horizontal
    }

    pub fn has_vertical(&self) -> bool {
        self.vertical
    }

    /// `M`: sum of all `a_h`, plus one if `(1,0)` is present.
    pub fn horizontal_sum(&self) -> i64 {
        self.upper.iter().chain(&self.lower).map(|d| d.0).sum::<i64>() + self.horizontal as i64
    }

    /// `N`: sum of all `|b_h|`, plus one if `(0,1)` is present.
    pub fn vertical_sum(&self) -> i64 {
        self.upper.iter().chain(&self.lower).map(|d| d.1).sum::<i64>() + self.vertical as i64
    }

    /// `N_n`: sum of `|b_h|` over the directions with negative `b`.
    pub fn negative_vertical_sum(&self) -> i64 {
        self.upper.iter().map(|d| d.1).sum()
    }

    /// The diagonal direction with 1-based index `h` (upper list first).
    pub fn diagonal(&self, h: usize) -> Direction {
        assert!(h >= 1 && h <= self.d());
        if h <= self.k() {
            let (a, b) = self.upper[h - 1];
            Direction { a, b: -b }
        } else {
            let (a, b) = self.lower[h - 1 - self.k()];
            Direction { a, b }
        }
    }

    /// All directions in canonical order: upper list, lower list, `(1,0)`, `(0,1)`.
    pub fn directions(&self) -> Vec<Direction> {
        let mut out: Vec<Direction> = (1..=self.d()).map(|h| self.diagonal(h)).collect();
        if self.horizontal {
            out.push(Direction::HORIZONTAL);
        }
        if self.vertical {
            out.push(Direction::VERTICAL);
        }
        out
    }

    /// Position of `dir` in [`DirectionSet::directions`].
    pub fn index_of(&self, dir: Direction) -> Option<usize> {
        self.directions().iter().position(|&d| d == dir)
    }

    /// Canonical directions as raw pairs.
    pub fn raw(&self) -> Vec<(i64, i64)> {
        self.directions().iter().map(|d| (d.a, d.b)).collect()
    }

    /// The direction set after swapping the coordinate axes.
    pub fn transposed(&self) -> DirectionSet {
        let raw: Vec<_> = self.directions().iter().map(|d| (d.b, d.a)).collect();
        validate_directions(&raw).expect("transpose preserves validity")
    }
}

/// `true` iff `M < m` and `N < n`, i.e. nontrivial switching functions exist.
pub fn is_valid(grid: Grid, dirs: &DirectionSet) -> bool {
    dirs.horizontal_sum() < grid.m as i64 && dirs.vertical_sum() < grid.n as i64
}

/// A dense function on a grid, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct GridImage<V> {
    grid: Grid,
    values: Vec<V>,
}

impl<V: Value> GridImage<V> {
    pub fn zeros(grid: Grid) -> Self {
        Self::from_fn(grid, |_, _| V::zero())
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(usize, usize) -> V) -> Self {
        let values = grid.points().map(|(p, q)| f(p, q)).collect();
        GridImage { grid, values }
    }

    /// Builds an image from row-major values.
    pub fn from_values(grid: Grid, values: Vec<V>) -> Result<Self> {
        if values.len() != grid.area() {
            return Err(TomoError::ImageSize { m: grid.m, n: grid.n, got: values.len() });
        }
        Ok(GridImage { grid, values })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn get(&self, p: usize, q: usize) -> &V {
        &self.values[self.grid.index(p, q)]
    }

    pub fn set(&mut self, p: usize, q: usize, v: V) {
        let i = self.grid.index(p, q);
        self.values[i] = v;
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn into_values(self) -> Vec<V> {
        self.values
    }

    pub fn map<W: Value>(&self, mut f: impl FnMut(&V) -> W) -> GridImage<W> {
        GridImage { grid: self.grid, values: self.values.iter().map(&mut f).collect() }
    }

    pub fn transposed(&self) -> Self {
        let grid = self.grid.transposed();
        Self::from_fn(grid, |p, q| self.get(q, p).clone())
    }

    /// Pointwise difference `self - other`.
    pub fn minus(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(TomoError::Mismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x.minus(y)).collect();
        Ok(GridImage { grid: self.grid, values })
    }

    /// Pointwise sum `self + other`.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(TomoError::Mismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x.plus(y)).collect();
        Ok(GridImage { grid: self.grid, values })
    }
}
