//! Switching polynomials.
//!
//! A function `f` on the grid corresponds to the polynomial
//! `sum f(i, j) x^i y^j`. Each direction contributes a two-term factor and
//! the product of all factors is the primitive switching polynomial, whose
//! shifts `x^i y^j G` for `0 <= i < m - M`, `0 <= j < n - N` form a basis of
//! all switching functions on a valid grid.

use std::collections::BTreeMap;

use crate::error::{Result, TomoError};
use crate::grid::{is_valid, Direction, DirectionSet, Grid, GridImage};
use crate::projector::project;
use crate::value::Value;

/// Sparse bivariate polynomial with integer coefficients, keyed by `(i, j)`
/// for the term `x^i y^j`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GhostPolynomial {
    coeffs: BTreeMap<(i64, i64), i64>,
}

impl GhostPolynomial {
    pub fn one() -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0, 0), 1);
        GhostPolynomial { coeffs }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), i64)>) -> Self {
        let mut p = GhostPolynomial::default();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    fn add_term(&mut self, key: (i64, i64), c: i64) {
        let e = self.coeffs.entry(key).or_insert(0);
        *e = e.checked_add(c).expect("ghost coefficient overflow");
        if *e == 0 {
            self.coeffs.remove(&key);
        }
    }

    pub fn coeff(&self, i: i64, j: i64) -> i64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero terms in lexicographic order (x-exponent major).
    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), i64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree_x(&self) -> i64 {
        self.coeffs.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> i64 {
        self.coeffs.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Lexicographically lowest term, x-exponent major.
    pub fn lowest_term(&self) -> Option<((i64, i64), i64)> {
        self.coeffs.iter().next().map(|(&k, &c)| (k, c))
    }

    /// Product by sparse convolution.
    pub fn mul(&self, other: &GhostPolynomial) -> GhostPolynomial {
        let mut out = GhostPolynomial::default();
        for (&(i1, j1), &c1) in &self.coeffs {
            for (&(i2, j2), &c2) in &other.coeffs {
                out.add_term((i1 + i2, j1 + j2), c1.checked_mul(c2).expect("ghost coefficient overflow"));
            }
        }
        out
    }

    /// Places the polynomial on `grid` shifted by `(di, dj)`; terms falling
    /// outside the grid are an error.
    pub fn to_image<V: Value>(&self, grid: Grid, di: i64, dj: i64) -> Result<GridImage<V>> {
        let mut img = GridImage::zeros(grid);
        for ((i, j), c) in self.terms() {
            let (p, q) = (i + di, j + dj);
            if !grid.contains(p, q) {
                return Err(TomoError::PointOutOfGrid(p, q));
            }
            img.set(p as usize, q as usize, V::from_i64(c));
        }
        Ok(img)
    }
}

/// The two-term factor of a direction: `x^a y^b - 1`, `x^a - y^-b`, `x - 1` or `y - 1`.
pub fn factor_polynomial(d: Direction) -> GhostPolynomial {
    let (a, b) = (d.a(), d.b());
    let terms = if b > 0 && a > 0 {
        [((a, b), 1), ((0, 0), -1)]
    } else if b < 0 {
        [((a, 0), 1), ((0, -b), -1)]
    } else if b == 0 {
        [((1, 0), 1), ((0, 0), -1)]
    } else {
        [((0, 1), 1), ((0, 0), -1)]
    };
    GhostPolynomial::from_terms(terms)
}

/// Product of the factors of every direction in the set.
pub fn primitive_ghost(dirs: &DirectionSet) -> GhostPolynomial {
    let g = dirs.directions().into_iter().fold(GhostPolynomial::one(), |acc, d| acc.mul(&factor_polynomial(d)));
    debug_assert!(g.terms().all(|((i, j), _)| i >= 0 && j >= 0));
    debug_assert_eq!(g.lowest_term().map(|t| t.0), Some((0, dirs.negative_vertical_sum())));
    g
}

/// The `(m - M) x (n - N)` block of points whose values may be chosen freely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeBlock {
    /// Columns `0..width`.
    pub width: usize,
    /// First row, `N_n`.
    pub row_offset: usize,
    /// Rows `row_offset..row_offset + height`.
    pub height: usize,
}

impl FreeBlock {
    pub fn contains(&self, p: usize, q: usize) -> bool {
        p < self.width && q >= self.row_offset && q < self.row_offset + self.height
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in coefficient order: column-major, i.e. `(0, Q), (0, Q+1), ..., (1, Q), ...`.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.width).flat_map(move |p| (self.row_offset..self.row_offset + self.height).map(move |q| (p, q)))
    }
}

/// Union of all switching domains of `(grid, dirs)`, plus the free block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingDomainMap {
    pub grid: Grid,
    /// Row-major; `true` where some switching function is nonzero.
    pub mask: Vec<bool>,
    pub free_block: FreeBlock,
}

impl SwitchingDomainMap {
    pub fn in_domain(&self, p: usize, q: usize) -> bool {
        self.mask[self.grid.index(p, q)]
    }

    pub fn domain_size(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }
}

/// Free block of a valid instance; empty when nonvalid.
pub fn free_block(grid: Grid, dirs: &DirectionSet) -> FreeBlock {
    if !is_valid(grid, dirs) {
        return FreeBlock { width: 0, row_offset: 0, height: 0 };
    }
    FreeBlock {
        width: grid.m() - dirs.horizontal_sum() as usize,
        row_offset: dirs.negative_vertical_sum() as usize,
        height: grid.n() - dirs.vertical_sum() as usize,
    }
}

pub fn switching_domain_map(grid: Grid, dirs: &DirectionSet) -> SwitchingDomainMap {
    let block = free_block(grid, dirs);
    let mut mask = vec![false; grid.area()];
    if !block.is_empty() {
        let g = primitive_ghost(dirs);
        for ((x, y), _) in g.terms() {
            for i in 0..block.width {
                for j in 0..block.height {
                    mask[grid.index(x as usize + i, y as usize + j)] = true;
                }
            }
        }
    }
    SwitchingDomainMap { grid, mask, free_block: block }
}

/// Coefficients `c_{i,j}` with `g = f_ref + sum c_{i,j} G_{i,j}`.
///
/// Sweeps the free block column by column; the point `(i, j + N_n)` is the
/// lowest term of `G_{i,j}` and is touched by no later shift, so each point
/// determines exactly one new coefficient.
pub fn recover_coefficients<V: Value>(
    g: &GridImage<V>,
    f_ref: &GridImage<V>,
    dirs: &DirectionSet,
) -> Result<BTreeMap<(usize, usize), V>> {
    if g.grid() != f_ref.grid() {
        return Err(TomoError::Mismatch);
    }
    if project(g, dirs) != project(f_ref, dirs) {
        return Err(TomoError::InconsistentLineSums);
    }
    let grid = g.grid();
    let block = free_block(grid, dirs);
    let mut out = BTreeMap::new();
    if block.is_empty() {
        return Ok(out);
    }
    let ghost = primitive_ghost(dirs);
    let (_, lead) = ghost.lowest_term().expect("nonzero ghost");
    debug_assert!(lead == 1 || lead == -1);
    let mut rest = g.minus(f_ref)?;
    let n_neg = block.row_offset;
    for (i, q) in block.points() {
        let j = q - n_neg;
        let c = rest.get(i, q).times(lead);
        if !c.is_zero() {
            for ((x, y), coef) in ghost.terms() {
                let (p, q) = (x as usize + i, y as usize + j);
                let mut v = rest.get(p, q).clone();
                v.minus_assign(&c.times(coef));
                rest.set(p, q, v);
            }
        }
        out.insert((i, j), c);
    }
    debug_assert!(rest.values().iter().all(Value::is_zero));
    Ok(out)
}

/// `sum c_{i,j} G_{i,j}` as an image.
pub fn ghost_combination<V: Value>(
    grid: Grid,
    dirs: &DirectionSet,
    coeffs: &BTreeMap<(usize, usize), V>,
) -> Result<GridImage<V>> {
    let block = free_block(grid, dirs);
    let ghost = primitive_ghost(dirs);
    let mut img = GridImage::<V>::zeros(grid);
    for (&(i, j), c) in coeffs {
        if i >= block.width || j >= block.height {
            return Err(TomoError::FreeValueOutsideBlock(i, j + block.row_offset));
        }
        for ((x, y), coef) in ghost.terms() {
            let (p, q) = (x as usize + i, y as usize + j);
            let mut v = img.get(p, q).clone();
            v.plus_assign(&c.times(coef));
            img.set(p, q, v);
        }
    }
    Ok(img)
}
