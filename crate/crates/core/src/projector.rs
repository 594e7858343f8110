//! Forward projection and residual line sums.
//!
//! The line of direction `(a, b)` through `(p, q)` has offset `c = a*q - b*p`.
//! For every direction the table keeps one dense array indexed by
//! `c - c_min`, where `[c_min, c_max]` is the offset range spanned by the grid
//! corners. Offsets inside that range whose line misses every grid point (this
//! happens on very narrow grids) hold zero.

use crate::error::{Result, TomoError};
use crate::grid::{Direction, DirectionSet, Grid, GridImage};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSums<V> {
    pub dir: Direction,
    pub c_min: i64,
    pub values: Vec<V>,
}

/// Line sums of an image in every direction of a direction set.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSumTable<V> {
    grid: Grid,
    dirs: DirectionSet,
    lines: Vec<DirectionSums<V>>,
}

/// Computes all line sums of `f` in the directions of `dirs`.
pub fn project<V: Value>(f: &GridImage<V>, dirs: &DirectionSet) -> LineSumTable<V> {
    let mut table = LineSumTable::<V>::zeros(f.grid(), dirs);
    for (p, q) in f.grid().points() {
        let v = f.get(p, q);
        for line in &mut table.lines {
            let c = line.dir.offset(p as i64, q as i64);
            line.values[(c - line.c_min) as usize].plus_assign(v);
        }
    }
    table
}

impl<V: Value> LineSumTable<V> {
    /// A table with every line sum zero.
    pub fn zeros(grid: Grid, dirs: &DirectionSet) -> Self {
        let lines = dirs
            .directions()
            .into_iter()
            .map(|dir| {
                let (lo, hi) = dir.offset_range(grid);
                DirectionSums { dir, c_min: lo, values: vec![V::zero(); (hi - lo + 1) as usize] }
            })
            .collect();
        LineSumTable { grid, dirs: dirs.clone(), lines }
    }

    /// Assembles a table from per-direction arrays given in canonical direction
    /// order. Each array must cover exactly the offset range of its direction.
    pub fn from_parts(grid: Grid, dirs: &DirectionSet, parts: Vec<(i64, Vec<V>)>) -> Result<Self> {
        let expected = dirs.directions();
        if parts.len() != expected.len() {
            return Err(TomoError::Mismatch);
        }
        let mut lines = Vec::with_capacity(parts.len());
        for (dir, (c_min, values)) in expected.into_iter().zip(parts) {
            let (lo, hi) = dir.offset_range(grid);
            if c_min != lo || values.len() as i64 != hi - lo + 1 {
                return Err(TomoError::Parse(format!(
                    "direction {dir}: expected offsets {lo}..={hi}, got c_min {c_min} with {} values",
                    values.len()
                )));
            }
            lines.push(DirectionSums { dir, c_min, values });
        }
        Ok(LineSumTable { grid, dirs: dirs.clone(), lines })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn directions(&self) -> &DirectionSet {
        &self.dirs
    }

    /// Per-direction arrays in canonical direction order.
    pub fn lines(&self) -> &[DirectionSums<V>] {
        &self.lines
    }

    /// Current value of the line of `dir` through `(p, q)`.
    pub fn lookup(&self, dir: Direction, p: i64, q: i64) -> Result<&V> {
        let i = self.dirs.index_of(dir).ok_or(TomoError::DirectionNotInSet(dir))?;
        if !self.grid.contains(p, q) {
            return Err(TomoError::PointOutOfGrid(p, q));
        }
        Ok(self.get(i, p, q))
    }

    /// Line through `(p, q)` in the direction with canonical index `i`.
    #[inline]
    pub(crate) fn get(&self, i: usize, p: i64, q: i64) -> &V {
        let line = &self.lines[i];
        &line.values[(line.dir.offset(p, q) - line.c_min) as usize]
    }

    /// Subtracts `v` from every line through `(p, q)`.
    pub fn subtract_point(&mut self, p: i64, q: i64, v: &V) -> Result<()> {
        if !self.grid.contains(p, q) {
            return Err(TomoError::PointOutOfGrid(p, q));
        }
        self.subtract_unchecked(p, q, v);
        Ok(())
    }

    #[inline]
    pub(crate) fn subtract_unchecked(&mut self, p: i64, q: i64, v: &V) {
        for line in &mut self.lines {
            let c = line.dir.offset(p, q);
            line.values[(c - line.c_min) as usize].minus_assign(v);
        }
    }

    /// Number of stored lines whose value is nonzero.
    pub fn nonzero_count(&self) -> usize {
        self.lines.iter().flat_map(|l| &l.values).filter(|v| !v.is_zero()).count()
    }

    /// Converts every stored value.
    pub fn map<W: Value>(&self, mut f: impl FnMut(&V) -> W) -> LineSumTable<W> {
        LineSumTable {
            grid: self.grid,
            dirs: self.dirs.clone(),
            lines: self
                .lines
                .iter()
                .map(|l| DirectionSums { dir: l.dir, c_min: l.c_min, values: l.values.iter().map(&mut f).collect() })
                .collect(),
        }
    }

    /// The same sums with the coordinate axes swapped.
    pub fn transposed(&self) -> Self {
        let grid = self.grid.transposed();
        let dirs = self.dirs.transposed();
        let mut out = LineSumTable::zeros(grid, &dirs);
        for line in &self.lines {
            let (t, sign) = line.dir.transposed();
            let idx = dirs.index_of(t).expect("transposed direction present");
            let target = &mut out.lines[idx];
            for (i, v) in line.values.iter().enumerate() {
                let c = line.c_min + i as i64;
                let c2 = -sign * c;
                target.values[(c2 - target.c_min) as usize] = v.clone();
            }
        }
        out
    }
}

/// `true` iff every stored line sum is exactly zero.
pub fn all_zero<V: Value>(table: &LineSumTable<V>) -> bool {
    table.lines.iter().all(|l| l.values.iter().all(Value::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::validate_directions;
    use crate::value::Rational;

    fn ones(m: usize, n: usize) -> GridImage<Rational> {
        GridImage::from_fn(Grid::new(m, n).unwrap(), |_, _| Rational::from_i64(1))
    }

    fn ints(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| Rational::from_i64(v)).collect()
    }

    #[test]
    fn diagonal_counts_on_ones() {
        let ds = validate_directions(&[(1, 1)]).unwrap();
        let t = project(&ones(3, 3), &ds);
        assert_eq!(t.lines()[0].c_min, -2);
        assert_eq!(t.lines()[0].values, ints(&[1, 2, 3, 2, 1]));
        assert_eq!(t.lookup(Direction::new(1, 1).unwrap(), 1, 1).unwrap(), &Rational::from_i64(3));
    }

    #[test]
    fn single_point_axis_sums() {
        let grid = Grid::new(2, 2).unwrap();
        let mut f = GridImage::<Rational>::zeros(grid);
        f.set(0, 0, Rational::from_i64(1));
        let ds = validate_directions(&[(1, 0), (0, 1)]).unwrap();
        let t = project(&f, &ds);
        // (1,0): c = q, rows; (0,1): c = -p, columns indexed from c_min = -1.
        assert_eq!(t.lines()[0].values, ints(&[1, 0]));
        assert_eq!(t.lines()[1].values, ints(&[0, 1]));
        assert_eq!(t.lookup(Direction::VERTICAL, 0, 1).unwrap(), &Rational::from_i64(1));
        assert_eq!(t.lookup(Direction::VERTICAL, 1, 1).unwrap(), &Rational::from_i64(0));
    }

    #[test]
    fn subtract_and_lookup_errors() {
        let ds = validate_directions(&[(1, 1)]).unwrap();
        let mut t = project(&ones(3, 3), &ds);
        t.subtract_point(1, 1, &Rational::from_i64(1)).unwrap();
        assert_eq!(t.lines()[0].values, ints(&[1, 2, 2, 2, 1]));
        let d = Direction::new(1, 1).unwrap();
        assert_eq!(t.lookup(d, 1, 1).unwrap(), &Rational::from_i64(2));
        assert_eq!(t.lookup(Direction::HORIZONTAL, 0, 0), Err(TomoError::DirectionNotInSet(Direction::HORIZONTAL)));
        assert_eq!(t.lookup(d, 3, 0), Err(TomoError::PointOutOfGrid(3, 0)));
        assert_eq!(t.subtract_point(-1, 0, &Rational::from_i64(1)), Err(TomoError::PointOutOfGrid(-1, 0)));
    }

    #[test]
    fn subtracting_every_point_zeroes_everything() {
        let ds = validate_directions(&[(1, 1), (2, -1), (0, 1), (1, 0)]).unwrap();
        let f = GridImage::from_fn(Grid::new(5, 4).unwrap(), |p, q| Rational::from_i64((p * 7 + q * 3) as i64 - 9));
        let mut t = project(&f, &ds);
        for (p, q) in f.grid().points() {
            t.subtract_point(p as i64, q as i64, f.get(p, q)).unwrap();
        }
        assert!(all_zero(&t));
    }

    mod props {
        use super::super::*;
        use crate::grid::validate_directions;
        use crate::value::Rational;
        use proptest::prelude::*;

        type Case = (usize, usize, Vec<(i64, i64)>, Vec<i64>, Vec<i64>);

        fn instance() -> impl Strategy<Value = Case> {
            (1usize..7, 1usize..7, proptest::collection::vec((-3i64..=3, -3i64..=3), 1..5)).prop_filter_map(
                "valid directions",
                |(m, n, raw)| validate_directions(&raw).ok().map(|_| (m, n, raw)),
            ).prop_flat_map(|(m, n, raw)| {
                let len = m * n;
                (Just(m), Just(n), Just(raw), proptest::collection::vec(-9i64..=9, len), proptest::collection::vec(-9i64..=9, len))
            })
        }

        fn image(grid: Grid, v: &[i64]) -> GridImage<Rational> {
            GridImage::from_values(grid, v.iter().map(|&x| Rational::from_i64(x)).collect()).unwrap()
        }

        proptest! {
            #[test]
            fn projection_is_linear((m, n, raw, f, g) in instance()) {
                let grid = Grid::new(m, n).unwrap();
                let ds = validate_directions(&raw).unwrap();
                let (f, g) = (image(grid, &f), image(grid, &g));
                let lhs = project(&f.plus(&g).unwrap(), &ds);
                let (pf, pg) = (project(&f, &ds), project(&g, &ds));
                for ((l, a), b) in lhs.lines().iter().zip(pf.lines()).zip(pg.lines()) {
                    for ((x, y), z) in l.values.iter().zip(&a.values).zip(&b.values) {
                        prop_assert_eq!(x, &(y + z));
                    }
                }
            }

            #[test]
            fn mass_is_conserved_per_direction((m, n, raw, f, _g) in instance()) {
                let grid = Grid::new(m, n).unwrap();
                let ds = validate_directions(&raw).unwrap();
                let f = image(grid, &f);
                let total: Rational = f.values().iter().sum();
                for line in project(&f, &ds).lines() {
                    let s: Rational = line.values.iter().sum();
                    prop_assert_eq!(&s, &total);
                }
            }

            #[test]
            fn transpose_commutes_with_projection((m, n, raw, f, _g) in instance()) {
                let grid = Grid::new(m, n).unwrap();
                let ds = validate_directions(&raw).unwrap();
                let f = image(grid, &f);
                let lhs = project(&f.transposed(), &ds.transposed());
                prop_assert_eq!(&lhs, &project(&f, &ds).transposed());
                prop_assert_eq!(&project(&f, &ds).transposed().transposed(), &project(&f, &ds));
            }
        }
    }
}
