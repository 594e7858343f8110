//! Exact linear-algebra reference solver.
//!
//! The line sums form a linear system with one 0/1 row per line and one column
//! per grid point (row-major). Gauss–Jordan elimination over arbitrary-precision
//! rationals yields a particular solution and a basis of the null space, which
//! is the space of ghosts. Cost is cubic in the grid area in the worst case;
//! meant for grids of a few hundred points.

use num::{One, Zero};

use crate::grid::{Grid, GridImage};
use crate::projector::LineSumTable;
use crate::value::Rational;

/// Sparse row: `(column, coefficient)` sorted by column, no explicit zeros.
type SparseRow = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq)]
pub struct TomographySystem {
    grid: Grid,
    /// One row per line, directions in canonical order, offsets ascending.
    rows: Vec<Vec<usize>>,
    rhs: Vec<Rational>,
}

impl TomographySystem {
    /// Builds the system from a table of line sums.
    pub fn from_sums(sums: &LineSumTable<Rational>) -> Self {
        let grid = sums.grid();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for line in sums.lines() {
            let base = rows.len();
            rows.extend(std::iter::repeat_with(Vec::new).take(line.values.len()));
            rhs.extend(line.values.iter().cloned());
            for (p, q) in grid.points() {
                let c = line.dir.offset(p as i64, q as i64);
                rows[base + (c - line.c_min) as usize].push(grid.index(p, q));
            }
        }
        TomographySystem { grid, rows, rhs }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn equations(&self) -> usize {
        self.rows.len()
    }

    /// Column indices with coefficient one in row `i`.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleSolution {
    Consistent { particular: GridImage<Rational>, null_basis: Vec<GridImage<Rational>> },
    Inconsistent,
}

impl OracleSolution {
    pub fn null_dimension(&self) -> Option<usize> {
        match self {
            OracleSolution::Consistent { null_basis, .. } => Some(null_basis.len()),
            OracleSolution::Inconsistent => None,
        }
    }
}

fn axpy(target: &SparseRow, factor: &Rational, pivot: &SparseRow) -> SparseRow {
    // target - factor * pivot
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ti = target.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let pj = pivot.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ti < pj {
            out.push(target[i].clone());
            i += 1;
        } else if pj < ti {
            out.push((pj, -(factor * &pivot[j].1)));
            j += 1;
        } else {
            let v = &target[i].1 - factor * &pivot[j].1;
            if !v.is_zero() {
                out.push((ti, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn coefficient(row: &SparseRow, col: usize) -> Option<&Rational> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

/// Solves the system by exact Gauss–Jordan elimination, pivoting on the first
/// nonzero entry of each column.
pub fn solve_exact(sys: &TomographySystem) -> OracleSolution {
    let area = sys.grid.area();
    let mut rows: Vec<SparseRow> = sys
        .rows
        .iter()
        .map(|r| {
            let mut r: SparseRow = r.iter().map(|&c| (c, Rational::one())).collect();
            r.sort_by_key(|e| e.0);
            r
        })
        .collect();
    let mut rhs = sys.rhs.clone();
    // pivot_row[col] = row index holding the pivot of that column
    let mut pivot_row: Vec<Option<usize>> = vec![None; area];
    let mut used = vec![false; rows.len()];
    // Rows touching each column; kept as a superset and filtered lazily.
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); area];
    for (i, r) in rows.iter().enumerate() {
        for &(c, _) in r {
            touching[c].push(i);
        }
    }

    for col in 0..area {
        let mut candidates: Vec<usize> = std::mem::take(&mut touching[col])
            .into_iter()
            .filter(|&i| coefficient(&rows[i], col).is_some())
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        let Some(&piv) = candidates.iter().filter(|&&i| !used[i]).min() else {
            touching[col] = candidates;
            continue;
        };
        used[piv] = true;
        pivot_row[col] = Some(piv);
        let inv = coefficient(&rows[piv], col).unwrap().recip();
        if !inv.is_one() {
            for e in rows[piv].iter_mut() {
                e.1 *= &inv;
            }
            rhs[piv] *= &inv;
        }
        let pivot = std::mem::take(&mut rows[piv]);
        for &i in &candidates {
            if i == piv {
                continue;
            }
            let factor = coefficient(&rows[i], col).unwrap().clone();
            let before: Vec<usize> = rows[i].iter().map(|e| e.0).collect();
            rows[i] = axpy(&rows[i], &factor, &pivot);
            let delta = &factor * &rhs[piv];
            rhs[i] -= delta;
            for &(c, _) in &rows[i] {
                if c > col && before.binary_search(&c).is_err() {
                    touching[c].push(i);
                }
            }
        }
        rows[piv] = pivot;
    }

    if rows.iter().zip(&rhs).any(|(r, v)| r.is_empty() && !v.is_zero()) {
        return OracleSolution::Inconsistent;
    }

    let mut particular = vec![Rational::zero(); area];
    for (col, piv) in pivot_row.iter().enumerate() {
        if let Some(i) = piv {
            particular[col] = rhs[*i].clone();
        }
    }
    let mut null_basis = Vec::new();
    for free in (0..area).filter(|&c| pivot_row[c].is_none()) {
        let mut v = vec![Rational::zero(); area];
        v[free] = Rational::one();
        for (col, piv) in pivot_row.iter().enumerate() {
            if let Some(i) = piv {
                if let Some(x) = coefficient(&rows[*i], free) {
                    v[col] = -x.clone();
                }
            }
        }
        null_basis.push(GridImage::from_values(sys.grid, v).expect("sized to grid"));
    }
    OracleSolution::Consistent {
        particular: GridImage::from_values(sys.grid, particular).expect("sized to grid"),
        null_basis,
    }
}

/// `true` where every null-space vector vanishes, i.e. where the value is
/// determined by the line sums.
pub fn unique_points(grid: Grid, null_basis: &[GridImage<Rational>]) -> Vec<bool> {
    (0..grid.area()).map(|i| null_basis.iter().all(|b| b.values()[i].is_zero())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{validate_directions, DirectionSet};
    use crate::projector::{all_zero, project};
    use crate::value::Value;

    fn solve(grid: Grid, ds: &DirectionSet, f: &GridImage<Rational>) -> (GridImage<Rational>, Vec<GridImage<Rational>>) {
        match solve_exact(&TomographySystem::from_sums(&project(f, ds))) {
            OracleSolution::Consistent { particular, null_basis } => {
                assert_eq!(particular.grid(), grid);
                (particular, null_basis)
            }
            OracleSolution::Inconsistent => panic!("consistent input reported inconsistent"),
        }
    }

    fn sample(grid: Grid) -> GridImage<Rational> {
        GridImage::from_fn(grid, |p, q| Rational::from_i64(((p * 5 + q * 3) % 7) as i64 - 3))
    }

    #[test]
    fn system_shape() {
        let grid = Grid::new(3, 2).unwrap();
        let ds = validate_directions(&[(1, 0), (1, 1)]).unwrap();
        let sys = TomographySystem::from_sums(&project(&sample(grid), &ds));
        assert_eq!(sys.equations(), 2 + 4);
        let mut count = [0; 6];
        for i in 0..sys.equations() {
            for &c in sys.row(i) {
                count[c] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 2));
        assert_eq!(sys.row(0), &[2]);
        assert_eq!(sys.row(4), &[0, 1, 2]);
    }

    #[test]
    fn six_direction_dimension() {
        let grid = Grid::new(26, 19).unwrap();
        let ds = validate_directions(&[(5, -2), (4, -3), (3, -4), (6, 1), (3, 2), (2, 5)]).unwrap();
        let f = sample(grid);
        let (particular, basis) = solve(grid, &ds, &f);
        assert_eq!(basis.len(), 6);
        assert_eq!(project(&particular, &ds), project(&f, &ds));
        for b in &basis {
            assert!(all_zero(&project(b, &ds)));
        }
    }

    #[test]
    fn nonvalid_is_unique() {
        let grid = Grid::new(4, 3).unwrap();
        let ds = validate_directions(&[(1, 0), (0, 1), (1, 1), (1, -2)]).unwrap();
        let f = sample(grid);
        let (particular, basis) = solve(grid, &ds, &f);
        assert!(basis.is_empty());
        assert_eq!(particular, f);
        assert!(unique_points(grid, &basis).iter().all(|&u| u));
    }

    #[test]
    fn perturbed_sums_are_inconsistent() {
        let grid = Grid::new(3, 3).unwrap();
        let ds = validate_directions(&[(1, 0), (0, 1)]).unwrap();
        let sums = project(&sample(grid), &ds);
        let mut parts: Vec<(i64, Vec<Rational>)> = sums.lines().iter().map(|l| (l.c_min, l.values.clone())).collect();
        parts[0].1[0] += Rational::from_i64(1);
        let bad = LineSumTable::from_parts(grid, &ds, parts).unwrap();
        assert_eq!(solve_exact(&TomographySystem::from_sums(&bad)), OracleSolution::Inconsistent);
    }

    #[test]
    fn row_and_column_sums_ghosts() {
        let grid = Grid::new(3, 3).unwrap();
        let ds = validate_directions(&[(1, 0), (0, 1)]).unwrap();
        let (_, basis) = solve(grid, &ds, &sample(grid));
        assert_eq!(basis.len(), 4);
        assert!(unique_points(grid, &basis).iter().all(|&u| !u));
    }
}
