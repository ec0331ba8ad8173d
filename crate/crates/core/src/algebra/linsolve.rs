//! Exact linear algebra over a field: reduced row echelon form with the
//! first-nonzero pivoting rule, particular solutions and nullspaces.

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix of field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ScalarMatrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged scalar matrix".into()));
        }
        if rows.iter().flatten().any(|s| s.field() != field) {
            return Err(Error::RingMismatch("scalar from a different field".into()));
        }
        let n = rows.len();
        Ok(ScalarMatrix { field, rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_rows(field, rows).expect("rectangular literal")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> ScalarMatrix {
        let data = (0..self.rows).map(|i| self.get(i, j).clone()).collect();
        ScalarMatrix { field: self.field, rows: self.rows, cols: 1, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &ScalarMatrix) -> Result<ScalarMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = &out.data[i * other.cols + j] + &(a * b);
                        out.data[i * other.cols + j] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let rows = (0..self.rows).map(|i| self.sparse_row(i)).collect();
        rref(rows, self.cols).pivots.len()
    }

    fn sparse_row(&self, i: usize) -> SparseRow {
        (0..self.cols)
            .filter_map(|j| {
                let v = self.get(i, j);
                (!v.is_zero()).then(|| (j, v.clone()))
            })
            .collect()
    }
}

/// Sparse row: `(column, nonzero value)` pairs in increasing column order.
pub type SparseRow = Vec<(usize, Scalar)>;

/// Result of [`field_solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// `x` with `a x = b` and all free variables zero, if consistent.
    pub particular: Option<ScalarMatrix>,
    /// Basis of `ker a` as column vectors, one per free column.
    pub nullspace: Vec<ScalarMatrix>,
}

/// Solves `a x = b` exactly.
pub fn field_solve(a: &ScalarMatrix, b: &ScalarMatrix) -> Result<Solution> {
    if a.rows != b.rows {
        return Err(Error::Dimension(format!("system has {} rows but rhs has {}", a.rows, b.rows)));
    }
    if a.field != b.field {
        return Err(Error::RingMismatch("system and rhs over different fields".into()));
    }
    let rows: Vec<SparseRow> = (0..a.rows)
        .map(|i| {
            let mut r = a.sparse_row(i);
            r.extend(b.sparse_row(i).into_iter().map(|(j, v)| (a.cols + j, v)));
            r
        })
        .collect();
    let sol = sparse_solve(a.field, rows, a.cols, b.cols);
    let particular = sol.particular.map(|cols| {
        let mut x = ScalarMatrix::zeros(a.field, a.cols, b.cols);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col {
                x.set(i, j, v);
            }
        }
        x
    });
    let nullspace = sol
        .nullspace
        .into_iter()
        .map(|v| {
            let mut x = ScalarMatrix::zeros(a.field, a.cols, 1);
            for (i, s) in v {
                x.set(i, 0, s);
            }
            x
        })
        .collect();
    Ok(Solution { particular, nullspace })
}

/// Sparse counterpart of [`Solution`]; vectors are sparse.
#[derive(Clone, Debug)]
pub struct SparseSolution {
    pub particular: Option<Vec<SparseRow>>,
    pub nullspace: Vec<SparseRow>,
}

struct Echelon {
    rows: Vec<SparseRow>,
    /// `(column, row)` of each pivot, in column order.
    pivots: Vec<(usize, usize)>,
}

/// Reduced row echelon form over the first `ncols` columns; later columns are
/// carried along as right-hand sides.
fn rref(mut rows: Vec<SparseRow>, ncols: usize) -> Echelon {
    let mut used = vec![false; rows.len()];
    let mut pivots = Vec::new();
    for c in 0..ncols {
        let Some(pr) = (0..rows.len()).find(|&r| !used[r] && entry(&rows[r], c).is_some()) else {
            continue;
        };
        used[pr] = true;
        let inv = entry(&rows[pr], c).unwrap().inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for (_, v) in rows[pr].iter_mut() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = rows[pr].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pr {
                continue;
            }
            if let Some(factor) = entry(row, c).cloned() {
                *row = axpy(row, &-factor, &pivot_row);
            }
        }
        pivots.push((c, pr));
    }
    Echelon { rows, pivots }
}

fn entry(row: &SparseRow, c: usize) -> Option<&Scalar> {
    row.binary_search_by_key(&c, |(j, _)| *j).ok().map(|i| &row[i].1)
}

/// `row + factor * other`.
fn axpy(row: &SparseRow, factor: &Scalar, other: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = other.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, factor * &other[j].1));
            j += 1;
        } else {
            let v = &row[i].1 + &(factor * &other[j].1);
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Solves a sparse system whose rows hold `ncols` unknown columns followed by
/// `nrhs` right-hand-side columns.
pub fn sparse_solve(field: Field, rows: Vec<SparseRow>, ncols: usize, nrhs: usize) -> SparseSolution {
    let ech = rref(rows, ncols);
    let pivot_rows: std::collections::HashSet<usize> = ech.pivots.iter().map(|&(_, r)| r).collect();
    let consistent = ech
        .rows
        .iter()
        .enumerate()
        .all(|(r, row)| pivot_rows.contains(&r) || row.is_empty());
    let particular = consistent.then(|| {
        (0..nrhs)
            .map(|k| {
                ech.pivots
                    .iter()
                    .filter_map(|&(c, r)| entry(&ech.rows[r], ncols + k).map(|v| (c, v.clone())))
                    .collect()
            })
            .collect()
    });
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &(c, _) in &ech.pivots {
            v[c] = true;
        }
        v
    };
    let mut nullspace = Vec::new();
    for f in (0..ncols).filter(|&f| !is_pivot[f]) {
        let mut v: SparseRow = ech
            .pivots
            .iter()
            .filter_map(|&(c, r)| entry(&ech.rows[r], f).map(|x| (c, -x)))
            .collect();
        v.push((f, field.one()));
        v.sort_by_key(|e| e.0);
        nullspace.push(v);
    }
    SparseSolution { particular, nullspace }
}

/// Inverse of a square matrix given as nested rows, or `None` if singular.
pub fn invert_dense(a: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let field = a[0][0].field();
    let m = ScalarMatrix::from_rows(field, a.to_vec()).ok()?;
    let inv = invert(&m)?;
    Some((0..n).map(|i| (0..n).map(|j| inv.get(i, j).clone()).collect()).collect())
}

pub fn invert(m: &ScalarMatrix) -> Option<ScalarMatrix> {
    if m.rows != m.cols {
        return None;
    }
    let sol = field_solve(m, &ScalarMatrix::identity(m.field, m.rows)).ok()?;
    if !sol.nullspace.is_empty() {
        return None;
    }
    sol.particular
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let q = Field::Rational;
        let a = ScalarMatrix::from_i64(q, &[&[1, 0], &[0, 1]]);
        let b = ScalarMatrix::from_i64(q, &[&[3], &[4]]);
        let s = field_solve(&a, &b).unwrap();
        assert_eq!(s.particular.unwrap(), b);
        assert!(s.nullspace.is_empty());
    }

    #[test]
    fn inconsistent_system() {
        let q = Field::Rational;
        let s = field_solve(&ScalarMatrix::from_i64(q, &[&[0]]), &ScalarMatrix::from_i64(q, &[&[1]])).unwrap();
        assert!(s.particular.is_none());
    }

    #[test]
    fn f2_nullspace_matches_enumeration() {
        let f2 = Field::Prime(2);
        let a = ScalarMatrix::from_i64(f2, &[&[1, 1]]);
        let s = field_solve(&a, &ScalarMatrix::from_i64(f2, &[&[0]])).unwrap();
        assert_eq!(s.particular.unwrap(), ScalarMatrix::from_i64(f2, &[&[0], &[0]]));
        assert_eq!(s.nullspace, vec![ScalarMatrix::from_i64(f2, &[&[1], &[1]])]);
        // oracle: the solution set of x + y = 0 over F2 is {00, 11}
        let mut sols = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                if (x + y) % 2 == 0 {
                    sols.push((x, y));
                }
            }
        }
        assert_eq!(sols, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn dimension_mismatch() {
        let q = Field::Rational;
        assert!(field_solve(&ScalarMatrix::zeros(q, 2, 2), &ScalarMatrix::zeros(q, 3, 1)).is_err());
    }

    #[test]
    fn inverse_of_unit_triangular() {
        let q = Field::Rational;
        let a = ScalarMatrix::from_i64(q, &[&[2, 1], &[0, 1]]);
        let inv = invert(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), ScalarMatrix::identity(q, 2));
        assert!(invert(&ScalarMatrix::from_i64(q, &[&[1, 2], &[2, 4]])).is_none());
    }
}
