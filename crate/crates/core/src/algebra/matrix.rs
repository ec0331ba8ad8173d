//! Dense matrices with polynomial entries.

use std::fmt;

use super::linsolve::{self, ScalarMatrix};
use super::poly::{same_ring, Polynomial, RingMap, RingRef};
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    ring: RingRef,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl Matrix {
    pub fn zeros(ring: &RingRef, rows: usize, cols: usize) -> Self {
        Matrix { ring: ring.clone(), rows, cols, entries: vec![Polynomial::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &RingRef, n: usize) -> Self {
        Self::scalar_diag(ring, n, &Polynomial::one(ring))
    }

    /// `p * I_n`.
    pub fn scalar_diag(ring: &RingRef, n: usize, p: &Polynomial) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn from_fn(ring: &RingRef, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { ring: ring.clone(), rows, cols, entries }
    }

    /// Builds from rows; `cols` is needed to shape matrices with zero rows.
    pub fn from_rows(ring: &RingRef, rows: Vec<Vec<Polynomial>>, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension(format!("every row must have {cols} entries")));
        }
        if rows.iter().flatten().any(|p| !same_ring(p.ring(), ring)) {
            return Err(Error::RingMismatch("matrix entry from another ring".into()));
        }
        let n = rows.len();
        Ok(Matrix { ring: ring.clone(), rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(ring: &RingRef, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&v| Polynomial::from_i64(ring, v)).collect()).collect();
        Self::from_rows(ring, rows, cols).expect("rectangular literal")
    }

    pub fn from_scalars(ring: &RingRef, m: &ScalarMatrix) -> Self {
        Self::from_fn(ring, m.rows(), m.cols(), |i, j| Polynomial::constant(ring, m.get(i, j).clone()))
    }

    /// Block matrix; `blocks[r][c]` must have `row_sizes[r]` rows and
    /// `col_sizes[c]` columns. `None` stands for a zero block.
    pub fn from_blocks(
        ring: &RingRef,
        row_sizes: &[usize],
        col_sizes: &[usize],
        blocks: &[Vec<Option<&Matrix>>],
    ) -> Result<Self> {
        if blocks.len() != row_sizes.len() || blocks.iter().any(|r| r.len() != col_sizes.len()) {
            return Err(Error::Dimension("block layout does not match sizes".into()));
        }
        let rows = row_sizes.iter().sum();
        let cols = col_sizes.iter().sum();
        let mut out = Self::zeros(ring, rows, cols);
        let mut r0 = 0;
        for (bi, brow) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, blk) in brow.iter().enumerate() {
                if let Some(b) = blk {
                    if b.rows != row_sizes[bi] || b.cols != col_sizes[bj] {
                        return Err(Error::Dimension(format!(
                            "block ({bi},{bj}) is {}x{}, expected {}x{}",
                            b.rows, b.cols, row_sizes[bi], col_sizes[bj]
                        )));
                    }
                    out.paste(r0, c0, b);
                }
                c0 += col_sizes[bj];
            }
            r0 += row_sizes[bi];
        }
        Ok(out)
    }

    /// Block matrix whose sizes are read off the blocks; panics on mismatch.
    /// Every block row and block column must contain at least one `Some`.
    pub fn blocks(ring: &RingRef, blocks: &[Vec<Option<&Matrix>>]) -> Self {
        let nr = blocks.len();
        let nc = blocks.first().map_or(0, Vec::len);
        let row_sizes: Vec<usize> = (0..nr)
            .map(|i| blocks[i].iter().flatten().next().expect("block row has a block").rows)
            .collect();
        let col_sizes: Vec<usize> = (0..nc)
            .map(|j| blocks.iter().find_map(|r| r[j]).expect("block column has a block").cols)
            .collect();
        Self::from_blocks(ring, &row_sizes, &col_sizes, blocks).expect("consistent block sizes")
    }

    pub fn diag(a: &Matrix, b: &Matrix) -> Self {
        let ring = a.ring.clone();
        Self::from_blocks(&ring, &[a.rows, b.rows], &[a.cols, b.cols], &[vec![Some(a), None], vec![None, Some(b)]])
            .expect("diagonal blocks fit")
    }

    pub fn hstack(a: &Matrix, b: &Matrix) -> Self {
        assert_eq!(a.rows, b.rows, "hstack row mismatch");
        let ring = a.ring.clone();
        Self::from_blocks(&ring, &[a.rows], &[a.cols, b.cols], &[vec![Some(a), Some(b)]]).unwrap()
    }

    pub fn vstack(a: &Matrix, b: &Matrix) -> Self {
        assert_eq!(a.cols, b.cols, "vstack column mismatch");
        let ring = a.ring.clone();
        Self::from_blocks(&ring, &[a.rows, b.rows], &[a.cols], &[vec![Some(a)], vec![Some(b)]]).unwrap()
    }

    fn paste(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        Matrix::from_fn(&self.ring, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn row_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            }))
    }

    pub fn max_degree(&self) -> u32 {
        self.entries.iter().filter_map(Polynomial::degree).max().unwrap_or(0)
    }

    fn check_ring(&self, other: &Matrix) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch("matrices over different rings".into()))
        }
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx].add_product(a, b);
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ring(other)?;
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        self.map(|p| -p)
    }

    pub fn scale(&self, p: &Polynomial) -> Matrix {
        self.map(|e| e * p)
    }

    pub fn scale_scalar(&self, c: &Scalar) -> Matrix {
        self.map(|e| e.scale(c))
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Matrix {
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    /// Entrywise application of a ring endomorphism.
    pub fn apply_map(&self, phi: &RingMap) -> Matrix {
        self.map(|p| phi.apply(p))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// The scalar matrix if every entry is constant.
    pub fn to_scalars(&self) -> Option<ScalarMatrix> {
        let field = self.ring.field();
        let rows = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).constant_value()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let mut m = ScalarMatrix::zeros(field, self.rows, self.cols);
        for (i, r) in rows.into_iter().enumerate() {
            for (j, v) in r.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Some(m)
    }

    /// Fraction-free (Bareiss) determinant with row pivoting.
    pub fn determinant(&self) -> Result<Polynomial> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::one(&self.ring));
        }
        let mut a: Vec<Vec<Polynomial>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign = false;
        let mut prev = Polynomial::one(&self.ring);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = !sign;
                    }
                    None => return Ok(Polynomial::zero(&self.ring)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][k] = Polynomial::zero(&self.ring);
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if sign { -&det } else { det })
    }

    /// Two-sided inverse over the ring, if one exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        if let Some(s) = self.to_scalars() {
            return linsolve::invert(&s).map(|inv| Matrix::from_scalars(&self.ring, &inv));
        }
        let det = self.determinant().ok()?;
        let unit_inv = det.constant_value()?.inv()?;
        let n = self.rows;
        // adjugate: adj[i][j] = (-1)^{i+j} det(minor(j, i))
        let adj = Matrix::from_fn(&self.ring, n, n, |i, j| {
            let minor = Matrix::from_fn(&self.ring, n - 1, n - 1, |r, c| {
                let rr = if r < j { r } else { r + 1 };
                let cc = if c < i { c } else { c + 1 };
                self.get(rr, cc).clone()
            });
            let d = minor.determinant().expect("square minor");
            if (i + j) % 2 == 1 {
                -&d
            } else {
                d
            }
        });
        Some(adj.scale_scalar(&unit_inv))
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product shapes")
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix sum shapes")
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix difference shapes")
    }
}

impl std::ops::Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::neg(self)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.row_strings().into_iter().map(|r| format!("[{}]", r.join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// `ms[0] * ms[1] * ... `; `None` for an empty product.
pub fn product<'a>(ms: impl IntoIterator<Item = &'a Matrix>) -> Option<Matrix> {
    let mut it = ms.into_iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, m| &acc * m))
}
