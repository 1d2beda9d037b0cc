//! Exact dense linear algebra over a field, shared by the interpolation
//! machinery, rank computations, and intertwiner searches.

use crate::cyclo::CycloScalar;
use crate::error::{AlgebraError, Result};
use crate::modp::ModPScalar;

/// Minimal field interface for elimination-based routines.
pub trait FieldElem: Clone {
    fn f_zero(&self) -> Self;
    fn f_is_zero(&self) -> bool;
    fn f_add(&self, rhs: &Self) -> Self;
    fn f_sub(&self, rhs: &Self) -> Self;
    fn f_mul(&self, rhs: &Self) -> Self;
    fn f_inv(&self) -> Result<Self>;
}

impl FieldElem for CycloScalar {
    fn f_zero(&self) -> Self {
        self.ring().zero()
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn f_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn f_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn f_inv(&self) -> Result<Self> {
        self.inv()
    }
}

impl FieldElem for ModPScalar {
    fn f_zero(&self) -> Self {
        ModPScalar::zero(self.p)
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_add(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn f_sub(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn f_mul(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn f_inv(&self) -> Result<Self> {
        self.inv()
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug)]
pub struct Matrix<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: FieldElem> Matrix<F> {
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&i| !m.at(i, col).f_is_zero()) else {
                continue;
            };
            m.swap_rows(rank, p);
            let inv = m.at(rank, col).f_inv().expect("pivot is nonzero");
            for i in (rank + 1)..m.rows {
                if m.at(i, col).f_is_zero() {
                    continue;
                }
                let factor = m.at(i, col).f_mul(&inv);
                for j in col..m.cols {
                    let t = m.at(rank, j).f_mul(&factor);
                    m.data[i * m.cols + j] = m.at(i, j).f_sub(&t);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self, zero: F, one: F) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let mut pivot_col_of_row: Vec<usize> = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.at(i, col).f_is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.at(row, col).f_inv().expect("pivot is nonzero");
            for j in col..m.cols {
                m.data[row * m.cols + j] = m.at(row, j).f_mul(&inv);
            }
            for i in 0..m.rows {
                if i == row || m.at(i, col).f_is_zero() {
                    continue;
                }
                let factor = m.at(i, col).clone();
                for j in col..m.cols {
                    let t = m.at(row, j).f_mul(&factor);
                    m.data[i * m.cols + j] = m.at(i, j).f_sub(&t);
                }
            }
            pivot_col_of_row.push(col);
            row += 1;
        }
        let pivot_cols: std::collections::HashSet<usize> = pivot_col_of_row.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..m.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![zero.clone(); m.cols];
            v[free] = one.clone();
            for (r, &pc) in pivot_col_of_row.iter().enumerate() {
                v[pc] = zero.f_sub(m.at(r, free));
            }
            basis.push(v);
        }
        basis
    }
}

/// PLU factorization of a square matrix, reusable for many solves.
pub struct Lu<F> {
    n: usize,
    /// Combined L (below diagonal, unit diagonal implied) and U (on and above).
    lu: Vec<F>,
    perm: Vec<usize>,
    inv_diag: Vec<F>,
}

impl<F: FieldElem> Lu<F> {
    pub fn factor(m: &Matrix<F>) -> Result<Lu<F>> {
        assert_eq!(m.rows, m.cols);
        let n = m.rows;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut inv_diag = Vec::with_capacity(n);
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !lu[i * n + k].f_is_zero()) else {
                return Err(AlgebraError::SingularWindow(n));
            };
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let inv = lu[k * n + k].f_inv()?;
            for i in (k + 1)..n {
                if lu[i * n + k].f_is_zero() {
                    continue;
                }
                let factor = lu[i * n + k].f_mul(&inv);
                lu[i * n + k] = factor.clone();
                for j in (k + 1)..n {
                    let t = lu[k * n + j].f_mul(&factor);
                    lu[i * n + j] = lu[i * n + j].f_sub(&t);
                }
            }
            inv_diag.push(inv);
        }
        Ok(Lu { n, lu, perm, inv_diag })
    }

    pub fn solve(&self, rhs: &[F]) -> Vec<F> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        let mut y: Vec<F> = (0..n).map(|i| rhs[self.perm[i]].clone()).collect();
        for i in 1..n {
            for j in 0..i {
                if self.lu[i * n + j].f_is_zero() || y[j].f_is_zero() {
                    continue;
                }
                let t = self.lu[i * n + j].f_mul(&y[j]);
                y[i] = y[i].f_sub(&t);
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                if self.lu[i * n + j].f_is_zero() || y[j].f_is_zero() {
                    continue;
                }
                let t = self.lu[i * n + j].f_mul(&y[j]);
                y[i] = y[i].f_sub(&t);
            }
            y[i] = y[i].f_mul(&self.inv_diag[i]);
        }
        y
    }
}
