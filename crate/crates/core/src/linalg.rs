//! Small dense exact linear algebra over `Q`, plus the inner product
//! that identifies vectors and covectors.

use std::ops::{Index, IndexMut};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, to_f64, QVec, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: &[QVec]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data = rows.iter().flat_map(|row| row.iter().cloned()).collect();
        QMatrix { rows: r, cols: c, data }
    }

    pub fn from_cols(cols: &[QVec]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> QVec {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> QVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> QVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| to_f64(&self[(i, j)])).collect()).collect()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = Q::one() / &self[(r, c)];
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = &f * &self[(r, j)];
                        self[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<QVec> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.cols];
                x[f] = Q::one();
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = -m[(r, f)].clone();
                }
                x
            })
            .collect()
    }

    /// Unique solution of `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[Q]) -> Result<QVec> {
        if self.rows != self.cols {
            return Err(Error::Input("solve needs a square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Precondition("singular linear system".into()));
        }
        Ok((0..n).map(|i| aug[(i, n)].clone()).collect())
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        let n = self.rows;
        let cols: Result<Vec<QVec>> = (0..n)
            .map(|j| {
                let mut e = vec![Q::zero(); n];
                e[j] = Q::one();
                self.solve(&e)
            })
            .collect();
        Ok(Self::from_cols(&cols?))
    }

    /// Positive definiteness through leading principal minors (Sylvester).
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        // Gaussian elimination without pivoting: all pivots positive.
        let mut m = self.clone();
        let n = self.rows;
        for k in 0..n {
            if !m[(k, k)].is_positive() {
                return false;
            }
            for i in k + 1..n {
                let f = &m[(i, k)] / &m[(k, k)];
                for j in k..n {
                    let v = &f * &m[(k, j)];
                    m[(i, j)] -= v;
                }
            }
        }
        true
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

pub fn rank_of(vectors: &[QVec]) -> usize {
    if vectors.is_empty() {
        0
    } else {
        QMatrix::from_rows(vectors).rank()
    }
}

/// Basis of `{x ∈ Q^n : a · x = 0 ∀ a ∈ rows}`.
pub fn nullspace_of(rows: &[QVec], n: usize) -> Vec<QVec> {
    if rows.is_empty() {
        return (0..n)
            .map(|i| {
                let mut e = vec![Q::zero(); n];
                e[i] = Q::one();
                e
            })
            .collect();
    }
    QMatrix::from_rows(rows).nullspace()
}

/// Symmetric positive-definite form on `Q^rank`. Cheap to clone.
#[derive(Clone, Debug, PartialEq)]
pub struct Gram {
    m: Arc<QMatrix>,
    identity: bool,
    float: Arc<Vec<Vec<f64>>>,
}

impl Gram {
    pub fn identity(n: usize) -> Self {
        let m = QMatrix::identity(n);
        let float = Arc::new(m.to_f64());
        Gram { m: Arc::new(m), identity: true, float }
    }

    pub fn new(m: QMatrix) -> Result<Self> {
        if !m.is_positive_definite() {
            return Err(Error::BadInnerProduct("matrix is not symmetric positive definite".into()));
        }
        let identity = m == QMatrix::identity(m.rows());
        let float = Arc::new(m.to_f64());
        Ok(Gram { m: Arc::new(m), identity, float })
    }

    pub fn rank(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.m
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn pair(&self, x: &[Q], y: &[Q]) -> Q {
        if self.identity {
            dot(x, y)
        } else {
            dot(x, &self.m.mul_vec(y))
        }
    }

    pub fn norm2(&self, x: &[Q]) -> Q {
        self.pair(x, x)
    }

    /// Row vector `x^T B`, so that `pair(x, y) = lower(x) . y`.
    pub fn lower(&self, x: &[Q]) -> QVec {
        if self.identity {
            x.to_vec()
        } else {
            self.m.mul_vec(x)
        }
    }

    pub fn pair_f(&self, x: &[f64], y: &[f64]) -> f64 {
        if self.identity {
            x.iter().zip(y).map(|(a, b)| a * b).sum()
        } else {
            self.float.iter().zip(x).map(|(row, xi)| xi * row.iter().zip(y).map(|(a, b)| a * b).sum::<f64>()).sum()
        }
    }

    pub fn lower_f(&self, x: &[f64]) -> Vec<f64> {
        if self.identity {
            x.to_vec()
        } else {
            self.float.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
        }
    }

    pub fn norm_f(&self, x: &[f64]) -> f64 {
        self.pair_f(x, x).max(0.0).sqrt()
    }

    pub fn float_matrix(&self) -> &[Vec<f64>] {
        &self.float
    }

    /// Upper factor `U` of `B = U^T U`; `x -> U x` is an isometry onto
    /// Euclidean space.
    pub fn euclidean_factor(&self) -> Vec<Vec<f64>> {
        let n = self.rank();
        let b = &self.float;
        let mut l = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
                if i == j {
                    l[i][i] = (b[i][i] - s).max(0.0).sqrt();
                } else {
                    l[i][j] = (b[i][j] - s) / l[j][j];
                }
            }
        }
        // U = L^T
        (0..n).map(|i| (0..n).map(|j| l[j][i]).collect()).collect()
    }
}

pub fn fdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
