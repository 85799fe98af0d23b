//! Dense square matrices, row-major. Small instances only; no BLAS.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major N×N matrix of scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> SquareMatrix<S> {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![S::zero(); n * n],
        }
    }

    /// Builds from row vectors; every row must have length `rows.len()`.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> S {
        self.data
            .iter()
            .map(|v| v.abs())
            .fold(S::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Row-by-column matrix product. Accumulation order is pinned
    /// (ascending k) so results are reproducible bit-for-bit.
    pub fn matmul(&self, rhs: &SquareMatrix<S>) -> Result<SquareMatrix<S>> {
        if rhs.n != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: rhs.n,
            });
        }
        let n = self.n;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = S::zero();
                for k in 0..n {
                    acc += self[(i, k)] * rhs[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// Entrywise product.
    pub fn hadamard(&self, rhs: &SquareMatrix<S>) -> Result<SquareMatrix<S>> {
        if rhs.n != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: rhs.n,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a * b)
            .collect();
        Ok(SquareMatrix { n: self.n, data })
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> SquareMatrix<S> {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl<S: Scalar> Index<(usize, usize)> for SquareMatrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.n + j]
    }
}

impl<S: Scalar> IndexMut<(usize, usize)> for SquareMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.n + j]
    }
}

/// Square boolean matrix, used for adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    n: usize,
    data: Vec<bool>,
}

impl BoolMatrix {
    pub fn falses(n: usize) -> Self {
        BoolMatrix {
            n,
            data: vec![false; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn diagonal_clear(&self) -> bool {
        (0..self.n).all(|i| !self.get(i, i))
    }

    /// Count of true entries strictly above the diagonal.
    pub fn edge_count(&self) -> usize {
        (0..self.n)
            .map(|i| (i + 1..self.n).filter(|&j| self.get(i, j)).count())
            .sum()
    }
}
