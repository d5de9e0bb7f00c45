//! Dense square matrices read as weighted digraphs.

use crate::error::{Error, Result};
use crate::scalar::{Magnitude, Semiring};

/// An `n × n` matrix `g` whose entry `g[i][j]` is the weight of arc `(i, j)`.
/// Diagonal entries are allowed; they are the loops of the digraph.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix<S> {
    n: usize,
    entries: Vec<S>,
}

impl<S: Clone> AdjacencyMatrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    /// Panics if `n == 0`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        assert!(n > 0, "matrix side must be positive");
        let entries = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        self.entries[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.entries.chunks(self.n)
    }

    pub fn map<T: Clone>(&self, f: impl Fn(&S) -> T) -> AdjacencyMatrix<T> {
        AdjacencyMatrix { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// The matrix with the rows and columns in `struck` removed, in the
    /// original order.
    pub fn strike(&self, struck: &[usize]) -> Option<Self> {
        let kept: Vec<usize> = (0..self.n).filter(|i| !struck.contains(i)).collect();
        if kept.is_empty() {
            return None;
        }
        Some(Self::from_fn(kept.len(), |a, b| self.get(kept[a], kept[b]).clone()))
    }
}

impl<S: Semiring> AdjacencyMatrix<S> {
    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn row_sum(&self, i: usize) -> S {
        self.row(i).iter().cloned().fold(S::zero(), |acc, x| acc + x)
    }
}

impl<S: Magnitude> AdjacencyMatrix<S> {
    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().map(Magnitude::magnitude).sum::<f64>())
            .fold(0.0, f64::max)
    }
}
