use std::ops::{Add, Mul};

use crate::scalar::{Ring, Semiring};

/// Dense univariate polynomial, `coeffs[k]` multiplies `λ^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

/// Coefficients of `det(λI − G)`, ascending in the power of `λ`.
pub type CharPolynomial<S> = Polynomial<S>;

impl<S: Semiring> Polynomial<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: S) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `x - root` style monomial `a + bλ`.
    pub fn linear(a: S, b: S) -> Self {
        Self { coeffs: vec![a, b] }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `λ^k`, zero past the stored length.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the highest nonzero coefficient; `None` for the zero
    /// polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn map<T: Semiring>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Drops trailing zero coefficients.
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }
}

impl<S: Semiring> Add for Polynomial<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self { coeffs: (0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect() }
    }
}

impl<S: Semiring> Mul for Polynomial<S> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self { coeffs: Vec::new() };
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs: out }
    }
}

impl<S: Ring> Polynomial<S> {
    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }
}
