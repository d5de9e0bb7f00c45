use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::AsymptoticScalar;
use crate::error::{Error, Result};
use crate::graph::AugmentedDigraph;
use crate::matrix::AdjacencyMatrix;
use crate::scalar::rational_to_f64;

/// A rate `prefactor · e^(−order/ε)` with `order ≥ 0` and `prefactor > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpRate {
    pub order: BigRational,
    pub prefactor: BigRational,
}

impl ExpRate {
    pub fn new(order: BigRational, prefactor: BigRational) -> Result<Self> {
        if order.is_negative() {
            return Err(Error::InvalidRate(format!("order must be nonnegative, got {order}")));
        }
        if !prefactor.is_positive() {
            return Err(Error::InvalidRate(format!("prefactor must be positive, got {prefactor}")));
        }
        Ok(Self { order, prefactor })
    }

    pub fn asymptotic(&self) -> AsymptoticScalar {
        AsymptoticScalar::new(self.order.clone(), self.prefactor.clone()).expect("validated on construction")
    }

    pub fn at(&self, eps: f64) -> f64 {
        rational_to_f64(&self.prefactor) * (-rational_to_f64(&self.order) / eps).exp()
    }
}

/// Sub-generator with exponentially small rates: transitions `i → j`
/// (`i ≠ j`) and killing rates `i → †`. The diagonal is implied by
/// `M_ii = −M_i† − Σ_{j≠i} M_ij`. Vertices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentialMarkovInput {
    n: usize,
    rates: BTreeMap<(usize, usize), ExpRate>,
    killing: BTreeMap<usize, ExpRate>,
}

/// A dense realisation at a fixed ε, with the entries whose nonzero rate
/// underflowed to `0.0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizedMatrix {
    pub matrix: AdjacencyMatrix<f64>,
    pub underflowed: Vec<(usize, usize)>,
}

impl ExponentialMarkovInput {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        Ok(Self { n, rates: BTreeMap::new(), killing: BTreeMap::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set_rate(&mut self, from: usize, to: usize, rate: ExpRate) -> Result<()> {
        self.check(from)?;
        self.check(to)?;
        if from == to {
            return Err(Error::LoopArc(from));
        }
        self.rates.insert((from, to), rate);
        Ok(())
    }

    pub fn set_killing(&mut self, from: usize, rate: ExpRate) -> Result<()> {
        self.check(from)?;
        self.killing.insert(from, rate);
        Ok(())
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidIndex { index: v, n: self.n })
        }
    }

    pub fn rate(&self, from: usize, to: usize) -> Option<&ExpRate> {
        self.rates.get(&(from, to))
    }

    pub fn killing(&self, from: usize) -> Option<&ExpRate> {
        self.killing.get(&from)
    }

    pub fn rates(&self) -> impl Iterator<Item = ((usize, usize), &ExpRate)> {
        self.rates.iter().map(|(k, v)| (*k, v))
    }

    pub fn killings(&self) -> impl Iterator<Item = (usize, &ExpRate)> {
        self.killing.iter().map(|(k, v)| (*k, v))
    }

    /// The augmented digraph over asymptotic scalars; absent arcs are
    /// tropical zeros.
    pub fn augmented(&self) -> AugmentedDigraph<AsymptoticScalar> {
        let boundary =
            (0..self.n).map(|i| self.killing(i).map_or_else(AsymptoticScalar::zero, ExpRate::asymptotic)).collect();
        AugmentedDigraph::from_parts(self.n, self.rates.iter().map(|(&(i, j), r)| (i, j, r.asymptotic())), boundary)
            .expect("indices validated on insertion")
    }

    /// Augmented digraph at a fixed ε, built straight from the rates: the
    /// boundary weights are the killing rates, never negated row sums of the
    /// dense matrix.
    pub fn realize_augmented(&self, eps: f64) -> Result<AugmentedDigraph<f64>> {
        let realized = self.realize_at_epsilon(eps)?;
        let boundary = (0..self.n).map(|i| self.killing(i).map_or(0.0, |r| r.at(eps))).collect();
        let h = AugmentedDigraph::from_parts(self.n, self.rates.iter().map(|(&(i, j), r)| (i, j, r.at(eps))), boundary)?;
        Ok(h.with_source(realized.matrix))
    }

    /// Dense sub-generator at `eps`: off-diagonals `m·e^(−V/ε)`, diagonal
    /// from the row identity.
    pub fn realize_at_epsilon(&self, eps: f64) -> Result<RealizedMatrix> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidEpsilon(format!("epsilon must be positive and finite, got {eps}")));
        }
        let mut matrix = AdjacencyMatrix::zeros(self.n);
        let mut underflowed = Vec::new();
        let mut outflow = vec![0.0; self.n];
        for (&(i, j), r) in &self.rates {
            let value = r.at(eps);
            if value == 0.0 {
                underflowed.push((i, j));
            }
            matrix.set(i, j, value);
            outflow[i] += value;
        }
        for (&i, r) in &self.killing {
            let value = r.at(eps);
            if value == 0.0 {
                underflowed.push((i, self.n));
            }
            outflow[i] += value;
        }
        for (i, out) in outflow.into_iter().enumerate() {
            matrix.set(i, i, -out);
        }
        Ok(RealizedMatrix { matrix, underflowed })
    }
}
