use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Leading behaviour `prefactor · e^(−order/ε)` of a quantity as `ε → 0`.
///
/// Addition keeps the smaller order and adds prefactors on an exact tie;
/// multiplication adds orders and multiplies prefactors. The zero element
/// has infinite order (`order == None`). Orders and prefactors are exact
/// rationals so ties are decided exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AsymptoticScalar {
    order: Option<BigRational>,
    prefactor: BigRational,
}

impl AsymptoticScalar {
    /// A nonzero term. The prefactor must be positive.
    pub fn new(order: BigRational, prefactor: BigRational) -> Result<Self> {
        if !prefactor.is_positive() {
            return Err(Error::InvalidRate(format!("prefactor must be positive, got {prefactor}")));
        }
        Ok(Self { order: Some(order), prefactor })
    }

    /// `None` means infinite order (the zero element).
    pub fn order(&self) -> Option<&BigRational> {
        self.order.as_ref()
    }

    pub fn prefactor(&self) -> &BigRational {
        &self.prefactor
    }

    /// Always fails on a nonzero value: these scalars exist only for
    /// sign-free sums.
    pub fn try_neg(&self) -> Result<Self> {
        if self.is_zero() {
            Ok(self.clone())
        } else {
            Err(Error::NegationAttempted)
        }
    }
}

impl Zero for AsymptoticScalar {
    fn zero() -> Self {
        Self { order: None, prefactor: BigRational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.order.is_none()
    }
}

impl One for AsymptoticScalar {
    fn one() -> Self {
        Self { order: Some(BigRational::zero()), prefactor: BigRational::one() }
    }
}

impl Add for AsymptoticScalar {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (&self.order, &rhs.order) {
            (None, _) => rhs,
            (_, None) => self,
            (Some(a), Some(b)) => match a.cmp(b) {
                Ordering::Less => self,
                Ordering::Greater => rhs,
                Ordering::Equal => Self { order: self.order, prefactor: self.prefactor + rhs.prefactor },
            },
        }
    }
}

impl Mul for AsymptoticScalar {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        match (self.order, rhs.order) {
            (Some(a), Some(b)) => Self { order: Some(a + b), prefactor: self.prefactor * rhs.prefactor },
            _ => Self::zero(),
        }
    }
}

impl fmt::Display for AsymptoticScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.order {
            None => write!(f, "0"),
            Some(v) => write!(f, "{}·e^(-{}/ε)", self.prefactor, v),
        }
    }
}
