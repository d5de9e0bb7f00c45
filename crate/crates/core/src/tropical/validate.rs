//! Finite-ε check of the predicted eigenvalue asymptotics.
//!
//! At each ε the characteristic polynomial is evaluated as `f64` forest
//! sums over the directly realised augmented digraph. Every term is
//! nonnegative for a sub-generator, so each coefficient keeps full relative
//! precision even when it is `e^{-180}` small; its roots are then found by
//! Aberth iteration. A dense eigensolver cannot resolve eigenvalues that far
//! below `‖M‖ · 1e-16`.

use num_complex::Complex64;

use super::{asymptotic_spectrum, ExponentialMarkovInput};
use crate::calculus::char_poly_augmented;
use crate::error::{Error, Result};
use crate::oracles::polynomial_roots;
use crate::scalar::{format_rational, rational_to_f64};

#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueCheck {
    pub k: usize,
    pub predicted_exponent: f64,
    pub predicted_exponent_exact: String,
    pub predicted_lambda: f64,
    /// Intercept of the least-squares line `−ε ln|λ(ε)| = E + s·ε`.
    pub estimated_exponent: f64,
    /// `λ(ε_min) · e^{E/ε_min}` with the predicted exponent `E`.
    pub estimated_lambda: Complex64,
    pub exponent_rel_error: f64,
    pub lambda_rel_error: f64,
    /// `(ε, λ(ε))` for every ε of the schedule.
    pub samples: Vec<(f64, Complex64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub eps: Vec<f64>,
    pub checks: Vec<EigenvalueCheck>,
}

impl ValidationReport {
    pub fn max_exponent_error(&self) -> f64 {
        self.checks.iter().map(|c| c.exponent_rel_error).fold(0.0, f64::max)
    }

    pub fn max_lambda_error(&self) -> f64 {
        self.checks.iter().map(|c| c.lambda_rel_error).fold(0.0, f64::max)
    }
}

/// Eigenvalues of the realised sub-generator at `eps`, sorted by increasing
/// magnitude.
pub fn eigenvalues_at(inp: &ExponentialMarkovInput, eps: f64) -> Result<Vec<Complex64>> {
    let h = inp.realize_augmented(eps)?;
    let poly = char_poly_augmented(&h)?;
    let mut roots = polynomial_roots(poly.coeffs())?;
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    Ok(roots)
}

pub fn validate_asymptotics(inp: &ExponentialMarkovInput, eps: &[f64]) -> Result<ValidationReport> {
    if eps.len() < 2 {
        return Err(Error::InvalidEpsilon("need at least two values".into()));
    }
    if eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidEpsilon("values must be positive and finite".into()));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidEpsilon("values must be strictly decreasing".into()));
    }
    let spectrum = asymptotic_spectrum(inp)?;
    let sampled: Vec<Vec<Complex64>> = eps.iter().map(|&e| eigenvalues_at(inp, e)).collect::<Result<_>>()?;
    let eps_min = *eps.last().expect("nonempty");

    // largest exponent ↔ smallest magnitude
    let checks = spectrum
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(idx, pred)| {
            let predicted_exponent = rational_to_f64(&pred.exponent);
            let predicted_lambda = rational_to_f64(&pred.lambda);
            let samples: Vec<(f64, Complex64)> = eps.iter().zip(&sampled).map(|(&e, roots)| (e, roots[idx])).collect();
            let points: Vec<(f64, f64)> = samples.iter().map(|(e, l)| (*e, -e * l.norm().ln())).collect();
            let estimated_exponent = intercept(&points);
            let lambda_min = samples.last().expect("nonempty").1;
            let estimated_lambda = lambda_min * (predicted_exponent / eps_min).exp();
            EigenvalueCheck {
                k: pred.k,
                predicted_exponent,
                predicted_exponent_exact: format_rational(&pred.exponent),
                predicted_lambda,
                estimated_exponent,
                estimated_lambda,
                exponent_rel_error: relative_error(estimated_exponent, predicted_exponent),
                lambda_rel_error: (estimated_lambda - Complex64::from(predicted_lambda)).norm()
                    / predicted_lambda.abs(),
                samples,
            }
        })
        .collect();
    Ok(ValidationReport { eps: eps.to_vec(), checks })
}

fn relative_error(estimate: f64, target: f64) -> f64 {
    if target == 0.0 {
        estimate.abs()
    } else {
        ((estimate - target) / target).abs()
    }
}

/// Least-squares intercept of `y = a + b x`.
fn intercept(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    my - (sxy / sxx) * mx
}
