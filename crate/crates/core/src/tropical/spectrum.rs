use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{AsymptoticScalar, ExponentialMarkovInput};
use crate::calculus::char_poly_augmented;
use crate::error::{Error, Result};
use crate::graph::{enumerate_forests, Forest, ForestQuery};
use crate::polynomial::Polynomial;

/// Leading asymptotics of every coefficient of `det(λI − M)`: entry `k` is
/// `(V_k, m_k)`, the minimum total order over dagger-rooted forests with
/// `k + 1` trees and the summed prefactors of the minimisers.
pub fn tropical_char_poly(inp: &ExponentialMarkovInput) -> Polynomial<AsymptoticScalar> {
    char_poly_augmented(&inp.augmented()).expect("dagger-rooted query is always valid")
}

/// Minimum-order forests of one coefficient, found by explicit enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeForests {
    pub order: Option<BigRational>,
    pub prefactor: BigRational,
    pub forests: Vec<Forest>,
}

/// Brute-force `(min Σ V, Σ_argmin Π m)` over the forests of coefficient
/// `k`, computed from the raw rates without asymptotic-scalar arithmetic.
pub fn extreme_forests(inp: &ExponentialMarkovInput, k: usize) -> Result<ExtremeForests> {
    let h = inp.augmented();
    let dagger = h.dagger();
    let q = ForestQuery::rooted_at([dagger]).with_extra_trees(k);
    let mut best: Option<BigRational> = None;
    let mut prefactor = BigRational::zero();
    let mut forests = Vec::new();
    for forest in enumerate_forests(h.graph(), &q)? {
        let mut order = BigRational::zero();
        let mut product = BigRational::one();
        for (from, to) in forest.arcs() {
            let rate = if to == dagger { inp.killing(from) } else { inp.rate(from, to) };
            let rate = rate.expect("enumerator skips absent arcs");
            order += &rate.order;
            product *= &rate.prefactor;
        }
        match best.as_ref().map(|b| order.cmp(b)) {
            Some(Ordering::Greater) => continue,
            Some(Ordering::Equal) => {
                prefactor += product;
                forests.push(forest);
            }
            _ => {
                best = Some(order);
                prefactor = product;
                forests = vec![forest];
            }
        }
    }
    Ok(ExtremeForests { order: best, prefactor, forests })
}

/// One edge of the lower convex hull of `(k, V_k)`, spanning
/// `multiplicity = to − from` eigenvalues whose magnitudes share the
/// exponent `slope = (V_from − V_to) / multiplicity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullSegment {
    pub from: usize,
    pub to: usize,
    pub slope: BigRational,
}

impl HullSegment {
    pub fn multiplicity(&self) -> usize {
        self.to - self.from
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolygon {
    /// Corner points of the lower hull.
    pub vertices: Vec<(usize, BigRational)>,
    pub segments: Vec<HullSegment>,
    /// Every `V_k` is finite and lies on the hull.
    pub convexity_ok: bool,
}

impl NewtonPolygon {
    /// Hull slope over each unit step `[k − 1, k]`, `k = 1..=N` (only the
    /// steps covered by the hull).
    pub fn unit_slopes(&self) -> Vec<BigRational> {
        self.segments
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.slope.clone(), s.multiplicity()))
            .collect()
    }
}

/// Lower convex hull of the points `(k, V_k)` with finite order.
pub fn newton_polygon(coefficients: &[AsymptoticScalar]) -> NewtonPolygon {
    let points: Vec<(usize, BigRational)> = coefficients
        .iter()
        .enumerate()
        .filter_map(|(k, c)| c.order().map(|v| (k, v.clone())))
        .collect();

    // monotone chain; collinear points are kept so they count as on-hull
    let mut hull: Vec<(usize, BigRational)> = Vec::new();
    for p in &points {
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            if cross(a, b, p).is_negative() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p.clone());
    }
    let on_hull = hull.len();

    let mut vertices: Vec<(usize, BigRational)> = Vec::new();
    for p in hull {
        if vertices.len() >= 2 && cross(&vertices[vertices.len() - 2], &vertices[vertices.len() - 1], &p).is_zero() {
            vertices.pop();
        }
        vertices.push(p);
    }
    let segments = vertices
        .windows(2)
        .map(|w| HullSegment {
            from: w[0].0,
            to: w[1].0,
            slope: (&w[0].1 - &w[1].1) / BigRational::from_integer((w[1].0 - w[0].0).into()),
        })
        .collect();
    NewtonPolygon { vertices, segments, convexity_ok: on_hull == coefficients.len() }
}

fn cross(a: &(usize, BigRational), b: &(usize, BigRational), c: &(usize, BigRational)) -> BigRational {
    let int = |k: usize| BigRational::from_integer(k.into());
    (int(b.0) - int(a.0)) * (&c.1 - &a.1) - (&b.1 - &a.1) * (int(c.0) - int(a.0))
}

/// `λ_k ≈ lambda · e^(−exponent/ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueAsymptotic {
    pub k: usize,
    pub exponent: BigRational,
    pub lambda: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSpectrum {
    pub coefficient_orders: Vec<AsymptoticScalar>,
    pub polygon: NewtonPolygon,
    /// Sorted by exponent, largest first (slowest eigenvalue first).
    pub eigenvalues: Vec<EigenvalueAsymptotic>,
    pub convexity_ok: bool,
}

/// Per-eigenvalue asymptotics from dominant two-term balance:
/// `a_k λ^k + a_{k−1} λ^{k−1} ≈ 0` gives `exponent_k = V_{k−1} − V_k` and
/// `Λ_k = −m_{k−1} / m_k`.
///
/// Fails with [`Error::DegenerateSlopes`] (carrying the hull segments) when
/// some coefficient is off the hull or tropically zero, or two unit slopes
/// coincide.
pub fn eigenvalue_asymptotics(coefficients: &[AsymptoticScalar]) -> Result<AsymptoticSpectrum> {
    let polygon = newton_polygon(coefficients);
    if !polygon.convexity_ok || polygon.segments.iter().any(|s| s.multiplicity() > 1) {
        return Err(Error::DegenerateSlopes { segments: polygon.segments });
    }
    let order = |k: usize| coefficients[k].order().expect("all orders finite on a convex polygon");
    let mut eigenvalues: Vec<EigenvalueAsymptotic> = (1..coefficients.len())
        .map(|k| EigenvalueAsymptotic {
            k,
            exponent: order(k - 1) - order(k),
            lambda: -(coefficients[k - 1].prefactor() / coefficients[k].prefactor()),
        })
        .collect();
    eigenvalues.sort_by(|a, b| b.exponent.cmp(&a.exponent).then(a.k.cmp(&b.k)));
    Ok(AsymptoticSpectrum {
        coefficient_orders: coefficients.to_vec(),
        convexity_ok: polygon.convexity_ok,
        polygon,
        eigenvalues,
    })
}

/// Convenience: [`tropical_char_poly`] followed by
/// [`eigenvalue_asymptotics`].
pub fn asymptotic_spectrum(inp: &ExponentialMarkovInput) -> Result<AsymptoticSpectrum> {
    eigenvalue_asymptotics(tropical_char_poly(inp).coeffs())
}
