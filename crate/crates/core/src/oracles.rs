//! Signed reference formulas and numeric helpers used to check the forest
//! expansions. Nothing here touches the augmented digraph.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::AdjacencyMatrix;
use crate::polynomial::{CharPolynomial, Polynomial};
use crate::scalar::{sign_power, Magnitude, Ring, Semiring};

/// Factorial cost guard for the permutation expansions.
pub const PERMUTATION_LIMIT: usize = 10;

/// Vertex-disjoint dicircuits of a digraph; loops count as 1-dicircuits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSubgraph {
    /// Each cycle starts at its smallest vertex.
    pub cycles: Vec<Vec<usize>>,
}

impl LinearSubgraph {
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cycles
            .iter()
            .flat_map(|c| (0..c.len()).map(move |i| (c[i], c[(i + 1) % c.len()])))
    }

    /// Number of dicircuits.
    pub fn p(&self) -> usize {
        self.cycles.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    pub fn productivity<S: Semiring>(&self, g: &AdjacencyMatrix<S>) -> S {
        self.arcs().fold(S::one(), |acc, (i, j)| acc * g.get(i, j).clone())
    }
}

/// Every linear subgraph of `g` using only nonzero entries (the empty one
/// included). Each is produced once: the smallest uncovered vertex is either
/// skipped or starts a new dicircuit through larger free vertices.
pub fn linear_subgraphs<S: Semiring>(g: &AdjacencyMatrix<S>) -> Vec<LinearSubgraph> {
    fn extend_cycle<S: Semiring>(
        g: &AdjacencyMatrix<S>,
        cycle: &mut Vec<usize>,
        used: &mut [bool],
        next_start: usize,
        chosen: &mut Vec<Vec<usize>>,
        out: &mut Vec<LinearSubgraph>,
    ) {
        let start = cycle[0];
        let last = *cycle.last().expect("cycle is never empty");
        if !g.get(last, start).is_zero() {
            chosen.push(cycle.clone());
            choose(g, next_start, used, chosen, out);
            chosen.pop();
        }
        for v in start + 1..g.n() {
            if !used[v] && !g.get(last, v).is_zero() {
                used[v] = true;
                cycle.push(v);
                extend_cycle(g, cycle, used, next_start, chosen, out);
                cycle.pop();
                used[v] = false;
            }
        }
    }

    fn choose<S: Semiring>(
        g: &AdjacencyMatrix<S>,
        from: usize,
        used: &mut [bool],
        chosen: &mut Vec<Vec<usize>>,
        out: &mut Vec<LinearSubgraph>,
    ) {
        let Some(v) = (from..g.n()).find(|&v| !used[v]) else {
            out.push(LinearSubgraph { cycles: chosen.clone() });
            return;
        };
        choose(g, v + 1, used, chosen, out);
        used[v] = true;
        let mut cycle = vec![v];
        extend_cycle(g, &mut cycle, used, v + 1, chosen, out);
        used[v] = false;
    }

    let mut out = Vec::new();
    let mut used = vec![false; g.n()];
    choose(g, 0, &mut used, &mut Vec::new(), &mut out);
    out
}

/// `det(λI − G)` from the coefficient theorem for digraphs: the coefficient
/// of `λ^(N−i)` is `Σ (-1)^p(L) π_L` over linear subgraphs with `i` vertices.
pub fn cycle_cover_char_poly<S: Ring>(g: &AdjacencyMatrix<S>) -> CharPolynomial<S> {
    let n = g.n();
    let mut coeffs = vec![S::zero(); n + 1];
    for l in linear_subgraphs(g) {
        let term = sign_power::<S>(l.p()) * l.productivity(g);
        let k = n - l.vertex_count();
        coeffs[k] = coeffs[k].clone() + term;
    }
    Polynomial::new(coeffs)
}

/// Visits every permutation of `0..n` with its sign (Heap's algorithm).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize], bool)) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut even = true;
    visit(&perm, even);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            let j = if i % 2 == 0 { 0 } else { counters[i] };
            perm.swap(j, i);
            even = !even;
            visit(&perm, even);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

fn guard(n: usize) -> Result<()> {
    if n > PERMUTATION_LIMIT {
        Err(Error::TooLarge { n, limit: PERMUTATION_LIMIT })
    } else {
        Ok(())
    }
}

/// Leibniz expansion of the determinant.
pub fn perm_expansion_det<S: Ring>(g: &AdjacencyMatrix<S>) -> Result<S> {
    guard(g.n())?;
    let mut total = S::zero();
    for_each_permutation(g.n(), |perm, even| {
        let term = perm.iter().enumerate().fold(S::one(), |acc, (i, &j)| acc * g.get(i, j).clone());
        total = std::mem::replace(&mut total, S::zero()) + if even { term } else { -term };
    });
    Ok(total)
}

/// Leibniz expansion of `det(λI − G)` with polynomial entries.
pub fn perm_expansion_char_poly<S: Ring>(g: &AdjacencyMatrix<S>) -> Result<CharPolynomial<S>> {
    let n = g.n();
    guard(n)?;
    let mut total = Polynomial::new(vec![S::zero(); n + 1]);
    for_each_permutation(n, |perm, even| {
        let term = perm.iter().enumerate().fold(Polynomial::constant(S::one()), |acc, (i, &j)| {
            let entry = if i == j {
                Polynomial::linear(-g.get(i, j).clone(), S::one())
            } else {
                Polynomial::constant(-g.get(i, j).clone())
            };
            acc * entry
        });
        let term = if even { term } else { term.neg() };
        total = std::mem::replace(&mut total, Polynomial::new(Vec::new())) + term;
    });
    Ok(total)
}

/// `‖(λI − G) v‖_∞`.
pub fn residual<S: Ring + Magnitude>(g: &AdjacencyMatrix<S>, lambda: &S, v: &[S]) -> f64 {
    (0..g.n())
        .map(|i| {
            let gv = (0..g.n()).fold(S::zero(), |acc, j| acc + g.get(i, j).clone() * v[j].clone());
            (lambda.clone() * v[i].clone() - gv).magnitude()
        })
        .fold(0.0, f64::max)
}

/// All eigenpairs of a dense real matrix: eigenvalues from a real Schur
/// decomposition, each eigenvector as the right singular vector of
/// `G − λI` for its smallest singular value. Vectors have unit 2-norm.
pub fn numeric_eigenpairs(g: &AdjacencyMatrix<f64>) -> Result<Vec<(Complex64, Vec<Complex64>)>> {
    let n = g.n();
    let dense = DMatrix::from_fn(n, n, |i, j| *g.get(i, j));
    let schur = Schur::try_new(dense.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::ConvergenceFailure("Schur iteration did not converge".into()))?;
    let eigenvalues = schur.complex_eigenvalues();
    let complex = dense.map(Complex64::from);
    eigenvalues
        .iter()
        .map(|&lambda| {
            let shifted = &complex - DMatrix::from_diagonal_element(n, n, lambda);
            let svd = shifted
                .try_svd(false, true, f64::EPSILON, 10_000)
                .ok_or_else(|| Error::ConvergenceFailure("SVD did not converge".into()))?;
            let v_t = svd.v_t.expect("requested V^H");
            let smallest = svd
                .singular_values
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .expect("matrix is nonempty");
            let v: Vec<Complex64> = v_t.row(smallest).iter().map(|z| z.conj()).collect();
            Ok((lambda, v))
        })
        .collect()
}

/// Roots of `Σ coeffs[k] λ^k` by Aberth–Ehrlich iteration.
///
/// Starting points sit on circles whose radii come from the upper convex
/// hull of `(k, ln|a_k|)`, so roots of wildly different magnitudes are
/// found without rescaling. Exact zero roots are split off first.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let top = coeffs
        .iter()
        .rposition(|c| *c != 0.0)
        .ok_or_else(|| Error::ConvergenceFailure("zero polynomial has no finite root set".into()))?;
    let low = coeffs.iter().position(|c| *c != 0.0).expect("some coefficient is nonzero");
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    let a: Vec<f64> = coeffs[low..=top].to_vec();
    let degree = a.len() - 1;
    if degree == 0 {
        return Ok(roots);
    }

    let mut z = aberth_start(&a);
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in a.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    let mut converged = vec![false; degree];
    for _ in 0..500 {
        for i in 0..degree {
            if converged[i] {
                continue;
            }
            let (p, dp) = eval(z[i]);
            if p == Complex64::new(0.0, 0.0) {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..degree).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                converged[i] = true;
            }
        }
        if converged.iter().all(|&c| c) {
            roots.extend(z);
            return Ok(roots);
        }
    }
    Err(Error::ConvergenceFailure("Aberth iteration hit its iteration cap".into()))
}

fn aberth_start(a: &[f64]) -> Vec<Complex64> {
    let degree = a.len() - 1;
    let pts: Vec<(usize, f64)> = a
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(k, c)| (k, c.abs().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (o, q) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (q.0 as f64 - o.0 as f64) * (p.1 - o.1) - (q.1 - o.1) * (p.0 as f64 - o.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut start = Vec::with_capacity(degree);
    for w in hull.windows(2) {
        let (k0, l0) = w[0];
        let (k1, l1) = w[1];
        let count = k1 - k0;
        let radius = ((l0 - l1) / count as f64).exp();
        for j in 0..count {
            let angle = 2.0 * std::f64::consts::PI * (j as f64 / count as f64 + k0 as f64 / degree as f64) + 0.4;
            start.push(Complex64::from_polar(radius, angle));
        }
    }
    start
}
