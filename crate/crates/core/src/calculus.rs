//! Signless forest expansions of matrix quantities.
//!
//! Every quantity here is a sum of forest productivities over the augmented
//! digraph `G†` (or over `G` itself for the Kirchhoff matrix), multiplied by
//! at most a global sign. The `*_augmented` entry points take a prepared
//! `G†` and only need a semiring, which is what the tropical module uses.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{build_augmented, forest_sum, forest_sums_by_tree_count, AugmentedDigraph, Digraph, ForestQuery};
use crate::matrix::AdjacencyMatrix;
use crate::polynomial::{CharPolynomial, Polynomial};
use crate::scalar::{sign_power, Field, Ring, Semiring};

fn check_index(index: usize, n: usize) -> Result<()> {
    if index < n {
        Ok(())
    } else {
        Err(Error::InvalidIndex { index, n })
    }
}

/// Forest sums over roots `roots`, bucketed by the number of extra trees.
fn extra_tree_sums<S: Semiring>(graph: &Digraph<S>, query: &ForestQuery, len: usize) -> Result<Vec<S>> {
    let fixed = query.required_roots.len();
    let by_trees = forest_sums_by_tree_count(graph, query)?;
    Ok((0..len).map(|k| by_trees.get(k + fixed).cloned().unwrap_or_else(S::zero)).collect())
}

/// `det(λI − G)` with `coeffs[k]` the sum of productivities of the forests of
/// `G†` rooted at `†` with `k + 1` trees.
pub fn char_poly_augmented<S: Semiring>(h: &AugmentedDigraph<S>) -> Result<CharPolynomial<S>> {
    let q = ForestQuery::rooted_at([h.dagger()]);
    Ok(Polynomial::new(extra_tree_sums(h.graph(), &q, h.n() + 1)?))
}

pub fn char_poly<S: Ring>(g: &AdjacencyMatrix<S>) -> CharPolynomial<S> {
    char_poly_augmented(&build_augmented(g)).expect("dagger-rooted query is always valid")
}

pub fn determinant<S: Ring>(g: &AdjacencyMatrix<S>) -> S {
    let h = build_augmented(g);
    let q = ForestQuery::rooted_at([h.dagger()]).with_extra_trees(0);
    let sum = forest_sum(h.graph(), &q).expect("dagger-rooted query is always valid");
    sign_power::<S>(g.n()) * sum
}

/// Determinant of `g` with the rows and columns in `struck` removed. Striking
/// every index leaves the empty minor, whose determinant is one.
pub fn diagonal_minor_det<S: Ring>(g: &AdjacencyMatrix<S>, struck: &BTreeSet<usize>) -> Result<S> {
    let n = g.n();
    for &r in struck {
        check_index(r, n)?;
    }
    let h = build_augmented(g);
    let q = ForestQuery::rooted_at(struck.iter().copied().chain([h.dagger()])).with_extra_trees(0);
    Ok(sign_power::<S>(n - struck.len()) * forest_sum(h.graph(), &q)?)
}

/// Algebraic adjunct (signed cofactor) of entry `g[row][col]`:
/// `(-1)^(N-1)` times the sum over forests rooted at `{†, row}` that contain
/// the way `col ⇝ row`.
pub fn cofactor<S: Ring>(g: &AdjacencyMatrix<S>, row: usize, col: usize) -> Result<S> {
    let n = g.n();
    check_index(row, n)?;
    check_index(col, n)?;
    let h = build_augmented(g);
    let mut q = ForestQuery::rooted_at([row, h.dagger()]).with_extra_trees(0);
    if row != col {
        q = q.with_path(col, row);
    }
    Ok(sign_power::<S>(n - 1) * forest_sum(h.graph(), &q)?)
}

/// `det(λI − G_nn)`: coefficient `k` sums forests rooted at `{†, pivot}` with
/// `k + 2` trees. Has `N` coefficients.
pub fn denominator_poly_augmented<S: Semiring>(h: &AugmentedDigraph<S>, pivot: usize) -> Result<Polynomial<S>> {
    check_index(pivot, h.n())?;
    let q = ForestQuery::rooted_at([pivot, h.dagger()]);
    Ok(Polynomial::new(extra_tree_sums(h.graph(), &q, h.n())?))
}

pub fn denominator_poly<S: Ring>(g: &AdjacencyMatrix<S>, pivot: usize) -> Result<Polynomial<S>> {
    denominator_poly_augmented(&build_augmented(g), pivot)
}

/// Numerator of the eigenvector component ratio: like the denominator but
/// restricted to forests containing the way `other ⇝ pivot`. Has `N`
/// coefficients; the last one is always zero.
pub fn numerator_poly_augmented<S: Semiring>(
    h: &AugmentedDigraph<S>,
    pivot: usize,
    other: usize,
) -> Result<Polynomial<S>> {
    check_index(pivot, h.n())?;
    check_index(other, h.n())?;
    if pivot == other {
        return Err(Error::InvalidQuery("numerator needs two distinct indices".into()));
    }
    let q = ForestQuery::rooted_at([pivot, h.dagger()]).with_path(other, pivot);
    Ok(Polynomial::new(extra_tree_sums(h.graph(), &q, h.n())?))
}

pub fn numerator_poly<S: Ring>(g: &AdjacencyMatrix<S>, pivot: usize, other: usize) -> Result<Polynomial<S>> {
    numerator_poly_augmented(&build_augmented(g), pivot, other)
}

/// Eigenvector normalised so that `components[pivot] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvectorResult<S> {
    pub pivot: usize,
    pub lambda: S,
    pub components: Vec<S>,
    pub denominator: S,
}

/// Eigenvector of `G` (or of `Gᵀ` when `transpose` is set) for the simple
/// eigenvalue `lambda`, from forest sums alone.
///
/// Right eigenvector: `v_m = N_{pivot,m}(λ) / D_pivot(λ)` where `N` counts
/// ways `m ⇝ pivot`. Left eigenvector: the numerator uses forests rooted at
/// `{†, m}` with the way `pivot ⇝ m`, over the same denominator.
pub fn eigenvector_components_augmented<S: Field>(
    h: &AugmentedDigraph<S>,
    lambda: &S,
    pivot: usize,
    transpose: bool,
) -> Result<EigenvectorResult<S>> {
    let n = h.n();
    check_index(pivot, n)?;
    let denominator = denominator_poly_augmented(h, pivot)?.eval(lambda);
    if denominator.is_zero() {
        return Err(Error::ZeroDenominator { pivot });
    }
    let components = (0..n)
        .map(|m| {
            if m == pivot {
                return Ok(S::one());
            }
            let numerator = if transpose {
                numerator_poly_augmented(h, m, pivot)?
            } else {
                numerator_poly_augmented(h, pivot, m)?
            };
            Ok(numerator.eval(lambda) / denominator.clone())
        })
        .collect::<Result<Vec<S>>>()?;
    Ok(EigenvectorResult { pivot, lambda: lambda.clone(), components, denominator })
}

pub fn eigenvector_components<S: Field>(
    g: &AdjacencyMatrix<S>,
    lambda: &S,
    pivot: usize,
    transpose: bool,
) -> Result<EigenvectorResult<S>> {
    eigenvector_components_augmented(&build_augmented(g), lambda, pivot, transpose)
}

/// `C = D − G` with `D` the diagonal of row sums.
pub fn kirchhoff_matrix<S: Ring>(g: &AdjacencyMatrix<S>) -> AdjacencyMatrix<S> {
    let n = g.n();
    let row_sums: Vec<S> = (0..n).map(|i| g.row_sum(i)).collect();
    AdjacencyMatrix::from_fn(n, |i, j| {
        let d = if i == j { row_sums[i].clone() } else { S::zero() };
        d - g.get(i, j).clone()
    })
}

/// `det(λI − C)` for the Kirchhoff matrix `C` of `g`, from the spanning
/// forests of `G` itself: the coefficient of `λ^k` is `(-1)^(N+k)` times the
/// sum over forests with exactly `k` trees.
pub fn kirchhoff_char_poly<S: Ring>(g: &AdjacencyMatrix<S>) -> CharPolynomial<S> {
    let n = g.n();
    let graph = Digraph::from_matrix(g);
    let by_trees = forest_sums_by_tree_count(&graph, &ForestQuery::default()).expect("unconstrained query is valid");
    Polynomial::new(
        by_trees
            .into_iter()
            .enumerate()
            .map(|(k, s)| sign_power::<S>(n + k) * s)
            .collect(),
    )
}
