//! Weighted digraphs, the augmented digraph with its boundary vertex, and
//! constrained rooted spanning forests.

mod enumerate;
mod forest;

pub use enumerate::{count_forests, enumerate_forests, forest_sum, forest_sums_by_tree_count, ForestIter};
pub use forest::{Forest, ForestQuery};

use crate::error::{Error, Result};
use crate::matrix::AdjacencyMatrix;
use crate::scalar::{Ring, Semiring};

/// Loop-free weighted digraph with out-arcs kept sorted by target.
///
/// Arcs whose weight is zero may be stored; the enumerator skips them unless
/// asked otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Digraph<S> {
    out_arcs: Vec<Vec<(usize, S)>>,
}

impl<S: Semiring> Digraph<S> {
    pub fn new(vertex_count: usize) -> Self {
        Self { out_arcs: vec![Vec::new(); vertex_count] }
    }

    /// Off-diagonal entries become arcs; the diagonal is dropped.
    pub fn from_matrix(g: &AdjacencyMatrix<S>) -> Self {
        let n = g.n();
        let out_arcs = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).map(|j| (j, g.get(i, j).clone())).collect())
            .collect();
        Self { out_arcs }
    }

    /// Inserts or replaces the arc `(from, to)`.
    pub fn set_arc(&mut self, from: usize, to: usize, weight: S) -> Result<()> {
        let n = self.vertex_count();
        for v in [from, to] {
            if v >= n {
                return Err(Error::InvalidIndex { index: v, n });
            }
        }
        if from == to {
            return Err(Error::LoopArc(from));
        }
        let arcs = &mut self.out_arcs[from];
        match arcs.binary_search_by_key(&to, |(t, _)| *t) {
            Ok(pos) => arcs[pos].1 = weight,
            Err(pos) => arcs.insert(pos, (to, weight)),
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.out_arcs.len()
    }

    pub fn out_arcs(&self, v: usize) -> &[(usize, S)] {
        &self.out_arcs[v]
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<&S> {
        let arcs = self.out_arcs.get(from)?;
        arcs.binary_search_by_key(&to, |(t, _)| *t).ok().map(|pos| &arcs[pos].1)
    }
}

/// The digraph of a square matrix with loops removed and one extra vertex,
/// the dagger, receiving an arc `(i, †)` from every ordinary vertex.
///
/// Ordinary vertices are `0..n`; the dagger is vertex `n` and has no out-arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedDigraph<S> {
    n: usize,
    graph: Digraph<S>,
    source: Option<AdjacencyMatrix<S>>,
}

impl<S: Semiring> AugmentedDigraph<S> {
    /// Assembles an augmented digraph from ordinary arcs and one boundary
    /// weight per vertex. No source matrix is attached.
    pub fn from_parts(
        n: usize,
        arcs: impl IntoIterator<Item = (usize, usize, S)>,
        boundary: Vec<S>,
    ) -> Result<Self> {
        if boundary.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: boundary.len() });
        }
        let mut graph = Digraph::new(n + 1);
        for (i, j, w) in arcs {
            if j >= n {
                return Err(Error::InvalidIndex { index: j, n });
            }
            graph.set_arc(i, j, w)?;
        }
        for (i, w) in boundary.into_iter().enumerate() {
            graph.set_arc(i, n, w)?;
        }
        Ok(Self { n, graph, source: None })
    }

    pub fn with_source(mut self, source: AdjacencyMatrix<S>) -> Self {
        self.source = Some(source);
        self
    }

    /// Number of ordinary vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dagger(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &Digraph<S> {
        &self.graph
    }

    pub fn source(&self) -> Option<&AdjacencyMatrix<S>> {
        self.source.as_ref()
    }

    /// Weight of the arc `(i, †)`.
    pub fn boundary_weight(&self, i: usize) -> &S {
        self.graph.weight(i, self.n).expect("every ordinary vertex has a boundary arc")
    }
}

impl<S: Ring> AugmentedDigraph<S> {
    /// `g_{i†} + g_ii + Σ_{j≠i} g_ij` for every row, which is zero when the
    /// graph was built from its source matrix. `None` without a source.
    pub fn row_identity_defects(&self) -> Option<Vec<S>> {
        let g = self.source.as_ref()?;
        Some(
            (0..self.n)
                .map(|i| {
                    let off: S = self
                        .graph
                        .out_arcs(i)
                        .iter()
                        .filter(|(j, _)| *j != self.n)
                        .fold(S::zero(), |acc, (_, w)| acc + w.clone());
                    self.boundary_weight(i).clone() + g.get(i, i).clone() + off
                })
                .collect(),
        )
    }
}

/// Builds the augmented digraph of `g`: arcs `(i, j)` for `i ≠ j` with
/// weight `g_ij`, and `(i, †)` with weight `-Σ_j g_ij` (diagonal included).
pub fn build_augmented<S: Ring>(g: &AdjacencyMatrix<S>) -> AugmentedDigraph<S> {
    let n = g.n();
    let mut graph = Digraph::from_matrix(g);
    graph.out_arcs.push(Vec::new());
    for i in 0..n {
        graph.out_arcs[i].push((n, -g.row_sum(i)));
    }
    AugmentedDigraph { n, graph, source: Some(g.clone()) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> AdjacencyMatrix<f64> {
        AdjacencyMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_vertex_boundary() {
        let h = build_augmented(&m(&[&[5.0]]));
        assert_eq!(*h.boundary_weight(0), -5.0);
        assert!(h.graph().out_arcs(1).is_empty());
    }

    #[test]
    fn boundary_weights_of_two_by_two() {
        let h = build_augmented(&m(&[&[2.0, 1.0], &[1.0, 3.0]]));
        assert_eq!(*h.boundary_weight(0), -3.0);
        assert_eq!(*h.boundary_weight(1), -4.0);
        assert_eq!(h.graph().weight(0, 1), Some(&1.0));
        assert_eq!(h.graph().weight(0, 0), None);
        assert_eq!(h.row_identity_defects().unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn sub_generator_boundary_is_killing_rate() {
        let h = build_augmented(&m(&[&[-0.5, 0.2], &[0.1, -0.1]]));
        assert!((*h.boundary_weight(0) - 0.3).abs() < 1e-15);
        assert!(*h.boundary_weight(0) >= 0.0);
    }

    #[test]
    fn dagger_has_no_out_arcs_and_no_loops() {
        let g = AdjacencyMatrix::from_fn(4, |i, j| (i * 4 + j) as f64 - 5.0);
        let h = build_augmented(&g);
        assert!(h.graph().out_arcs(h.dagger()).is_empty());
        for v in 0..h.graph().vertex_count() {
            assert!(h.graph().out_arcs(v).iter().all(|(t, _)| *t != v));
        }
        assert!(h.row_identity_defects().unwrap().iter().all(|d| *d == 0.0));
    }

    #[test]
    fn set_arc_rejects_loops_and_bad_indices() {
        let mut d = Digraph::<f64>::new(2);
        assert_eq!(d.set_arc(0, 0, 1.0), Err(Error::LoopArc(0)));
        assert_eq!(d.set_arc(0, 2, 1.0), Err(Error::InvalidIndex { index: 2, n: 2 }));
        d.set_arc(1, 0, 2.0).unwrap();
        d.set_arc(1, 0, 3.0).unwrap();
        assert_eq!(d.out_arcs(1), &[(0, 3.0)]);
    }
}
