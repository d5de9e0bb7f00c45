//! Backtracking enumeration of constrained spanning forests.
//!
//! Vertices are decided in ascending order. Each vertex either becomes a
//! root or takes one out-arc, tried in ascending target order, with the
//! root option first. A new arc `v → j` closes a dicircuit exactly when the
//! already-decided parent chain from `j` returns to `v`. Branches are cut as
//! soon as the remaining vertices cannot produce the requested tree count.

use rayon::prelude::*;

use super::forest::path_in;
use super::{Digraph, Forest, ForestQuery};
use crate::error::Result;
use crate::scalar::Semiring;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Choice {
    Root,
    Arc { target: usize, slot: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Fresh,
    Yielded,
    Exhausted,
}

/// Deterministic stream of the forests selected by a [`ForestQuery`].
///
/// Besides the `Iterator` impl, [`ForestIter::advance`] moves to the next
/// forest without allocating, and [`ForestIter::productivity`] returns the
/// running product of its arc weights.
pub struct ForestIter<'g, S> {
    graph: &'g Digraph<S>,
    options: Vec<Vec<Choice>>,
    required_after: Vec<usize>,
    tree_target: Option<usize>,
    path: Option<(usize, usize)>,
    cursor: Vec<usize>,
    first_end: usize,
    parent: Vec<Option<usize>>,
    products: Vec<S>,
    roots: usize,
    depth: usize,
    state: State,
}

/// Starts the forest stream of `graph` under `query`.
pub fn enumerate_forests<'g, S: Semiring>(graph: &'g Digraph<S>, query: &ForestQuery) -> Result<ForestIter<'g, S>> {
    ForestIter::new(graph, query)
}

impl<'g, S: Semiring> ForestIter<'g, S> {
    pub fn new(graph: &'g Digraph<S>, query: &ForestQuery) -> Result<Self> {
        let v_count = graph.vertex_count();
        query.validate(v_count)?;

        let options: Vec<Vec<Choice>> = (0..v_count)
            .map(|v| {
                if query.required_roots.contains(&v) {
                    return vec![Choice::Root];
                }
                let forced: Vec<usize> =
                    query.required_arcs.iter().filter(|(a, _)| *a == v).map(|(_, b)| *b).collect();
                let allowed = |target: usize, w: &S| {
                    (query.include_zero_arcs || !w.is_zero())
                        && !query.forbidden_arcs.contains(&(v, target))
                        && (forced.is_empty() || forced == [target])
                };
                let arcs = graph
                    .out_arcs(v)
                    .iter()
                    .enumerate()
                    .filter(|(_, (t, w))| allowed(*t, w))
                    .map(|(slot, (t, _))| Choice::Arc { target: *t, slot });
                if forced.is_empty() {
                    std::iter::once(Choice::Root).chain(arcs).collect()
                } else {
                    arcs.collect()
                }
            })
            .collect();

        let mut required_after = vec![0; v_count];
        for v in (0..v_count.saturating_sub(1)).rev() {
            required_after[v] = required_after[v + 1] + usize::from(query.required_roots.contains(&(v + 1)));
        }

        let first_end = options.first().map_or(0, Vec::len);
        Ok(Self {
            graph,
            options,
            required_after,
            tree_target: query.tree_count(),
            path: query.path,
            cursor: vec![0; v_count],
            first_end,
            parent: vec![None; v_count],
            products: vec![S::one(); v_count + 1],
            roots: 0,
            depth: 0,
            state: State::Fresh,
        })
    }

    /// Number of ways the first vertex can be decided; each is one partition
    /// of the stream.
    pub fn partition_count(&self) -> usize {
        self.options.first().map_or(0, Vec::len)
    }

    /// Restricts the stream to forests whose first vertex takes its
    /// `index`-th option. Partitions in index order concatenate to the full
    /// stream.
    pub fn restrict_to_partition(mut self, index: usize) -> Self {
        assert!(index < self.partition_count(), "partition index out of range");
        assert_eq!(self.state, State::Fresh, "restrict before iterating");
        self.cursor[0] = index;
        self.first_end = index + 1;
        self
    }

    /// Moves to the next forest. Returns `false` once the stream is
    /// exhausted.
    pub fn advance(&mut self) -> bool {
        let v_count = self.options.len();
        match self.state {
            State::Exhausted => return false,
            State::Yielded => {
                if !self.retreat() {
                    self.state = State::Exhausted;
                    return false;
                }
            }
            State::Fresh => {
                if v_count == 0 {
                    self.state = State::Exhausted;
                    return false;
                }
            }
        }
        loop {
            if self.depth == v_count {
                if self.path.is_none_or(|(m, n)| path_in(&self.parent, m, n)) {
                    self.state = State::Yielded;
                    return true;
                }
                if !self.retreat() {
                    self.state = State::Exhausted;
                    return false;
                }
                continue;
            }
            let v = self.depth;
            match self.next_feasible(v) {
                Some(idx) => {
                    self.cursor[v] = idx + 1;
                    self.assign(v, self.options[v][idx]);
                    self.depth += 1;
                    if self.depth < v_count {
                        self.cursor[self.depth] = 0;
                    }
                }
                None => {
                    if !self.retreat() {
                        self.state = State::Exhausted;
                        return false;
                    }
                }
            }
        }
    }

    /// Parent links of the current forest. Only meaningful after
    /// [`advance`](Self::advance) returned `true`.
    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Number of trees of the current forest.
    pub fn tree_count(&self) -> usize {
        self.roots
    }

    /// Productivity of the current forest.
    pub fn productivity(&self) -> &S {
        &self.products[self.options.len()]
    }

    fn end_for(&self, v: usize) -> usize {
        if v == 0 {
            self.first_end
        } else {
            self.options[v].len()
        }
    }

    fn next_feasible(&self, v: usize) -> Option<usize> {
        let remaining = self.options.len() - v - 1;
        (self.cursor[v]..self.end_for(v)).find(|&idx| match self.options[v][idx] {
            Choice::Root => self
                .tree_target
                .is_none_or(|t| self.roots + 1 + self.required_after[v] <= t && self.roots + 1 + remaining >= t),
            Choice::Arc { target, .. } => {
                self.tree_target.is_none_or(|t| self.roots + remaining >= t) && !self.closes_cycle(v, target)
            }
        })
    }

    fn closes_cycle(&self, v: usize, target: usize) -> bool {
        let mut cur = target;
        while cur < v {
            match self.parent[cur] {
                Some(next) => cur = next,
                None => return false,
            }
        }
        cur == v
    }

    fn assign(&mut self, v: usize, choice: Choice) {
        let next = match choice {
            Choice::Root => {
                self.roots += 1;
                self.parent[v] = None;
                self.products[v].clone()
            }
            Choice::Arc { target, slot } => {
                self.parent[v] = Some(target);
                self.products[v].clone() * self.graph.out_arcs(v)[slot].1.clone()
            }
        };
        self.products[v + 1] = next;
    }

    fn retreat(&mut self) -> bool {
        if self.depth == 0 {
            return false;
        }
        self.depth -= 1;
        let v = self.depth;
        if self.parent[v].take().is_none() {
            self.roots -= 1;
        }
        true
    }
}

impl<S: Semiring> Iterator for ForestIter<'_, S> {
    type Item = Forest;

    fn next(&mut self) -> Option<Forest> {
        self.advance().then(|| Forest::from_parents_unchecked(self.parent.clone()))
    }
}

/// Sums of forest productivities bucketed by tree count: entry `t` is the
/// sum over selected forests with exactly `t` trees.
///
/// The stream is split by the first vertex's choice and the partitions run in
/// parallel; partial sums are merged sequentially in partition order, so the
/// result does not depend on scheduling, including for `f64`.
pub fn forest_sums_by_tree_count<S: Semiring>(graph: &Digraph<S>, query: &ForestQuery) -> Result<Vec<S>> {
    let v_count = graph.vertex_count();
    let probe = ForestIter::new(graph, query)?;
    let partials: Vec<Vec<S>> = (0..probe.partition_count())
        .into_par_iter()
        .map(|p| {
            let mut it = ForestIter::new(graph, query).expect("query already validated").restrict_to_partition(p);
            let mut sums = vec![S::zero(); v_count + 1];
            while it.advance() {
                let t = it.tree_count();
                sums[t] = std::mem::replace(&mut sums[t], S::zero()) + it.productivity().clone();
            }
            sums
        })
        .collect();
    let mut total = vec![S::zero(); v_count + 1];
    for part in partials {
        for (acc, x) in total.iter_mut().zip(part) {
            *acc = std::mem::replace(acc, S::zero()) + x;
        }
    }
    Ok(total)
}

/// Sum of productivities over every selected forest.
pub fn forest_sum<S: Semiring>(graph: &Digraph<S>, query: &ForestQuery) -> Result<S> {
    Ok(forest_sums_by_tree_count(graph, query)?.into_iter().fold(S::zero(), |acc, x| acc + x))
}

/// Number of selected forests.
pub fn count_forests<S: Semiring>(graph: &Digraph<S>, query: &ForestQuery) -> Result<u64> {
    let probe = ForestIter::new(graph, query)?;
    Ok((0..probe.partition_count())
        .into_par_iter()
        .map(|p| {
            let mut it = ForestIter::new(graph, query).expect("query already validated").restrict_to_partition(p);
            let mut count = 0u64;
            while it.advance() {
                count += 1;
            }
            count
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_augmented;
    use crate::matrix::AdjacencyMatrix;
    use crate::error::Error;

    fn sample() -> Digraph<f64> {
        let g = AdjacencyMatrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        build_augmented(&g).graph().clone()
    }

    fn listed(graph: &Digraph<f64>, q: &ForestQuery) -> Vec<String> {
        enumerate_forests(graph, q).unwrap().map(|f| f.display_with(Some(2))).collect()
    }

    #[test]
    fn dagger_rooted_spanning_trees_of_two_by_two() {
        let got = listed(&sample(), &ForestQuery::rooted_at([2]).with_extra_trees(0));
        assert_eq!(got, vec!["{(1,2),(2,†)}", "{(1,†),(2,1)}", "{(1,†),(2,†)}"]);
    }

    #[test]
    fn only_empty_forest_when_every_vertex_is_a_root() {
        let got = listed(&sample(), &ForestQuery::rooted_at([2]).with_extra_trees(2));
        assert_eq!(got, vec!["{}"]);
    }

    #[test]
    fn path_constrained_query() {
        let got = listed(&sample(), &ForestQuery::rooted_at([2, 0]).with_extra_trees(0).with_path(1, 0));
        assert_eq!(got, vec!["{(2,1)}"]);
    }

    #[test]
    fn invalid_tree_count() {
        let err = enumerate_forests(&sample(), &ForestQuery::rooted_at([2, 0]).with_extra_trees(2)).err();
        assert!(matches!(err, Some(Error::InvalidQuery(_))));
    }

    #[test]
    fn zero_arcs_skipped_unless_requested() {
        let g = AdjacencyMatrix::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let h = build_augmented(&g);
        let q = ForestQuery::rooted_at([2]);
        assert_eq!(count_forests(h.graph(), &q).unwrap(), 1);
        // all dagger-rooted forests on three vertices with two free vertices
        assert_eq!(count_forests(h.graph(), &q.clone().including_zero_arcs()).unwrap(), 8);
    }

    #[test]
    fn required_and_forbidden_arcs() {
        let q = ForestQuery::rooted_at([2]).with_extra_trees(0).forbid(0, 2);
        assert_eq!(listed(&sample(), &q), vec!["{(1,2),(2,†)}"]);
        let q = ForestQuery::rooted_at([2]).require(1, 0);
        assert_eq!(listed(&sample(), &q), vec!["{(2,1)}", "{(1,†),(2,1)}"]);
    }

    #[test]
    fn running_product_matches_productivity() {
        let g = AdjacencyMatrix::from_fn(4, |i, j| 1.0 + (i * 4 + j) as f64);
        let h = build_augmented(&g);
        let mut it = enumerate_forests(h.graph(), &ForestQuery::rooted_at([4])).unwrap();
        while it.advance() {
            let f = Forest::from_parents(it.parents().to_vec()).unwrap();
            assert_eq!(*it.productivity(), f.productivity(h.graph()).unwrap());
            assert_eq!(it.tree_count(), f.tree_count());
        }
    }

    #[test]
    fn partitions_concatenate_to_full_stream() {
        let g = AdjacencyMatrix::from_fn(3, |i, j| (i + 2 * j) as f64 - 2.0);
        let h = build_augmented(&g);
        let q = ForestQuery::rooted_at([3]);
        let full: Vec<Forest> = enumerate_forests(h.graph(), &q).unwrap().collect();
        let parts = enumerate_forests(h.graph(), &q).unwrap().partition_count();
        let joined: Vec<Forest> = (0..parts)
            .flat_map(|p| enumerate_forests(h.graph(), &q).unwrap().restrict_to_partition(p).collect::<Vec<_>>())
            .collect();
        assert_eq!(full, joined);
    }
}
