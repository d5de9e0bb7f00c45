use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::Digraph;
use crate::error::{Error, Result};
use crate::scalar::Semiring;

/// A spanning forest of in-trees: every non-root vertex has exactly one
/// out-arc, roots have none, and there are no dicircuits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Forest {
    parent: Vec<Option<usize>>,
}

impl Forest {
    /// Validates the parent links: targets in range, no loops, no cycles.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        for (v, p) in parent.iter().enumerate() {
            match *p {
                Some(t) if t >= n => return Err(Error::InvalidIndex { index: t, n }),
                Some(t) if t == v => return Err(Error::NotAForest(format!("loop at {v}"))),
                _ => {}
            }
        }
        let forest = Self { parent };
        for v in 0..n {
            if forest.root_of(v).is_none() {
                return Err(Error::NotAForest(format!("vertex {v} lies on a dicircuit")));
            }
        }
        Ok(forest)
    }

    pub(crate) fn from_parents_unchecked(parent: Vec<Option<usize>>) -> Self {
        Self { parent }
    }

    /// The forest with no arcs: every vertex is a root.
    pub fn empty(vertex_count: usize) -> Self {
        Self { parent: vec![None; vertex_count] }
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        self.parent.iter().enumerate().filter(|(_, p)| p.is_none()).map(|(v, _)| v)
    }

    pub fn tree_count(&self) -> usize {
        self.parent.iter().filter(|p| p.is_none()).count()
    }

    /// Arcs `(v, parent(v))` in ascending order of `v`.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.iter().enumerate().filter_map(|(v, p)| p.map(|t| (v, t)))
    }

    fn root_of(&self, v: usize) -> Option<usize> {
        let mut cur = v;
        for _ in 0..=self.parent.len() {
            match self.parent[cur] {
                Some(next) => cur = next,
                None => return Some(cur),
            }
        }
        None
    }

    /// Whether following parent links from `m` reaches `n`. A vertex always
    /// reaches itself.
    pub fn has_path(&self, m: usize, n: usize) -> bool {
        path_in(&self.parent, m, n)
    }

    /// Product of the arc weights; the empty forest has productivity one.
    pub fn productivity<S: Semiring>(&self, host: &Digraph<S>) -> Result<S> {
        self.arcs().try_fold(S::one(), |acc, (from, to)| {
            host.weight(from, to).map(|w| acc * w.clone()).ok_or(Error::MissingArc { from, to })
        })
    }

    /// Arc list with one-based labels, the vertex `dagger` (if any) printed
    /// as `†`, e.g. `{(1,2),(2,†)}`.
    pub fn display_with(&self, dagger: Option<usize>) -> String {
        let label = |v: usize| {
            if Some(v) == dagger {
                "†".to_string()
            } else {
                (v + 1).to_string()
            }
        };
        let mut out = String::from("{");
        for (idx, (from, to)) in self.arcs().enumerate() {
            if idx > 0 {
                out.push(',');
            }
            let _ = write!(out, "({},{})", label(from), label(to));
        }
        out.push('}');
        out
    }
}

pub(crate) fn path_in(parent: &[Option<usize>], m: usize, n: usize) -> bool {
    let mut cur = m;
    for _ in 0..=parent.len() {
        if cur == n {
            return true;
        }
        match parent[cur] {
            Some(next) => cur = next,
            None => return false,
        }
    }
    false
}

/// Constraints selecting a set of spanning forests: the roots must contain
/// `required_roots`, the forest has `k + |required_roots|` trees (any number
/// when `k` is `None`), and optionally contains the way `m ⇝ n`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ForestQuery {
    pub required_roots: BTreeSet<usize>,
    pub k: Option<usize>,
    pub path: Option<(usize, usize)>,
    pub forbidden_arcs: BTreeSet<(usize, usize)>,
    pub required_arcs: BTreeSet<(usize, usize)>,
    pub include_zero_arcs: bool,
}

impl ForestQuery {
    pub fn rooted_at(roots: impl IntoIterator<Item = usize>) -> Self {
        Self { required_roots: roots.into_iter().collect(), ..Self::default() }
    }

    pub fn with_extra_trees(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_path(mut self, from: usize, to: usize) -> Self {
        self.path = Some((from, to));
        self
    }

    pub fn forbid(mut self, from: usize, to: usize) -> Self {
        self.forbidden_arcs.insert((from, to));
        self
    }

    pub fn require(mut self, from: usize, to: usize) -> Self {
        self.required_arcs.insert((from, to));
        self
    }

    pub fn including_zero_arcs(mut self) -> Self {
        self.include_zero_arcs = true;
        self
    }

    /// Total tree count implied by `k`, if fixed.
    pub fn tree_count(&self) -> Option<usize> {
        self.k.map(|k| k + self.required_roots.len())
    }

    pub(crate) fn validate(&self, vertex_count: usize) -> Result<()> {
        let n = vertex_count;
        let check = |v: usize| if v < n { Ok(()) } else { Err(Error::InvalidIndex { index: v, n }) };
        for &w in &self.required_roots {
            check(w)?;
        }
        for &(a, b) in self.forbidden_arcs.iter().chain(&self.required_arcs) {
            check(a)?;
            check(b)?;
        }
        if let Some((m, t)) = self.path {
            check(m)?;
            check(t)?;
            if m == t {
                return Err(Error::InvalidQuery("path endpoints must differ".into()));
            }
        }
        if let Some(k) = self.k {
            if k + self.required_roots.len() > n {
                return Err(Error::InvalidQuery(format!(
                    "k + |W| = {} exceeds the vertex count {n}",
                    k + self.required_roots.len()
                )));
            }
        }
        Ok(())
    }
}
