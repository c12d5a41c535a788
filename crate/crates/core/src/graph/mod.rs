//! Random graph ensembles and the centered adjacency operator.

mod generators;
pub mod io;
mod norms;
mod operator;

pub use generators::{gen_er, gen_planted_2, gen_planted_r, gen_regular, REGULAR_RETRY_CAP};
pub use norms::{degree_second_moment, inf_to_two_norm_exact, INF_TO_TWO_MAX_N};
pub use operator::CenteredOperator;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Undirected simple graph on vertices `0..n`.
///
/// Edges are stored as `(u, v)` with `u < v`; `adj[i]` is the sorted
/// neighbor list of `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl SparseGraph {
    pub fn empty(n: usize) -> Self {
        SparseGraph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Build a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints. Edge orientation is normalized to `u < v`;
    /// the order of the list is preserved.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut out = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::invalid(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            if a == b {
                return Err(Error::invalid(format!("self-loop at vertex {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            adj[u].push(v);
            adj[v].push(u);
            out.push((u, v));
        }
        for (i, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("duplicate edge at vertex {i}")));
            }
        }
        Ok(SparseGraph { n, edges: out, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Copy of `self` with one more edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        let edges = self.edges.iter().copied().chain(std::iter::once((u, v)));
        SparseGraph::from_edges(self.n, edges)
    }

    /// Relabel vertex `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        SparseGraph::from_edges(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// `A_G x`.
    pub fn adjacency_apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.adj[i].iter().map(|&j| x[j]).sum();
        }
    }

    /// `<x, A_G x>` for a vector with entries in {-1, 0, +1}.
    pub fn quadratic_form_i8(&self, x: &[i8]) -> i64 {
        self.edges
            .iter()
            .map(|&(u, v)| 2 * i64::from(x[u]) * i64::from(x[v]))
            .sum()
    }
}

/// Community assignment of a planted partition; communities are `0..r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    pub r: usize,
    pub assignment: Vec<usize>,
}

impl Labels {
    pub fn new(r: usize, assignment: Vec<usize>) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("labels need r >= 1"));
        }
        if let Some(&bad) = assignment.iter().find(|&&c| c >= r) {
            return Err(Error::invalid(format!("community {bad} out of range for r = {r}")));
        }
        Ok(Labels { r, assignment })
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn community_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.r];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn is_balanced(&self) -> bool {
        let n = self.n();
        n.is_multiple_of(self.r) && self.community_sizes().iter().all(|&s| s == n / self.r)
    }

    /// The ±1 vector `x0` (community 0 ↦ +1, community 1 ↦ −1); requires `r == 2`.
    pub fn to_pm1(&self) -> Result<Vec<f64>> {
        if self.r != 2 {
            return Err(Error::invalid(format!("±1 labels need r = 2, got r = {}", self.r)));
        }
        Ok(self
            .assignment
            .iter()
            .map(|&c| if c == 0 { 1.0 } else { -1.0 })
            .collect())
    }
}
