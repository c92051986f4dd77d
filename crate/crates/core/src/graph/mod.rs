//! Simple undirected graphs on at most 64 vertices.
//!
//! Vertices are `0..n`. Adjacency is stored as one bit mask per vertex, which
//! keeps the exhaustive routines elsewhere in the crate cheap.

mod enumerate;
mod io;
mod kpath;
mod multipartite;
mod structure;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use enumerate::{canonical_form, canonical_key, enumerate_graphs, GraphStream, MAX_ENUMERATION_ORDER};
pub use io::{parse_graph, write_graph};
pub use kpath::{kpath_edge_count, random_k_path, recognize_k_path, KPathLabeling};
pub use multipartite::{is_complete_multipartite, Partition};
pub use structure::{
    blocks, branches_at, components, cut_vertices, has_even_cycle, is_connected, Branch, BranchDecomposition,
};
pub(crate) use structure::{component_masks, component_masks_within};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;

    fn try_from(repr: GraphRepr) -> Result<Self> {
        let mut g = Graph::try_empty(repr.n)?;
        for [u, v] in repr.edges {
            if !g.add_edge(u, v)? {
                return Err(Error::Validation(format!("duplicate edge {u}-{v}")));
            }
        }
        Ok(g)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { n: g.n, edges: g.edges().map(|(u, v)| [u, v]).collect() }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; ", self.n)?;
        let mut first = true;
        for (u, v) in self.edges() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{u}-{v}")?;
            first = false;
        }
        f.write_str(")")
    }
}

/// Compact single-line form, `n:u-v,u-v,...`. Used in reports.
impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        let mut first = true;
        for (u, v) in self.edges() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{u}-{v}")?;
            first = false;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    ///
    /// Panics if `n` exceeds [`MAX_VERTICES`]; use [`Graph::try_empty`] for
    /// untrusted sizes.
    pub fn empty(n: usize) -> Self {
        Self::try_empty(n).expect("vertex count exceeds MAX_VERTICES")
    }

    pub fn try_empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge { what: "vertex count", value: n, limit: MAX_VERTICES });
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    /// Builds a graph from an edge list, rejecting loops, repeated edges and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::try_empty(n)?;
        for &(u, v) in edges {
            if !g.add_edge(u, v)? {
                return Err(Error::Validation(format!("duplicate edge {}-{}", u.min(v), u.max(v))));
            }
        }
        Ok(g)
    }

    pub(crate) fn from_adjacency(adj: Vec<u64>) -> Self {
        debug_assert!(adj.len() <= MAX_VERTICES);
        debug_assert!(adj.iter().enumerate().all(|(v, &m)| m >> v & 1 == 0));
        Graph { n: adj.len(), adj }
    }

    /// Inserts `{u, v}`. Returns `false` if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::OutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let present = self.has_edge(u, v);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(!present)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n {
            self.adj[u] &= !(1 << v);
            self.adj[v] &= !(1 << u);
        }
    }

    pub fn complete(n: usize) -> Self {
        let all = full_mask(n);
        Self::from_adjacency((0..n).map(|v| all & !(1 << v)).collect())
    }

    pub fn path(n: usize) -> Self {
        Self::path_power(n, 1)
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 3 {
            g.add_edge(0, n - 1).unwrap();
        }
        g
    }

    /// `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Self {
        let mut g = Self::empty(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v).unwrap();
        }
        g
    }

    /// `K_{n_1,...,n_t}`; parts are consecutive vertex ranges.
    pub fn complete_multipartite(sizes: &[usize]) -> Self {
        let n = sizes.iter().sum();
        let mut part = Vec::with_capacity(n);
        for (i, &s) in sizes.iter().enumerate() {
            part.extend(std::iter::repeat_n(i, s));
        }
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if part[u] != part[v] {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    /// The `k`-th power of the path `0-1-...-(n-1)`: `{i, j}` is an edge iff
    /// `0 < |i - j| <= k`.
    pub fn path_power(n: usize, k: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n.min(i + k + 1) {
                g.add_edge(i, j).unwrap();
            }
        }
        g
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let mut g = Self::try_empty(self.n + other.n)?;
        for (u, v) in self.edges() {
            g.add_edge(u, v)?;
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Neighbourhood of `v` as a bit mask.
    #[inline]
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.adj[v])
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| bits(self.adj[u] >> u >> 1).map(move |d| (u, u + 1 + d)))
    }

    pub fn is_edgeless(&self) -> bool {
        self.adj.iter().all(|&m| m == 0)
    }

    pub fn complement(&self) -> Graph {
        let all = full_mask(self.n);
        Self::from_adjacency((0..self.n).map(|v| all & !self.adj[v] & !(1 << v)).collect())
    }

    /// Subgraph induced by `vertices`, relabelled `0..vertices.len()` in the
    /// given order. The returned map sends each new label to its original
    /// vertex.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut seen = 0u64;
        for &v in vertices {
            if v >= self.n {
                return Err(Error::OutOfRange { vertex: v, n: self.n });
            }
            if seen >> v & 1 == 1 {
                return Err(Error::Validation(format!("vertex {v} listed twice")));
            }
            seen |= 1 << v;
        }
        Ok((self.induced_unchecked(vertices), vertices.to_vec()))
    }

    /// Induced subgraph on the vertices of `mask`, in increasing order.
    pub fn induced_by_mask(&self, mask: u64) -> Graph {
        let vs: Vec<usize> = bits(mask & full_mask(self.n)).collect();
        self.induced_unchecked(&vs)
    }

    fn induced_unchecked(&self, vertices: &[usize]) -> Graph {
        let adj = vertices
            .iter()
            .map(|&u| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|&(_, &w)| self.adj[u] >> w & 1 == 1)
                    .fold(0u64, |m, (i, _)| m | 1 << i)
            })
            .collect();
        Graph::from_adjacency(adj)
    }

    /// `G - v`, with vertices above `v` shifted down by one.
    pub fn delete_vertex(&self, v: usize) -> Result<Graph> {
        if v >= self.n {
            return Err(Error::OutOfRange { vertex: v, n: self.n });
        }
        Ok(self.induced_by_mask(full_mask(self.n) & !(1 << v)))
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut adj = vec![0u64; self.n];
        for (u, v) in self.edges() {
            adj[perm[u]] |= 1 << perm[v];
            adj[perm[v]] |= 1 << perm[u];
        }
        Graph::from_adjacency(adj)
    }

    /// Spanning subgraph keeping the edges selected by `keep`, indexed in
    /// [`Graph::edges`] order.
    pub fn edge_subgraph(&self, keep: impl Fn(usize) -> bool) -> Graph {
        let mut g = Graph::empty(self.n);
        for (i, (u, v)) in self.edges().enumerate() {
            if keep(i) {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }
}
