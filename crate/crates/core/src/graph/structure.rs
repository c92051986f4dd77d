//! Connectivity: components, cut vertices, blocks and branch decompositions.

use serde::Serialize;

use super::{bits, full_mask, Graph};
use crate::{Error, Result};

/// Connected components as vertex masks, ordered by smallest vertex.
pub(crate) fn component_masks(g: &Graph) -> Vec<u64> {
    component_masks_within(g, full_mask(g.n()))
}

/// Components of the subgraph induced by `alive`.
pub(crate) fn component_masks_within(g: &Graph, alive: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut left = alive;
    while left != 0 {
        let start = left.trailing_zeros() as usize;
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = g.neighbor_mask(v) & alive & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        out.push(comp);
        left &= !comp;
    }
    out
}

/// Connected components; isolated vertices appear as singletons.
pub fn components(g: &Graph) -> Vec<Vec<usize>> {
    component_masks(g).into_iter().map(|m| bits(m).collect()).collect()
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() <= 1 || component_masks(g).len() == 1
}

struct Lowpoint<'a> {
    g: &'a Graph,
    disc: Vec<usize>,
    low: Vec<usize>,
    time: usize,
    stack: Vec<(usize, usize)>,
    blocks: Vec<u64>,
    cut: u64,
}

impl Lowpoint<'_> {
    fn visit(&mut self, u: usize, parent: Option<usize>) {
        self.time += 1;
        self.disc[u] = self.time;
        self.low[u] = self.time;
        let mut children = 0;
        for w in self.g.neighbors(u) {
            if self.disc[w] == 0 {
                children += 1;
                self.stack.push((u, w));
                self.visit(w, Some(u));
                self.low[u] = self.low[u].min(self.low[w]);
                if self.low[w] >= self.disc[u] {
                    if parent.is_some() || children > 1 {
                        self.cut |= 1 << u;
                    }
                    let mut block = 0u64;
                    while let Some((a, b)) = self.stack.pop() {
                        block |= 1 << a | 1 << b;
                        if (a, b) == (u, w) {
                            break;
                        }
                    }
                    self.blocks.push(block);
                }
            } else if Some(w) != parent && self.disc[w] < self.disc[u] {
                self.stack.push((u, w));
                self.low[u] = self.low[u].min(self.disc[w]);
            }
        }
        if parent.is_none() && children > 1 {
            self.cut |= 1 << u;
        }
    }
}

fn lowpoint(g: &Graph) -> Lowpoint<'_> {
    let mut lp = Lowpoint {
        g,
        disc: vec![0; g.n()],
        low: vec![0; g.n()],
        time: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
        cut: 0,
    };
    for v in 0..g.n() {
        if lp.disc[v] == 0 {
            lp.visit(v, None);
        }
    }
    lp
}

/// Vertices whose deletion increases the number of connected components.
pub fn cut_vertices(g: &Graph) -> Vec<usize> {
    bits(lowpoint(g).cut).collect()
}

/// Vertex sets of the blocks (maximal 2-connected subgraphs and bridges).
/// Isolated vertices belong to no block.
pub fn blocks(g: &Graph) -> Vec<Vec<usize>> {
    lowpoint(g).blocks.into_iter().map(|m| bits(m).collect()).collect()
}

/// True iff `g` contains a cycle of even length.
///
/// A graph has no even cycle iff each block is a bridge or an odd cycle; any
/// other 2-connected block contains a theta subgraph, two of whose three paths
/// have equal parity.
pub fn has_even_cycle(g: &Graph) -> bool {
    lowpoint(g).blocks.into_iter().any(|block| {
        let k = block.count_ones() as usize;
        let e = g.induced_by_mask(block).edge_count();
        !(k == 2 || (e == k && k % 2 == 1))
    })
}

/// One branch `G_i` at a cut vertex. The cut vertex is always vertex 0 of
/// `graph`; `vertices[i]` is the original label of vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub graph: Graph,
    pub vertices: Vec<usize>,
}

impl Branch {
    /// `G_i - v`.
    pub fn without_cut_vertex(&self) -> Graph {
        self.graph.delete_vertex(0).expect("branch contains its cut vertex")
    }
}

/// Split of a connected graph at a cut vertex into branches that pairwise
/// share only that vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchDecomposition {
    pub cut_vertex: usize,
    pub branches: Vec<Branch>,
}

/// Branches of `g` at `v`: the subgraphs induced by `v` together with each
/// component of `G - v`.
pub fn branches_at(g: &Graph, v: usize) -> Result<BranchDecomposition> {
    if v >= g.n() {
        return Err(Error::OutOfRange { vertex: v, n: g.n() });
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let rest = component_masks_within(g, full_mask(g.n()) & !(1 << v));
    if rest.len() < 2 {
        return Err(Error::NotACutVertex(v));
    }
    let branches = rest
        .into_iter()
        .map(|comp| {
            let vertices: Vec<usize> = std::iter::once(v).chain(bits(comp)).collect();
            let (graph, vertices) = g.induced_subgraph(&vertices).expect("vertices in range");
            Branch { graph, vertices }
        })
        .collect();
    Ok(BranchDecomposition { cut_vertex: v, branches })
}
