//! Exhaustive graph enumeration, optionally one representative per
//! isomorphism class.
//!
//! The canonical form of a graph is its relabelling with the smallest
//! upper-triangle adjacency code. The minimum is taken over the permutations
//! that respect the colour-refinement partition (cells ordered by their
//! stable colour). That partition is an isomorphism invariant, so the
//! restricted minimum is still a canonical form and avoids trying all n!
//! orders on most graphs.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;

use super::{bits, is_connected, Graph};
use crate::{Error, Result};

/// Largest vertex count accepted by [`enumerate_graphs`].
pub const MAX_ENUMERATION_ORDER: usize = 8;

/// Largest vertex count with a canonical key.
const MAX_CANONICAL_ORDER: usize = 15;

pub type GraphStream = Box<dyn Iterator<Item = Graph> + Send>;

/// Stable colouring by iterated neighbour-colour multisets, starting from
/// degrees. Colours are dense ranks of sorted signatures.
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut color: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut classes = color.iter().unique().count();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).map(|w| color[w]).collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let ranked: Vec<&(usize, Vec<usize>)> = sigs.iter().sorted().dedup().collect();
        let next: Vec<usize> = sigs.iter().map(|s| ranked.binary_search(&s).unwrap()).collect();
        let count = ranked.len();
        color = next;
        if count == classes {
            return color;
        }
        classes = count;
    }
}

#[inline]
fn pair_bit(n: usize, a: usize, b: usize) -> u128 {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    let idx = a * n - a * (a + 1) / 2 + (b - a - 1);
    let total = n * (n - 1) / 2;
    1u128 << (total - 1 - idx)
}

fn code(g: &Graph, pos: &[usize]) -> u128 {
    let n = g.n();
    g.edges().fold(0u128, |c, (u, v)| c | pair_bit(n, pos[u], pos[v]))
}

/// Best position assignment (`pos[v]` = new label of `v`) and its code.
fn canonical_labeling(g: &Graph) -> (Vec<usize>, u128) {
    let n = g.n();
    assert!(n <= MAX_CANONICAL_ORDER, "canonical form supports at most {MAX_CANONICAL_ORDER} vertices");
    let color = refine(g);
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for c in 0..=color.iter().copied().max().unwrap_or(0) {
        let cell: Vec<usize> = (0..n).filter(|&v| color[v] == c).collect();
        if !cell.is_empty() {
            cells.push(cell);
        }
    }
    let mut pos = vec![0usize; n];
    let mut best: Option<(u128, Vec<usize>)> = None;
    search(g, &cells, 0, 0, &mut pos, &mut best);
    let (c, p) = best.unwrap_or((0, Vec::new()));
    (p, c)
}

fn search(
    g: &Graph,
    cells: &[Vec<usize>],
    cell: usize,
    offset: usize,
    pos: &mut Vec<usize>,
    best: &mut Option<(u128, Vec<usize>)>,
) {
    if cell == cells.len() {
        let c = code(g, pos);
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            *best = Some((c, pos.clone()));
        }
        return;
    }
    let members = &cells[cell];
    for perm in members.iter().permutations(members.len()) {
        for (i, &&v) in perm.iter().enumerate() {
            pos[v] = offset + i;
        }
        search(g, cells, cell + 1, offset + members.len(), pos, best);
    }
}

/// Canonical key; two graphs with the same vertex count are isomorphic iff
/// their keys are equal. Graphs of different order never share a key.
pub fn canonical_key(g: &Graph) -> u128 {
    let (_, c) = canonical_labeling(g);
    c | (g.n() as u128) << 120
}

/// The canonical relabelling of `g`.
pub fn canonical_form(g: &Graph) -> Graph {
    let (pos, _) = canonical_labeling(g);
    if pos.is_empty() {
        return g.clone();
    }
    g.permute(&pos)
}

type ClassCache = Mutex<HashMap<(usize, bool), Arc<Vec<Graph>>>>;

fn class_cache() -> &'static ClassCache {
    static CACHE: OnceLock<ClassCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Isomorphism classes on `n` vertices by one-vertex extension: every graph
/// on `n` vertices is some graph on `n - 1` vertices plus a vertex, and every
/// connected graph has a vertex whose deletion leaves it connected.
fn classes(n: usize, connected_only: bool) -> Arc<Vec<Graph>> {
    if let Some(hit) = class_cache().lock().unwrap().get(&(n, connected_only)) {
        return hit.clone();
    }
    let out: Vec<Graph> = if n == 1 {
        vec![Graph::empty(1)]
    } else {
        let mut found: BTreeMap<(usize, u128), Graph> = BTreeMap::new();
        for h in classes(n - 1, connected_only).iter() {
            let start = usize::from(connected_only);
            for s in start as u64..1u64 << (n - 1) {
                let mut adj: Vec<u64> = (0..n - 1).map(|v| h.neighbor_mask(v) | (s >> v & 1) << (n - 1)).collect();
                adj.push(s);
                let g = Graph::from_adjacency(adj);
                let (pos, c) = canonical_labeling(&g);
                found.entry((g.edge_count(), c)).or_insert_with(|| g.permute(&pos));
            }
        }
        found.into_values().collect()
    };
    let out = Arc::new(out);
    class_cache().lock().unwrap().insert((n, connected_only), out.clone());
    out
}

/// All graphs on `n` vertices (`1 <= n <= 8`).
///
/// Labelled mode yields each of the `2^(n(n-1)/2)` graphs in order of their
/// edge bitmask. With `up_to_iso` one canonical representative per class is
/// yielded, sorted by edge count and then canonical code.
pub fn enumerate_graphs(n: usize, connected_only: bool, up_to_iso: bool) -> Result<GraphStream> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(Error::TooLarge { what: "enumeration order", value: n, limit: MAX_ENUMERATION_ORDER });
    }
    if up_to_iso {
        let list = classes(n, connected_only);
        return Ok(Box::new((0..list.len()).map(move |i| list[i].clone())));
    }
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let stream = (0u64..1 << pairs.len()).filter_map(move |mask| {
        let mut adj = vec![0u64; n];
        for i in bits(mask) {
            let (u, v) = pairs[i];
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        let g = Graph::from_adjacency(adj);
        (!connected_only || is_connected(&g)).then_some(g)
    });
    Ok(Box::new(stream))
}
