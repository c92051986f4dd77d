//! k-path recognition and the elimination labelling of a k-path.
//!
//! A k-tree is `K_{k+1}` or a k-tree with one extra vertex joined to a
//! k-clique; a k-path is a k-tree that is `K_{k+1}` or has exactly two
//! vertices of degree k. Stripping a degree-k end vertex of a k-path on at
//! least k+2 vertices leaves a k-path, which gives the labelling
//! `v_n, v_{n-1}, ...` built here.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{bits, full_mask, is_connected, Graph};

/// Labelling `v_1, ..., v_n` of a k-path: `order[i]` is the vertex labelled
/// `v_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KPathLabeling {
    pub k: usize,
    pub order: Vec<usize>,
}

/// Number of edges of any k-tree on `n >= k + 1` vertices.
pub fn kpath_edge_count(n: usize, k: usize) -> usize {
    k * n - k * (k + 1) / 2
}

fn is_clique(g: &Graph, mask: u64) -> bool {
    bits(mask).all(|v| g.neighbor_mask(v) & mask == mask & !(1 << v))
}

impl KPathLabeling {
    /// Checks the labelling against `g`, reporting the first violated
    /// property.
    pub fn check(&self, g: &Graph) -> Result<(), String> {
        let (n, k) = (g.n(), self.k);
        let mut seen = 0u64;
        for &v in &self.order {
            if v >= n || seen >> v & 1 == 1 {
                return Err("order is not a permutation of the vertices".into());
            }
            seen |= 1 << v;
        }
        if self.order.len() != n || k == 0 || n < k + 1 {
            return Err("order length or k out of range".into());
        }
        let head = self.order[..=k].iter().fold(0u64, |m, &v| m | 1 << v);
        if !is_clique(g, head) {
            return Err("first k+1 vertices do not induce a clique".into());
        }
        let mut earlier = head;
        for &v in &self.order[k + 1..] {
            let back = g.neighbor_mask(v) & earlier;
            if back.count_ones() as usize != k || !is_clique(g, back) {
                return Err(format!("vertex {v} is not attached to a k-clique of earlier vertices"));
            }
            earlier |= 1 << v;
        }
        if n >= k + 2 {
            let low: Vec<usize> = (0..n).filter(|&v| g.degree(v) == k).collect();
            if low.len() != 2 {
                return Err(format!("{} vertices of degree k, expected 2", low.len()));
            }
        }
        // Once v_i misses some v_j (j past both i and the initial clique) it
        // misses every later vertex too.
        for i in 0..n {
            let mut missed = false;
            for j in (i + 1).max(k + 1)..n {
                let adjacent = g.has_edge(self.order[i], self.order[j]);
                if adjacent && missed {
                    return Err(format!("v_{} is adjacent to v_{} after a non-adjacency", i + 1, j + 1));
                }
                missed |= !adjacent;
            }
        }
        Ok(())
    }

    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.check(g).is_ok()
    }
}

/// Recognizes a k-path (`k >= 1`) and returns its elimination labelling.
///
/// `k` is forced by the vertex and edge counts, so at most one value can
/// succeed. When both ends could serve as `v_n` the one with the smaller
/// index is stripped first.
pub fn recognize_k_path(g: &Graph) -> Option<KPathLabeling> {
    let n = g.n();
    if n < 2 || !is_connected(g) {
        return None;
    }
    let m = g.edge_count();
    let k = (1..n).find(|&k| kpath_edge_count(n, k) == m)?;
    let labeling = if n == k + 1 { KPathLabeling { k, order: (0..n).collect() } } else { strip(g, k)? };
    labeling.is_valid_for(g).then_some(labeling)
}

fn strip(g: &Graph, k: usize) -> Option<KPathLabeling> {
    let n = g.n();
    let mut alive = full_mask(n);
    let mut stripped = Vec::with_capacity(n - k - 1);
    let mut prev: Option<usize> = None;
    while alive.count_ones() as usize > k + 1 {
        let ends: Vec<usize> =
            bits(alive).filter(|&v| (g.neighbor_mask(v) & alive).count_ones() as usize == k).collect();
        if ends.len() != 2 || g.has_edge(ends[0], ends[1]) {
            return None;
        }
        let v = match prev {
            None => ends[0],
            Some(p) => *ends.iter().find(|&&e| g.has_edge(e, p))?,
        };
        if !is_clique(g, g.neighbor_mask(v) & alive) {
            return None;
        }
        alive &= !(1 << v);
        stripped.push(v);
        prev = Some(v);
    }
    if !is_clique(g, alive) {
        return None;
    }
    let first = bits(alive).find(|&v| g.degree(v) == k)?;
    let second =
        bits(alive & !(1 << first)).find(|&v| g.degree(v) == k + 1).or_else(|| bits(alive & !(1 << first)).next())?;
    let mut order = vec![first, second];
    order.extend(bits(alive & !(1 << first) & !(1 << second)));
    order.extend(stripped.into_iter().rev());
    Some(KPathLabeling { k, order })
}

/// Random k-path on `n >= k + 1` vertices with randomly permuted labels.
pub fn random_k_path<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Graph {
    assert!(k >= 1 && n > k, "need n >= k + 1 >= 2");
    let mut g = Graph::empty(n);
    for u in 0..=k {
        for v in u + 1..=k {
            g.add_edge(u, v).unwrap();
        }
    }
    // Current (k+1)-clique; the newest vertex must stay in every later clique.
    let mut clique: Vec<usize> = (0..=k).collect();
    let mut newest: Option<usize> = None;
    for v in k + 1..n {
        let droppable: Vec<usize> = clique.iter().copied().filter(|&u| Some(u) != newest).collect();
        let drop = *droppable.choose(rng).unwrap();
        clique.retain(|&u| u != drop);
        for &u in &clique {
            g.add_edge(u, v).unwrap();
        }
        clique.push(v);
        newest = Some(v);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    g.permute(&perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_graphs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// k-path by definition: repeatedly delete any simplicial degree-k vertex
    /// until `K_{k+1}` remains, and count degree-k vertices.
    fn is_k_path_brute(g: &Graph, k: usize) -> bool {
        let n = g.n();
        if n < k + 1 || !is_connected(g) {
            return false;
        }
        let mut alive = full_mask(n);
        while alive.count_ones() as usize > k + 1 {
            let pick = bits(alive).find(|&v| {
                let nb = g.neighbor_mask(v) & alive;
                nb.count_ones() as usize == k && is_clique(g, nb)
            });
            match pick {
                Some(v) => alive &= !(1 << v),
                None => return false,
            }
        }
        is_clique(g, alive) && (n == k + 1 || (0..n).filter(|&v| g.degree(v) == k).count() == 2)
    }

    #[test]
    fn paths_are_one_paths() {
        let l = recognize_k_path(&Graph::path(5)).unwrap();
        assert_eq!(l.k, 1);
        // Vertex 0 is the smaller end, so it becomes v_n.
        assert_eq!(l.order, vec![4, 3, 2, 1, 0]);
    }

    #[test]
    fn path_power_is_k_path() {
        let g = Graph::path_power(6, 2);
        let l = recognize_k_path(&g).unwrap();
        assert_eq!(l.k, 2);
        l.check(&g).unwrap();
        for n in 2..=12 {
            for k in 1..n {
                let g = Graph::path_power(n, k);
                let l = recognize_k_path(&g).unwrap_or_else(|| panic!("P_{n}^{k}"));
                assert_eq!(l.k, k);
            }
        }
    }

    #[test]
    fn cycle_is_not_a_k_path() {
        assert!(recognize_k_path(&Graph::cycle(5)).is_none());
        assert!(recognize_k_path(&Graph::cycle(3)).is_some()); // K_3
        assert!(recognize_k_path(&Graph::star(3)).is_none());
        assert!(recognize_k_path(&Graph::empty(1)).is_none());
    }

    #[test]
    fn random_k_paths_are_recognized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let k = rng.gen_range(1..=4);
            let n = rng.gen_range(k + 1..=14);
            let g = random_k_path(n, k, &mut rng);
            assert!(is_k_path_brute(&g, k), "{g:?}");
            let l = recognize_k_path(&g).unwrap_or_else(|| panic!("{g:?}"));
            assert_eq!(l.k, k);
        }
    }

    #[test]
    fn agrees_with_definition_on_small_connected_graphs() {
        for n in 2..=7 {
            for g in enumerate_graphs(n, true, true).unwrap() {
                let brute = (1..n).find(|&k| is_k_path_brute(&g, k));
                let got = recognize_k_path(&g).map(|l| l.k);
                assert_eq!(got, brute, "{g:?}");
                if let Some(l) = recognize_k_path(&g) {
                    if n >= l.k + 2 {
                        let ends: Vec<usize> = (0..n).filter(|&v| g.degree(v) == l.k).collect();
                        assert!(!g.has_edge(ends[0], ends[1]));
                    }
                }
            }
        }
    }
}
