use serde::{Deserialize, Serialize};

use crate::graph::{bits, full_mask, Graph};
use crate::{Error, Result};

pub const MAX_MATCHING_ORDER: usize = 20;

/// Pairwise disjoint edges of a host graph, stored sorted with `u < v`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(g: &Graph, edges: &[(usize, usize)]) -> Result<Self> {
        let mut covered = 0u64;
        let mut out = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            let (u, v) = (u.min(v), u.max(v));
            if !g.has_edge(u, v) {
                return Err(Error::Validation(format!("{u}-{v} is not an edge")));
            }
            if covered >> u & 1 == 1 || covered >> v & 1 == 1 {
                return Err(Error::Validation(format!("{u}-{v} shares an endpoint with another edge")));
            }
            covered |= 1 << u | 1 << v;
            out.push((u, v));
        }
        out.sort_unstable();
        Ok(Matching { edges: out })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Whether every vertex of an `n`-vertex host is covered.
    pub fn is_perfect(&self, n: usize) -> bool {
        2 * self.edges.len() == n
    }
}

struct MaxMatching<'a> {
    g: &'a Graph,
    current: Vec<(usize, usize)>,
    best: Vec<(usize, usize)>,
}

impl MaxMatching<'_> {
    /// `alive`: vertices that are neither matched nor given up on.
    fn go(&mut self, alive: u64) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if self.current.len() + alive.count_ones() as usize / 2 <= self.best.len() {
            return;
        }
        let Some(u) = bits(alive).find(|&u| self.g.neighbor_mask(u) & alive != 0) else {
            return;
        };
        for w in bits(self.g.neighbor_mask(u) & alive) {
            self.current.push((u, w));
            self.go(alive & !(1 << u | 1 << w));
            self.current.pop();
        }
        self.go(alive & !(1 << u));
    }
}

/// A maximum matching, by branch and bound on the lowest vertex that still
/// has an available neighbour.
pub fn matching_number(g: &Graph) -> Result<(usize, Matching)> {
    if g.n() > MAX_MATCHING_ORDER {
        return Err(Error::TooLarge { what: "matching order", value: g.n(), limit: MAX_MATCHING_ORDER });
    }
    let mut search = MaxMatching { g, current: Vec::new(), best: Vec::new() };
    search.go(full_mask(g.n()));
    let m = Matching::new(g, &search.best).expect("search only uses disjoint edges");
    Ok((m.len(), m))
}

/// Number of perfect matchings, saturating at `cap`.
pub fn count_perfect_matchings(g: &Graph, cap: u64) -> u64 {
    fn go(g: &Graph, uncovered: u64, cap: u64) -> u64 {
        if uncovered == 0 {
            return 1;
        }
        let u = uncovered.trailing_zeros() as usize;
        let mut total = 0;
        for w in bits(g.neighbor_mask(u) & uncovered) {
            total += go(g, uncovered & !(1 << u | 1 << w), cap - total);
            if total >= cap {
                return cap;
            }
        }
        total
    }
    if g.n() % 2 == 1 || cap == 0 {
        return 0;
    }
    go(g, full_mask(g.n()), cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_graphs;
    use itertools::Itertools;

    /// Largest set of pairwise disjoint edges, over all edge subsets.
    fn brute_matching(g: &Graph) -> usize {
        let edges: Vec<_> = g.edges().collect();
        (0..=edges.len())
            .rev()
            .find(|&k| {
                edges.iter().combinations(k).any(|c| {
                    let vs: Vec<usize> = c.iter().flat_map(|&&(u, v)| [u, v]).collect();
                    vs.iter().all_unique()
                })
            })
            .unwrap()
    }

    /// Permutations of the vertices read as consecutive pairs, deduplicated.
    fn brute_perfect(g: &Graph) -> u64 {
        let n = g.n();
        let mut seen = std::collections::HashSet::new();
        for perm in (0..n).permutations(n) {
            let mut pairs: Vec<(usize, usize)> = perm.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
            if pairs.iter().all(|&(u, v)| g.has_edge(u, v)) {
                pairs.sort_unstable();
                seen.insert(pairs);
            }
        }
        seen.len() as u64
    }

    #[test]
    fn examples() {
        assert_eq!(matching_number(&Graph::path(4)).unwrap().0, 2);
        assert_eq!(matching_number(&Graph::cycle(5)).unwrap().0, 2);
        assert_eq!(matching_number(&Graph::star(3)).unwrap().0, 1);
        assert_eq!(count_perfect_matchings(&Graph::path(4), 10), 1);
        assert_eq!(count_perfect_matchings(&Graph::cycle(6), 10), 2);
        assert_eq!(count_perfect_matchings(&Graph::cycle(5), 10), 0);
        assert_eq!(count_perfect_matchings(&Graph::complete(6), 2), 2);
        assert_eq!(count_perfect_matchings(&Graph::complete(6), 100), 15);
    }

    #[test]
    fn guard() {
        assert!(matches!(matching_number(&Graph::empty(21)), Err(Error::TooLarge { .. })));
        assert_eq!(matching_number(&Graph::path(20)).unwrap().0, 10);
    }

    #[test]
    fn matches_brute_force() {
        for n in 1..=6 {
            for g in enumerate_graphs(n, false, true).unwrap() {
                let (size, m) = matching_number(&g).unwrap();
                assert_eq!(size, brute_matching(&g), "{g:?}");
                assert_eq!(Matching::new(&g, m.edges()).unwrap(), m);
                if n % 2 == 0 {
                    assert_eq!(count_perfect_matchings(&g, u64::MAX), brute_perfect(&g), "{g:?}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_matchings() {
        let g = Graph::path(4);
        assert!(Matching::new(&g, &[(0, 2)]).is_err());
        assert!(Matching::new(&g, &[(0, 1), (1, 2)]).is_err());
        let m = Matching::new(&g, &[(3, 2), (0, 1)]).unwrap();
        assert_eq!(m.edges(), &[(0, 1), (2, 3)]);
        assert!(m.is_perfect(4));
        assert_eq!(serde_json::to_string(&m).unwrap(), "[[0,1],[2,3]]");
    }
}
