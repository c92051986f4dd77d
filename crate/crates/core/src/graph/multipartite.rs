use serde::Serialize;

use super::{bits, full_mask, Graph};

/// Disjoint nonempty vertex sets covering the vertex set, ordered by smallest
/// member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub parts: Vec<Vec<usize>>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }
}

/// Returns the parts of `g` if it is complete multipartite with at least two
/// parts, i.e. non-adjacency is an equivalence relation with at least two
/// classes. Edgeless graphs (one part) are rejected.
pub fn is_complete_multipartite(g: &Graph) -> Option<Partition> {
    let n = g.n();
    let all = full_mask(n);
    let mut left = all;
    let mut parts = Vec::new();
    while left != 0 {
        let v = left.trailing_zeros() as usize;
        let part = all & !g.neighbor_mask(v);
        // Every member must have exactly the same closed non-neighbourhood.
        if bits(part).any(|w| all & !g.neighbor_mask(w) != part) {
            return None;
        }
        parts.push(bits(part).collect::<Vec<_>>());
        left &= !part;
    }
    (parts.len() >= 2).then_some(Partition { parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::components;

    /// Complement is a disjoint union of cliques, checked edge by edge.
    fn complement_is_cliques(g: &Graph) -> bool {
        let c = g.complement();
        components(&c).iter().all(|comp| comp.iter().all(|&u| comp.iter().all(|&v| u == v || c.has_edge(u, v))))
            && components(&c).len() >= 2
    }

    #[test]
    fn examples() {
        let p = is_complete_multipartite(&Graph::cycle(4)).unwrap();
        assert_eq!(p.parts, vec![vec![0, 2], vec![1, 3]]);
        let p = is_complete_multipartite(&Graph::complete(3)).unwrap();
        assert_eq!(p.parts, vec![vec![0], vec![1], vec![2]]);
        assert!(is_complete_multipartite(&Graph::path(4)).is_none());
        assert!(is_complete_multipartite(&Graph::empty(3)).is_none());
        assert!(is_complete_multipartite(&Graph::empty(1)).is_none());
        let p = is_complete_multipartite(&Graph::complete_multipartite(&[1, 2, 3])).unwrap();
        assert_eq!(p.sizes(), vec![1, 2, 3]);
    }

    #[test]
    fn agrees_with_complement_check() {
        for n in 1..=6 {
            for g in crate::graph::enumerate_graphs(n, false, true).unwrap() {
                assert_eq!(is_complete_multipartite(&g).is_some(), complement_is_cliques(&g), "{g:?}");
            }
        }
    }
}
