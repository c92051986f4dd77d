//! Closed-form values and the cut-vertex classification.

use serde::Serialize;

use crate::graph::{
    bits, component_masks_within, cut_vertices, full_mask, is_complete_multipartite, is_connected, Graph,
};
use crate::{Error, Result};

/// Minimum skew rank of any k-path on `n` vertices over an infinite field.
pub fn kpath_mr(n: usize, k: usize) -> Result<usize> {
    if k == 0 || n < k + 1 {
        return Err(Error::BadParameters(format!("k-path needs n >= k + 1 >= 2, got n = {n}, k = {k}")));
    }
    Ok(round_up_even(n - k))
}

/// Minimum skew rank of the `k`-th power of the path on `n` vertices over an
/// infinite field.
pub fn path_power_mr(n: usize, k: usize) -> Result<usize> {
    if n < 2 || k == 0 {
        return Err(Error::BadParameters(format!("path power needs n >= 2 and k >= 1, got n = {n}, k = {k}")));
    }
    if k >= n {
        return Ok(2);
    }
    kpath_mr(n, k)
}

pub(crate) fn round_up_even(x: usize) -> usize {
    x + x % 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "case")]
pub enum Mr4Verdict {
    /// `G` is two complete multipartite branches glued at the cut vertex,
    /// each keeping an edge once the cut vertex is removed. Both graphs carry
    /// the cut vertex as vertex 0.
    CaseI {
        first: Graph,
        second: Graph,
    },
    /// `G - v` is one complete multipartite component with an edge plus
    /// `isolated` isolated vertices.
    CaseII {
        component: Graph,
        isolated: usize,
    },
    No,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mr4Classification {
    /// The cut vertex that matched, or the smallest one for `No`.
    pub cut_vertex: usize,
    pub verdict: Mr4Verdict,
    /// How "nonempty" is read for the branches and the component; always
    /// [`NONEMPTY_MEANS`], carried so serialized output states it.
    pub interpretation: &'static str,
}

pub const NONEMPTY_MEANS: &str = "nonempty = has at least one edge";

impl Mr4Classification {
    pub fn is_rank_four(&self) -> bool {
        self.verdict != Mr4Verdict::No
    }
}

/// Decides `mr^-(G) = 4` over an infinite field for a connected graph with a
/// cut vertex. The answer does not depend on which cut vertex is examined;
/// cut vertices are tried in increasing order and the first match reported.
pub fn classify_mr4_cut_vertex(g: &Graph) -> Result<Mr4Classification> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let cuts = cut_vertices(g);
    let Some(&first_cut) = cuts.first() else {
        return Err(Error::NoCutVertex);
    };
    for &v in &cuts {
        let rest = component_masks_within(g, full_mask(g.n()) & !(1 << v));
        let (big, isolated): (Vec<u64>, Vec<u64>) = rest.iter().partition(|m| m.count_ones() > 1);
        let multipartite = |mask: u64| is_complete_multipartite(&g.induced_by_mask(mask)).is_some();

        if isolated.is_empty() && big.len() == 2 && big.iter().all(|&m| multipartite(m | 1 << v)) {
            let branch = |mask: u64| {
                let vertices: Vec<usize> = std::iter::once(v).chain(bits(mask)).collect();
                g.induced_subgraph(&vertices).expect("vertices in range").0
            };
            let verdict = Mr4Verdict::CaseI { first: branch(big[0]), second: branch(big[1]) };
            return Ok(Mr4Classification { cut_vertex: v, verdict, interpretation: NONEMPTY_MEANS });
        }
        if !isolated.is_empty() && big.len() == 1 && multipartite(big[0]) {
            let verdict = Mr4Verdict::CaseII { component: g.induced_by_mask(big[0]), isolated: isolated.len() };
            return Ok(Mr4Classification { cut_vertex: v, verdict, interpretation: NONEMPTY_MEANS });
        }
    }
    Ok(Mr4Classification { cut_vertex: first_cut, verdict: Mr4Verdict::No, interpretation: NONEMPTY_MEANS })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowtie() -> Graph {
        Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap()
    }

    fn spider() -> Graph {
        Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(kpath_mr(5, 2).unwrap(), 4);
        assert_eq!(kpath_mr(6, 2).unwrap(), 4);
        for k in 1..6 {
            assert_eq!(kpath_mr(k + 1, k).unwrap(), 2);
        }
        assert!(kpath_mr(2, 2).is_err());
        assert!(kpath_mr(3, 0).is_err());
        assert_eq!(path_power_mr(7, 2).unwrap(), 6);
        assert_eq!(path_power_mr(6, 1).unwrap(), 6);
        assert_eq!(path_power_mr(4, 5).unwrap(), 2);
        assert_eq!(path_power_mr(4, 3).unwrap(), 2);
        assert!(path_power_mr(1, 1).is_err());
    }

    #[test]
    fn classification_examples() {
        let c = classify_mr4_cut_vertex(&bowtie()).unwrap();
        assert_eq!(c.cut_vertex, 0);
        assert_eq!(c.verdict, Mr4Verdict::CaseI { first: Graph::complete(3), second: Graph::complete(3) });

        let paw = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let c = classify_mr4_cut_vertex(&paw).unwrap();
        assert_eq!(c.cut_vertex, 2);
        assert_eq!(serde_json::to_value(&c).unwrap()["interpretation"], NONEMPTY_MEANS);
        assert_eq!(c.verdict, Mr4Verdict::CaseII { component: Graph::complete(2), isolated: 1 });

        assert_eq!(classify_mr4_cut_vertex(&spider()).unwrap().verdict, Mr4Verdict::No);
        // Both sides of P_3 lose their only edge with the centre.
        assert_eq!(classify_mr4_cut_vertex(&Graph::path(3)).unwrap().verdict, Mr4Verdict::No);
        assert_eq!(classify_mr4_cut_vertex(&Graph::star(3)).unwrap().verdict, Mr4Verdict::No);
        assert!(classify_mr4_cut_vertex(&Graph::path(4)).unwrap().is_rank_four());
    }

    #[test]
    fn classification_errors() {
        assert_eq!(classify_mr4_cut_vertex(&Graph::cycle(5)), Err(Error::NoCutVertex));
        assert_eq!(classify_mr4_cut_vertex(&Graph::empty(3)), Err(Error::Disconnected));
    }
}
