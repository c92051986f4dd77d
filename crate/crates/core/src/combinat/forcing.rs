use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::graph::{bits, full_mask, Graph};
use crate::{Error, Result};

pub const MAX_ZERO_FORCING_ORDER: usize = 12;

/// A black vertex set on a host graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringState {
    host: Graph,
    black: Vec<usize>,
}

impl ColoringState {
    pub fn new(host: Graph, black: &[usize]) -> Result<Self> {
        if let Some(&v) = black.iter().find(|&&v| v >= host.n()) {
            return Err(Error::OutOfRange { vertex: v, n: host.n() });
        }
        let black = black.iter().copied().sorted().dedup().collect();
        Ok(ColoringState { host, black })
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn black(&self) -> &[usize] {
        &self.black
    }

    fn mask(&self) -> u64 {
        self.black.iter().fold(0, |m, &v| m | 1 << v)
    }
}

fn closure_mask(g: &Graph, mut black: u64) -> u64 {
    loop {
        let before = black;
        for u in bits(black) {
            let white = g.neighbor_mask(u) & !black;
            if white.count_ones() == 1 {
                black |= white;
            }
        }
        if black == before {
            return black;
        }
    }
}

/// The derived set: the black set after the colour change rule is applied
/// until no black vertex has exactly one white neighbour. Sorted.
pub fn forcing_closure(state: &ColoringState) -> Vec<usize> {
    bits(closure_mask(&state.host, state.mask())).collect()
}

/// `Z(g)` and the first zero forcing set by size, then lexicographically.
pub fn zero_forcing_number(g: &Graph) -> Result<(usize, Vec<usize>)> {
    let n = g.n();
    if n > MAX_ZERO_FORCING_ORDER {
        return Err(Error::TooLarge { what: "zero forcing order", value: n, limit: MAX_ZERO_FORCING_ORDER });
    }
    let all = full_mask(n);
    for size in 0..=n {
        for set in (0..n).combinations(size) {
            let mask = set.iter().fold(0u64, |m, &v| m | 1 << v);
            if closure_mask(g, mask) == all {
                return Ok((size, set));
            }
        }
    }
    unreachable!("the full vertex set forces")
}
