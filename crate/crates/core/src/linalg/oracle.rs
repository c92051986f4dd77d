//! Exhaustive rank optimisation over `S^-(GF(p), G)`.
//!
//! Vertices are placed one at a time (maximum-cardinality order) and the
//! values of each new vertex's back edges are enumerated as an odometer in
//! lexicographic order. Bordering a skew matrix `A` by a column `b` raises
//! the rank by 2 when `b` leaves the column space of `A` and by 0 otherwise,
//! so every prefix rank is known exactly from a kernel basis of the prefix.
//! Since rank never drops as vertices are added, a prefix whose rank already
//! reaches the best value found is cut. When only rank-preserving borders
//! can survive, the admissible values of the new column form an affine
//! subspace that is solved for directly instead of enumerated.
//!
//! Diagonal congruence `A -> c·DAD` (one scalar per component) preserves
//! rank and support. It fixes the value of every spanning-tree edge to 1 and,
//! in each non-bipartite component, one extra edge joining two vertices of
//! equal tree depth parity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::matrix::{null_space, rank_in_place, rref, RankWitness, SkewMatrix};
use super::PrimeField;
use crate::graph::Graph;
use crate::{Error, Result};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Which edge values are fixed to 1 before searching.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normalization {
    /// Every edge value is searched.
    None,
    /// Spanning-forest edges are fixed.
    SpanningTree,
    /// Spanning-forest edges plus one odd-cycle edge per non-bipartite
    /// component.
    #[default]
    TreeAndOddCycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest admissible number of assignments after normalization.
    pub budget: u128,
    /// A known lower bound on the minimum; the search stops once reached.
    /// Must be sound, otherwise the result may not be minimal.
    pub floor: Option<usize>,
    pub normalization: Normalization,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, floor: None, normalization: Normalization::default() }
    }
}

impl SearchOptions {
    pub fn with_budget(budget: u128) -> Self {
        SearchOptions { budget, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    /// Position of the earlier endpoint.
    row: usize,
    free: bool,
}

struct Plan {
    n: usize,
    /// `order[pos]` is the vertex placed at position `pos`.
    order: Vec<usize>,
    levels: Vec<Vec<Slot>>,
    free: Vec<usize>,
}

impl Plan {
    fn new(g: &Graph, normalization: Normalization) -> Plan {
        let n = g.n();
        let mut order = Vec::with_capacity(n);
        let mut pos_of = vec![usize::MAX; n];
        let mut placed = 0u64;
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| placed >> v & 1 == 0)
                .max_by_key(|&v| ((g.neighbor_mask(v) & placed).count_ones(), g.degree(v), std::cmp::Reverse(v)))
                .unwrap();
            pos_of[v] = order.len();
            order.push(v);
            placed |= 1 << v;
        }

        let mut levels = Vec::with_capacity(n);
        let mut parity = vec![0u8; n];
        let mut component = vec![0usize; n];
        let mut odd_fixed: Vec<bool> = Vec::new();
        for (k, &v) in order.iter().enumerate() {
            let mut back: Vec<usize> = g.neighbors(v).map(|w| pos_of[w]).filter(|&q| q < k).collect();
            back.sort_unstable();
            let mut slots: Vec<Slot> = back.iter().map(|&row| Slot { row, free: true }).collect();
            if let Some(&parent) = back.first() {
                parity[k] = parity[parent] ^ 1;
                component[k] = component[parent];
                if normalization != Normalization::None {
                    slots[0].free = false;
                }
            } else {
                component[k] = odd_fixed.len();
                odd_fixed.push(false);
            }
            if normalization == Normalization::TreeAndOddCycle && !odd_fixed[component[k]] {
                if let Some(s) = slots.iter_mut().skip(1).find(|s| parity[s.row] == parity[k]) {
                    s.free = false;
                    odd_fixed[component[k]] = true;
                }
            }
            levels.push(slots);
        }
        let free = levels.iter().map(|l| l.iter().filter(|s| s.free).count()).collect();
        Plan { n, order, levels, free }
    }

    fn space(&self, p: u32) -> u128 {
        let total: usize = self.free.iter().sum();
        (0..total).fold(1u128, |acc, _| acc.saturating_mul((p - 1) as u128))
    }

    fn check_budget(&self, p: u32, budget: u128) -> Result<()> {
        let size = self.space(p);
        if size > budget {
            return Err(Error::BudgetExceeded { size, budget });
        }
        Ok(())
    }

    /// First level with a free value, and its child count.
    fn first_branching(&self, p: u32) -> Option<(usize, u128)> {
        let k = self.free.iter().position(|&f| f > 0)?;
        Some((k, ((p - 1) as u128).pow(self.free[k] as u32)))
    }

    fn to_witness(&self, g: &Graph, f: PrimeField, m: &[u32], rank: usize) -> RankWitness {
        let n = self.n;
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[self.order[i] * n + self.order[j]] = m[i * n + j];
            }
        }
        let matrix = SkewMatrix::from_parts_unchecked(f, g.clone(), entries);
        debug_assert!(matrix.check().is_ok());
        debug_assert_eq!(matrix.rank(), rank);
        RankWitness { rank, matrix }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Goal {
    Min,
    Exactly(usize),
    Max { ceiling: usize },
}

struct Search<'a> {
    plan: &'a Plan,
    f: PrimeField,
    goal: Goal,
    floor: usize,
    /// Restricts the children of one level to a half-open lexicographic
    /// index range.
    restrict: Option<(usize, u128, u128)>,
    m: Vec<u32>,
    best: Option<usize>,
    witness: Option<Vec<u32>>,
    stop: bool,
}

impl<'a> Search<'a> {
    fn new(plan: &'a Plan, f: PrimeField, goal: Goal, floor: usize) -> Self {
        Search {
            plan,
            f,
            goal,
            floor,
            restrict: None,
            m: vec![0; plan.n * plan.n],
            best: None,
            witness: None,
            stop: false,
        }
    }

    fn run(mut self) -> Option<(usize, Vec<u32>)> {
        self.visit(0, 0);
        Some((self.best?, self.witness?))
    }

    /// Whether a child of rank `r` placed at depth `depth` can be skipped.
    fn prune(&self, r: usize, depth: usize) -> bool {
        match self.goal {
            Goal::Min => self.best.is_some_and(|b| r >= b),
            Goal::Exactly(t) => r > t,
            Goal::Max { ceiling } => {
                let potential = (r + 2 * (self.plan.n - depth)).min(ceiling);
                self.best.is_some_and(|b| potential <= b)
            }
        }
    }

    /// Whether every surviving child must keep the prefix rank `r`.
    fn rank_preserving_only(&self, r: usize) -> bool {
        match self.goal {
            Goal::Min => self.best.is_some_and(|b| r + 2 >= b),
            Goal::Exactly(t) => r + 2 > t,
            Goal::Max { .. } => false,
        }
    }

    fn leaf(&mut self, r: usize) {
        let record = match self.goal {
            Goal::Min => self.best.is_none_or(|b| r < b),
            Goal::Exactly(t) => r == t,
            Goal::Max { .. } => self.best.is_none_or(|b| r > b),
        };
        if record {
            self.best = Some(r);
            self.witness = Some(self.m.clone());
        }
        self.stop = match self.goal {
            Goal::Min => self.best.is_some_and(|b| b <= self.floor),
            Goal::Exactly(_) => self.witness.is_some(),
            Goal::Max { ceiling } => self.best.is_some_and(|b| b >= ceiling),
        };
    }

    fn set_column(&mut self, k: usize, values: impl Iterator<Item = u32>) {
        let n = self.plan.n;
        for (slot, x) in self.plan.levels[k].iter().zip(values) {
            self.m[slot.row * n + k] = x;
            self.m[k * n + slot.row] = self.f.neg(x);
        }
    }

    fn visit(&mut self, k: usize, rank: usize) {
        let plan = self.plan;
        let n = plan.n;
        if k == n {
            self.leaf(rank);
            return;
        }
        let f = self.f;
        let q = f.p() - 1;
        let slots = &plan.levels[k];
        let nfree = plan.free[k];

        let mut prefix: Vec<u32> = (0..k * k).map(|t| self.m[(t / k) * n + t % k]).collect();
        let (prefix_rank, kernel) = if k > 0 { null_space(&mut prefix, k, f) } else { (0, Vec::new()) };
        debug_assert_eq!(prefix_rank, rank);

        let total = (q as u128).pow(nfree as u32);
        let (lo, hi) = match self.restrict {
            Some((level, lo, hi)) if level == k => (lo, hi.min(total)),
            _ => (0, total),
        };

        // Values of all slots for a child, free slots taking `free_vals`.
        let column = |free_vals: &[u32]| -> Vec<u32> {
            let mut it = free_vals.iter();
            slots.iter().map(|s| if s.free { *it.next().unwrap() } else { 1 }).collect()
        };
        let leaves_span = |col: &[u32]| {
            kernel.iter().any(|y| slots.iter().zip(col).fold(0u32, |acc, (s, &x)| f.add(acc, f.mul(y[s.row], x))) != 0)
        };

        let mut idx = lo;
        let mut free_vals = vec![1u32; nfree];
        while idx < hi {
            if self.stop {
                return;
            }
            if self.rank_preserving_only(rank) {
                if self.prune(rank, k + 1) {
                    return;
                }
                for (sol_idx, vals) in self.preserving_children(k, &kernel) {
                    if sol_idx < idx || sol_idx >= hi {
                        continue;
                    }
                    if self.stop || self.prune(rank, k + 1) {
                        return;
                    }
                    let col = column(&vals);
                    self.set_column(k, col.into_iter());
                    self.visit(k + 1, rank);
                }
                return;
            }
            let mut rest = idx;
            for v in free_vals.iter_mut().rev() {
                *v = (rest % q as u128) as u32 + 1;
                rest /= q as u128;
            }
            let col = column(&free_vals);
            let child_rank = if leaves_span(&col) { rank + 2 } else { rank };
            if !self.prune(child_rank, k + 1) {
                self.set_column(k, col.into_iter());
                self.visit(k + 1, child_rank);
            }
            idx += 1;
        }
    }

    /// Children of level `k` whose column lies in the span of the prefix,
    /// as `(lexicographic index, free values)` in increasing index order.
    fn preserving_children(&self, k: usize, kernel: &[Vec<u32>]) -> Vec<(u128, Vec<u32>)> {
        let f = self.f;
        let q = f.p() - 1;
        let slots = &self.plan.levels[k];
        let free_rows: Vec<usize> = slots.iter().filter(|s| s.free).map(|s| s.row).collect();
        let nfree = free_rows.len();
        let cols = nfree + 1;

        // y . b = 0 for each kernel vector y, with fixed slots equal to 1.
        let mut aug = vec![0u32; kernel.len() * cols];
        for (i, y) in kernel.iter().enumerate() {
            for (j, &row) in free_rows.iter().enumerate() {
                aug[i * cols + j] = y[row];
            }
            let fixed = slots.iter().filter(|s| !s.free).fold(0u32, |acc, s| f.add(acc, y[s.row]));
            aug[i * cols + nfree] = f.neg(fixed);
        }
        let pivots = rref(&mut aug, kernel.len(), cols, f);
        if pivots.last() == Some(&nfree) {
            return Vec::new();
        }
        let mut is_pivot = vec![false; nfree];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let params: Vec<usize> = (0..nfree).filter(|&j| !is_pivot[j]).collect();

        let mut out = Vec::new();
        let count = (q as u128).pow(params.len() as u32);
        let mut vals = vec![0u32; nfree];
        'next: for t in 0..count {
            let mut rest = t;
            for &j in params.iter().rev() {
                vals[j] = (rest % q as u128) as u32 + 1;
                rest /= q as u128;
            }
            for (r, &pc) in pivots.iter().enumerate() {
                let mut x = aug[r * cols + nfree];
                for &j in &params {
                    x = f.sub(x, f.mul(aug[r * cols + j], vals[j]));
                }
                if x == 0 {
                    continue 'next;
                }
                vals[pc] = x;
            }
            let index = vals.iter().fold(0u128, |acc, &x| acc * q as u128 + (x - 1) as u128);
            out.push((index, vals.clone()));
        }
        out.sort_unstable_by_key(|&(i, _)| i);
        out
    }
}

fn trivial_floor(g: &Graph) -> usize {
    if g.is_edgeless() {
        0
    } else {
        2
    }
}

/// `2 * floor(#non-isolated vertices / 2)`, an a priori ceiling on any rank.
fn trivial_ceiling(g: &Graph) -> usize {
    let active = (0..g.n()).filter(|&v| g.degree(v) > 0).count();
    active / 2 * 2
}

/// Minimum rank over `S^-(GF(p), g)` with a witness, default options.
pub fn min_rank_exhaustive(g: &Graph, field: PrimeField) -> Result<RankWitness> {
    min_rank_with(g, field, &SearchOptions::default())
}

pub fn min_rank_with(g: &Graph, field: PrimeField, opts: &SearchOptions) -> Result<RankWitness> {
    let plan = Plan::new(g, opts.normalization);
    plan.check_budget(field.p(), opts.budget)?;
    let floor = opts.floor.unwrap_or(0).max(trivial_floor(g));
    let (rank, m) = Search::new(&plan, field, Goal::Min, floor).run().expect("S^- is nonempty");
    Ok(plan.to_witness(g, field, &m, rank))
}

/// [`min_rank_with`] with the first branching level split into `parts`
/// lexicographic ranges searched independently. The merged result, witness
/// included, equals the single-threaded one.
pub fn min_rank_partitioned(g: &Graph, field: PrimeField, opts: &SearchOptions, parts: usize) -> Result<RankWitness> {
    let plan = Plan::new(g, opts.normalization);
    plan.check_budget(field.p(), opts.budget)?;
    let floor = opts.floor.unwrap_or(0).max(trivial_floor(g));
    let Some((level, count)) = plan.first_branching(field.p()) else {
        return min_rank_with(g, field, opts);
    };
    let parts = parts.max(1) as u128;
    let chunk = count.div_ceil(parts);
    let ranges: Vec<(u128, u128)> =
        (0..parts).map(|i| (i * chunk, ((i + 1) * chunk).min(count))).filter(|(lo, hi)| lo < hi).collect();
    let results: Vec<Option<(usize, Vec<u32>)>> = ranges
        .par_iter()
        .map(|&(lo, hi)| {
            let mut s = Search::new(&plan, field, Goal::Min, floor);
            s.restrict = Some((level, lo, hi));
            s.run()
        })
        .collect();
    // Ties go to the earliest range, which holds the lexicographically first witness.
    let (rank, m) = results
        .into_iter()
        .flatten()
        .enumerate()
        .min_by_key(|(i, (r, _))| (*r, *i))
        .map(|(_, best)| best)
        .expect("ranges cover all assignments");
    Ok(plan.to_witness(g, field, &m, rank))
}

/// Maximum rank over `S^-(GF(p), g)` by exhaustive search.
pub fn max_rank_exhaustive(g: &Graph, field: PrimeField, opts: &SearchOptions) -> Result<RankWitness> {
    let plan = Plan::new(g, opts.normalization);
    plan.check_budget(field.p(), opts.budget)?;
    let goal = Goal::Max { ceiling: trivial_ceiling(g) };
    let (rank, m) = Search::new(&plan, field, goal, 0).run().expect("S^- is nonempty");
    Ok(plan.to_witness(g, field, &m, rank))
}

/// A member of `S^-(GF(p), g)` with rank exactly `target`, if one exists.
pub fn find_rank(g: &Graph, field: PrimeField, target: usize, opts: &SearchOptions) -> Result<Option<RankWitness>> {
    let plan = Plan::new(g, opts.normalization);
    plan.check_budget(field.p(), opts.budget)?;
    Ok(Search::new(&plan, field, Goal::Exactly(target), 0).run().map(|(rank, m)| plan.to_witness(g, field, &m, rank)))
}

/// Number of assignments the search would enumerate without pruning.
pub fn search_space(g: &Graph, field: PrimeField, normalization: Normalization) -> u128 {
    Plan::new(g, normalization).space(field.p())
}

/// Largest rank among `trials` uniformly random members of
/// `S^-(GF(p), g)`; deterministic in `seed`. A lower bound on the maximum.
pub fn max_rank_sample(g: &Graph, field: PrimeField, trials: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ceiling = trivial_ceiling(g);
    let n = g.n();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut buf = vec![0u32; n * n];
    let mut best = 0;
    for _ in 0..trials.max(1) {
        buf.iter_mut().for_each(|x| *x = 0);
        for &(u, v) in &edges {
            let x = rng.gen_range(1..field.p());
            buf[u * n + v] = x;
            buf[v * n + u] = field.neg(x);
        }
        best = best.max(rank_in_place(&mut buf, n, n, field));
        if best >= ceiling {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_graphs;
    use crate::linalg::rank_skew;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Plain odometer over every assignment of every edge, no pruning.
    fn min_max_brute(g: &Graph, field: PrimeField) -> (usize, usize) {
        let e = g.edge_count();
        let q = field.p() - 1;
        let mut vals = vec![1u32; e];
        let (mut lo, mut hi) = (usize::MAX, 0);
        loop {
            let r = rank_skew(&SkewMatrix::from_edge_values(g, field, &vals).unwrap());
            lo = lo.min(r);
            hi = hi.max(r);
            let mut i = 0;
            loop {
                if i == e {
                    return (lo, hi);
                }
                if vals[i] < q {
                    vals[i] += 1;
                    break;
                }
                vals[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn examples() {
        let w = min_rank_exhaustive(&Graph::empty(4), gf(5)).unwrap();
        assert_eq!(w.rank, 0);
        assert_eq!(min_rank_exhaustive(&Graph::complete(2), gf(5)).unwrap().rank, 2);
        let w = min_rank_exhaustive(&Graph::cycle(4), gf(5)).unwrap();
        assert_eq!(w.rank, 2);
        w.verify(&Graph::cycle(4)).unwrap();
        assert_eq!(min_rank_exhaustive(&Graph::empty(0), gf(3)).unwrap().rank, 0);
    }

    #[test]
    fn sampler_examples() {
        assert_eq!(max_rank_sample(&Graph::complete(2), gf(7), 1, 0), 2);
        assert_eq!(max_rank_sample(&Graph::path(4), gf(11), 50, 0), 4);
        assert_eq!(max_rank_sample(&Graph::cycle(5), gf(11), 50, 0), 4);
        assert_eq!(max_rank_sample(&Graph::cycle(6), gf(11), 50, 9), max_rank_sample(&Graph::cycle(6), gf(11), 50, 9));
    }

    #[test]
    fn budget_is_enforced() {
        let err = min_rank_with(&Graph::complete(6), gf(13), &SearchOptions::with_budget(1000)).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { size: 12u128.pow(9), budget: 1000 });
        assert_eq!(search_space(&Graph::complete(6), gf(13), Normalization::None), 12u128.pow(15));
        assert_eq!(search_space(&Graph::complete(6), gf(13), Normalization::SpanningTree), 12u128.pow(10));
        assert_eq!(search_space(&Graph::cycle(6), gf(13), Normalization::TreeAndOddCycle), 12);
    }

    #[test]
    fn matches_plain_odometer_on_small_graphs() {
        for n in 1..=5 {
            for g in enumerate_graphs(n, false, true).unwrap() {
                for p in [3, 5] {
                    let f = gf(p);
                    let (lo, hi) = min_max_brute(&g, f);
                    let min = min_rank_exhaustive(&g, f).unwrap();
                    let max = max_rank_exhaustive(&g, f, &SearchOptions::default()).unwrap();
                    assert_eq!((min.rank, max.rank), (lo, hi), "{g:?} p={p}");
                    min.verify(&g).unwrap();
                    max.verify(&g).unwrap();
                    for normalization in [Normalization::None, Normalization::SpanningTree] {
                        let opts = SearchOptions { normalization, ..SearchOptions::default() };
                        assert_eq!(min_rank_with(&g, f, &opts).unwrap().rank, lo);
                    }
                }
            }
        }
    }

    #[test]
    fn find_rank_reports_gaps() {
        let f = gf(5);
        assert!(find_rank(&Graph::complete(2), f, 0, &SearchOptions::default()).unwrap().is_none());
        let w = find_rank(&Graph::path(4), f, 4, &SearchOptions::default()).unwrap().unwrap();
        assert_eq!(w.rank, 4);
        // K_4 reaches both 2 and 4.
        for t in [2, 4] {
            let w = find_rank(&Graph::complete(4), f, t, &SearchOptions::default()).unwrap().unwrap();
            w.verify(&Graph::complete(4)).unwrap();
            assert_eq!(w.rank, t);
        }
    }

    #[test]
    fn partitioned_search_matches_sequential() {
        let f = gf(7);
        for g in
            [Graph::complete(5), Graph::cycle(6), Graph::path_power(6, 2), Graph::complete_multipartite(&[2, 2, 2])]
        {
            let opts = SearchOptions::with_budget(u128::MAX);
            let seq = min_rank_with(&g, f, &opts).unwrap();
            for parts in [1, 2, 3, 7, 50] {
                assert_eq!(min_rank_partitioned(&g, f, &opts, parts).unwrap(), seq, "{g:?} parts={parts}");
            }
        }
    }
}
