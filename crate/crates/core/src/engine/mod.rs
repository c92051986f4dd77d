//! Rule-based minimum skew rank solver.
//!
//! Rules are tried in a fixed order and the first exact one wins:
//!
//! | id | rule | fields |
//! |----|------|--------|
//! | R0 | sum over connected components | any |
//! | R1 | edgeless graph: 0 | any |
//! | R2 | complete multipartite: 2 | infinite |
//! | R3 | connected, no even cycle: `2 match(G)` | any |
//! | R4 | unique perfect matching: `n` | any |
//! | R5 | k-path: `n - k` rounded up to even | infinite |
//! | R6 | cut-vertex formula over branches | any |
//! | R7 | `n - Z(G) <= mr <= 2 match(G)`, exact when they meet | any |
//!
//! In [`FieldSpec::Finite`] mode only the any-field rules run. The oracle is
//! consulted only when asked for, and only in finite mode.

mod rules;
mod trace;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use rules::{classify_mr4_cut_vertex, kpath_mr, path_power_mr, Mr4Classification, Mr4Verdict};
pub use trace::{Rule, TraceStep};

use crate::combinat::{count_perfect_matchings, matching_number, zero_forcing_number};
use crate::graph::{
    branches_at, component_masks, cut_vertices, has_even_cycle, is_complete_multipartite, recognize_k_path, Graph,
};
use crate::linalg::{
    find_rank, min_rank_with, random_skew_matrix, PrimeField, RankWitness, SearchOptions, DEFAULT_BUDGET,
};
use crate::{Error, Result};
use rules::round_up_even;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldSpec {
    Finite(PrimeField),
    /// An infinite (or sufficiently large) field.
    Generic,
}

impl FieldSpec {
    pub fn finite(self) -> Option<PrimeField> {
        match self {
            FieldSpec::Finite(f) => Some(f),
            FieldSpec::Generic => None,
        }
    }

    pub fn allows(self, rule: Rule) -> bool {
        match self {
            FieldSpec::Finite(_) => rule.any_field(),
            FieldSpec::Generic => rule != Rule::Oracle,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Finite(field) => write!(f, "GF({})", field.p()),
            FieldSpec::Generic => f.write_str("generic"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub lower: usize,
    pub upper: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<usize>,
    pub trace: Vec<TraceStep>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<RankWitness>,
}

impl RankResult {
    fn from_step(step: TraceStep) -> Self {
        RankResult { lower: step.lower, upper: step.upper, exact: step.value, trace: vec![step], certificate: None }
    }

    /// `M^-(G) = n - mr^-(G)`, when the rank is known.
    pub fn max_nullity(&self, n: usize) -> Option<usize> {
        self.exact.map(|r| n - r)
    }

    /// Every rule used anywhere in the trace.
    pub fn rules_used(&self) -> std::collections::BTreeSet<Rule> {
        self.trace.iter().flat_map(TraceStep::rules_used).collect()
    }
}

/// `n - Z(G)` rounded up to even per component, and `2 match(G)`.
pub fn mr_bounds(g: &Graph) -> Result<RankResult> {
    Ok(RankResult::from_step(bounds_step(g)?))
}

fn bounds_step(g: &Graph) -> Result<TraceStep> {
    let mut lower = 0;
    let mut forcing = 0;
    for mask in component_masks(g) {
        let c = g.induced_by_mask(mask);
        let (z, _) = zero_forcing_number(&c)?;
        forcing += z;
        lower += round_up_even(c.n() - z);
    }
    let (m, _) = matching_number(g)?;
    let upper = 2 * m;
    debug_assert!(lower <= upper);
    Ok(TraceStep {
        rule: Rule::Bounds,
        subgraph: g.clone(),
        value: (lower == upper).then_some(lower),
        lower,
        upper,
        vertex: None,
        note: format!("Z = {forcing}, match = {m}"),
        children: Vec::new(),
    })
}

/// Solver configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Engine {
    spec: FieldSpec,
    oracle_fallback: bool,
    budget: u128,
}

impl Engine {
    pub fn new(spec: FieldSpec) -> Self {
        Engine { spec, oracle_fallback: false, budget: DEFAULT_BUDGET }
    }

    /// In finite mode, settle results the rules leave open with the
    /// exhaustive oracle (within budget) and attach certificates.
    pub fn with_oracle_fallback(mut self, on: bool) -> Self {
        self.oracle_fallback = on;
        self
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    fn oracle_field(&self) -> Option<PrimeField> {
        self.spec.finite().filter(|_| self.oracle_fallback)
    }

    fn search_options(&self, floor: usize) -> SearchOptions {
        SearchOptions { floor: Some(floor), ..SearchOptions::with_budget(self.budget) }
    }

    /// Minimum skew rank of `g`: exact when a rule (or the oracle, if
    /// enabled) settles it, bounds otherwise.
    pub fn solve(&self, g: &Graph) -> Result<RankResult> {
        let step = self.resolve(g)?;
        let mut result = RankResult::from_step(step);
        if let (Some(field), Some(r)) = (self.oracle_field(), result.exact) {
            result.certificate = match find_rank(g, field, r, &SearchOptions::with_budget(self.budget)) {
                Ok(w) => w,
                Err(Error::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
        }
        Ok(result)
    }

    /// Structural rules, then the oracle if enabled and still open.
    fn resolve(&self, g: &Graph) -> Result<TraceStep> {
        let step = self.structural(g)?;
        let Some(field) = self.oracle_field().filter(|_| step.value.is_none()) else {
            return Ok(step);
        };
        match min_rank_with(g, field, &self.search_options(step.lower)) {
            Ok(w) => Ok(TraceStep {
                rule: Rule::Oracle,
                subgraph: g.clone(),
                value: Some(w.rank),
                lower: w.rank,
                upper: w.rank,
                vertex: None,
                note: format!("exhaustive over GF({})", field.p()),
                children: vec![step],
            }),
            Err(Error::BudgetExceeded { .. }) => Ok(step),
            Err(e) => Err(e),
        }
    }

    fn structural(&self, g: &Graph) -> Result<TraceStep> {
        let comps = component_masks(g);
        if comps.len() <= 1 {
            return self.connected(g);
        }
        let children = comps.into_iter().map(|m| self.resolve(&g.induced_by_mask(m))).collect::<Result<Vec<_>>>()?;
        Ok(TraceStep {
            rule: Rule::Components,
            subgraph: g.clone(),
            value: children.iter().map(|c| c.value).sum(),
            lower: children.iter().map(|c| c.lower).sum(),
            upper: children.iter().map(|c| c.upper).sum(),
            vertex: None,
            note: format!("{} components", children.len()),
            children,
        })
    }

    fn connected(&self, g: &Graph) -> Result<TraceStep> {
        let n = g.n();
        if g.is_edgeless() {
            return Ok(TraceStep::exact(Rule::Empty, g, 0, String::new()));
        }
        if self.spec.allows(Rule::CompleteMultipartite) {
            if let Some(parts) = is_complete_multipartite(g) {
                return Ok(TraceStep::exact(Rule::CompleteMultipartite, g, 2, format!("{} parts", parts.len())));
            }
        }
        if !has_even_cycle(g) {
            let (m, _) = matching_number(g)?;
            return Ok(TraceStep::exact(Rule::NoEvenCycle, g, 2 * m, format!("match = {m}")));
        }
        if count_perfect_matchings(g, 2) == 1 {
            return Ok(TraceStep::exact(Rule::UniquePerfectMatching, g, n, String::new()));
        }
        if self.spec.allows(Rule::KPath) {
            if let Some(lab) = recognize_k_path(g) {
                let value = kpath_mr(n, lab.k)?;
                return Ok(TraceStep::exact(Rule::KPath, g, value, format!("k = {}", lab.k)));
            }
        }
        for v in cut_vertices(g) {
            if let Some(step) = self.cut_vertex_step(g, v)? {
                return Ok(step);
            }
        }
        bounds_step(g)
    }

    /// The cut-vertex formula at `v`, or `None` if a sub-result is open.
    fn cut_vertex_step(&self, g: &Graph, v: usize) -> Result<Option<TraceStep>> {
        let dec = branches_at(g, v)?;
        let mut children = Vec::with_capacity(2 * dec.branches.len());
        for b in &dec.branches {
            for h in [b.graph.clone(), b.without_cut_vertex()] {
                let step = self.resolve(&h)?;
                if step.value.is_none() {
                    return Ok(None);
                }
                children.push(step);
            }
        }
        let value = cut_vertex_formula(&children);
        let mut step = TraceStep::exact(Rule::CutVertex, g, value, format!("{} branches", dec.branches.len()));
        step.vertex = Some(v);
        step.children = children;
        Ok(Some(step))
    }

    fn exact(&self, g: &Graph) -> Result<usize> {
        self.resolve(g)?.value.ok_or(Error::Inexact)
    }

    /// `mr^-(G) - mr^-(G - v)`.
    pub fn r_v(&self, g: &Graph, v: usize) -> Result<usize> {
        let without = g.delete_vertex(v)?;
        Ok(self.exact(g)? - self.exact(&without)?)
    }

    /// The cut-vertex formula at `v`, with sub-ranks from this engine.
    pub fn cut_vertex_mr(&self, g: &Graph, v: usize) -> Result<usize> {
        let dec = branches_at(g, v)?;
        let mut tail = 0;
        let mut gain = 0;
        for b in &dec.branches {
            let with = self.exact(&b.graph)?;
            let without = self.exact(&b.without_cut_vertex())?;
            tail += without;
            gain += with - without;
        }
        Ok(tail + gain.min(2))
    }

    /// Recomputes a trace from its recorded structure and checks every
    /// recorded value. Returns the root value.
    pub fn replay(&self, step: &TraceStep) -> Result<Option<usize>> {
        let g = &step.subgraph;
        let fail = |what: String| Err(Error::Validation(format!("{} on {}: {what}", step.rule, g)));
        if !self.spec.allows(step.rule) {
            return fail(format!("rule not valid over {}", self.spec));
        }
        let children = step.children.iter().map(|c| self.replay(c)).collect::<Result<Vec<_>>>()?;
        let value = match step.rule {
            Rule::Components => {
                let comps: Vec<Graph> = component_masks(g).into_iter().map(|m| g.induced_by_mask(m)).collect();
                let recorded: Vec<Graph> = step.children.iter().map(|c| c.subgraph.clone()).collect();
                if comps != recorded {
                    return fail("children are not the components".into());
                }
                children.iter().copied().sum()
            }
            Rule::Empty => g.is_edgeless().then_some(0),
            Rule::CompleteMultipartite => is_complete_multipartite(g).map(|_| 2),
            Rule::NoEvenCycle => {
                if component_masks(g).len() != 1 || has_even_cycle(g) {
                    return fail("not a connected graph without even cycles".into());
                }
                Some(2 * matching_number(g)?.0)
            }
            Rule::UniquePerfectMatching => (count_perfect_matchings(g, 2) == 1).then_some(g.n()),
            Rule::KPath => match recognize_k_path(g) {
                Some(lab) => Some(kpath_mr(g.n(), lab.k)?),
                None => return fail("not a k-path".into()),
            },
            Rule::CutVertex => {
                let Some(v) = step.vertex else {
                    return fail("no cut vertex recorded".into());
                };
                let expected: Vec<Graph> = branches_at(g, v)?
                    .branches
                    .iter()
                    .flat_map(|b| [b.graph.clone(), b.without_cut_vertex()])
                    .collect();
                let recorded: Vec<Graph> = step.children.iter().map(|c| c.subgraph.clone()).collect();
                if expected != recorded || children.iter().any(Option::is_none) {
                    return fail("children are not the exact branch results".into());
                }
                Some(cut_vertex_formula(&step.children))
            }
            Rule::Bounds => {
                let b = bounds_step(g)?;
                if (b.lower, b.upper) != (step.lower, step.upper) {
                    return fail(format!("bounds recompute to [{}, {}]", b.lower, b.upper));
                }
                b.value
            }
            Rule::Oracle => {
                let Some(field) = self.spec.finite() else {
                    return fail("oracle needs a finite field".into());
                };
                Some(min_rank_with(g, field, &SearchOptions::with_budget(self.budget))?.rank)
            }
        };
        if value != step.value {
            return fail(format!("recomputed {value:?}, recorded {:?}", step.value));
        }
        Ok(value)
    }
}

/// `sum mr(G_i - v) + min(sum r_v(G_i), 2)` from exact steps ordered as
/// `G_1, G_1 - v, G_2, G_2 - v, ...`.
fn cut_vertex_formula(children: &[TraceStep]) -> usize {
    let (tail, gain) = children.chunks(2).fold((0, 0), |(tail, gain), pair| {
        let (with, without) = (pair[0].value.unwrap(), pair[1].value.unwrap());
        (tail + without, gain + with - without)
    });
    tail + gain.min(2)
}

/// Default engine for a field: oracle fallback in finite mode.
fn default_engine(spec: FieldSpec) -> Engine {
    Engine::new(spec).with_oracle_fallback(spec.finite().is_some())
}

/// Rules only, no oracle.
pub fn mr_exact_structural(g: &Graph, spec: FieldSpec) -> Result<RankResult> {
    Engine::new(spec).solve(g)
}

/// `mr^-(G) - mr^-(G - v)`, using the oracle for open sub-results in
/// finite mode.
pub fn r_v(g: &Graph, v: usize, spec: FieldSpec) -> Result<usize> {
    default_engine(spec).r_v(g, v)
}

/// The cut-vertex formula at `v`, using the oracle for open sub-results in
/// finite mode.
pub fn cut_vertex_mr(g: &Graph, v: usize, spec: FieldSpec) -> Result<usize> {
    default_engine(spec).cut_vertex_mr(g, v)
}

const CERTIFY_RANDOM_TRIALS: usize = 200;

/// A matrix with support `g` and rank exactly `target` over `field`: random
/// draws first, then an exhaustive sweep.
pub fn certify(g: &Graph, target: usize, field: PrimeField) -> Result<RankWitness> {
    certify_with(g, target, field, DEFAULT_BUDGET)
}

pub fn certify_with(g: &Graph, target: usize, field: PrimeField, budget: u128) -> Result<RankWitness> {
    if target % 2 == 1 {
        return Err(Error::BadParameters(format!("target rank {target} is odd; skew ranks are even")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(target as u64);
    for _ in 0..CERTIFY_RANDOM_TRIALS {
        let m = random_skew_matrix(g, field, &mut rng);
        if m.rank() == target {
            return Ok(RankWitness { rank: target, matrix: m });
        }
    }
    find_rank(g, field, target, &SearchOptions::with_budget(budget))?
        .ok_or(Error::NotAchievable { target, p: field.p() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::Finite(PrimeField::new(p).unwrap())
    }

    fn spider() -> Graph {
        Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap()
    }

    fn bowtie() -> Graph {
        Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn bounds_examples() {
        let b = mr_bounds(&Graph::path(5)).unwrap();
        assert_eq!((b.lower, b.upper, b.exact), (4, 4, Some(4)));
        let b = mr_bounds(&Graph::cycle(6)).unwrap();
        assert_eq!((b.lower, b.upper, b.exact), (4, 6, None));
        let b = mr_bounds(&Graph::complete(2)).unwrap();
        assert_eq!(b.exact, Some(2));
        // Rounded per component: 2 + 2, where the whole graph would give 5 - 3 = 2.
        let b = mr_bounds(&Graph::complete(2).disjoint_union(&Graph::complete(3)).unwrap()).unwrap();
        assert_eq!((b.lower, b.upper), (4, 4));
    }

    #[test]
    fn r_v_examples() {
        for spec in [FieldSpec::Generic, gf(5)] {
            assert_eq!(r_v(&Graph::complete(2), 0, spec).unwrap(), 2);
            assert_eq!(r_v(&Graph::complete(3), 1, spec).unwrap(), 0);
            assert_eq!(r_v(&Graph::path(3), 1, spec).unwrap(), 2);
        }
    }

    #[test]
    fn cut_vertex_examples() {
        for spec in [FieldSpec::Generic, gf(11)] {
            assert_eq!(cut_vertex_mr(&bowtie(), 0, spec).unwrap(), 4);
            assert_eq!(cut_vertex_mr(&Graph::star(3), 0, spec).unwrap(), 2);
            assert_eq!(cut_vertex_mr(&Graph::path(5), 1, spec).unwrap(), 4);
        }
        assert_eq!(cut_vertex_mr(&Graph::path(5), 0, FieldSpec::Generic), Err(Error::NotACutVertex(0)));
    }

    #[test]
    fn structural_examples() {
        let r = mr_exact_structural(&spider(), FieldSpec::Generic).unwrap();
        assert_eq!(r.exact, Some(6));
        assert_eq!(r.trace[0].rule, Rule::NoEvenCycle);
        assert_eq!(r.trace[0].note, "match = 3");

        let r = mr_exact_structural(&Graph::cycle(4), FieldSpec::Generic).unwrap();
        assert_eq!((r.exact, r.trace[0].rule), (Some(2), Rule::CompleteMultipartite));

        let r = mr_exact_structural(&Graph::cycle(6), FieldSpec::Generic).unwrap();
        assert_eq!((r.lower, r.upper, r.exact), (4, 6, None));
        assert_eq!(r.trace[0].rule, Rule::Bounds);

        // C_4 over a finite field gets no multipartite shortcut.
        let r = mr_exact_structural(&Graph::cycle(4), gf(5)).unwrap();
        assert_eq!(r.trace[0].rule, Rule::Bounds);
        assert_eq!((r.lower, r.upper), (2, 4));

        let r = mr_exact_structural(&Graph::path_power(7, 2), FieldSpec::Generic).unwrap();
        assert_eq!((r.exact, r.trace[0].rule), (Some(6), Rule::KPath));

        let two = Graph::path(4).disjoint_union(&Graph::complete(1)).unwrap();
        let r = mr_exact_structural(&two, gf(5)).unwrap();
        assert_eq!((r.exact, r.trace[0].rule), (Some(4), Rule::Components));
    }

    #[test]
    fn oracle_fallback_certifies() {
        let engine = Engine::new(gf(5)).with_oracle_fallback(true);
        let r = engine.solve(&Graph::cycle(4)).unwrap();
        assert_eq!(r.exact, Some(2));
        assert_eq!(r.trace[0].rule, Rule::Oracle);
        let w = r.certificate.as_ref().unwrap();
        assert_eq!(w.rank, 2);
        w.verify(&Graph::cycle(4)).unwrap();
        assert_eq!(engine.replay(&r.trace[0]).unwrap(), Some(2));

        let r = engine.solve(&Graph::path(4)).unwrap();
        assert_eq!(r.certificate.unwrap().rank, 4);
        assert!(Engine::new(FieldSpec::Generic)
            .with_oracle_fallback(true)
            .solve(&Graph::cycle(6))
            .unwrap()
            .exact
            .is_none());
    }

    #[test]
    fn cut_vertex_rule_in_trace() {
        // Two 4-cycles sharing a vertex: even cycles, no perfect matching.
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 0)]).unwrap();
        let r = mr_exact_structural(&g, FieldSpec::Generic).unwrap();
        assert_eq!(r.trace[0].rule, Rule::CutVertex);
        assert_eq!(r.trace[0].vertex, Some(0));
        assert_eq!(r.exact, Some(4));
        assert_eq!(Engine::new(FieldSpec::Generic).replay(&r.trace[0]).unwrap(), Some(4));
    }

    #[test]
    fn replay_rejects_tampering() {
        let engine = Engine::new(FieldSpec::Generic);
        let r = engine.solve(&spider()).unwrap();
        let mut step = r.trace[0].clone();
        step.value = Some(4);
        assert!(matches!(engine.replay(&step), Err(Error::Validation(_))));
        let c4 = engine.solve(&Graph::cycle(4)).unwrap().trace[0].clone();
        assert!(matches!(Engine::new(gf(5)).replay(&c4), Err(Error::Validation(_))));
    }

    #[test]
    fn structural_agrees_with_oracle_and_replays() {
        for n in 1..=6 {
            for g in crate::graph::enumerate_graphs(n, true, true).unwrap() {
                for p in [5, 11] {
                    let engine = Engine::new(gf(p));
                    let r = engine.solve(&g).unwrap();
                    let f = PrimeField::new(p).unwrap();
                    let oracle = min_rank_with(&g, f, &SearchOptions::with_budget(u128::MAX)).unwrap().rank;
                    assert!(r.lower <= oracle && oracle <= r.upper, "{g:?}");
                    if let Some(x) = r.exact {
                        assert_eq!(x, oracle, "{g:?}\n{}", r.trace[0]);
                        assert_eq!(engine.replay(&r.trace[0]).unwrap(), Some(x));
                    }
                }
            }
        }
    }

    #[test]
    fn certify_examples() {
        let f11 = PrimeField::new(11).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        let k23 = Graph::complete_multipartite(&[2, 3]);
        let w = certify(&k23, 2, f11).unwrap();
        assert_eq!(w.rank, 2);
        w.verify(&k23).unwrap();
        assert_eq!(certify(&Graph::path(4), 4, f5).unwrap().rank, 4);
        assert_eq!(certify(&Graph::complete(2), 0, f5), Err(Error::NotAchievable { target: 0, p: 5 }));
        assert!(matches!(certify(&Graph::complete(2), 1, f5), Err(Error::BadParameters(_))));
    }

    #[test]
    fn result_json_shape() {
        let r = mr_exact_structural(&Graph::complete(2), FieldSpec::Generic).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["exact"], 2);
        assert_eq!(v["trace"][0]["rule"], "complete-multipartite");
        assert_eq!(v["trace"][0]["value"], 2);
        assert!(v.get("certificate").is_none());
        let back: RankResult = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
