//! Verification campaigns: each one enumerates a graph family, evaluates
//! both sides of a claimed identity or inequality, and reports every
//! disagreement.
//!
//! A check is one (graph, prime) pair unless noted. Any-field campaigns
//! count a failure at every prime. Infinite-field campaigns count failures
//! at the largest prime only and list the rest as informational.

use std::collections::HashMap;
use std::fmt::Display;
use std::sync::Mutex;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::{count_perfect_matchings, forcing_closure, matching_number, zero_forcing_number, ColoringState};
use crate::engine::{classify_mr4_cut_vertex, kpath_mr, mr_bounds, Engine, FieldSpec, Mr4Verdict, Rule};
use crate::graph::{
    branches_at, canonical_key, cut_vertices, enumerate_graphs, full_mask, has_even_cycle, is_complete_multipartite,
    random_k_path, recognize_k_path, Graph,
};
use crate::linalg::{
    max_rank_exhaustive, max_rank_sample, min_rank_partitioned, min_rank_with, random_skew_matrix, Normalization,
    PrimeField, SearchOptions, DEFAULT_BUDGET,
};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignParams {
    /// Largest vertex count; campaign default when `None`.
    pub nmax: Option<usize>,
    /// Primes to test; campaign default when `None`.
    pub primes: Option<Vec<u32>>,
    /// Largest k for k-path campaigns.
    pub kmax: Option<usize>,
    /// Number of random instances for sampled campaigns.
    pub samples: Option<usize>,
    pub seed: u64,
    /// Oracle budget; graphs beyond it are skipped and counted as such.
    pub budget: u128,
}

impl Default for CampaignParams {
    fn default() -> Self {
        CampaignParams { nmax: None, primes: None, kmax: None, samples: None, seed: 0, budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub graph: Graph,
    /// `None` for field-independent checks.
    pub prime: Option<u32>,
    pub expected: String,
    pub got: String,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub campaign: String,
    pub family: String,
    pub primes: Vec<u32>,
    pub infinite_field: bool,
    pub graphs_checked: usize,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
    /// Failures that do not count: smaller primes on infinite-field campaigns.
    pub informational: Vec<Disagreement>,
    /// Checks not run because the oracle budget was exceeded.
    pub skipped: usize,
    /// Wall-clock seconds.
    pub runtime: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} checked, {} agree, {} disagree, {} informational, {} skipped, primes {:?}, {:.2}s",
            self.campaign,
            self.graphs_checked,
            self.agreements,
            self.disagreements.len(),
            self.informational.len(),
            self.skipped,
            self.primes,
            self.runtime
        )
    }
}

pub struct CampaignInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub infinite_field: bool,
    nmax: usize,
    primes: &'static [u32],
    samples: usize,
}

pub const CAMPAIGNS: &[CampaignInfo] = &[
    CampaignInfo {
        name: "rank-parity",
        description: "random skew matrices have even, relabelling-invariant rank",
        infinite_field: false,
        nmax: 8,
        primes: &[3, 5, 11],
        samples: 1000,
    },
    CampaignInfo {
        name: "lem-zf",
        description: "n - mr <= Z(G) on connected graphs",
        infinite_field: false,
        nmax: 6,
        primes: &[5, 11],
        samples: 0,
    },
    CampaignInfo {
        name: "lem-maxrank",
        description: "maximum skew rank equals 2 match(G) on connected graphs",
        infinite_field: false,
        nmax: 6,
        primes: &[11],
        samples: 0,
    },
    CampaignInfo {
        name: "lem-upm",
        description: "mr = n for connected graphs with a unique perfect matching",
        infinite_field: false,
        nmax: 8,
        primes: &[5],
        samples: 0,
    },
    CampaignInfo {
        name: "thm-odd",
        description: "mr = 2 match(G) for connected graphs without even cycles, plus random trees",
        infinite_field: false,
        nmax: 7,
        primes: &[5],
        samples: 20,
    },
    CampaignInfo {
        name: "lem-cut",
        description: "cut-vertex formula with oracle sub-ranks equals mr, at every cut vertex",
        infinite_field: false,
        nmax: 7,
        primes: &[11],
        samples: 0,
    },
    CampaignInfo {
        name: "thm-mr4",
        description: "cut-vertex classification holds iff mr = 4",
        infinite_field: true,
        nmax: 7,
        primes: &[5, 11, 13],
        samples: 0,
    },
    CampaignInfo {
        name: "thm-kpath",
        description: "k-path recognition, forcing set and closed form on path powers and random k-paths",
        infinite_field: true,
        nmax: 9,
        primes: &[5, 11, 13],
        samples: 1,
    },
    CampaignInfo {
        name: "lem-induced",
        description: "induced subgraphs never have larger mr",
        infinite_field: false,
        nmax: 6,
        primes: &[5, 11],
        samples: 0,
    },
    CampaignInfo {
        name: "lem-union",
        description: "mr(G1 u G2) <= mr(G1) + mr(G2) on random edge covers",
        infinite_field: true,
        nmax: 6,
        primes: &[5, 13],
        samples: 200,
    },
    CampaignInfo {
        name: "lem-multipartite",
        description: "complete multipartite graphs have mr = 2",
        infinite_field: true,
        nmax: 7,
        primes: &[5, 11, 13],
        samples: 0,
    },
    CampaignInfo {
        name: "engine-sound",
        description: "engine bounds contain the oracle value, exact results match it and replay",
        infinite_field: false,
        nmax: 7,
        primes: &[5, 11],
        samples: 0,
    },
    CampaignInfo {
        name: "oracle-self",
        description: "normalized, unnormalized and partitioned searches agree",
        infinite_field: false,
        nmax: 5,
        primes: &[5],
        samples: 50,
    },
];

pub fn campaign_info(name: &str) -> Result<&'static CampaignInfo> {
    CAMPAIGNS.iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownCampaign(name.to_string()))
}

/// One evaluated check; `ok == None` means skipped for budget.
struct Check {
    graph: Graph,
    prime: Option<u32>,
    counted: bool,
    ok: Option<bool>,
    expected: String,
    got: String,
    note: String,
}

impl Check {
    fn new(
        graph: &Graph,
        prime: Option<u32>,
        counted: bool,
        ok: bool,
        expected: impl Display,
        got: impl Display,
    ) -> Self {
        Check {
            graph: graph.clone(),
            prime,
            counted,
            ok: Some(ok),
            expected: expected.to_string(),
            got: got.to_string(),
            note: String::new(),
        }
    }

    fn skipped(graph: &Graph, prime: Option<u32>) -> Self {
        Check {
            graph: graph.clone(),
            prime,
            counted: true,
            ok: None,
            expected: String::new(),
            got: String::new(),
            note: String::new(),
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Oracle minimum ranks memoised by isomorphism class and prime. The rank is
/// a class invariant, so the cache never changes a result.
struct Oracle {
    budget: u128,
    cache: Mutex<HashMap<(u128, u32), Option<usize>>>,
}

impl Oracle {
    fn min(&self, g: &Graph, f: PrimeField) -> Result<Option<usize>> {
        let key = (canonical_key(g), f.p());
        if let Some(&hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit);
        }
        let floor = mr_bounds(g).ok().map(|b| b.lower);
        let opts = SearchOptions { floor, ..SearchOptions::with_budget(self.budget) };
        let rank = match min_rank_with(g, f, &opts) {
            Ok(w) => Some(w.rank),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        self.cache.lock().unwrap().insert(key, rank);
        Ok(rank)
    }
}

struct Ctx {
    info: &'static CampaignInfo,
    nmax: usize,
    primes: Vec<PrimeField>,
    kmax: usize,
    samples: usize,
    seed: u64,
    budget: u128,
    oracle: Oracle,
}

impl Ctx {
    fn largest(&self) -> PrimeField {
        *self.primes.iter().max_by_key(|f| f.p()).unwrap()
    }

    fn counted(&self, f: PrimeField) -> bool {
        !self.info.infinite_field || f == self.largest()
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn connected(&self, keep: impl Fn(&Graph) -> bool) -> Result<Vec<Graph>> {
        let mut out = Vec::new();
        for n in 1..=self.nmax {
            out.extend(enumerate_graphs(n, true, true)?.filter(|g| keep(g)));
        }
        Ok(out)
    }

    /// Runs `check` for every graph at every prime.
    fn per_prime(
        &self,
        graphs: &[Graph],
        check: impl Fn(&Graph, PrimeField) -> Result<Vec<Check>> + Sync,
    ) -> Result<Vec<Check>> {
        let items: Vec<(&Graph, PrimeField)> =
            graphs.iter().flat_map(|g| self.primes.iter().map(move |&f| (g, f))).collect();
        collect(&items, |&(g, f)| check(g, f))
    }
}

fn collect<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Vec<Check>> + Sync) -> Result<Vec<Check>> {
    let parts: Vec<Result<Vec<Check>>> = items.par_iter().map(&f).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn random_graph(n: usize, density: f64, rng: &mut ChaCha8Rng) -> Graph {
    let keep: Vec<bool> = (0..n * (n.max(1) - 1) / 2).map(|_| rng.gen_bool(density)).collect();
    Graph::complete(n).edge_subgraph(|i| keep[i])
}

fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Graph::from_edges(n, &edges).unwrap().permute(&perm)
}

/// Partitions of `m` into at least two parts, parts nonincreasing.
fn partitions(m: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

fn rank_parity(ctx: &Ctx) -> Result<Vec<Check>> {
    let mut rng = ctx.rng();
    let mut out = Vec::new();
    for i in 0..ctx.samples {
        let n = rng.gen_range(1..=ctx.nmax);
        let g = random_graph(n, rng.gen_range(0.2..0.9), &mut rng);
        let f = ctx.primes[i % ctx.primes.len()];
        let m = random_skew_matrix(&g, f, &mut rng);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let (r, rp) = (m.rank(), m.permute(&perm).rank());
        out.push(Check::new(
            &g,
            Some(f.p()),
            true,
            r % 2 == 0 && r == rp,
            "even rank, invariant",
            format!("{r}, relabelled {rp}"),
        ));
    }
    Ok(out)
}

fn lem_zf(ctx: &Ctx) -> Result<Vec<Check>> {
    ctx.per_prime(&ctx.connected(|_| true)?, |g, f| {
        let (z, _) = zero_forcing_number(g)?;
        Ok(vec![match ctx.oracle.min(g, f)? {
            Some(r) => Check::new(
                g,
                Some(f.p()),
                true,
                g.n() - r <= z,
                format!("n - mr <= Z = {z}"),
                format!("n - mr = {}", g.n() - r),
            ),
            None => Check::skipped(g, Some(f.p())),
        }])
    })
}

fn lem_maxrank(ctx: &Ctx) -> Result<Vec<Check>> {
    ctx.per_prime(&ctx.connected(|_| true)?, |g, f| {
        let (m, _) = matching_number(g)?;
        let (max, how) = match max_rank_exhaustive(g, f, &SearchOptions::with_budget(ctx.budget)) {
            Ok(w) => (w.rank, "exhaustive"),
            Err(Error::BudgetExceeded { .. }) => (max_rank_sample(g, f, 500, ctx.seed), "sampled"),
            Err(e) => return Err(e),
        };
        Ok(vec![Check::new(g, Some(f.p()), true, max == 2 * m, 2 * m, max).note(how)])
    })
}

fn lem_upm(ctx: &Ctx) -> Result<Vec<Check>> {
    let graphs = ctx.connected(|g| count_perfect_matchings(g, 2) == 1)?;
    ctx.per_prime(&graphs, |g, f| {
        Ok(vec![match ctx.oracle.min(g, f)? {
            Some(r) => Check::new(g, Some(f.p()), true, r == g.n(), g.n(), r),
            None => Check::skipped(g, Some(f.p())),
        }])
    })
}

fn thm_odd(ctx: &Ctx) -> Result<Vec<Check>> {
    let mut graphs = ctx.connected(|g| !has_even_cycle(g))?;
    let mut rng = ctx.rng();
    let largest_tree = 12.max(ctx.nmax);
    if ctx.nmax < largest_tree {
        for _ in 0..ctx.samples {
            let n = rng.gen_range(ctx.nmax + 1..=largest_tree);
            graphs.push(random_tree(n, &mut rng));
        }
    }
    ctx.per_prime(&graphs, |g, f| {
        let (m, _) = matching_number(g)?;
        Ok(vec![match ctx.oracle.min(g, f)? {
            Some(r) => Check::new(g, Some(f.p()), true, r == 2 * m, 2 * m, r),
            None => Check::skipped(g, Some(f.p())),
        }])
    })
}

fn lem_cut(ctx: &Ctx) -> Result<Vec<Check>> {
    let graphs = ctx.connected(|g| !cut_vertices(g).is_empty())?;
    ctx.per_prime(&graphs, |g, f| {
        let Some(r) = ctx.oracle.min(g, f)? else {
            return Ok(vec![Check::skipped(g, Some(f.p()))]);
        };
        let mut out = Vec::new();
        'cut: for v in cut_vertices(g) {
            let (mut tail, mut gain, mut bad_rv) = (0, 0, Vec::new());
            for b in branches_at(g, v)?.branches {
                let (Some(with), Some(without)) =
                    (ctx.oracle.min(&b.graph, f)?, ctx.oracle.min(&b.without_cut_vertex(), f)?)
                else {
                    out.push(Check::skipped(g, Some(f.p())));
                    continue 'cut;
                };
                if with < without || with - without > 2 {
                    bad_rv.push(format!("{with} - {without}"));
                } else {
                    tail += without;
                    gain += with - without;
                }
            }
            let formula = tail + gain.min(2);
            let check = if bad_rv.is_empty() {
                Check::new(g, Some(f.p()), true, formula == r, r, formula)
            } else {
                Check::new(g, Some(f.p()), true, false, "r_v in {0, 2}", bad_rv.join(", "))
            };
            out.push(check.note(format!("cut vertex {v}")));
        }
        Ok(out)
    })
}

fn thm_mr4(ctx: &Ctx) -> Result<Vec<Check>> {
    let graphs = ctx.connected(|g| !cut_vertices(g).is_empty())?;
    ctx.per_prime(&graphs, |g, f| {
        let c = classify_mr4_cut_vertex(g)?;
        let expected = match &c.verdict {
            Mr4Verdict::CaseI { .. } => format!("4 (case i at vertex {})", c.cut_vertex),
            Mr4Verdict::CaseII { .. } => format!("4 (case ii at vertex {})", c.cut_vertex),
            Mr4Verdict::No => "not 4".to_string(),
        };
        Ok(vec![match ctx.oracle.min(g, f)? {
            Some(r) => Check::new(g, Some(f.p()), ctx.counted(f), c.is_rank_four() == (r == 4), expected, r),
            None => Check::skipped(g, Some(f.p())),
        }])
    })
}

fn thm_kpath(ctx: &Ctx) -> Result<Vec<Check>> {
    let mut rng = ctx.rng();
    let mut items: Vec<(Graph, usize, &str)> = Vec::new();
    for k in 1..=ctx.kmax {
        for n in k + 1..=ctx.nmax {
            items.push((Graph::path_power(n, k), k, "path power"));
            if n >= k + 3 {
                for _ in 0..ctx.samples {
                    items.push((random_k_path(n, k, &mut rng), k, "random k-path"));
                }
            }
        }
    }
    let mut out = collect(&items, |(g, k, kind)| {
        let n = g.n();
        let (ok, got) = match recognize_k_path(g) {
            Some(lab) if lab.k == *k && lab.is_valid_for(g) => {
                let state = ColoringState::new(g.clone(), &lab.order[..*k])?;
                let derived = forcing_closure(&state).len();
                (derived == n, format!("labelled, {{v_1..v_k}} forces {derived} of {n}"))
            }
            Some(lab) => (false, format!("labelled with k = {}", lab.k)),
            None => (false, "not recognised".to_string()),
        };
        Ok(vec![Check::new(g, None, true, ok, format!("{k}-path, {{v_1..v_k}} forces all"), got).note(*kind)])
    })?;
    let graphs: Vec<(Graph, usize, &str)> = items;
    let per_prime: Vec<(&(Graph, usize, &str), PrimeField)> =
        graphs.iter().flat_map(|it| ctx.primes.iter().map(move |&f| (it, f))).collect();
    out.extend(collect(&per_prime, |&((g, k, kind), f)| {
        let expected = kpath_mr(g.n(), *k)?;
        Ok(vec![match ctx.oracle.min(g, f)? {
            Some(r) => Check::new(g, Some(f.p()), ctx.counted(f), r == expected, expected, r).note(*kind),
            None => Check::skipped(g, Some(f.p())),
        }])
    })?);
    Ok(out)
}

fn lem_induced(ctx: &Ctx) -> Result<Vec<Check>> {
    ctx.per_prime(&ctx.connected(|_| true)?, |g, f| {
        let Some(r) = ctx.oracle.min(g, f)? else {
            return Ok(vec![Check::skipped(g, Some(f.p()))]);
        };
        let mut worst = 0;
        let mut violation = None;
        for mask in 1..full_mask(g.n()) {
            let h = g.induced_by_mask(mask);
            match ctx.oracle.min(&h, f)? {
                Some(rh) if rh > r && violation.is_none() => violation = Some(format!("{rh} on {h}")),
                Some(rh) => worst = worst.max(rh),
                None => return Ok(vec![Check::skipped(g, Some(f.p()))]),
            }
        }
        let got = violation.clone().unwrap_or_else(|| format!("largest induced mr {worst}"));
        Ok(vec![Check::new(g, Some(f.p()), true, violation.is_none(), format!("induced mr <= {r}"), got)])
    })
}

fn lem_union(ctx: &Ctx) -> Result<Vec<Check>> {
    if ctx.nmax < 2 {
        return Err(Error::BadParameters("lem-union needs nmax >= 2".into()));
    }
    let mut rng = ctx.rng();
    let mut items = Vec::with_capacity(ctx.samples);
    for _ in 0..ctx.samples {
        let n = rng.gen_range(2..=ctx.nmax);
        let g = random_graph(n, rng.gen_range(0.3..0.9), &mut rng);
        // Each edge goes to G1, G2 or both.
        let side: Vec<u8> = (0..g.edge_count()).map(|_| rng.gen_range(0..3)).collect();
        let g1 = g.edge_subgraph(|i| side[i] != 1);
        let g2 = g.edge_subgraph(|i| side[i] != 0);
        items.push((g, g1, g2));
    }
    let per_prime: Vec<(&(Graph, Graph, Graph), PrimeField)> =
        items.iter().flat_map(|it| ctx.primes.iter().map(move |&f| (it, f))).collect();
    collect(&per_prime, |&((g, g1, g2), f)| {
        let ranks = (ctx.oracle.min(g, f)?, ctx.oracle.min(g1, f)?, ctx.oracle.min(g2, f)?);
        Ok(vec![match ranks {
            (Some(r), Some(r1), Some(r2)) => {
                Check::new(g, Some(f.p()), ctx.counted(f), r <= r1 + r2, format!("<= {r1} + {r2}"), r)
                    .note(format!("G1 = {g1}, G2 = {g2}"))
            }
            _ => Check::skipped(g, Some(f.p())),
        }])
    })
}

fn lem_multipartite(ctx: &Ctx) -> Result<Vec<Check>> {
    let graphs: Vec<(Graph, usize)> =
        (2..=ctx.nmax).flat_map(partitions).map(|sizes| (Graph::complete_multipartite(&sizes), sizes.len())).collect();
    let per_prime: Vec<(&(Graph, usize), PrimeField)> =
        graphs.iter().flat_map(|it| ctx.primes.iter().map(move |&f| (it, f))).collect();
    collect(&per_prime, |&((g, t), f)| {
        // Rank 2 needs t distinct points on the projective line over GF(p).
        let field_fits = f.p() as usize + 1 >= *t;
        if ctx.counted(f) && !field_fits {
            return Ok(vec![Check::skipped(g, Some(f.p()))]);
        }
        Ok(vec![match ctx.oracle.min(g, f)? {
            Some(r) => Check::new(g, Some(f.p()), ctx.counted(f), r == 2, 2, r).note(format!("{t} parts")),
            None => Check::skipped(g, Some(f.p())),
        }])
    })
}

fn engine_sound(ctx: &Ctx) -> Result<Vec<Check>> {
    let graphs = ctx.connected(|_| true)?;
    let mut out = ctx.per_prime(&graphs, |g, f| {
        let engine = Engine::new(FieldSpec::Finite(f)).with_budget(ctx.budget);
        let res = engine.solve(g)?;
        let Some(r) = ctx.oracle.min(g, f)? else {
            return Ok(vec![Check::skipped(g, Some(f.p()))]);
        };
        let replay = engine.replay(&res.trace[0]).map_err(|e| e.to_string());
        let ok = res.lower <= r && r <= res.upper && res.exact.is_none_or(|x| x == r) && replay == Ok(res.exact);
        let expected = match res.exact {
            Some(x) => format!("{x} (replays)"),
            None => format!("in [{}, {}]", res.lower, res.upper),
        };
        let got = match replay {
            Ok(_) => r.to_string(),
            Err(e) => format!("{r}, replay failed: {e}"),
        };
        let rules: Vec<&str> = res.rules_used().iter().map(|r| r.id()).collect();
        Ok(vec![Check::new(g, Some(f.p()), true, ok, expected, got).note(rules.join(" "))])
    })?;
    // Generic mode: exact answers must match the oracle at the largest prime.
    let big = ctx.largest();
    out.extend(collect(&graphs, |g| {
        let engine = Engine::new(FieldSpec::Generic);
        let res = engine.solve(g)?;
        let Some(x) = res.exact else {
            return Ok(Vec::new());
        };
        let rules = res.rules_used();
        let needs_large = rules.contains(&Rule::CompleteMultipartite)
            && is_complete_multipartite(g).is_some_and(|p| big.p() as usize + 1 < p.len());
        if needs_large {
            return Ok(vec![Check::skipped(g, Some(big.p()))]);
        }
        let replay = engine.replay(&res.trace[0]);
        let ids: Vec<&str> = rules.iter().map(|r| r.id()).collect();
        let note = format!("generic: {}", ids.join(" "));
        Ok(vec![match ctx.oracle.min(g, big)? {
            Some(r) => Check::new(g, Some(big.p()), true, r == x && replay == Ok(Some(x)), x, r).note(note),
            None => Check::skipped(g, Some(big.p())),
        }])
    })?);
    Ok(out)
}

fn oracle_self(ctx: &Ctx) -> Result<Vec<Check>> {
    let mut out = ctx.per_prime(&ctx.connected(|_| true)?, |g, f| {
        let unlimited = SearchOptions::with_budget(u128::MAX);
        let ranks =
            [Normalization::None, Normalization::SpanningTree, Normalization::TreeAndOddCycle].map(|normalization| {
                min_rank_with(g, f, &SearchOptions { normalization, ..unlimited.clone() })
                    .map(|w| (w.verify(g).is_ok(), w.rank))
            });
        let full = ranks[0].clone()?;
        let mut got = Vec::new();
        let mut ok = full.0;
        for r in &ranks[1..] {
            let (valid, rank) = r.clone()?;
            ok &= valid && rank == full.1;
            got.push(rank.to_string());
        }
        Ok(
            vec![
                Check::new(g, Some(f.p()), true, ok, full.1, got.join(", ")).note("full vs tree vs tree and odd cycle")
            ],
        )
    })?;
    let mut rng = ctx.rng();
    let mut items = Vec::with_capacity(ctx.samples);
    for _ in 0..ctx.samples {
        let n = rng.gen_range(3..=7);
        let g = random_graph(n, rng.gen_range(0.3..0.8), &mut rng);
        let f = *ctx.primes.choose(&mut rng).unwrap();
        items.push((g, f, rng.gen_range(2..=8)));
    }
    out.extend(collect(&items, |(g, f, parts)| {
        let opts = SearchOptions::with_budget(ctx.budget);
        let seq = match min_rank_with(g, *f, &opts) {
            Ok(w) => w,
            Err(Error::BudgetExceeded { .. }) => return Ok(vec![Check::skipped(g, Some(f.p()))]),
            Err(e) => return Err(e),
        };
        let par = min_rank_partitioned(g, *f, &opts, *parts)?;
        Ok(vec![Check::new(g, Some(f.p()), true, par == seq, seq.rank, par.rank)
            .note(format!("{parts} parts, witness compared"))])
    })?);
    Ok(out)
}

fn family(ctx: &Ctx) -> String {
    let (name, nmax, samples) = (ctx.info.name, ctx.nmax, ctx.samples);
    match name {
        "rank-parity" => format!("{samples} random matrices on graphs with n <= {nmax}"),
        "lem-upm" => format!("connected graphs with a unique perfect matching, n <= {nmax}"),
        "thm-odd" => format!("connected graphs without even cycles, n <= {nmax}, and {samples} random trees"),
        "lem-cut" | "thm-mr4" => format!("connected graphs with a cut vertex, n <= {nmax}"),
        "thm-kpath" => format!("path powers and random k-paths, k <= {}, n <= {nmax}", ctx.kmax),
        "lem-union" => format!("{samples} random graphs with n <= {nmax}, random edge covers"),
        "lem-multipartite" => format!("complete multipartite graphs, n <= {nmax}"),
        "oracle-self" => format!("connected graphs, n <= {nmax}, and {samples} random graphs"),
        _ => format!("connected graphs, n <= {nmax}"),
    }
}

/// Runs a named campaign. Unset parameters take the campaign's defaults.
pub fn run_verification(name: &str, params: &CampaignParams) -> Result<VerificationReport> {
    let info = campaign_info(name)?;
    let primes = params.primes.clone().unwrap_or_else(|| info.primes.to_vec());
    if primes.is_empty() {
        return Err(Error::BadParameters("no primes given".into()));
    }
    let primes = primes.into_iter().map(PrimeField::new).collect::<Result<Vec<_>>>()?;
    let nmax = params.nmax.unwrap_or(info.nmax);
    if nmax == 0 {
        return Err(Error::BadParameters("nmax must be at least 1".into()));
    }
    let ctx = Ctx {
        info,
        nmax,
        primes,
        kmax: params.kmax.unwrap_or(3),
        samples: params.samples.unwrap_or(info.samples),
        seed: params.seed,
        budget: params.budget,
        oracle: Oracle { budget: params.budget, cache: Mutex::new(HashMap::new()) },
    };
    let start = Instant::now();
    let mut checks = match name {
        "rank-parity" => rank_parity(&ctx),
        "lem-zf" => lem_zf(&ctx),
        "lem-maxrank" => lem_maxrank(&ctx),
        "lem-upm" => lem_upm(&ctx),
        "thm-odd" => thm_odd(&ctx),
        "lem-cut" => lem_cut(&ctx),
        "thm-mr4" => thm_mr4(&ctx),
        "thm-kpath" => thm_kpath(&ctx),
        "lem-induced" => lem_induced(&ctx),
        "lem-union" => lem_union(&ctx),
        "lem-multipartite" => lem_multipartite(&ctx),
        "engine-sound" => engine_sound(&ctx),
        "oracle-self" => oracle_self(&ctx),
        _ => unreachable!("names come from CAMPAIGNS"),
    }?;
    checks.sort_by_cached_key(|c| (c.graph.n(), canonical_key(&c.graph), c.graph.clone(), c.prime, c.note.clone()));

    let mut report = VerificationReport {
        campaign: name.to_string(),
        family: family(&ctx),
        primes: ctx.primes.iter().map(|f| f.p()).collect(),
        infinite_field: info.infinite_field,
        graphs_checked: 0,
        agreements: 0,
        disagreements: Vec::new(),
        informational: Vec::new(),
        skipped: 0,
        runtime: 0.0,
    };
    for c in checks {
        let d = || Disagreement {
            graph: c.graph.clone(),
            prime: c.prime,
            expected: c.expected.clone(),
            got: c.got.clone(),
            note: c.note.clone(),
        };
        match (c.ok, c.counted) {
            (None, _) => report.skipped += 1,
            (Some(true), true) => {
                report.graphs_checked += 1;
                report.agreements += 1;
            }
            (Some(false), true) => {
                report.graphs_checked += 1;
                report.disagreements.push(d());
            }
            (Some(false), false) => report.informational.push(d()),
            (Some(true), false) => {}
        }
    }
    report.runtime = start.elapsed().as_secs_f64();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str, nmax: usize, primes: &[u32]) -> VerificationReport {
        let params = CampaignParams { nmax: Some(nmax), primes: Some(primes.to_vec()), ..Default::default() };
        run_verification(name, &params).unwrap()
    }

    #[test]
    fn spec_examples() {
        let r = run("lem-zf", 5, &[5]);
        assert!(r.passed() && r.graphs_checked == 1 + 1 + 2 + 6 + 21, "{}", r.summary());
        let params =
            CampaignParams { nmax: Some(7), kmax: Some(2), primes: Some(vec![5, 11, 13]), ..Default::default() };
        let r = run_verification("thm-kpath", &params).unwrap();
        assert!(r.passed(), "{:?}", r.disagreements);
        let r = run("lem-maxrank", 5, &[11]);
        assert!(r.passed() && r.graphs_checked == 31, "{}", r.summary());
    }

    #[test]
    fn every_campaign_runs_small() {
        for c in CAMPAIGNS {
            let params = CampaignParams { nmax: Some(4), samples: Some(5), kmax: Some(2), ..Default::default() };
            let r = run_verification(c.name, &params).unwrap();
            assert!(r.passed(), "{}: {:?}", c.name, r.disagreements);
            assert_eq!(r.agreements + r.disagreements.len(), r.graphs_checked);
            assert!(r.graphs_checked > 0, "{}", c.name);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            run_verification("lem-nope", &CampaignParams::default()).unwrap_err(),
            Error::UnknownCampaign("lem-nope".into())
        );
        let bad = CampaignParams { primes: Some(vec![4]), ..Default::default() };
        assert_eq!(run_verification("lem-zf", &bad).unwrap_err(), Error::NotAnOddPrime(4));
        let big = CampaignParams { nmax: Some(9), ..Default::default() };
        assert!(matches!(run_verification("lem-zf", &big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn reports_are_deterministic_and_round_trip() {
        let params = CampaignParams { nmax: Some(5), samples: Some(30), seed: 3, ..Default::default() };
        let mut a = run_verification("lem-union", &params).unwrap();
        let mut b = run_verification("lem-union", &params).unwrap();
        a.runtime = 0.0;
        b.runtime = 0.0;
        assert_eq!(a, b);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<VerificationReport>(&json).unwrap(), a);
    }

    #[test]
    fn partitions_of_small_numbers() {
        assert_eq!(partitions(4), vec![vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partitions(1), Vec::<Vec<usize>>::new());
    }
}
