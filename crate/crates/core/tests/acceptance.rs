//! Acceptance criteria. Prints one `PASS`/`FAIL` line per criterion and
//! exits nonzero if any fails. Runs without the libtest harness so the lines
//! show up in plain `cargo test` output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use skewrank::campaign::{run_verification, CampaignParams, VerificationReport};

const TEN_MINUTES: Duration = Duration::from_secs(600);

fn params(nmax: usize, primes: &[u32]) -> CampaignParams {
    CampaignParams { nmax: Some(nmax), primes: Some(primes.to_vec()), ..Default::default() }
}

fn unlimited(mut p: CampaignParams) -> CampaignParams {
    p.budget = u128::MAX;
    p
}

struct Outcome {
    reports: Vec<VerificationReport>,
    elapsed: Duration,
    /// Extra requirements beyond zero disagreements, e.g. nothing skipped.
    extra: Vec<(&'static str, bool)>,
}

fn timed(f: impl FnOnce() -> Vec<VerificationReport>) -> Outcome {
    let start = Instant::now();
    let reports = f();
    Outcome { reports, elapsed: start.elapsed(), extra: Vec::new() }
}

impl Outcome {
    fn require(mut self, what: &'static str, ok: bool) -> Self {
        self.extra.push((what, ok));
        self
    }

    fn no_skips(self) -> Self {
        let ok = self.reports.iter().all(|r| r.skipped == 0);
        self.require("nothing skipped", ok)
    }
}

fn run(name: &str, p: &CampaignParams) -> VerificationReport {
    run_verification(name, p).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Prints the criterion line; returns whether it passed.
fn report(id: u32, title: &str, limit: Option<Duration>, o: &Outcome) -> bool {
    let in_time = limit.is_none_or(|l| o.elapsed < l);
    let failed_extra: Vec<&str> = o.extra.iter().filter(|(_, ok)| !ok).map(|(w, _)| *w).collect();
    let ok = o.reports.iter().all(|r| r.passed()) && in_time && failed_extra.is_empty();
    let detail: Vec<String> = o.reports.iter().map(|r| r.summary()).collect();
    let limit = limit.map(|l| format!(" (limit {}s)", l.as_secs())).unwrap_or_default();
    println!(
        "criterion {id:>2} {}: {title}; {:.2}s{limit}; {}",
        if ok { "PASS" } else { "FAIL" },
        o.elapsed.as_secs_f64(),
        detail.join("; ")
    );
    if !failed_extra.is_empty() {
        println!("    unmet: {}", failed_extra.join(", "));
    }
    for r in &o.reports {
        for d in r.disagreements.iter().take(10) {
            println!("    {} at {:?}: expected {}, got {} {}", d.graph, d.prime, d.expected, d.got, d.note);
        }
    }
    ok
}

fn criterion_01() -> bool {
    let p = CampaignParams { samples: Some(1000), ..params(8, &[3, 5, 11]) };
    let o = timed(|| vec![run("rank-parity", &p)]);
    let count = o.reports[0].graphs_checked;
    let o = o.require("1000 matrices", count == 1000);
    report(1, "random skew matrices have even rank", Some(Duration::from_secs(5)), &o)
}

fn criterion_02() -> bool {
    let o = timed(|| vec![run("lem-zf", &unlimited(params(6, &[5, 11])))]).no_skips();
    report(2, "n - mr <= Z on connected graphs, n <= 6", Some(TEN_MINUTES), &o)
}

fn criterion_03() -> bool {
    let o = timed(|| vec![run("lem-maxrank", &unlimited(params(6, &[11])))]).no_skips();
    report(3, "max rank = 2 match on connected graphs, n <= 6", Some(TEN_MINUTES), &o)
}

fn criterion_04() -> bool {
    let o = timed(|| vec![run("lem-upm", &params(8, &[5]))]);
    report(4, "unique perfect matching gives mr = n, n <= 8, within budget", None, &o)
}

fn criterion_05() -> bool {
    let o = timed(|| vec![run("thm-odd", &unlimited(params(7, &[5])))]).no_skips();
    report(5, "no even cycle gives mr = 2 match, n <= 7 and random trees", None, &o)
}

fn criterion_06() -> bool {
    let o = timed(|| vec![run("lem-cut", &unlimited(params(7, &[11])))]).no_skips();
    report(6, "cut-vertex formula at every cut vertex, n <= 7", None, &o)
}

fn criterion_07() -> bool {
    let o = timed(|| vec![run("thm-mr4", &unlimited(params(7, &[5, 11, 13])))]).no_skips();
    report(7, "classification iff mr = 4 at p = 13, n <= 7", None, &o)
}

fn criterion_08() -> bool {
    let p = CampaignParams { kmax: Some(3), ..params(9, &[5, 11, 13]) };
    let o = timed(|| vec![run("thm-kpath", &unlimited(p))]).no_skips();
    report(8, "k-paths, k <= 3, n <= 9", None, &o)
}

fn criterion_09() -> bool {
    let union = CampaignParams { samples: Some(200), ..params(6, &[5, 13]) };
    let o = timed(|| vec![run("lem-induced", &unlimited(params(6, &[5, 11]))), run("lem-union", &unlimited(union))]);
    report(9, "induced monotonicity (p = 5, 11) and subadditivity (asserted p = 13)", None, &o)
}

fn criterion_10() -> bool {
    let p = CampaignParams { samples: Some(50), ..params(5, &[5]) };
    let o = timed(|| vec![run("oracle-self", &p)]).no_skips();
    report(10, "normalized = full search (n <= 5), partitioned = sequential (50)", None, &o)
}

fn main() -> ExitCode {
    let criteria: [fn() -> bool; 10] = [
        criterion_01,
        criterion_02,
        criterion_03,
        criterion_04,
        criterion_05,
        criterion_06,
        criterion_07,
        criterion_08,
        criterion_09,
        criterion_10,
    ];
    // Run every criterion even after a failure.
    let passed = criteria.iter().filter(|c| c()).count();
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
