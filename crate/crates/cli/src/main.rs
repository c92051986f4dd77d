//! `skewrank`: minimum skew rank of small graphs from the command line.
//!
//! Graphs are read in the edge-list format (`n m` header, then `u v` lines;
//! `-` reads stdin). Structured output is JSON on stdout, a short summary
//! goes to stderr. Exit status: 0 success, 1 a verification disagreement
//! or an unattainable certificate target, 2 usage, input or runtime errors.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use skewrank::campaign::{run_verification, CampaignParams, CAMPAIGNS};
use skewrank::combinat::{matching_number, zero_forcing_number};
use skewrank::engine::{certify_with, mr_bounds, path_power_mr, Engine};
use skewrank::graph::{parse_graph, recognize_k_path};
use skewrank::linalg::DEFAULT_BUDGET;
use skewrank::{Error, FieldSpec, Graph, PrimeField};

#[derive(Parser)]
#[command(name = "skewrank", version, about = "Minimum skew rank of small graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum skew rank: exact when a rule applies, bounds otherwise.
    Mr {
        file: PathBuf,
        /// An odd prime, or `generic` for an infinite field.
        #[arg(long, default_value = "generic", value_parser = parse_field)]
        field: FieldSpec,
        /// Settle open cases with the exhaustive search (finite fields only).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Zero forcing lower bound and matching upper bound.
    Bounds { file: PathBuf },
    /// Zero forcing number and a minimum zero forcing set.
    Zf { file: PathBuf },
    /// Matching number and a maximum matching.
    Match { file: PathBuf },
    /// A matrix with the graph's support and the target rank.
    Certify {
        file: PathBuf,
        #[arg(long)]
        target: usize,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Closed-form minimum skew rank of a path power.
    PowerPath {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Run a verification campaign.
    Verify {
        campaign: String,
        #[arg(long)]
        nmax: Option<usize>,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u32>>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    if s == "generic" {
        return Ok(FieldSpec::Generic);
    }
    let p: u32 = s.parse().map_err(|_| format!("`{s}` is neither `generic` nor a prime"))?;
    PrimeField::new(p).map(FieldSpec::Finite).map_err(|e| e.to_string())
}

fn read_graph(path: &Path) -> Result<Graph, String> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(value: &impl serde::Serialize) {
    // A closed pipe (`| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let core = |e: Error| e.to_string();
    match cli.command {
        Command::Mr { file, field, oracle, budget } => {
            let g = read_graph(&file)?;
            let res = Engine::new(field).with_oracle_fallback(oracle).with_budget(budget).solve(&g).map_err(core)?;
            match res.exact {
                Some(r) => eprintln!("mr = {r} over {field}\n{}", res.trace[0]),
                None => eprintln!("{} <= mr <= {} over {field}\n{}", res.lower, res.upper, res.trace[0]),
            }
            emit(&res);
        }
        Command::Bounds { file } => {
            let res = mr_bounds(&read_graph(&file)?).map_err(core)?;
            eprintln!("{} <= mr <= {}", res.lower, res.upper);
            emit(&res);
        }
        Command::Zf { file } => {
            let (z, set) = zero_forcing_number(&read_graph(&file)?).map_err(core)?;
            eprintln!("Z = {z}, forcing set {set:?}");
            emit(&json!({ "zero_forcing_number": z, "set": set }));
        }
        Command::Match { file } => {
            let (m, matching) = matching_number(&read_graph(&file)?).map_err(core)?;
            eprintln!("match = {m}");
            emit(&json!({ "matching_number": m, "matching": matching }));
        }
        Command::Certify { file, target, p, budget } => {
            let g = read_graph(&file)?;
            let field = PrimeField::new(p).map_err(core)?;
            match certify_with(&g, target, field, budget) {
                Ok(w) => {
                    eprintln!("rank {target} attained over GF({p})");
                    emit(&w);
                }
                Err(e @ Error::NotAchievable { .. }) => {
                    eprintln!("{e}");
                    emit(&json!({ "target": target, "p": p, "achievable": false }));
                    return Ok(ExitCode::from(1));
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        Command::PowerPath { n, k } => {
            let mr = path_power_mr(n, k).map_err(core)?;
            let g = Graph::path_power(n, k.min(n - 1));
            let labelling = recognize_k_path(&g).map(|l| l.order);
            eprintln!("mr(P_{n}^{k}) = {mr}");
            emit(&json!({ "n": n, "k": k, "mr": mr, "graph": g, "k_path_order": labelling }));
        }
        Command::Verify { campaign, nmax, primes, kmax, samples, seed, budget, json } => {
            if !CAMPAIGNS.iter().any(|c| c.name == campaign) {
                let names: Vec<&str> = CAMPAIGNS.iter().map(|c| c.name).collect();
                return Err(format!("unknown campaign `{campaign}`; expected one of {}", names.join(", ")));
            }
            let params = CampaignParams { nmax, primes, kmax, samples, seed, budget };
            let report = run_verification(&campaign, &params).map_err(core)?;
            eprintln!("{}", report.summary());
            for d in &report.disagreements {
                eprintln!("  {} at {:?}: expected {}, got {} {}", d.graph, d.prime, d.expected, d.got, d.note);
            }
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report).expect("serializable");
                fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            emit(&report);
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
