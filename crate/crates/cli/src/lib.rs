//! The `crown` command line tool.
//!
//! [`run`] parses an argument vector and returns a [`CommandResult`] instead of touching the
//! process, so the binary and the tests share one code path.
//!
//! Exit codes: 0 success or property holds, 1 usage or input error, 2 property fails,
//! 3 budget exceeded (a non-exhaustive result is still printed).
//!
//! JSON outputs carry a top-level `"schema"` string (see [`schema`]).

use std::io::Read;
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crown_core::discharging::{
    build_discharge_sequence, large_set, lemma2_rhs, s_of, s_star, t_plain, t_star,
    verify_discharge_trace, DegreeFunction,
};
use crown_core::generators::{lower_bound_construction, random_linear_graph};
use crown_core::io::{parse_any, to_l3g};
use crown_core::lemma_lab::{run_suite, ReplayReport, SUITES};
use crown_core::search::{exact_ex, with_threads, SearchOptions};
use crown_core::{find_crown, link_graph, EdgeId, LinearThreeGraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PROPERTY_FAILS: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable supplying the default `--threads`.
pub const THREADS_ENV: &str = "CROWN_THREADS";

/// Largest `n` accepted by `exact` without `--best-effort`.
pub const EXACT_DEFAULT_MAX_N: usize = 10;
/// Largest `n` accepted by `exact` at all.
pub const EXACT_BEST_EFFORT_MAX_N: usize = 12;

/// Values of the `"schema"` field, one per JSON document kind.
pub mod schema {
    pub const CHECK: &str = "crown.check/1";
    pub const WITNESS: &str = "crown.witness/1";
    pub const CERTIFICATE: &str = "crown.certificate/1";
    pub const DISCHARGE: &str = "crown.discharge/1";
    pub const REPORTS: &str = "crown.reports/1";
    pub const LINK: &str = "crown.link/1";
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult {
            exit_code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        CommandResult {
            exit_code: EXIT_USAGE,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "crown",
    version,
    about = "Crown detection and extremal search for linear 3-graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a graph and look for a crown (exit 2 when one exists).
    Check {
        /// L3G or JSON graph file; `-` reads standard input.
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Compute ex(n, crown) by exhaustive isomorph-free search.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long, env = THREADS_ENV)]
        threads: Option<usize>,
        #[arg(long)]
        max_seconds: Option<f64>,
        #[arg(long)]
        max_nodes: Option<u64>,
        #[arg(long)]
        json: bool,
        /// Allow n up to 12.
        #[arg(long)]
        best_effort: bool,
        /// Stop once the incumbent reaches the conjectured upper bound (exploratory only).
        #[arg(long = "unsafe-5n3-prune")]
        unsafe_5n3_prune: bool,
        #[arg(long, default_value_t = 10)]
        witness_cap: usize,
    },
    /// Print the hub construction on n vertices in L3G format.
    Construct {
        #[arg(long)]
        n: usize,
    },
    /// Degree statistics, s/s* per edge, T*, and the discharging trace of a graph.
    Discharge {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Run verification suites.
    Lemmas {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, env = THREADS_ENV)]
        threads: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Print a seeded random linear graph in L3G format.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Print the colored link graph of one edge.
    Link {
        file: String,
        /// Edge index in sorted edge order.
        #[arg(long)]
        edge: usize,
        #[arg(long)]
        dot: bool,
    },
}

/// Parses `argv` (including the program name) and executes the command.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandResult::usage(text)
            } else {
                CommandResult::ok(text)
            };
        }
    };
    match cli.command {
        Command::Check { file, json } => check(&file, json),
        Command::Exact {
            n,
            threads,
            max_seconds,
            max_nodes,
            json,
            best_effort,
            unsafe_5n3_prune,
            witness_cap,
        } => {
            let limit = if best_effort {
                EXACT_BEST_EFFORT_MAX_N
            } else {
                EXACT_DEFAULT_MAX_N
            };
            if n < 3 {
                return CommandResult::usage("exact: --n must be at least 3");
            }
            if n > limit {
                return CommandResult::usage(format!(
                    "exact: --n {n} exceeds {limit}{}",
                    if best_effort {
                        ""
                    } else {
                        " (use --best-effort for up to 12)"
                    }
                ));
            }
            let max_duration = match max_seconds {
                Some(s) if !(s.is_finite() && s >= 0.0) => {
                    return CommandResult::usage(
                        "exact: --max-seconds must be a non-negative number",
                    )
                }
                Some(s) => Some(Duration::from_secs_f64(s)),
                None => None,
            };
            let opts = SearchOptions {
                threads,
                max_nodes,
                max_duration,
                unsafe_5n3_prune,
                witness_cap,
                ..SearchOptions::default()
            };
            exact(n, &opts, json)
        }
        Command::Construct { n } => match lower_bound_construction(n) {
            Ok(h) => CommandResult::ok(to_l3g(&h)),
            Err(e) => CommandResult::usage(format!("construct: {e}")),
        },
        Command::Discharge { file, json } => discharge(&file, json),
        Command::Lemmas {
            suite,
            seed,
            count,
            threads,
            json,
        } => lemmas(&suite, seed, count, threads, json),
        Command::Random { n, m, seed } => match random_linear_graph(n, m, seed) {
            Ok(r) => {
                let mut out = CommandResult::ok(to_l3g(&r.graph));
                if r.saturated {
                    out.stderr = format!(
                        "random: saturated after {} of {} edges\n",
                        r.graph.edge_count(),
                        r.requested
                    );
                }
                out
            }
            Err(e) => CommandResult::usage(format!("random: {e}")),
        },
        Command::Link { file, edge, dot } => link(&file, edge, dot),
    }
}

fn load(path: &str) -> Result<LinearThreeGraph, CommandResult> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CommandResult::usage(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| CommandResult::usage(format!("{path}: {e}")))?
    };
    parse_any(&text).map_err(|e| CommandResult::usage(format!("{path}: {e}")))
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn check(path: &str, json: bool) -> CommandResult {
    let h = match load(path) {
        Ok(h) => h,
        Err(e) => return e,
    };
    let witness = find_crown(&h);
    let stdout = match (&witness, json) {
        (Some(w), false) => {
            let mut v = serde_json::to_value(w.to_json(&h)).expect("witness serializes");
            v["schema"] = json!(schema::WITNESS);
            pretty(&v)
        }
        (None, false) => "crown-free\n".to_string(),
        (w, true) => pretty(&json!({
            "schema": schema::CHECK,
            "n": h.n(),
            "edges": h.edge_count(),
            "crown_free": w.is_none(),
            "witness": w.map(|w| w.to_json(&h)),
        })),
    };
    CommandResult {
        exit_code: if witness.is_some() {
            EXIT_PROPERTY_FAILS
        } else {
            EXIT_OK
        },
        stdout,
        stderr: String::new(),
    }
}

fn exact(n: usize, opts: &SearchOptions, json: bool) -> CommandResult {
    let cert = exact_ex(n, opts);
    if let Err(e) = cert.revalidate() {
        return CommandResult {
            exit_code: EXIT_PROPERTY_FAILS,
            stdout: String::new(),
            stderr: format!("exact: certificate failed revalidation: {e}\n"),
        };
    }
    let blocks: Vec<String> = cert.witness_graphs().iter().map(to_l3g).collect();
    let stdout = if json {
        let mut v = serde_json::to_value(&cert).expect("certificate serializes");
        v["schema"] = json!(schema::CERTIFICATE);
        v["witnesses_l3g"] = json!(blocks);
        pretty(&v)
    } else {
        let mut s = format!(
            "n = {}\nvalue = {}\nexhaustive = {}\nnodes = {}\nwitnesses = {}\n",
            cert.n,
            cert.value,
            cert.exhaustive,
            cert.nodes_explored,
            cert.witnesses.len()
        );
        for (i, b) in blocks.iter().enumerate() {
            s.push_str(&format!("# witness {i}\n{b}"));
        }
        s
    };
    CommandResult {
        exit_code: if cert.exhaustive {
            EXIT_OK
        } else {
            EXIT_BUDGET
        },
        stdout,
        stderr: if cert.exhaustive {
            String::new()
        } else {
            "exact: budget exceeded; value is a lower bound\n".into()
        },
    }
}

fn discharge(path: &str, json: bool) -> CommandResult {
    let h = match load(path) {
        Ok(h) => h,
        Err(e) => return e,
    };
    let large = large_set(&h);
    let per_edge: Vec<Value> = h
        .edge_ids()
        .map(|e| {
            json!({
                "edge": h.edges()[e.0],
                "degree_vector": h.degree_vector(e).expect("valid id").as_array(),
                "s": s_of(&h, e).expect("valid id"),
                "s_star": s_star(&h, e).expect("valid id"),
            })
        })
        .collect();
    let n = h.n() as u64;
    let rhs = lemma2_rhs(n, large.len() as u64);
    let m = h.edge_count() as u64;
    let t_star_value = t_star(&h) as u64;
    let d = DegreeFunction::from_graph(&h);
    let (trace, trace_error, verification) = match build_discharge_sequence(&d) {
        Ok(t) => {
            let ver = verify_discharge_trace(&t, &d);
            (Some(t), None, Some(ver))
        }
        Err(e) => (None, Some(e.to_string()), None),
    };
    let failed = verification.as_ref().is_some_and(|v| !v.ok);
    let report = json!({
        "schema": schema::DISCHARGE,
        "n": h.n(),
        "edges": h.edge_count(),
        "degrees": h.degrees(),
        "large": large,
        "per_edge": per_edge,
        "t_star": t_star_value,
        "t_plain": t_plain(&h),
        "lemma2": {
            "rhs_numer": *rhs.numer(),
            "rhs_denom": *rhs.denom(),
            // T*/|E| > rhs, compared as T* · denom > rhs_numer · |E|
            "t_star_ratio_exceeds_rhs": m > 0 && t_star_value * *rhs.denom() > *rhs.numer() * m,
            "t_star_at_least_25n_plus_14l": t_star_value >= 25 * n + 14 * large.len() as u64,
        },
        "trace": trace,
        "trace_error": trace_error,
        "verification": verification,
    });
    let stdout = if json {
        pretty(&report)
    } else {
        let mut s = format!(
            "n = {}, edges = {}\ndegrees = {:?}\nL(H) = {:?}\nT* = {}\nlemma2 rhs = {}\n",
            h.n(),
            h.edge_count(),
            h.degrees(),
            large,
            t_star_value,
            rhs
        );
        for (e, row) in h.edge_ids().zip(&per_edge) {
            s.push_str(&format!(
                "edge {} {:?}: s = {}, s* = {}\n",
                e,
                h.edges()[e.0],
                row["s"],
                row["s_star"]
            ));
        }
        match (&report["trace"], &report["trace_error"]) {
            (Value::Null, err) => s.push_str(&format!(
                "trace: not applicable ({})\n",
                err.as_str().unwrap_or("")
            )),
            (t, _) => s.push_str(&format!(
                "trace: {} steps, verified = {}\n",
                t["steps"].as_array().map_or(0, Vec::len),
                !failed
            )),
        }
        s
    };
    CommandResult {
        exit_code: if failed { EXIT_PROPERTY_FAILS } else { EXIT_OK },
        stdout,
        stderr: String::new(),
    }
}

fn lemmas(suite: &str, seed: u64, count: u64, threads: Option<usize>, json: bool) -> CommandResult {
    let reports: Vec<ReplayReport> = match with_threads(threads, || run_suite(suite, seed, count)) {
        Some(r) => r,
        None => {
            return CommandResult::usage(format!(
                "lemmas: unknown suite {suite:?}; expected one of {} or all",
                SUITES.join(", ")
            ))
        }
    };
    let passed = reports.iter().all(ReplayReport::passed);
    let stdout = if json {
        pretty(&json!({
            "schema": schema::REPORTS,
            "passed": passed,
            "reports": reports,
        }))
    } else {
        reports.iter().map(ReplayReport::to_text).collect()
    };
    CommandResult {
        exit_code: if passed { EXIT_OK } else { EXIT_PROPERTY_FAILS },
        stdout,
        stderr: String::new(),
    }
}

fn link(path: &str, edge: usize, dot: bool) -> CommandResult {
    let h = match load(path) {
        Ok(h) => h,
        Err(e) => return e,
    };
    let g = match link_graph(&h, EdgeId(edge)) {
        Ok(g) => g,
        Err(e) => return CommandResult::usage(format!("link: {e}")),
    };
    if dot {
        return CommandResult::ok(g.to_dot());
    }
    let mut v = serde_json::to_value(&g).expect("link graph serializes");
    v["schema"] = json!(schema::LINK);
    v["class_sizes"] = json!(g.class_sizes());
    v["rainbow_matching"] = json!(crown_core::find_rainbow_matching(&g));
    CommandResult::ok(pretty(&v))
}
