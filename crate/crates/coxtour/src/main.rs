//! Command-line front end: feasibility checks, tournament construction,
//! strength fitting and the small brute-force oracles, all speaking JSON on
//! stdout.
//!
//! Exit codes: 0 success (and membership answers of "yes"), 1 a clean
//! negative answer (non-member, infeasible target), 2 usage or input
//! errors, 3 violated preconditions (boundary scores, unbalanced graphs
//! beyond the fallback search).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use coxtour::birkhoff::{birkhoff_decompose, mixture_tournament, strassen_construct};
use coxtour::btfit::bt_fit;
use coxtour::hh::{hh_construct_traced, HhTrace, StepKind};
use coxtour::landau::realize_deterministic;
use coxtour::oracle::{enumerate_deterministic_scores, lp_member, OracleBudget};
use coxtour::rational::{format_rational, parse_rational, rat};
use coxtour::roots::{delta_of, rho_complete, RootKind, RootType};
use coxtour::score::{h_value, is_mean_score, is_mean_score_complete, Tournament};
use coxtour::sgraph::SignedGraph;
use coxtour::{Error, Rat, Result};

#[derive(Parser)]
#[command(
    name = "coxtour",
    version,
    about = "Tournaments on signed graphs: feasibility, construction, fitting"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Test whether a score vector is the mean score of some tournament.
    Check(CheckArgs),
    /// Build a tournament on a complete graph realizing a score vector.
    Construct(ConstructArgs),
    /// Fit logistic strengths to a mean score on a complete graph.
    FitBt(FitBtArgs),
    /// Find a deterministic tournament hitting an integer translated score.
    RealizeInt(RealizeIntArgs),
    /// Report whether a signed graph is balanced.
    Balance(BalanceArgs),
    /// Brute-force references on small graphs.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Print basic data for a root type or a graph file.
    Info(InfoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPER")]
enum KindArg {
    A,
    B,
    C,
    D,
}

impl From<KindArg> for RootKind {
    fn from(k: KindArg) -> RootKind {
        match k {
            KindArg::A => RootKind::A,
            KindArg::B => RootKind::B,
            KindArg::C => RootKind::C,
            KindArg::D => RootKind::D,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Peel extreme players off with the exact slider solve.
    Hh,
    /// Mix deterministic rank-assignment tournaments found by matchings.
    Birkhoff,
    /// Couple independent signed-rank draws (type C only).
    Strassen,
}

#[derive(Args)]
struct CheckArgs {
    /// Signed graph JSON file to test against.
    #[arg(long, value_name = "FILE", required_unless_present = "complete")]
    graph: Option<PathBuf>,
    /// Test against the complete graph of --type instead of a file.
    #[arg(long, conflicts_with = "graph", requires = "kind")]
    complete: bool,
    /// Root system type (B, C or D) for --complete.
    #[arg(long = "type", value_enum, ignore_case = true)]
    kind: Option<KindArg>,
    /// Scores: inline "(a,b,...)" or a file with one value per line.
    #[arg(long)]
    scores: String,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    method: Method,
    /// Root system type (B, C or D); the rank is the score count.
    #[arg(long = "type", value_enum, ignore_case = true)]
    kind: KindArg,
    /// Scores: inline "(a,b,...)" or a file with one value per line.
    #[arg(long)]
    scores: String,
    /// Print a step-by-step table before the JSON (slider method only).
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct FitBtArgs {
    /// Root system type (B, C or D); the rank is the score count.
    #[arg(long = "type", value_enum, ignore_case = true)]
    kind: KindArg,
    /// Scores: inline "(a,b,...)" or a file with one value per line.
    #[arg(long)]
    scores: String,
    /// Sup-norm residual at which the iteration stops.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct RealizeIntArgs {
    /// Signed graph JSON file.
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
    /// Integer target: inline "(a,b,...)" or a file with one value per line.
    #[arg(long)]
    target: String,
}

#[derive(Args)]
struct BalanceArgs {
    /// Signed graph JSON file.
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
    /// Ignore half-edges when deciding balance.
    #[arg(long)]
    drop_half_edges: bool,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// List the mean scores of all deterministic tournaments on a graph.
    Enumerate {
        /// Signed graph JSON file.
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
    },
    /// Exact LP membership test for a score vector on a graph.
    Member {
        /// Signed graph JSON file.
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        /// Scores: inline "(a,b,...)" or a file with one value per line.
        #[arg(long)]
        scores: String,
    },
}

#[derive(Args)]
struct InfoArgs {
    /// Root system type (B, C or D).
    #[arg(
        long = "type",
        value_enum,
        ignore_case = true,
        requires = "n",
        conflicts_with = "graph"
    )]
    kind: Option<KindArg>,
    /// Rank to pair with --type.
    #[arg(long)]
    n: Option<usize>,
    /// Signed graph JSON file.
    #[arg(long, value_name = "FILE", required_unless_present = "kind")]
    graph: Option<PathBuf>,
    /// Comma-separated 1-based player ids, e.g. "1,3"; prints the
    /// feasibility bound for that subset.
    #[arg(long, requires = "graph")]
    subset: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Infeasible(_) => 1,
                Error::Precondition(_) => 3,
                _ => 2,
            })
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Check(args) => {
            let x = parse_rat_list(&args.scores)?;
            let member = if args.complete {
                let t = RootType::new(args.kind.expect("clap enforces --type").into(), x.len())?;
                is_mean_score_complete(t, &x)?
            } else {
                let g = load_graph(args.graph.as_ref().expect("clap enforces --graph"))?;
                is_mean_score(&g, &x)?
            };
            println!("{}", json!({ "member": member }));
            Ok(bool_exit(member))
        }
        Cmd::Construct(args) => {
            let x = parse_rat_list(&args.scores)?;
            let t = RootType::new(args.kind.into(), x.len())?;
            let mut extra = serde_json::Map::new();
            let tournament = match args.method {
                Method::Hh => {
                    let (tour, traces) = hh_construct_traced(t, &x)?;
                    if args.trace {
                        print_trace(&traces);
                    }
                    tour
                }
                Method::Birkhoff => {
                    let d = birkhoff_decompose(t, &x)?;
                    let terms: Vec<serde_json::Value> = d
                        .terms
                        .iter()
                        .map(|(w, phi)| {
                            json!({
                                "weight": format_rational(w),
                                "images": phi.images(),
                            })
                        })
                        .collect();
                    extra.insert("decomposition".into(), json!(terms));
                    extra.insert("rounds".into(), json!(d.rounds));
                    mixture_tournament(t, &d.terms)?
                }
                Method::Strassen => strassen_construct(t, &x)?,
            };
            print_tournament(&tournament, extra)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::FitBt(args) => {
            let x = parse_rat_list(&args.scores)?;
            let t = RootType::new(args.kind.into(), x.len())?;
            let lambda = bt_fit(&x, t, args.tol)?;
            println!("{}", json!({ "lambda": lambda }));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::RealizeInt(args) => {
            let g = load_graph(&args.graph)?;
            let target = parse_int_list(&args.target)?;
            let tournament = if g.is_balanced(true) {
                realize_deterministic(&g, &target)?
            } else {
                realize_by_search(&g, &target)?
            };
            print_tournament(&tournament, serde_json::Map::new())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Balance(args) => {
            let g = load_graph(&args.graph)?;
            let balanced = g.is_balanced(args.drop_half_edges);
            println!("{}", json!({ "balanced": balanced }));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Oracle(OracleCmd::Enumerate { graph }) => {
            let g = load_graph(&graph)?;
            let scores = enumerate_deterministic_scores(&g, OracleBudget::default())?;
            let rows: Vec<Vec<String>> = scores
                .iter()
                .map(|s| s.iter().map(format_rational).collect())
                .collect();
            println!("{}", json!({ "scores": rows }));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Oracle(OracleCmd::Member { graph, scores }) => {
            let g = load_graph(&graph)?;
            let x = parse_rat_list(&scores)?;
            let member = lp_member(&g, &x, OracleBudget::default())?;
            println!("{}", json!({ "member": member }));
            Ok(bool_exit(member))
        }
        Cmd::Info(args) => {
            let value = if let Some(kind) = args.kind {
                let t = RootType::new(kind.into(), args.n.expect("clap enforces --n"))?;
                let rho: Vec<String> = rho_complete(t)?.iter().map(format_rational).collect();
                json!({
                    "type": t.to_string(),
                    "delta": format_rational(&delta_of(t)?),
                    "rho": rho,
                })
            } else {
                let g = load_graph(args.graph.as_ref().expect("clap enforces --graph"))?;
                let rho: Vec<String> = g.rho_g().iter().map(format_rational).collect();
                let edges: Vec<String> = g.edges().iter().map(|e| e.id()).collect();
                let mut obj = json!({
                    "n": g.n(),
                    "edges": edges,
                    "rho": rho,
                    "balanced": g.is_balanced(false),
                    "balanced_without_half_edges": g.is_balanced(true),
                });
                if let Some(spec) = &args.subset {
                    let subset = parse_subset(spec)?;
                    let h = h_value(&g, &subset)?;
                    obj.as_object_mut()
                        .expect("object literal")
                        .insert("h".into(), json!(format_rational(&h)));
                }
                obj
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("valid JSON")
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn bool_exit(yes: bool) -> ExitCode {
    if yes {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Exhaustive fallback for integer realization on unbalanced graphs, where
/// the rounding argument is unavailable. Only viable on small edge sets.
fn realize_by_search(g: &SignedGraph, target: &[i64]) -> Result<Tournament> {
    if target.len() != g.n() {
        return Err(Error::Invalid(format!(
            "target has length {}, graph has {} players",
            target.len(),
            g.n()
        )));
    }
    let m = g.edge_count();
    if m > 20 {
        return Err(Error::Precondition(format!(
            "graph is unbalanced and has {m} edges; exhaustive search supports at most 20"
        )));
    }
    let cols = g.gamma_columns();
    for mask in 0u64..(1u64 << m) {
        let mut sum = vec![0i64; g.n()];
        for (e, col) in cols.iter().enumerate() {
            if mask & (1 << e) != 0 {
                for (s, c) in sum.iter_mut().zip(col) {
                    *s += c;
                }
            }
        }
        if sum == target {
            let probs: Vec<Rat> = (0..m)
                .map(|e| rat(i64::from(mask & (1 << e) != 0)))
                .collect();
            return Tournament::new(g.clone(), probs);
        }
    }
    Err(Error::Infeasible(
        "no deterministic tournament reaches the target on this unbalanced graph".into(),
    ))
}

fn print_tournament(
    tournament: &Tournament,
    extra: serde_json::Map<String, serde_json::Value>,
) -> Result<()> {
    let mut value = serde_json::to_value(tournament).expect("tournament serializes");
    let obj = value.as_object_mut().expect("tournament is an object");
    let mean: Vec<String> = tournament
        .mean_score()
        .iter()
        .map(format_rational)
        .collect();
    obj.insert("mean_score".into(), json!(mean));
    for (k, v) in extra {
        obj.insert(k, v);
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("valid JSON")
    );
    Ok(())
}

/// One block per peeled player: the extreme player's case, slider data and
/// per-opponent probabilities, opponents listed by descending absolute
/// score.
fn print_trace(traces: &[HhTrace]) {
    for (step_no, tr) in traces.iter().enumerate() {
        println!(
            "step {}: player {} with score {}",
            step_no + 1,
            tr.player,
            format_rational(&tr.score)
        );
        let step = &tr.step;
        match step.kind {
            StepKind::Losing => println!(
                "  negative extreme: loses its solitaire game; target {}, slider {}; columns are win probabilities",
                format_rational(step.target.as_ref().expect("slider case")),
                format_rational(step.gamma_star.as_ref().expect("slider case")),
            ),
            StepKind::Winning => println!(
                "  positive extreme: wins its solitaire game; target {}, slider {}; columns are loss probabilities",
                format_rational(step.target.as_ref().expect("slider case")),
                format_rational(step.gamma_star.as_ref().expect("slider case")),
            ),
            StepKind::Fair => println!("  all remaining scores are zero: every game is a fair coin"),
            StepKind::Solo => println!("  last player: only the solitaire game remains"),
        }
        if !tr.opponents.is_empty() {
            println!(
                "  {:>10} {:>12} {:>14} {:>14}",
                "opponent", "score", "competitive", "cooperative"
            );
            for j in (0..tr.opponents.len()).rev() {
                let score = &step.reduced[j] - &step.minus[j] + &step.plus[j];
                let (comp, coop) = match step.kind {
                    StepKind::Winning => (rat(1) - &step.minus[j], rat(1) - &step.plus[j]),
                    _ => (step.minus[j].clone(), step.plus[j].clone()),
                };
                println!(
                    "  {:>10} {:>12} {:>14} {:>14}",
                    tr.opponents[j],
                    format_rational(&score),
                    format_rational(&comp),
                    format_rational(&coop)
                );
            }
        }
        if let Some(p) = &step.solitaire {
            println!("  solitaire win probability: {}", format_rational(p));
        }
    }
}

fn load_graph(path: &Path) -> Result<SignedGraph> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let g: SignedGraph = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("bad graph JSON in {}: {e}", path.display())))?;
    g.check_valid()?;
    Ok(g)
}

/// Accepts either an inline tuple like `(0, 5/2, -1.5)` or a path to a file
/// with one entry per line (blank lines and `#` comments ignored).
fn read_list_items(spec: &str) -> Result<Vec<String>> {
    let trimmed = spec.trim();
    if let Some(inner) = trimmed.strip_prefix('(') {
        let inner = inner
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unterminated tuple {spec:?}")))?;
        return Ok(inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect());
    }
    let text = fs::read_to_string(trimmed)
        .map_err(|e| Error::Parse(format!("cannot read {trimmed}: {e}")))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn parse_rat_list(spec: &str) -> Result<Vec<Rat>> {
    read_list_items(spec)?
        .iter()
        .map(|s| parse_rational(s))
        .collect()
}

fn parse_int_list(spec: &str) -> Result<Vec<i64>> {
    read_list_items(spec)?
        .iter()
        .map(|s| {
            s.parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
        })
        .collect()
}

fn parse_subset(spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad player id {s:?}")))
        })
        .collect()
}
