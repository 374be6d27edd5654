//! Command-line front end. Every subcommand prints one JSON document with
//! `"schema": "greenscan/1"` on stdout. Exit codes: 0 success, 1 usage or
//! input error, 2 refusal (NOT_DISCRETE, BOUND_EXHAUSTED, NOT_GREEN_PATH),
//! 3 cross-check disagreement.

use clap::{Args, Parser, Subcommand};
use greenscan::algebra::{parse_algebra, Algebra};
use greenscan::chamber::{
    chamber_of, markov_witness, mgs_from_path, path_from_mgs, validate_path, wall_certificate,
    Cone, GreenPath,
};
use greenscan::linalg::{rat, rat_from_str, Rat};
use greenscan::render::render_fan_svg;
use greenscan::repcat::{decompose, parse_module, Representation};
use greenscan::report as rpt;
use greenscan::stability::{
    hn_filtration, semistable_category_probe, theta_classify, CentralCharge, Refusal,
    StabilitySpec,
};
use greenscan::tautilt::{enumerate_indecomposables, enumerate_mgs, exchange_graph, Budget};
use serde_json::{json, Value};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "greenscan", version, about = "exact stability and tau-tilting scans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct AlgebraArg {
    /// Algebra description file.
    #[arg(long)]
    algebra: String,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Total-dimension bound for indecomposable enumeration.
    #[arg(long, default_value_t = 6)]
    dim_bound: usize,
    /// Node cap for exchange-graph walks.
    #[arg(long, default_value_t = 10_000)]
    node_cap: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget { dim_bound: self.dim_bound, node_cap: self.node_cap, ..Budget::default() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse an algebra, validate modules, and decompose them. With
    /// --probe, cross-check the two descriptions of each chamber's
    /// semistables.
    Check {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Module files to validate and decompose.
        modules: Vec<String>,
        #[arg(long)]
        probe: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Harder-Narasimhan filtration of a module.
    Hn {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        module: String,
        /// Slope weights, comma separated rationals ("1,-1").
        #[arg(long, conflicts_with = "charge")]
        theta: Option<String>,
        /// Central charge "a1,a2,..;b1,b2,.." with all b positive.
        #[arg(long)]
        charge: Option<String>,
    },
    /// Enumerate support pairs reachable from the free pair.
    TauPairs {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// The oriented exchange graph, optionally as Graphviz DOT.
    ExchangeGraph {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write DOT to this file.
        #[arg(long)]
        dot: Option<String>,
    },
    /// Enumerate maximal green sequences.
    Mgs {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 64)]
        max_len: usize,
    },
    /// Certify the wall of every exchange-graph edge.
    Walls {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Validate a piecewise-linear path ("1,1;-2,-1") and extract its green
    /// sequence, or realize the --realize'th enumerated sequence as a path.
    Path {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, conflicts_with = "realize")]
        points: Option<String>,
        #[arg(long)]
        realize: Option<usize>,
        #[arg(long, default_value_t = 64)]
        max_len: usize,
    },
    /// Scan for the cyclic-double-arrow obstruction to green sequences.
    Markov {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Render the known wall-and-chamber fan as SVG.
    Render {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Output SVG file.
        #[arg(long)]
        out: String,
    },
}

enum Failure {
    Input(String),
    Refused(Refusal),
    Disagreement(Value),
}

impl From<Refusal> for Failure {
    fn from(r: Refusal) -> Self {
        Failure::Refused(r)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(doc) => {
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Refused(r)) => {
            let doc = rpt::document("refusal", rpt::refusal_json(&r));
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            ExitCode::from(2)
        }
        Err(Failure::Disagreement(doc)) => {
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            ExitCode::from(3)
        }
    }
}

fn load_algebra(arg: &AlgebraArg) -> Result<Arc<Algebra>, Failure> {
    let text = std::fs::read_to_string(&arg.algebra)
        .map_err(|e| Failure::Input(format!("{}: {e}", arg.algebra)))?;
    parse_algebra(&text)
        .map(Arc::new)
        .map_err(|e| Failure::Input(format!("{}: {e}", arg.algebra)))
}

fn load_module(path: &str, alg: &Arc<Algebra>) -> Result<Representation, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    parse_module(&text, alg).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn parse_rats(s: &str, n: usize, what: &str) -> Result<Vec<Rat>, Failure> {
    let vals: Option<Vec<Rat>> = s.split(',').map(|t| rat_from_str(t.trim())).collect();
    let vals = vals.ok_or_else(|| Failure::Input(format!("cannot parse {what}: {s:?}")))?;
    if vals.len() != n {
        return Err(Failure::Input(format!("{what} needs {n} entries, got {}", vals.len())));
    }
    Ok(vals)
}

fn threads() -> usize {
    std::env::var("GREENSCAN_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

fn run(cmd: Command) -> Result<Value, Failure> {
    match cmd {
        Command::Check { algebra, modules, probe, budget } => {
            let alg = load_algebra(&algebra)?;
            let mut body = json!({
                "algebra": alg.name,
                "vertices": alg.quiver.vertices,
                "arrows": alg.quiver.arrows.len(),
                "total_dim": alg.total_dim,
            });
            if !modules.is_empty() {
                let reps: Vec<Representation> = modules
                    .iter()
                    .map(|m| load_module(m, &alg))
                    .collect::<Result<_, _>>()?;
                let decs = map_parallel(&reps, threads(), |r| decompose(r));
                let entries: Vec<Value> = modules
                    .iter()
                    .zip(reps.iter().zip(&decs))
                    .map(|(path, (rep, dec))| {
                        json!({
                            "file": path,
                            "module": rpt::module_json(rep),
                            "decomposition": rpt::decomposition_json(dec),
                        })
                    })
                    .collect();
                body["modules"] = Value::Array(entries);
            }
            if probe {
                let report = run_probe(&alg, &budget.budget())?;
                let agreed = report["agreed"] == json!(true);
                body["probe"] = report;
                if !agreed {
                    return Err(Failure::Disagreement(rpt::document("check", body)));
                }
            }
            Ok(rpt::document("check", body))
        }
        Command::Hn { algebra, module, theta, charge } => {
            let alg = load_algebra(&algebra)?;
            let m = load_module(&module, &alg)?;
            let n = alg.n();
            let spec = match (theta, charge) {
                (Some(t), None) => StabilitySpec::Slope(parse_rats(&t, n, "--theta")?),
                (None, Some(c)) => {
                    let (a, b) = c.split_once(';').ok_or_else(|| {
                        Failure::Input("--charge needs the form \"a1,..;b1,..\"".into())
                    })?;
                    StabilitySpec::Charge(CentralCharge {
                        a: parse_rats(a, n, "--charge real part")?,
                        b: parse_rats(b, n, "--charge imaginary part")?,
                    })
                }
                _ => return Err(Failure::Input("exactly one of --theta/--charge required".into())),
            };
            let hn = hn_filtration(&spec, &m);
            Ok(rpt::document(
                "hn",
                json!({"module": rpt::module_json(&m), "filtration": rpt::hn_json(&hn)}),
            ))
        }
        Command::TauPairs { algebra, budget } => {
            let alg = load_algebra(&algebra)?;
            let g = exchange_graph(&alg, &budget.budget());
            let n = alg.n();
            Ok(rpt::document(
                "tau-pairs",
                json!({
                    "complete": g.complete,
                    "pairs": g.nodes.iter().map(|p| rpt::pair_json(p, n)).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::ExchangeGraph { algebra, budget, dot } => {
            let alg = load_algebra(&algebra)?;
            let g = exchange_graph(&alg, &budget.budget());
            if let Some(path) = dot {
                std::fs::write(&path, g.to_dot(&alg))
                    .map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            }
            Ok(rpt::document("exchange-graph", rpt::graph_json(&g, alg.n())))
        }
        Command::Mgs { algebra, budget, max_len } => {
            let alg = load_algebra(&algebra)?;
            let g = exchange_graph(&alg, &budget.budget());
            let chains = enumerate_mgs(&g, &alg, max_len)?;
            Ok(rpt::document(
                "mgs",
                json!({
                    "count": chains.len(),
                    "chains": chains.iter().map(|c| json!({
                        "length": c.edges.len(),
                        "bricks": c.edges.iter()
                            .map(|&e| g.edges[e].brick.dim_vector())
                            .collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Walls { algebra, budget } => {
            let alg = load_algebra(&algebra)?;
            let g = exchange_graph(&alg, &budget.budget());
            let idx: Vec<usize> = (0..g.edges.len()).collect();
            let walls = map_parallel(&idx, threads(), |&e| wall_certificate(&g, e, &alg));
            Ok(rpt::document(
                "walls",
                json!({
                    "complete": g.complete,
                    "walls": walls.iter().map(rpt::wall_json).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Path { algebra, budget, points, realize, max_len } => {
            let alg = load_algebra(&algebra)?;
            let g = exchange_graph(&alg, &budget.budget());
            let n = alg.n();
            match (points, realize) {
                (Some(pts), None) => {
                    let breakpoints: Vec<Vec<Rat>> = pts
                        .split(';')
                        .map(|p| parse_rats(p, n, "--points breakpoint"))
                        .collect::<Result<_, _>>()?;
                    let path = GreenPath { points: breakpoints };
                    validate_path(&path, &g)?;
                    let chain = mgs_from_path(&path, &g, &alg)?;
                    Ok(rpt::document(
                        "path",
                        json!({
                            "path": rpt::path_json(&path),
                            "chain": rpt::chain_json(&chain),
                            "bricks": chain.edges.iter()
                                .map(|&e| g.edges[e].brick.dim_vector())
                                .collect::<Vec<_>>(),
                        }),
                    ))
                }
                (None, Some(k)) => {
                    let chains = enumerate_mgs(&g, &alg, max_len)?;
                    let chain = chains.get(k).ok_or_else(|| {
                        Failure::Input(format!(
                            "--realize {k} out of range; {} sequences found",
                            chains.len()
                        ))
                    })?;
                    let path = path_from_mgs(chain, &g, &alg)?;
                    Ok(rpt::document(
                        "path",
                        json!({
                            "path": rpt::path_json(&path),
                            "chain": rpt::chain_json(chain),
                        }),
                    ))
                }
                _ => Err(Failure::Input("exactly one of --points/--realize required".into())),
            }
        }
        Command::Markov { algebra, budget } => {
            let alg = load_algebra(&algebra)?;
            let g = exchange_graph(&alg, &budget.budget());
            let body = match markov_witness(&alg, &g) {
                Some(w) => {
                    let mut b = rpt::markov_json(&w);
                    b["detected"] = json!(true);
                    b
                }
                None => json!({"detected": false, "graph_nodes": g.nodes.len()}),
            };
            Ok(rpt::document("markov", body))
        }
        Command::Render { algebra, budget, out } => {
            let alg = load_algebra(&algebra)?;
            let g = exchange_graph(&alg, &budget.budget());
            let svg = render_fan_svg(&g, &alg).map_err(Failure::Input)?;
            std::fs::write(&out, &svg).map_err(|e| Failure::Input(format!("{out}: {e}")))?;
            Ok(rpt::document(
                "render",
                json!({"out": out, "bytes": svg.len(), "complete": g.complete}),
            ))
        }
    }
}

/// Cross-check theta-semistability against hom-orthogonality at the
/// barycenter of every known chamber.
fn run_probe(alg: &Arc<Algebra>, budget: &Budget) -> Result<Value, Failure> {
    let universe = enumerate_indecomposables(alg, budget);
    let g = exchange_graph(alg, budget);
    let n = alg.n();
    let mut agreed = true;
    let mut per_chamber = Vec::new();
    for pair in &g.nodes {
        let rays = Cone::of_pair(pair, n).rays;
        let bary: Vec<Rat> =
            (0..n).map(|i| rays.iter().map(|r| rat(r[i])).sum::<Rat>()).collect();
        debug_assert!(chamber_of(&bary, &g, n).is_some());
        let report =
            semistable_category_probe(&bary, &pair.modules, &pair.proj_vertices, &universe.indecs);
        agreed &= report.agreed;
        per_chamber.push(json!({
            "pair": rpt::pair_json(pair, n),
            "probe": rpt::probe_json(&report),
        }));
    }
    // independent spot check: every wall brick is semistable on its wall
    for e in 0..g.edges.len() {
        let w = wall_certificate(&g, e, alg);
        for s in &w.samples {
            let cls = theta_classify(s, &g.edges[e].brick);
            agreed &= cls.status != greenscan::stability::ThetaStatus::Unstable;
        }
    }
    Ok(json!({
        "agreed": agreed,
        "universe_complete": universe.complete,
        "chambers": per_chamber,
    }))
}

/// Apply `f` across `items`, splitting into chunks when GREENSCAN_THREADS
/// asks for more than one worker.
fn map_parallel<T: Sync, U: Send>(items: &[T], workers: usize, f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let mut out: Vec<Option<U>> = Vec::new();
    out.resize_with(items.len(), || None);
    let f = &f;
    std::thread::scope(|scope| {
        for (slot, part) in out.chunks_mut(chunk).zip(items.chunks(chunk)) {
            scope.spawn(move || {
                for (o, i) in slot.iter_mut().zip(part) {
                    *o = Some(f(i));
                }
            });
        }
    });
    out.into_iter().map(|x| x.unwrap()).collect()
}
