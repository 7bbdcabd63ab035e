use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use subq::graph::io::{parse_constraints, parse_edge_list, parse_vector, write_vector};
use subq::graph::{max_flow, StNetwork};
use subq::maxds::{ds_minimize, greedy_max_cardinality, local_search_max};
use subq::prox::{divide_and_conquer, isotonic_general, prox_quadratic_mnp, SeparableProblem};
use subq::sfm::{minimize, Algorithm, AutoSolver, Budget};
use subq::zoo::FunctionSpec;
use subq::{Oracle, Subset};
use subq_bench::output::write_atomic;
use subq_bench::prox::run_prox_bench;
use subq_bench::sfm::trace_csv;
use subq_bench::{instance, run_sfm_bench, BenchConfig, Solver, Suite};

#[derive(Parser)]
#[command(name = "subq", version, about = "Submodular minimization, proximal and maximization tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sfm,
    Prox,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProxSolver {
    Dnc,
    Mnp,
}

#[derive(Clone, Copy, ValueEnum)]
enum MaxAlgo {
    Greedy,
    Lazy,
    Local,
}

#[derive(Subcommand)]
enum Command {
    /// Solver comparison on generated instance suites.
    Bench {
        /// Comma-separated suites or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated solvers (mnp, sg, sg-polyak, cg-ls, cg-fixed) or `all`.
        #[arg(long, default_value = "all")]
        solvers: String,
        /// Oracle calls per run; defaults to `sweeps · p`.
        #[arg(long)]
        max_oracle: Option<u64>,
        /// Greedy sweeps per run; each suite has its own default.
        #[arg(long)]
        sweeps: Option<u64>,
        /// Iterations per proximal run; each suite has its own default.
        #[arg(long)]
        prox_iters: Option<usize>,
        #[arg(long, value_enum, default_value = "sfm")]
        mode: Mode,
        /// Record wall-clock time in traces.
        #[arg(long)]
        wall_time: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Writes the function spec of a suite instance.
    Generate {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimizes a function given as a JSON spec.
    Minimize {
        #[arg(long)]
        f: PathBuf,
        /// auto, brute_force, mnp, subgradient, subgradient_polyak, condgrad, condgrad_fixed, ellipsoid.
        #[arg(long, default_value = "auto")]
        algo: String,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
        #[arg(long)]
        max_oracle: Option<u64>,
        #[arg(long, default_value_t = 1e-10)]
        gap_tol: f64,
        /// Writes the solver trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Proximal operator `argmin_w f(w) + ½‖w - z‖²`.
    Prox {
        #[arg(long)]
        f: PathBuf,
        /// One value per line; zero when omitted.
        #[arg(long)]
        z: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dnc")]
        solver: ProxSolver,
        /// Directory receiving `w.csv`, `s.csv` and `report.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Projection onto `{w : w_i >= w_j}` for the listed pairs.
    Isotonic {
        #[arg(long)]
        z: PathBuf,
        /// Lines `i j` (1-based) meaning `w_i >= w_j`.
        #[arg(long)]
        constraints: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cardinality-constrained maximization.
    Maximize {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "greedy")]
        algo: MaxAlgo,
        /// Start set for local search, comma-separated 1-based indices.
        #[arg(long, default_value = "")]
        start: String,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
    },
    /// Minimizes `F - G` for submodular `F` and `G`.
    DsMin {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value = "")]
        start: String,
        #[arg(long, default_value_t = 1000)]
        max_rounds: usize,
    },
    /// Maximum flow on an edge-list network.
    Maxflow {
        #[arg(long)]
        edges: PathBuf,
        /// 1-based source vertex.
        #[arg(long)]
        source: usize,
        /// 1-based sink vertex.
        #[arg(long)]
        sink: usize,
    },
}

fn load(path: &Path) -> Result<Oracle> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = FunctionSpec::from_json(&text)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    Ok(spec.build(dir, Some(Arc::new(AutoSolver)))?)
}

fn read_vector(path: &Path) -> Result<Vec<f64>> {
    Ok(parse_vector(&std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)?)
}

fn one_based(set: &Subset) -> Vec<usize> {
    set.iter().map(|k| k + 1).collect()
}

fn print(v: serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Bench { suite, seed, solvers, max_oracle, sweeps, prox_iters, mode, wall_time, out } => {
            let cfg = BenchConfig {
                suites: Suite::parse_list(&suite).map_err(anyhow::Error::msg)?,
                seed,
                solvers: Solver::parse_list(&solvers).map_err(anyhow::Error::msg)?,
                max_oracle_calls: max_oracle,
                sweeps,
                prox_iters,
                wall_time,
                out: Some(out.clone()),
            };
            if matches!(mode, Mode::Sfm | Mode::Both) {
                let report = run_sfm_bench(&cfg)?;
                for inst in &report.instances {
                    for s in &inst.solvers {
                        println!(
                            "{:<18} {:<9} calls={:<9} gap={:.3e} opt={:.10} ({})",
                            inst.name, s.solver, s.oracle_calls, s.final_gap, inst.opt, inst.opt_provenance
                        );
                    }
                }
            }
            if matches!(mode, Mode::Prox | Mode::Both) {
                let report = run_prox_bench(&cfg)?;
                for inst in &report.instances {
                    for s in &inst.solvers {
                        println!(
                            "{:<18} {:<9} iters={:<6} naive={:.3e} pava={:.3e}",
                            inst.name, s.solver, s.iterations, s.final_naive_gap, s.final_pava_gap
                        );
                    }
                }
            }
            eprintln!("results written to {}", out.display());
        }
        Command::Generate { suite, seed, out } => {
            let json = instance(suite, seed)?.spec.to_json();
            match out {
                Some(path) => write_atomic(&path, json.as_bytes())?,
                None => println!("{json}"),
            }
        }
        Command::Minimize { f, algo, max_iters, max_oracle, gap_tol, trace } => {
            let f = load(&f)?;
            let algo = Algorithm::parse(&algo)?;
            let budget = Budget { max_iters, max_oracle_calls: max_oracle, gap_tol, record_wall_time: true };
            let r = minimize(&f, &algo, &budget)?;
            if let Some(path) = trace {
                write_atomic(&path, trace_csv(&r.trace, r.min_value).as_bytes())?;
            }
            print(json!({
                "algorithm": r.algorithm,
                "minimizer": one_based(&r.minimizer),
                "min_value": r.min_value,
                "dual_value": r.dual_value(),
                "gap": r.gap,
                "iterations": r.iterations,
                "converged": r.converged,
                "oracle_calls": f.calls(),
            }))?;
        }
        Command::Prox { f, z, solver, out } => {
            let f = load(&f)?;
            let z = match z {
                Some(path) => read_vector(&path)?,
                None => vec![0.0; f.len()],
            };
            if z.len() != f.len() {
                bail!("z has {} entries but the function has {} elements", z.len(), f.len());
            }
            let r = match solver {
                ProxSolver::Dnc => divide_and_conquer(&f, &SeparableProblem::quadratic(z), &AutoSolver)?,
                ProxSolver::Mnp => prox_quadratic_mnp(&f, &z)?,
            };
            write_atomic(&out.join("w.csv"), write_vector(&r.w).as_bytes())?;
            write_atomic(&out.join("s.csv"), write_vector(&r.s).as_bytes())?;
            let report = json!({"gap": r.gap, "depth": r.depth, "oracle_calls": f.calls()});
            write_atomic(&out.join("report.json"), serde_json::to_string_pretty(&report)?.as_bytes())?;
            print(report)?;
        }
        Command::Isotonic { z, constraints, out } => {
            let z = read_vector(&z)?;
            let text = std::fs::read_to_string(&constraints)?;
            let cons = parse_constraints(&text, z.len())?;
            let w = isotonic_general(&z, &cons, &AutoSolver)?;
            match out {
                Some(path) => write_atomic(&path, write_vector(&w).as_bytes())?,
                None => print!("{}", write_vector(&w)),
            }
        }
        Command::Maximize { f, k, algo, start, max_steps } => {
            let f = load(&f)?;
            let r = match algo {
                MaxAlgo::Greedy => greedy_max_cardinality(&f, k, false)?,
                MaxAlgo::Lazy => greedy_max_cardinality(&f, k, true)?,
                MaxAlgo::Local => local_search_max(&f, &Subset::parse_one_based(f.len(), &start)?, max_steps)?,
            };
            print(json!({
                "chosen": one_based(&r.chosen),
                "value": r.value,
                "trace": r.trace.iter().map(|&(k, v)| json!([k + 1, v])).collect::<Vec<_>>(),
                "converged": r.converged,
                "oracle_calls": f.calls(),
            }))?;
        }
        Command::DsMin { f, g, start, max_rounds } => {
            let (f, g) = (load(&f)?, load(&g)?);
            if f.len() != g.len() {
                bail!("F and G have different ground sets ({} and {})", f.len(), g.len());
            }
            let start = Subset::parse_one_based(f.len(), &start)?;
            let r = ds_minimize(&f, &g, &start, &AutoSolver, max_rounds)?;
            print(json!({
                "set": one_based(&r.set),
                "value": r.value,
                "trace": r.trace,
                "rounds": r.rounds,
                "converged": r.converged,
            }))?;
        }
        Command::Maxflow { edges, source, sink } => {
            let g = parse_edge_list(&std::fs::read_to_string(&edges)?)?;
            if source == 0 || sink == 0 || source > g.n || sink > g.n || source == sink {
                bail!("source and sink must be distinct vertices in 1..={}", g.n);
            }
            let mut net = StNetwork::new(g.n, source - 1, sink - 1);
            for (u, v, c) in g.directed_arcs() {
                net.add_arc(u, v, c);
            }
            let r = max_flow(&net);
            print(json!({
                "value": r.value,
                "source_side": one_based(&r.minimal_source_side),
                "maximal_source_side": one_based(&r.maximal_source_side),
            }))?;
        }
    }
    Ok(())
}
