//! Proximal benchmark: `min_w ½‖w‖² + f(w)` through its dual
//! `max_{s∈B(F)} -½‖s‖²`, comparing naive and isotonic primal candidates.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use subq::prox::improve_primal_isotonic;
use subq::sfm::{base_iterates, BaseSolver, CgRule};
use subq::{lovasz, Oracle};

use crate::output::{fmt_f64, write_atomic};
use crate::sfm::BenchConfig;
use crate::suites::Instance;

/// Solvers compared on the proximal problem.
pub const PROX_SOLVERS: [(&str, BaseSolver); 3] = [
    ("mnp", BaseSolver::MinNormPoint),
    ("cg-ls", BaseSolver::ConditionalGradient(CgRule::LineSearch)),
    ("cg-fixed", BaseSolver::ConditionalGradient(CgRule::FixedTwoOverT)),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProxRow {
    pub iter: usize,
    pub oracle_calls: u64,
    /// `-½‖s‖²`.
    pub dual: f64,
    /// Gap of `w = -s`: `f(-s) + ‖s‖²`.
    pub naive_gap: f64,
    /// Gap of the isotonic correction of `-s`.
    pub pava_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxSolverReport {
    pub solver: String,
    pub iterations: usize,
    pub oracle_calls: u64,
    /// `-½‖s‖²` of the last iterate.
    pub final_dual: f64,
    pub final_naive_gap: f64,
    pub final_pava_gap: f64,
    /// Corrected gap at most the naive one on every recorded row.
    pub pava_dominates: bool,
    #[serde(skip)]
    pub rows: Vec<ProxRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxInstanceReport {
    pub name: String,
    pub p: usize,
    pub max_iters: usize,
    pub solvers: Vec<ProxSolverReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxReport {
    pub seed: u64,
    pub instances: Vec<ProxInstanceReport>,
}

/// Iterations at which gaps are evaluated: the first 20, then about 100
/// evenly spaced ones.
fn recorded(t: usize, max_iters: usize) -> bool {
    t <= 20 || t % (max_iters / 100).max(1) == 0
}

fn gaps(eval: &Oracle, s: &[f64]) -> anyhow::Result<(f64, f64, f64)> {
    let norm2: f64 = s.iter().map(|v| v * v).sum();
    let neg: Vec<f64> = s.iter().map(|v| -v).collect();
    let naive = lovasz(eval, &neg)? + norm2;
    let (_, pava_gap) = improve_primal_isotonic(eval, s)?;
    Ok((-0.5 * norm2, naive, pava_gap))
}

fn run_one(inst: &Instance, name: &str, solver: BaseSolver, max_iters: usize) -> anyhow::Result<ProxSolverReport> {
    let f = inst.oracle()?;
    let eval = inst.oracle()?;
    let mut rows = Vec::new();
    let mut last: Option<(usize, u64, Vec<f64>)> = None;
    let mut err = None;
    let mut t = 0;
    base_iterates(&f, solver, max_iters, &mut |s| {
        t += 1;
        let calls = f.calls();
        if recorded(t, max_iters) {
            match gaps(&eval, s) {
                Ok((dual, naive_gap, pava_gap)) => {
                    rows.push(ProxRow { iter: t, oracle_calls: calls, dual, naive_gap, pava_gap });
                    last = None;
                }
                Err(e) => err = Some(e),
            }
        } else {
            last = Some((t, calls, s.to_vec()));
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    if let Some((iter, oracle_calls, s)) = last {
        let (dual, naive_gap, pava_gap) = gaps(&eval, &s)?;
        rows.push(ProxRow { iter, oracle_calls, dual, naive_gap, pava_gap });
    }
    let end = rows.last().copied().ok_or_else(|| anyhow::anyhow!("{}: solver produced no iterate", inst.name))?;
    Ok(ProxSolverReport {
        solver: name.to_string(),
        iterations: end.iter,
        oracle_calls: end.oracle_calls,
        final_dual: end.dual,
        final_naive_gap: end.naive_gap,
        final_pava_gap: end.pava_gap,
        pava_dominates: rows.iter().all(|r| r.pava_gap <= r.naive_gap + 1e-12 * (1.0 + r.naive_gap.abs())),
        rows,
    })
}

pub fn prox_trace_csv(rows: &[ProxRow]) -> String {
    let mut out = String::from("iter,oracle_calls,dual,naive_gap,pava_gap\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.iter,
            r.oracle_calls,
            fmt_f64(r.dual),
            fmt_f64(r.naive_gap),
            fmt_f64(r.pava_gap)
        ));
    }
    out
}

pub fn run_prox_bench_on(instances: &[Instance], cfg: &BenchConfig) -> anyhow::Result<ProxReport> {
    let jobs: Vec<(usize, usize)> = (0..instances.len()).flat_map(|i| (0..PROX_SOLVERS.len()).map(move |j| (i, j))).collect();
    let mut results = jobs
        .par_iter()
        .map(|&(i, j)| run_one(&instances[i], PROX_SOLVERS[j].0, PROX_SOLVERS[j].1, cfg.prox_iters(&instances[i])))
        .collect::<anyhow::Result<Vec<_>>>()?
        .into_iter();
    let report = ProxReport {
        seed: cfg.seed,
        instances: instances
            .iter()
            .map(|inst| ProxInstanceReport {
                name: inst.name.clone(),
                p: inst.p,
                max_iters: cfg.prox_iters(inst),
                solvers: results.by_ref().take(PROX_SOLVERS.len()).collect(),
            })
            .collect(),
    };
    if let Some(dir) = &cfg.out {
        write_prox(dir, &report)?;
    }
    Ok(report)
}

fn write_prox(dir: &Path, report: &ProxReport) -> anyhow::Result<()> {
    for inst in &report.instances {
        for s in &inst.solvers {
            let path = dir.join(format!("prox_{}_{}.csv", inst.name, s.solver));
            write_atomic(&path, prox_trace_csv(&s.rows).as_bytes())?;
        }
    }
    write_atomic(&dir.join("prox_summary.json"), serde_json::to_string_pretty(report)?.as_bytes())?;
    Ok(())
}

/// Runs the three base-polytope solvers on every configured instance.
pub fn run_prox_bench(cfg: &BenchConfig) -> anyhow::Result<ProxReport> {
    cfg.validate()?;
    run_prox_bench_on(&cfg.prox_instances()?, cfg)
}
