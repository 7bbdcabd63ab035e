//! Minimization benchmark: every solver on every instance under the same
//! oracle-call budget.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use subq::sfm::{minimize, Algorithm, Budget, CgRule, SolveTrace, StepRule, TRACE_HEADER};

use crate::output::{fmt_f64, threshold_label, write_atomic, GAP_THRESHOLDS};
use crate::suites::{instance, prox_instance, Instance, Suite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Mnp,
    /// Subgradient with step `∝ 1/√t`.
    Sg,
    SgPolyak,
    CgLs,
    /// Conditional gradient with step `2/(t+1)`.
    CgFixed,
}

impl Solver {
    pub const ALL: [Solver; 5] = [Solver::Mnp, Solver::Sg, Solver::SgPolyak, Solver::CgLs, Solver::CgFixed];

    pub fn name(self) -> &'static str {
        match self {
            Solver::Mnp => "mnp",
            Solver::Sg => "sg",
            Solver::SgPolyak => "sg-polyak",
            Solver::CgLs => "cg-ls",
            Solver::CgFixed => "cg-fixed",
        }
    }

    pub fn algorithm(self) -> Algorithm {
        match self {
            Solver::Mnp => Algorithm::MinNormPoint { tol: subq::sfm::MNP_DEFAULT_TOL },
            Solver::Sg => Algorithm::Subgradient { rule: StepRule::FixedSqrt },
            Solver::SgPolyak => Algorithm::Subgradient { rule: StepRule::Polyak },
            Solver::CgLs => Algorithm::ConditionalGradient { rule: CgRule::LineSearch },
            Solver::CgFixed => Algorithm::ConditionalGradient { rule: CgRule::FixedTwoOverT },
        }
    }

    pub fn parse_list(text: &str) -> Result<Vec<Solver>, String> {
        if text.trim() == "all" {
            return Ok(Solver::ALL.to_vec());
        }
        text.split(',').filter(|s| !s.trim().is_empty()).map(|s| s.trim().parse()).collect()
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solver {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "mnp" => Solver::Mnp,
            "sg" | "subgradient" => Solver::Sg,
            "sg-polyak" | "subgradient_polyak" => Solver::SgPolyak,
            "cg-ls" | "cg" | "condgrad" => Solver::CgLs,
            "cg-fixed" | "condgrad_fixed" => Solver::CgFixed,
            _ => return Err(format!("unknown solver `{s}` (expected mnp, sg, sg-polyak, cg-ls, cg-fixed)")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub solvers: Vec<Solver>,
    /// Oracle calls per solver run; `None` means `sweeps · p`.
    pub max_oracle_calls: Option<u64>,
    /// Greedy sweeps per run when `max_oracle_calls` is unset; `None` uses
    /// [`Suite::default_sweeps`].
    pub sweeps: Option<u64>,
    /// Iteration cap of the proximal benchmark; `None` uses
    /// [`Suite::default_prox_iters`].
    pub prox_iters: Option<usize>,
    /// Record wall-clock milliseconds in traces (makes them non-reproducible).
    pub wall_time: bool,
    pub out: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            suites: Suite::ALL.to_vec(),
            seed: 0,
            solvers: Solver::ALL.to_vec(),
            max_oracle_calls: None,
            sweeps: None,
            prox_iters: None,
            wall_time: false,
            out: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        anyhow::ensure!(!self.solvers.is_empty(), "at least one solver is required");
        anyhow::ensure!(!self.suites.is_empty(), "at least one suite is required");
        anyhow::ensure!(self.max_oracle_calls != Some(0), "oracle budget must be positive");
        anyhow::ensure!(self.sweeps != Some(0) && self.prox_iters != Some(0), "budgets must be positive");
        Ok(())
    }

    pub fn oracle_budget(&self, inst: &Instance) -> u64 {
        self.max_oracle_calls.unwrap_or(self.sweeps.unwrap_or(inst.suite.default_sweeps()) * inst.p as u64)
    }

    pub fn prox_iters(&self, inst: &Instance) -> usize {
        self.prox_iters.unwrap_or(inst.suite.default_prox_iters())
    }

    pub fn instances(&self) -> anyhow::Result<Vec<Instance>> {
        Ok(self.suites.iter().map(|&s| instance(s, self.seed)).collect::<subq::Result<Vec<_>>>()?)
    }

    pub fn prox_instances(&self) -> anyhow::Result<Vec<Instance>> {
        Ok(self.suites.iter().map(|&s| prox_instance(s, self.seed)).collect::<subq::Result<Vec<_>>>()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub solver: Solver,
    pub iterations: usize,
    pub oracle_calls: u64,
    pub converged: bool,
    pub final_primal: f64,
    pub final_dual: f64,
    pub final_gap: f64,
    /// `F(B) - Opt` and `Opt - s₋(V)` at the end of the run.
    pub primal_subopt: f64,
    pub dual_subopt: f64,
    /// Oracle calls until the certified gap first dropped below each threshold.
    pub calls_to_gap: BTreeMap<String, Option<u64>>,
    /// Best primal and dual values bracket `Opt` within 1e-9 (relative).
    pub opt_consistent: bool,
    pub monotone: bool,
    #[serde(skip)]
    pub trace: SolveTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub name: String,
    pub suite: Suite,
    pub p: usize,
    pub opt: f64,
    /// Solver that produced `opt`: `min_cut`, `brute_force` or `mnp`.
    pub opt_provenance: String,
    pub opt_gap: f64,
    pub oracle_budget: u64,
    pub solvers: Vec<SolverReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SfmReport {
    pub seed: u64,
    pub thresholds: Vec<f64>,
    pub instances: Vec<InstanceReport>,
}

fn reference_optimum(inst: &Instance) -> anyhow::Result<(f64, String, f64)> {
    let f = inst.oracle()?;
    let budget = Budget { max_iters: 1_000_000, gap_tol: 1e-12, record_wall_time: false, ..Budget::default() };
    let r = minimize(&f, &Algorithm::Auto, &budget)?;
    Ok((r.min_value, r.algorithm, r.gap))
}

fn run_one(inst: &Instance, solver: Solver, opt: f64, cfg: &BenchConfig) -> anyhow::Result<SolverReport> {
    let f = inst.oracle()?;
    let budget = Budget {
        max_iters: usize::MAX,
        max_oracle_calls: Some(cfg.oracle_budget(inst)),
        gap_tol: 1e-10,
        record_wall_time: cfg.wall_time,
    };
    let r = minimize(&f, &solver.algorithm(), &budget)?;
    let last = *r.trace.last().expect("solvers record at least one row");
    let tol = 1e-9 * (1.0 + opt.abs());
    let calls_to_gap = GAP_THRESHOLDS
        .iter()
        .map(|&eps| (threshold_label(eps), r.trace.first_below(eps).map(|row| row.oracle_calls)))
        .collect();
    Ok(SolverReport {
        solver,
        iterations: r.iterations,
        oracle_calls: last.oracle_calls,
        converged: r.converged,
        final_primal: last.primal_best,
        final_dual: last.dual_best,
        final_gap: last.gap,
        primal_subopt: last.primal_best - opt,
        dual_subopt: opt - last.dual_best,
        calls_to_gap,
        opt_consistent: r.trace.rows.iter().all(|row| row.primal_best >= opt - tol && row.dual_best <= opt + tol),
        monotone: r.trace.is_monotone(),
        trace: r.trace,
    })
}

/// Trace CSV with suboptimality columns relative to `opt`.
pub fn trace_csv(trace: &SolveTrace, opt: f64) -> String {
    let mut out = format!("{TRACE_HEADER},primal_subopt,dual_subopt\n");
    for r in &trace.rows {
        out.push_str(&format!(
            "{},{},{:.3},{},{},{},{},{}\n",
            r.iter,
            r.oracle_calls,
            r.wall_ms,
            fmt_f64(r.primal_best),
            fmt_f64(r.dual_best),
            fmt_f64(r.gap),
            fmt_f64(r.primal_best - opt),
            fmt_f64(opt - r.dual_best)
        ));
    }
    out
}

/// Runs every configured solver on every instance. With `cfg.out` set,
/// writes `trace_<instance>_<solver>.csv`, `summary.json` and
/// `instances/<instance>.json`.
pub fn run_sfm_bench(cfg: &BenchConfig) -> anyhow::Result<SfmReport> {
    cfg.validate()?;
    let instances = cfg.instances()?;
    let opts = instances.par_iter().map(reference_optimum).collect::<anyhow::Result<Vec<_>>>()?;
    let jobs: Vec<(usize, Solver)> =
        (0..instances.len()).flat_map(|i| cfg.solvers.iter().map(move |&s| (i, s))).collect();
    let mut results = jobs
        .par_iter()
        .map(|&(i, s)| run_one(&instances[i], s, opts[i].0, cfg))
        .collect::<anyhow::Result<Vec<_>>>()?
        .into_iter();
    let mut reports = Vec::new();
    for (inst, (opt, provenance, opt_gap)) in instances.iter().zip(opts) {
        reports.push(InstanceReport {
            name: inst.name.clone(),
            suite: inst.suite,
            p: inst.p,
            opt,
            opt_provenance: provenance,
            opt_gap,
            oracle_budget: cfg.oracle_budget(inst),
            solvers: results.by_ref().take(cfg.solvers.len()).collect(),
        });
    }
    let report = SfmReport { seed: cfg.seed, thresholds: GAP_THRESHOLDS.to_vec(), instances: reports };
    if let Some(dir) = &cfg.out {
        for (inst, rep) in instances.iter().zip(&report.instances) {
            write_atomic(&dir.join("instances").join(format!("{}.json", inst.name)), inst.spec.to_json().as_bytes())?;
            for s in &rep.solvers {
                let path = dir.join(format!("trace_{}_{}.csv", inst.name, s.solver));
                write_atomic(&path, trace_csv(&s.trace, rep.opt).as_bytes())?;
            }
        }
        write_atomic(&dir.join("summary.json"), serde_json::to_string_pretty(&report)?.as_bytes())?;
    }
    Ok(report)
}
