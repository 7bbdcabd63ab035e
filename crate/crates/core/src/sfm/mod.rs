//! Submodular function minimization with primal/dual certificates.
//!
//! Every iterative solver first runs [`restrict_search`], then works on the
//! reduced function and lifts its candidates and base vectors back. Results
//! carry the best set found, a base vector `s ∈ B(F)` and the certified gap
//! `F(A) - s₋(V)`.

mod brute;
mod condgrad;
mod ellipsoid;
mod mnp;
mod recorder;
mod restrict;
mod subgradient;
mod trace;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::lovasz::BaseVector;
use crate::oracle::{Oracle, SfmHandle};
use crate::polyhedra::exhaustive_min_minus_modular;
use crate::set::Subset;

pub use brute::{brute_force, BRUTE_FORCE_SFM_MAX};
pub use condgrad::CgRule;
pub use ellipsoid::{EllipsoidRun, EllipsoidState};
pub use mnp::MnpRun;
pub use restrict::{reduce, restrict_search, Reduction};
pub use subgradient::{alpha, StepRule};
pub use trace::{SolveTrace, TraceRow, TRACE_HEADER};

use recorder::Recorder;
use trace::Clock;

/// Largest ground set for which `Algorithm::Auto` enumerates.
pub const AUTO_BRUTE_FORCE_MAX: usize = 16;

/// Default min-norm-point tolerance.
pub const MNP_DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SfmResult {
    pub minimizer: Subset,
    /// `F(minimizer)` as returned by the oracle.
    pub min_value: f64,
    /// Certificate in `B(F)`; `None` for exact combinatorial solves.
    pub dual: Option<BaseVector>,
    /// `min_value - dual.s₋(V)`, or 0 for exact solves without certificate.
    pub gap: f64,
    pub trace: SolveTrace,
    pub algorithm: String,
    pub iterations: usize,
    /// False when the budget ran out before the tolerance was met.
    pub converged: bool,
    /// `{s < 0}` and `{s <= 0}` of the min-norm point, when both are minimizers.
    pub minimal_minimizer: Option<Subset>,
    pub maximal_minimizer: Option<Subset>,
    /// `½‖s_t‖²` per iteration on the reduced function (min-norm point and
    /// conditional gradient).
    pub smooth_objective: Vec<f64>,
}

impl SfmResult {
    pub fn dual_value(&self) -> Option<f64> {
        self.dual.as_ref().map(|b| b.negative_part())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Algorithm {
    /// Min-cut style fast path if available, else enumeration for small
    /// ground sets, else min-norm point.
    Auto,
    BruteForce,
    MinNormPoint { tol: f64 },
    Subgradient { rule: StepRule },
    ConditionalGradient { rule: CgRule },
    Ellipsoid,
}

impl Algorithm {
    pub fn name(&self) -> String {
        match self {
            Algorithm::Auto => "auto".into(),
            Algorithm::BruteForce => "brute_force".into(),
            Algorithm::MinNormPoint { .. } => "mnp".into(),
            Algorithm::Subgradient { rule: StepRule::FixedSqrt } => "subgradient".into(),
            Algorithm::Subgradient { rule: StepRule::Polyak } => "subgradient_polyak".into(),
            Algorithm::ConditionalGradient { rule: CgRule::LineSearch } => "condgrad".into(),
            Algorithm::ConditionalGradient { rule: CgRule::FixedTwoOverT } => "condgrad_fixed".into(),
            Algorithm::Ellipsoid => "ellipsoid".into(),
        }
    }

    /// Parses the names produced by [`Algorithm::name`].
    pub fn parse(name: &str) -> Result<Algorithm> {
        Ok(match name {
            "auto" => Algorithm::Auto,
            "brute_force" | "brute" => Algorithm::BruteForce,
            "mnp" | "min_norm_point" => Algorithm::MinNormPoint { tol: MNP_DEFAULT_TOL },
            "subgradient" | "sg" => Algorithm::Subgradient { rule: StepRule::FixedSqrt },
            "subgradient_polyak" | "polyak" => Algorithm::Subgradient { rule: StepRule::Polyak },
            "condgrad" | "cg" => Algorithm::ConditionalGradient { rule: CgRule::LineSearch },
            "condgrad_fixed" => Algorithm::ConditionalGradient { rule: CgRule::FixedTwoOverT },
            "ellipsoid" => Algorithm::Ellipsoid,
            other => return precondition(format!("unknown algorithm `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    pub max_iters: usize,
    pub max_oracle_calls: Option<u64>,
    /// Certified gap at which iterative solvers stop.
    pub gap_tol: f64,
    /// When false, `wall_ms` is written as 0 so traces are reproducible.
    pub record_wall_time: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_iters: 10_000, max_oracle_calls: None, gap_tol: 1e-10, record_wall_time: true }
    }
}

impl Budget {
    pub fn iterations(max_iters: usize) -> Self {
        Budget { max_iters, ..Budget::default() }
    }
}

/// Solves on the reduced function with a fresh recorder.
fn solve_reduced(
    f: &Oracle,
    budget: &Budget,
    name: &str,
    body: impl FnOnce(&Oracle, &mut Recorder) -> (usize, bool),
) -> (SfmResult, Reduction) {
    let calls0 = f.calls();
    let clock = Clock::new(budget.record_wall_time);
    let red = reduce(f);
    let mut rec = Recorder::new(&red, f, calls0, clock, budget);
    let (iters, converged) = if red.free.is_empty() {
        rec.row(0);
        (0, true)
    } else {
        let g = red.reduced.clone();
        body(&g, &mut rec)
    };
    let res = rec.finish(name, iters, converged);
    (res, red)
}

/// Projected subgradient descent on the Lovász extension.
pub fn subgradient(f: &Oracle, steps: usize, rule: StepRule) -> SfmResult {
    subgradient_with(f, rule, &Budget::iterations(steps))
}

fn subgradient_with(f: &Oracle, rule: StepRule, budget: &Budget) -> SfmResult {
    let name = Algorithm::Subgradient { rule }.name();
    let (res, _) = solve_reduced(f, budget, &name, |g, rec| {
        let r = subgradient::run(g, rule, budget.gap_tol, rec);
        (r.iterations, r.converged)
    });
    res
}

/// Conditional gradient on `min ½‖s‖²` over the base polytope.
pub fn conditional_gradient(f: &Oracle, steps: usize, rule: CgRule) -> SfmResult {
    conditional_gradient_with(f, rule, &Budget::iterations(steps))
}

fn conditional_gradient_with(f: &Oracle, rule: CgRule, budget: &Budget) -> SfmResult {
    let name = Algorithm::ConditionalGradient { rule }.name();
    let mut objective = Vec::new();
    let (mut res, _) = solve_reduced(f, budget, &name, |g, rec| {
        let r = condgrad::run(g, rule, budget.gap_tol, rec, &mut |_| {});
        objective = r.objective;
        (r.iterations, r.converged)
    });
    res.smooth_objective = objective;
    res
}

/// Minimum-norm-point algorithm run until the Frank-Wolfe gap is below `tol`.
pub fn min_norm_point(f: &Oracle, tol: f64) -> SfmResult {
    min_norm_point_with(f, tol, &Budget { gap_tol: f64::NEG_INFINITY, ..Budget::default() })
}

fn min_norm_point_with(f: &Oracle, tol: f64, budget: &Budget) -> SfmResult {
    let mut run = None;
    let (mut res, red) = solve_reduced(f, budget, "mnp", |g, rec| {
        let r = mnp::run(g, tol, budget.gap_tol, rec, &mut |_| {});
        let out = (r.iterations, r.converged);
        run = Some(r);
        out
    });
    let y = match &run {
        Some(r) => {
            res.smooth_objective = r.objective.clone();
            let base = red.lift_base(&r.base);
            let best = res.dual_value().unwrap_or(f64::NEG_INFINITY);
            if base.negative_part() >= best - 1e-12 * (1.0 + best.abs()) {
                res.gap = res.min_value - base.negative_part();
                res.dual = Some(base);
            }
            red.lift_vector(&r.base.s)
        }
        None => red.lift_vector(&[]),
    };
    let eps = 1e-8 * (1.0 + y.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    let scale = 1e-9 * (1.0 + res.min_value.abs());
    let p = f.len();
    let lo = Subset::from_indices(p, (0..p).filter(|&k| y[k] < -eps));
    let hi = Subset::from_indices(p, (0..p).filter(|&k| y[k] <= eps));
    for (set, slot) in [(lo, &mut res.minimal_minimizer), (hi, &mut res.maximal_minimizer)] {
        if f.eval(&set) <= res.min_value + scale {
            *slot = Some(set);
        }
    }
    res
}

/// Min-norm point of `B(F)` itself, without preprocessing: the orthogonal
/// projection of 0 onto the base polytope up to Frank-Wolfe gap `tol`.
pub fn project_onto_base(f: &Oracle, tol: f64) -> MnpRun {
    let budget = Budget { gap_tol: f64::NEG_INFINITY, max_iters: 1_000_000, ..Budget::default() };
    let red = Reduction::identity(f);
    let mut rec = Recorder::new(&red, f, f.calls(), Clock::new(false), &budget);
    if f.is_empty() {
        let base = BaseVector { s: vec![], support: vec![(crate::set::Ordering::identity(0), 1.0)] };
        return MnpRun { base, fw_gap: 0.0, iterations: 0, converged: true, ill_conditioned: false, objective: vec![0.0] };
    }
    mnp::run(f, tol, budget.gap_tol, &mut rec, &mut |_| {})
}

/// Solvers of `min_{s∈B(F)} ½‖s‖²` whose iterates can be observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseSolver {
    MinNormPoint,
    ConditionalGradient(CgRule),
}

/// Runs `solver` on `B(F)` without preprocessing for at most `max_iters`
/// iterations, calling `observe` with every iterate `s_t`.
pub fn base_iterates(f: &Oracle, solver: BaseSolver, max_iters: usize, observe: &mut dyn FnMut(&[f64])) {
    if f.is_empty() {
        return;
    }
    let budget = Budget { gap_tol: f64::NEG_INFINITY, ..Budget::iterations(max_iters) };
    let red = Reduction::identity(f);
    let mut rec = Recorder::new(&red, f, f.calls(), Clock::new(false), &budget);
    match solver {
        BaseSolver::MinNormPoint => {
            mnp::run(f, 1e-14, budget.gap_tol, &mut rec, observe);
        }
        BaseSolver::ConditionalGradient(rule) => {
            condgrad::run(f, rule, budget.gap_tol, &mut rec, observe);
        }
    }
}

/// Central-cut ellipsoid method on the Lovász extension.
pub fn ellipsoid(f: &Oracle, steps: usize) -> SfmResult {
    ellipsoid_with(f, &Budget::iterations(steps))
}

fn ellipsoid_with(f: &Oracle, budget: &Budget) -> SfmResult {
    let (res, _) = solve_reduced(f, budget, "ellipsoid", |g, rec| {
        let r = ellipsoid::run(g, budget.gap_tol, rec, |_, _| {});
        (r.iterations, r.converged)
    });
    res
}

/// Ellipsoid run on `f` itself, without preprocessing, recording the best
/// Lovász value over feasible centers and `log det` of the shape matrix.
pub fn ellipsoid_trace(f: &Oracle, steps: usize) -> EllipsoidRun {
    let budget = Budget { gap_tol: f64::NEG_INFINITY, ..Budget::iterations(steps) };
    let red = Reduction::identity(f);
    let mut rec = Recorder::new(&red, f, f.calls(), Clock::new(false), &budget);
    let mut out = EllipsoidRun { best_value: Vec::new(), log_det: Vec::new() };
    if f.is_empty() {
        return out;
    }
    ellipsoid::run(f, budget.gap_tol, &mut rec, |best, e| {
        out.best_value.push(best);
        out.log_det.push(e.log_det().unwrap_or(f64::NEG_INFINITY));
    });
    out
}

fn exact_result(f: &Oracle, set: Subset, algorithm: &str, budget: &Budget) -> SfmResult {
    let clock = Clock::new(budget.record_wall_time);
    let calls0 = f.calls();
    let min_value = f.eval(&set);
    let row = TraceRow {
        iter: 0,
        oracle_calls: f.calls() - calls0,
        wall_ms: clock.ms(),
        primal_best: min_value,
        dual_best: min_value,
        gap: 0.0,
    };
    SfmResult {
        minimizer: set,
        min_value,
        dual: None,
        gap: 0.0,
        trace: SolveTrace { rows: vec![row] },
        algorithm: algorithm.to_string(),
        iterations: 0,
        converged: true,
        minimal_minimizer: None,
        maximal_minimizer: None,
        smooth_objective: Vec::new(),
    }
}

/// Dispatches to the requested solver.
pub fn minimize(f: &Oracle, algo: &Algorithm, budget: &Budget) -> Result<SfmResult> {
    let p = f.len();
    Ok(match *algo {
        Algorithm::Auto => {
            if let Some((set, _)) = f.min_minus_modular(&vec![0.0; p]) {
                exact_result(f, set, "min_cut", budget)
            } else if p <= AUTO_BRUTE_FORCE_MAX {
                let mut r = brute_force(f)?;
                r.trace.rows[0].wall_ms = 0.0;
                r
            } else {
                min_norm_point_with(f, MNP_DEFAULT_TOL, budget)
            }
        }
        Algorithm::BruteForce => brute_force(f)?,
        Algorithm::MinNormPoint { tol } => min_norm_point_with(f, tol, budget),
        Algorithm::Subgradient { rule } => subgradient_with(f, rule, budget),
        Algorithm::ConditionalGradient { rule } => conditional_gradient_with(f, rule, budget),
        Algorithm::Ellipsoid => ellipsoid_with(f, budget),
    })
}

/// Exhaustive inner solver, `p <= 22`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteForceSolver;

impl SfmHandle for BruteForceSolver {
    fn min_minus_modular(&self, f: &Oracle, z: &[f64]) -> Result<(Subset, f64)> {
        let m = exhaustive_min_minus_modular(f, z)?;
        Ok((m.maximal, m.value))
    }
}

/// Min-norm-point inner solver returning the maximal minimizer it certifies.
#[derive(Debug, Clone, Copy)]
pub struct MnpSolver {
    pub tol: f64,
}

impl Default for MnpSolver {
    fn default() -> Self {
        MnpSolver { tol: MNP_DEFAULT_TOL }
    }
}

impl SfmHandle for MnpSolver {
    fn min_minus_modular(&self, f: &Oracle, z: &[f64]) -> Result<(Subset, f64)> {
        if z.len() != f.len() {
            return precondition("modular term length differs from ground size");
        }
        let neg: Vec<f64> = z.iter().map(|v| -v).collect();
        let g = f.add_modular(&neg);
        let r = min_norm_point(&g, self.tol);
        let set = r.maximal_minimizer.unwrap_or(r.minimizer);
        let v = g.eval(&set);
        Ok((set, v))
    }
}

/// Fast path when available, enumeration up to 16 elements, else min-norm point.
#[derive(Debug, Clone, Copy, Default)]
pub struct AutoSolver;

impl SfmHandle for AutoSolver {
    fn min_minus_modular(&self, f: &Oracle, z: &[f64]) -> Result<(Subset, f64)> {
        if z.len() != f.len() {
            return precondition("modular term length differs from ground size");
        }
        if let Some(r) = f.min_minus_modular(z) {
            return Ok(r);
        }
        if f.len() <= AUTO_BRUTE_FORCE_MAX {
            return BruteForceSolver.min_minus_modular(f, z);
        }
        MnpSolver::default().min_minus_modular(f, z)
    }
}
