//! Divide-and-conquer over tight sets, and the min-norm-point route.

use rayon::prelude::*;

use crate::error::Result;
use crate::oracle::{Oracle, SfmHandle};
use crate::set::Subset;
use crate::sfm::project_onto_base;

use super::gap::gap_decomposed;
use super::{ProxResult, SeparableProblem};

/// Proposal for a subproblem on `elems` (global indices) whose function
/// value on the whole subproblem is `budget`.
pub(crate) trait RootStep: Sync {
    fn step(&self, elems: &[usize], budget: f64) -> Vec<f64>;
}

struct Node {
    base: Subset,
    elems: Vec<usize>,
}

enum Outcome {
    Leaf(Vec<usize>, Vec<f64>),
    Split(Node, Node),
}

/// Recursively splits by a minimizer of `G - t`, where `t` is the root step
/// of the current subproblem `G`, until `t` is feasible. Returns the dual
/// point and the number of levels.
pub(crate) fn dnc_core(f: &Oracle, step: &dyn RootStep, sfm: &dyn SfmHandle) -> Result<(Vec<f64>, usize)> {
    let p = f.len();
    let mut s = vec![0.0; p];
    let mut frontier = vec![Node { base: Subset::empty(p), elems: (0..p).collect() }];
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        let outcomes: Vec<Result<Outcome>> = frontier.into_par_iter().map(|node| expand(f, step, sfm, node)).collect();
        frontier = Vec::new();
        for o in outcomes {
            match o? {
                Outcome::Leaf(elems, t) => {
                    for (k, v) in elems.into_iter().zip(t) {
                        s[k] = v;
                    }
                }
                Outcome::Split(a, b) => {
                    frontier.push(a);
                    frontier.push(b);
                }
            }
        }
    }
    Ok((s, depth))
}

fn expand(f: &Oracle, step: &dyn RootStep, sfm: &dyn SfmHandle, node: Node) -> Result<Outcome> {
    let q = node.elems.len();
    let g = f.minor(&node.base, &node.elems);
    let budget = g.eval(&Subset::full(q));
    let t = step.step(&node.elems, budget);
    if q == 1 {
        return Ok(Outcome::Leaf(node.elems, t));
    }
    let (a, v) = sfm.min_minus_modular(&g, &t)?;
    let scale = 1.0 + budget.abs() + t.iter().map(|x| x.abs()).sum::<f64>();
    if v >= -1e-12 * scale || a.is_empty() || a.is_full() {
        return Ok(Outcome::Leaf(node.elems, t));
    }
    let inside: Vec<usize> = a.iter().map(|i| node.elems[i]).collect();
    let outside: Vec<usize> = (0..q).filter(|&i| !a.contains(i)).map(|i| node.elems[i]).collect();
    let mut base = node.base.clone();
    for &k in &inside {
        base.insert(k);
    }
    Ok(Outcome::Split(Node { base: node.base, elems: inside }, Node { base, elems: outside }))
}

struct BaseStep<'a>(&'a SeparableProblem);

impl RootStep for BaseStep<'_> {
    fn step(&self, elems: &[usize], budget: f64) -> Vec<f64> {
        let w = self.0.balance(elems, budget);
        elems.iter().map(|&k| -self.0.dpsi(k, w)).collect()
    }
}

/// Solves `min_w f(w) + Σ ψ_k(w_k)` exactly, given an exact inner solver
/// for `min_A F(A) - t(A)`.
pub fn divide_and_conquer(f: &Oracle, problem: &SeparableProblem, sfm: &dyn SfmHandle) -> Result<ProxResult> {
    problem.validate(f.len())?;
    let (s, depth) = dnc_core(f, &BaseStep(problem), sfm)?;
    let w = problem.primal_from_dual(&s);
    let gap = gap_decomposed(f, &w, &s, problem)?;
    Ok(ProxResult { w, s, gap, depth })
}

/// `argmin_w ½‖w - z‖² + f(w)` through the min-norm point of `B(F - z)`.
pub fn prox_quadratic_mnp(f: &Oracle, z: &[f64]) -> Result<ProxResult> {
    let problem = SeparableProblem::quadratic(z.to_vec());
    problem.validate(f.len())?;
    let neg: Vec<f64> = z.iter().map(|v| -v).collect();
    let g = f.add_modular(&neg);
    let u = project_onto_base(&g, 1e-14).base.s;
    let s: Vec<f64> = u.iter().zip(z).map(|(a, b)| a + b).collect();
    let w: Vec<f64> = u.iter().map(|v| -v).collect();
    let gap = gap_decomposed(f, &w, &s, &problem)?;
    Ok(ProxResult { w, s, gap, depth: 0 })
}
