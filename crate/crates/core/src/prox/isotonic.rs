//! Isotonic regression under arbitrary order constraints.

use crate::error::{precondition, Result};
use crate::graph::{cut_function, WeightedDigraph};
use crate::oracle::SfmHandle;

use super::dnc::divide_and_conquer;
use super::SeparableProblem;

/// Penalty weight `p (max z - min z) + 1`, large enough for the penalized
/// problem to satisfy every constraint.
pub fn isotonic_lambda(z: &[f64]) -> f64 {
    let (lo, hi) = z.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if z.is_empty() {
        return 1.0;
    }
    z.len() as f64 * (hi - lo) + 1.0
}

/// Projection of `z` onto `{w : w_i >= w_j for all (i, j)}` (0-based pairs),
/// as `½‖w - z‖² + λ Σ (w_j - w_i)₊` with a directed-cut penalty.
pub fn isotonic_general(z: &[f64], constraints: &[(usize, usize)], sfm: &dyn SfmHandle) -> Result<Vec<f64>> {
    let p = z.len();
    if let Some(&(i, j)) = constraints.iter().find(|&&(i, j)| i >= p || j >= p) {
        return precondition(format!("constraint ({}, {}) out of range", i + 1, j + 1));
    }
    if constraints.is_empty() || p == 0 {
        return Ok(z.to_vec());
    }
    let lambda = isotonic_lambda(z);
    let arcs = constraints.iter().filter(|(i, j)| i != j).map(|&(i, j)| (j, i, lambda)).collect();
    let f = cut_function(&WeightedDigraph::new(p, arcs, false)?)?;
    let r = divide_and_conquer(&f, &SeparableProblem::quadratic(z.to_vec()), sfm)?;
    Ok(r.w)
}
