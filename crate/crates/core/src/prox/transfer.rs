//! From the base polytope to `P(F)`, `P₊(F)` and `|P|(F)`.

use std::sync::Arc;

use crate::error::{precondition, Result};
use crate::lovasz::lovasz;
use crate::oracle::{Oracle, SfmHandle};
use crate::polyhedra::is_non_decreasing;

use super::dnc::divide_and_conquer;
use super::{ProxResult, Separable, SeparableProblem};

/// Largest ground set on which monotonicity is checked exhaustively.
const MONOTONE_CHECK_MAX: usize = 12;

fn check_monotone(f: &Oracle) -> Result<()> {
    if f.len() <= MONOTONE_CHECK_MAX && !is_non_decreasing(f)? {
        return precondition("function must be non-decreasing");
    }
    Ok(())
}

/// `f_w - wᵀs + Σ_k (ψ_k(w_k) + ψ*_k(-s_k) + w_k s_k)` for a support value `f_w`.
fn gap(f_w: f64, w: &[f64], s: &[f64], problem: &SeparableProblem) -> f64 {
    let mut total = f_w;
    for k in 0..w.len() {
        total += problem.psi(k, w[k]) + problem.conj(k, -s[k]);
    }
    total
}

/// Solution over `P(F)` from one over `B(F)`: `s_k = min(t_k, -ψ'_k(0))` and
/// `w = (ψ*)'(-s)`, which is nonnegative.
pub fn transfer_to_p(f: &Oracle, prox_b: &ProxResult, problem: &SeparableProblem) -> Result<ProxResult> {
    problem.validate(f.len())?;
    let s: Vec<f64> = prox_b.s.iter().enumerate().map(|(k, &t)| t.min(-problem.dpsi(k, 0.0))).collect();
    let w: Vec<f64> = problem.primal_from_dual(&s).into_iter().map(|v| v.max(0.0)).collect();
    let g = gap(lovasz(f, &w)?, &w, &s, problem);
    Ok(ProxResult { w, s, gap: g, depth: prox_b.depth })
}

/// Solution over `P₊(F)` for non-decreasing `F`: as [`transfer_to_p`] with
/// the dual clamped at 0.
pub fn transfer_to_p_plus(f: &Oracle, prox_b: &ProxResult, problem: &SeparableProblem) -> Result<ProxResult> {
    problem.validate(f.len())?;
    check_monotone(f)?;
    let s: Vec<f64> = prox_b.s.iter().enumerate().map(|(k, &t)| t.min((-problem.dpsi(k, 0.0)).max(0.0))).collect();
    let w = problem.primal_from_dual(&s);
    let wp: Vec<f64> = w.iter().map(|v| v.max(0.0)).collect();
    let g = gap(lovasz(f, &wp)?, &w, &s, problem);
    Ok(ProxResult { w, s, gap: g, depth: prox_b.depth })
}

struct Flipped {
    inner: Arc<dyn Separable>,
    eps: Vec<f64>,
}

impl Separable for Flipped {
    fn len(&self) -> usize {
        self.eps.len()
    }
    fn psi(&self, k: usize, w: f64) -> f64 {
        self.inner.psi(k, self.eps[k] * w)
    }
    fn dpsi(&self, k: usize, w: f64) -> f64 {
        self.eps[k] * self.inner.dpsi(k, self.eps[k] * w)
    }
    fn conj(&self, k: usize, u: f64) -> f64 {
        self.inner.conj(k, self.eps[k] * u)
    }
    fn dconj(&self, k: usize, u: f64) -> f64 {
        self.eps[k] * self.inner.dconj(k, self.eps[k] * u)
    }
}

/// Solves `min_w f(|w|) + Σ ψ_k(w_k)` for non-decreasing `F`: signs are
/// flipped by `ε = sign((ψ*)'(0))`, the problem is solved over `P₊(F)` and
/// the signs restored.
pub fn prox_abs_p(f: &Oracle, problem: &SeparableProblem, sfm: &dyn SfmHandle) -> Result<ProxResult> {
    let p = f.len();
    problem.validate(p)?;
    check_monotone(f)?;
    let eps: Vec<f64> = (0..p).map(|k| if problem.dconj(k, 0.0) < 0.0 { -1.0 } else { 1.0 }).collect();
    let flipped = match problem {
        SeparableProblem::Quadratic { z, weights } => SeparableProblem::Quadratic {
            z: z.iter().zip(&eps).map(|(a, e)| a * e).collect(),
            weights: weights.clone(),
        },
        SeparableProblem::Custom(c) => SeparableProblem::Custom(Arc::new(Flipped { inner: c.clone(), eps: eps.clone() })),
    };
    let b = divide_and_conquer(f, &flipped, sfm)?;
    let plus = transfer_to_p_plus(f, &b, &flipped)?;
    let w: Vec<f64> = plus.w.iter().zip(&eps).map(|(a, e)| a * e).collect();
    let s: Vec<f64> = plus.s.iter().zip(&eps).map(|(a, e)| a * e).collect();
    let abs: Vec<f64> = w.iter().map(|v| v.abs()).collect();
    let g = gap(lovasz(f, &abs)?, &w, &s, problem);
    Ok(ProxResult { w, s, gap: g, depth: b.depth })
}
