//! Separable optimization on the base polytope and related polyhedra.
//!
//! A problem is `min_w f(w) + Σ_k ψ_k(w_k)`, with dual
//! `max_{s∈B(F)} -Σ_k ψ*_k(-s_k)`. At the optimum `s_k = -ψ'_k(w_k)`.

mod dnc;
mod gap;
mod isotonic;
mod norms;
mod pava;
mod transfer;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

pub use dnc::{divide_and_conquer, prox_quadratic_mnp};
pub use gap::{gap_decomposed, gap_integral_quadratic, level_set_values, threshold_minimizers};
pub use isotonic::{isotonic_general, isotonic_lambda};
pub use norms::{dual_norm_newton, omega2_norm, omega2_prox, omega_inf_dual, omega_q_norm_and_prox};
pub use pava::{improve_primal_isotonic, pava};
pub use transfer::{prox_abs_p, transfer_to_p, transfer_to_p_plus};

/// Per-coordinate convex functions for a custom separable problem. Each
/// `ψ_k` must be strictly convex and differentiable with `ψ'_k` onto `ℝ`.
pub trait Separable: Send + Sync {
    fn len(&self) -> usize;
    fn psi(&self, k: usize, w: f64) -> f64;
    fn dpsi(&self, k: usize, w: f64) -> f64;
    /// Fenchel conjugate `ψ*_k(u)`.
    fn conj(&self, k: usize, u: f64) -> f64;
    /// `(ψ*_k)'(u)`, the inverse of `ψ'_k`.
    fn dconj(&self, k: usize, u: f64) -> f64;
}

#[derive(Clone)]
pub enum SeparableProblem {
    /// `ψ_k(w) = c_k/2 (w - z_k)²` with `c_k = 1` by default.
    Quadratic { z: Vec<f64>, weights: Option<Vec<f64>> },
    Custom(Arc<dyn Separable>),
}

impl std::fmt::Debug for SeparableProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeparableProblem::Quadratic { z, weights } => {
                f.debug_struct("Quadratic").field("z", z).field("weights", weights).finish()
            }
            SeparableProblem::Custom(c) => write!(f, "Custom(p = {})", c.len()),
        }
    }
}

impl SeparableProblem {
    pub fn quadratic(z: Vec<f64>) -> Self {
        SeparableProblem::Quadratic { z, weights: None }
    }

    pub fn len(&self) -> usize {
        match self {
            SeparableProblem::Quadratic { z, .. } => z.len(),
            SeparableProblem::Custom(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn c(&self, k: usize) -> f64 {
        match self {
            SeparableProblem::Quadratic { weights: Some(c), .. } => c[k],
            _ => 1.0,
        }
    }

    pub fn psi(&self, k: usize, w: f64) -> f64 {
        match self {
            SeparableProblem::Quadratic { z, .. } => 0.5 * self.c(k) * (w - z[k]) * (w - z[k]),
            SeparableProblem::Custom(c) => c.psi(k, w),
        }
    }

    pub fn dpsi(&self, k: usize, w: f64) -> f64 {
        match self {
            SeparableProblem::Quadratic { z, .. } => self.c(k) * (w - z[k]),
            SeparableProblem::Custom(c) => c.dpsi(k, w),
        }
    }

    pub fn conj(&self, k: usize, u: f64) -> f64 {
        match self {
            SeparableProblem::Quadratic { z, .. } => u * z[k] + u * u / (2.0 * self.c(k)),
            SeparableProblem::Custom(c) => c.conj(k, u),
        }
    }

    pub fn dconj(&self, k: usize, u: f64) -> f64 {
        match self {
            SeparableProblem::Quadratic { z, .. } => z[k] + u / self.c(k),
            SeparableProblem::Custom(c) => c.dconj(k, u),
        }
    }

    /// Primal point paired with a dual point: `w_k = (ψ*_k)'(-s_k)`.
    pub fn primal_from_dual(&self, s: &[f64]) -> Vec<f64> {
        s.iter().enumerate().map(|(k, &sk)| self.dconj(k, -sk)).collect()
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        if self.len() != p {
            return precondition(format!("problem has {} coordinates, function has {p}", self.len()));
        }
        match self {
            SeparableProblem::Quadratic { z, weights } => {
                if z.iter().any(|v| !v.is_finite()) {
                    return precondition("non-finite target vector");
                }
                if let Some(c) = weights {
                    if c.len() != p || c.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
                        return precondition("quadratic weights must be positive and finite");
                    }
                }
            }
            SeparableProblem::Custom(c) => {
                for k in 0..p {
                    let (a, b) = (c.dpsi(k, -1.0), c.dpsi(k, 1.0));
                    if !(b > a) {
                        return precondition(format!("ψ_{k} is not strictly convex"));
                    }
                }
            }
        }
        Ok(())
    }

    /// The common value `w` with `Σ_{k∈elems} -ψ'_k(w) = budget`.
    pub(crate) fn balance(&self, elems: &[usize], budget: f64) -> f64 {
        if let SeparableProblem::Quadratic { z, .. } = self {
            let cs: f64 = elems.iter().map(|&k| self.c(k)).sum();
            let cz: f64 = elems.iter().map(|&k| self.c(k) * z[k]).sum();
            return (cz - budget) / cs;
        }
        let h = |w: f64| elems.iter().map(|&k| -self.dpsi(k, w)).sum::<f64>() - budget;
        let (mut lo, mut hi) = (-1.0, 1.0);
        while h(lo) < 0.0 && lo > -1e300 {
            lo *= 2.0;
        }
        while h(hi) > 0.0 && hi < 1e300 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * (1.0 + mid.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Solution of a separable problem with its certified duality gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxResult {
    pub w: Vec<f64>,
    pub s: Vec<f64>,
    pub gap: f64,
    /// Recursion levels used by divide-and-conquer (0 otherwise).
    pub depth: usize,
}
