//! Line search in `P(F)` and the norms `Ω∞*`, `Ω₂`.

use crate::error::{precondition, Result};
use crate::oracle::{Oracle, SfmHandle};
use crate::set::Subset;

use super::dnc::{dnc_core, RootStep};
use super::ProxResult;

/// Largest `α >= 0` with `s_base + α t ∈ P(F)`, by Newton steps
/// `β = G(A)/t(A)` on `G = F - s_base`, where `A` minimizes `G - βt`.
pub fn dual_norm_newton(f: &Oracle, s_base: &[f64], t: &[f64], sfm: &dyn SfmHandle) -> Result<f64> {
    let p = f.len();
    if s_base.len() != p || t.len() != p {
        return precondition("vector lengths differ from ground size");
    }
    if t.iter().any(|&v| !(v >= 0.0)) || t.iter().all(|&v| v == 0.0) {
        return precondition("direction must be nonnegative and nonzero");
    }
    let neg: Vec<f64> = s_base.iter().map(|v| -v).collect();
    let g = f.add_modular(&neg);
    let mut a = Subset::full(p);
    let mut beta = g.eval(&a) / a.sum(t);
    for _ in 0..=p + 1 {
        let bt: Vec<f64> = t.iter().map(|v| beta * v).collect();
        let (next, v) = sfm.min_minus_modular(&g, &bt)?;
        let scale = 1.0 + beta.abs() * t.iter().sum::<f64>() + g.eval(&Subset::full(p)).abs();
        if v >= -1e-12 * scale || next.sum(t) <= 0.0 || next == a {
            return Ok(beta.max(0.0));
        }
        a = next;
        beta = g.eval(&a) / a.sum(t);
    }
    Ok(beta.max(0.0))
}

/// `Ω∞*(s) = max_{A≠∅} |s|(A) / F(A)`.
pub fn omega_inf_dual(f: &Oracle, s: &[f64], sfm: &dyn SfmHandle) -> Result<f64> {
    let abs: Vec<f64> = s.iter().map(|v| v.abs()).collect();
    if abs.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let alpha = dual_norm_newton(f, &vec![0.0; f.len()], &abs, sfm)?;
    Ok(1.0 / alpha)
}

fn check_positive_monotone(f: &Oracle) -> Result<()> {
    let p = f.len();
    for k in 0..p {
        if !(f.eval(&Subset::from_indices(p, [k])) > 0.0) {
            return precondition(format!("F({{{}}}) must be positive", k + 1));
        }
    }
    if p <= 12 && !crate::polyhedra::is_non_decreasing(f)? {
        return precondition("function must be non-decreasing");
    }
    Ok(())
}

/// `max Σ a_k √u_k` over `u ∈ P₊(F)`: `u ∝ a²` on each block.
struct NormStep<'a>(&'a [f64]);

impl RootStep for NormStep<'_> {
    fn step(&self, elems: &[usize], budget: f64) -> Vec<f64> {
        let n2: f64 = elems.iter().map(|&k| self.0[k] * self.0[k]).sum();
        if n2 == 0.0 {
            return vec![budget / elems.len() as f64; elems.len()];
        }
        elems.iter().map(|&k| self.0[k] * self.0[k] * budget / n2).collect()
    }
}

/// `max Σ a_k √u_k - ½ Σ u_k` over `u ∈ P₊(F)`.
struct ProxStep<'a>(&'a [f64]);

impl RootStep for ProxStep<'_> {
    fn step(&self, elems: &[usize], budget: f64) -> Vec<f64> {
        let n2: f64 = elems.iter().map(|&k| self.0[k] * self.0[k]).sum();
        let c = if n2 > 0.0 { (budget / n2).min(1.0) } else { 0.0 };
        elems.iter().map(|&k| self.0[k] * self.0[k] * c).collect()
    }
}

/// `Ω₂(w) = max { wᵀs : s∘s ∈ P(F) }` for non-decreasing `F` with positive singletons.
pub fn omega2_norm(f: &Oracle, w: &[f64], sfm: &dyn SfmHandle) -> Result<f64> {
    if w.len() != f.len() {
        return precondition("vector length differs from ground size");
    }
    check_positive_monotone(f)?;
    let a: Vec<f64> = w.iter().map(|v| v.abs()).collect();
    let (u, _) = dnc_core(f, &NormStep(&a), sfm)?;
    Ok(a.iter().zip(&u).map(|(x, y)| x * y.max(0.0).sqrt()).sum())
}

/// `argmin_w ½‖w - z‖² + Ω₂(w)`: `w = z - s` with `s` the projection of `z`
/// onto the dual unit ball `{s : s∘s ∈ P(F)}`. The gap is `Ω₂(w) - wᵀs`.
pub fn omega2_prox(f: &Oracle, z: &[f64], sfm: &dyn SfmHandle) -> Result<ProxResult> {
    if z.len() != f.len() {
        return precondition("vector length differs from ground size");
    }
    check_positive_monotone(f)?;
    let a: Vec<f64> = z.iter().map(|v| v.abs()).collect();
    let (u, depth) = dnc_core(f, &ProxStep(&a), sfm)?;
    let s: Vec<f64> = z.iter().zip(&u).map(|(zk, uk)| zk.signum() * uk.max(0.0).sqrt() * (*zk != 0.0) as u8 as f64).collect();
    let w: Vec<f64> = z.iter().zip(&s).map(|(a, b)| a - b).collect();
    let ws: f64 = w.iter().zip(&s).map(|(a, b)| a * b).sum();
    let gap = omega2_norm(f, &w, sfm)? - ws;
    Ok(ProxResult { w, s, gap, depth })
}

/// `(Ω_q(z), prox_{Ω_q}(z))`; only `q = 2` is supported.
pub fn omega_q_norm_and_prox(f: &Oracle, z: &[f64], q: f64, sfm: &dyn SfmHandle) -> Result<(f64, Vec<f64>)> {
    if q != 2.0 {
        return precondition(format!("only q = 2 is supported, got {q}"));
    }
    Ok((omega2_norm(f, z, sfm)?, omega2_prox(f, z, sfm)?.w))
}
