//! Duality gaps, level sets and thresholding.

use crate::error::{precondition, Result};
use crate::lovasz::lovasz;
use crate::oracle::Oracle;
use crate::set::Subset;

use super::{ProxResult, SeparableProblem};

/// Threshold tolerance used when reading level sets off a solution.
pub const LEVEL_TOL: f64 = 1e-9;

/// `(f(w) - wᵀs) + Σ_k (ψ_k(w_k) + ψ*_k(-s_k) + w_k s_k)`. Both terms are
/// nonnegative when `s ∈ B(F)`.
pub fn gap_decomposed(f: &Oracle, w: &[f64], s: &[f64], problem: &SeparableProblem) -> Result<f64> {
    let p = f.len();
    if w.len() != p || s.len() != p {
        return precondition("vector lengths differ from ground size");
    }
    let ws: f64 = w.iter().zip(s).map(|(a, b)| a * b).sum();
    let mut total = lovasz(f, w)? - ws;
    for k in 0..p {
        total += problem.psi(k, w[k]) + problem.conj(k, -s[k]) + w[k] * s[k];
    }
    Ok(total)
}

/// The same gap for `ψ_k(w) = c_k/2 (w - z_k)²`, as the integral over `α` of
/// `(F + ψ'(α))({w >= α}) - (s + ψ'(α))₋(V)`. The integrand is affine
/// between consecutive breakpoints, so the midpoint rule is exact.
pub fn gap_integral_quadratic(f: &Oracle, w: &[f64], s: &[f64], z: &[f64], weights: Option<&[f64]>) -> Result<f64> {
    let p = f.len();
    if w.len() != p || s.len() != p || z.len() != p {
        return precondition("vector lengths differ from ground size");
    }
    let c = |k: usize| weights.map_or(1.0, |c| c[k]);
    let mut bp: Vec<f64> = w.to_vec();
    bp.extend((0..p).map(|k| z[k] - s[k] / c(k)));
    bp.sort_by(f64::total_cmp);
    bp.dedup();
    let mut total = 0.0;
    for pair in bp.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let mid = 0.5 * (a + b);
        let set = Subset::from_indices(p, (0..p).filter(|&k| w[k] >= mid));
        let dpsi = |k: usize| c(k) * (mid - z[k]);
        let first = f.eval(&set) + set.iter().map(dpsi).sum::<f64>();
        let second: f64 = (0..p).map(|k| (s[k] + dpsi(k)).min(0.0)).sum();
        total += (b - a) * (first - second);
    }
    Ok(total)
}

/// `({w > α}, {w >= α})` with tolerance [`LEVEL_TOL`]. For the quadratic
/// problem at target `z`, these are the minimal and maximal minimizers of
/// `A ↦ F(A) - z(A) + α|A|`.
pub fn threshold_minimizers(prox: &ProxResult, alpha: f64) -> Result<(Subset, Subset)> {
    if !(prox.gap <= 1e-8) {
        return precondition(format!("proximal problem not solved (gap {})", prox.gap));
    }
    let p = prox.w.len();
    let lo = Subset::from_indices(p, (0..p).filter(|&k| prox.w[k] > alpha + LEVEL_TOL));
    let hi = Subset::from_indices(p, (0..p).filter(|&k| prox.w[k] >= alpha - LEVEL_TOL));
    Ok((lo, hi))
}

/// Constant blocks `A_1, A_2, ..` of `w` by decreasing value, each with the
/// value `-(F(A_1 ∪ .. ∪ A_j) - F(A_1 ∪ .. ∪ A_{j-1})) / |A_j|` predicted for
/// the projection of 0 onto `B(F)`.
pub fn level_set_values(f: &Oracle, w: &[f64]) -> Vec<(Subset, f64)> {
    let p = w.len();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
    let mut out = Vec::new();
    let mut union = Subset::empty(p);
    let mut prev = 0.0;
    let mut i = 0;
    while i < p {
        let mut j = i + 1;
        while j < p && (w[order[i]] - w[order[j]]).abs() <= LEVEL_TOL * (1.0 + w[order[i]].abs()) {
            j += 1;
        }
        let block = Subset::from_indices(p, order[i..j].iter().copied());
        union = union.union(&block);
        let cur = f.eval(&union);
        out.push((block, -(cur - prev) / (j - i) as f64));
        prev = cur;
        i = j;
    }
    out
}
