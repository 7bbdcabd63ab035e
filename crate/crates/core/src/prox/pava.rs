//! Pool-adjacent-violators and isotonic primal improvement.

use crate::error::{precondition, Result};
use crate::lovasz::{greedy_vertex, lovasz};
use crate::oracle::Oracle;
use crate::set::Ordering;

/// `argmin_w Σ c_k/2 (w_k - z_k)²` subject to `w_1 >= w_2 >= .. >= w_p`.
pub fn pava(z: &[f64], weights: Option<&[f64]>) -> Vec<f64> {
    // blocks of (weighted mean, weight, length)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(z.len());
    for (k, &zk) in z.iter().enumerate() {
        let c = weights.map_or(1.0, |w| w[k]);
        let mut cur = (zk, c, 1);
        while let Some(&(m, wt, n)) = blocks.last() {
            if m >= cur.0 {
                break;
            }
            blocks.pop();
            let total = wt + cur.1;
            cur = ((m * wt + cur.0 * cur.1) / total, total, n + cur.2);
        }
        blocks.push(cur);
    }
    blocks.into_iter().flat_map(|(m, _, n)| std::iter::repeat_n(m, n)).collect()
}

/// Better primal point for `min_w f(w) + ½‖w‖²` from a base vector `s`:
/// on the cone of vectors ordered like `-s` the Lovász extension is linear,
/// so the restricted problem is an isotonic regression. Returns `w` and its
/// duality gap against `s`.
pub fn improve_primal_isotonic(f: &Oracle, s: &[f64]) -> Result<(Vec<f64>, f64)> {
    let p = f.len();
    if s.len() != p {
        return precondition("base vector length differs from ground size");
    }
    let neg: Vec<f64> = s.iter().map(|v| -v).collect();
    let order = Ordering::decreasing(&neg);
    let (t, _) = greedy_vertex(f, &order);
    let target: Vec<f64> = order.as_slice().iter().map(|&k| -t[k]).collect();
    let fitted = pava(&target, None);
    let mut w = vec![0.0; p];
    for (&k, v) in order.as_slice().iter().zip(fitted) {
        w[k] = v;
    }
    let gap = lovasz(f, &w)? + 0.5 * w.iter().map(|v| v * v).sum::<f64>() + 0.5 * s.iter().map(|v| v * v).sum::<f64>();
    Ok((w, gap))
}
