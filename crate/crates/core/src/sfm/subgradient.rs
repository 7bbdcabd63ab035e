//! Projected subgradient descent on the Lovász extension over `[0,1]^p`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::linalg::dot;
use crate::lovasz::{greedy_vertex, BaseVector};
use crate::oracle::Oracle;
use crate::set::{Ordering, Subset};

use super::recorder::Recorder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// `γ_t = √p / (D √(2t))`.
    FixedSqrt,
    /// `γ_t = (f(w_t) - d_t) / ‖s_t‖²` with `d_t` the best dual value so far.
    Polyak,
}

/// `α_k = F({k}) + F(V∖{k}) - F(V)`; after reduction every base vector lies
/// in `Π [-α_k, α_k]`.
pub fn alpha(g: &Oracle) -> Vec<f64> {
    let p = g.len();
    let full = Subset::full(p);
    let fv = g.eval(&full);
    (0..p).map(|k| g.eval(&Subset::from_indices(p, [k])) + g.eval(&full.without(k)) - fv).collect()
}

/// Averaged greedy vertices, keyed by ordering.
pub(crate) struct Average {
    pub(crate) s: Vec<f64>,
    weights: HashMap<Ordering, f64>,
    count: f64,
}

impl Average {
    pub(crate) fn new(p: usize) -> Self {
        Average { s: vec![0.0; p], weights: HashMap::new(), count: 0.0 }
    }

    pub(crate) fn push(&mut self, x: &[f64], o: &Ordering) {
        self.count += 1.0;
        let r = 1.0 / self.count;
        for (a, b) in self.s.iter_mut().zip(x) {
            *a += r * (b - *a);
        }
        *self.weights.entry(o.clone()).or_insert(0.0) += 1.0;
    }

    pub(crate) fn base(&self) -> BaseVector {
        let mut support: Vec<(Ordering, f64)> = self.weights.iter().map(|(o, w)| (o.clone(), w / self.count)).collect();
        support.sort_by(|a, b| a.0.as_slice().cmp(b.0.as_slice()));
        BaseVector { s: self.s.clone(), support }
    }
}

pub(crate) struct SgRun {
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) fn run(g: &Oracle, rule: StepRule, gap_tol: f64, rec: &mut Recorder) -> SgRun {
    let p = g.len();
    let d = alpha(g).iter().map(|a| a * a).sum::<f64>().sqrt();
    let mut w = vec![0.5; p];
    let mut avg = Average::new(p);
    let mut t = 0;
    loop {
        let order = Ordering::decreasing(&w);
        let (s, chain) = greedy_vertex(g, &order);
        rec.prefixes(order.as_slice(), &chain);
        avg.push(&s, &order);
        rec.dual(&avg.s, || avg.base());
        rec.dual(&s, || BaseVector { s: s.clone(), support: vec![(order.clone(), 1.0)] });
        rec.row(t);
        let ns = dot(&s, &s);
        if rec.gap() <= gap_tol || ns == 0.0 || d == 0.0 {
            return SgRun { iterations: t, converged: rec.gap() <= gap_tol };
        }
        if rec.exhausted(t + 1) {
            return SgRun { iterations: t, converged: false };
        }
        t += 1;
        let gamma = match rule {
            StepRule::FixedSqrt => (p as f64).sqrt() / (d * (2.0 * t as f64).sqrt()),
            StepRule::Polyak => {
                let fw = dot(&w, &s);
                ((fw - rec.best_dual) / ns).max(0.0)
            }
        };
        for (wk, sk) in w.iter_mut().zip(&s) {
            *wk = (*wk - gamma * sk).clamp(0.0, 1.0);
        }
    }
}
