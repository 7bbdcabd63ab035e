//! Conditional gradient (Frank-Wolfe) on `min_{s∈B(F)} ½‖s‖²`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::linalg::dot;
use crate::lovasz::{greedy_vertex, BaseVector};
use crate::oracle::Oracle;
use crate::set::Ordering;

use super::recorder::Recorder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CgRule {
    LineSearch,
    /// `ρ_t = 2/(t+1)` with `t` counted from 1.
    FixedTwoOverT,
}

pub(crate) struct CgRun {
    pub iterations: usize,
    pub converged: bool,
    pub objective: Vec<f64>,
}

pub(crate) fn run(g: &Oracle, rule: CgRule, gap_tol: f64, rec: &mut Recorder, observe: &mut dyn FnMut(&[f64])) -> CgRun {
    let p = g.len();
    let o = Ordering::identity(p);
    let (mut s, chain) = greedy_vertex(g, &o);
    rec.prefixes(o.as_slice(), &chain);
    let mut weights: HashMap<Ordering, f64> = HashMap::from([(o, 1.0)]);
    let mut objective = Vec::new();
    let mut t = 0;
    loop {
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        let order = Ordering::decreasing(&neg);
        let (q, chain) = greedy_vertex(g, &order);
        rec.prefixes(order.as_slice(), &chain);
        rec.dual(&s, || {
            let mut support: Vec<(Ordering, f64)> = weights.iter().map(|(o, w)| (o.clone(), *w)).collect();
            support.sort_by(|a, b| a.0.as_slice().cmp(b.0.as_slice()));
            BaseVector { s: s.clone(), support }
        });
        rec.row(t);
        objective.push(0.5 * dot(&s, &s));
        observe(&s);
        let d: Vec<f64> = q.iter().zip(&s).map(|(a, b)| a - b).collect();
        let dd = dot(&d, &d);
        let fw = -dot(&s, &d);
        if rec.gap() <= gap_tol || dd == 0.0 || fw <= 0.0 {
            return CgRun { iterations: t, converged: rec.gap() <= gap_tol || fw <= 0.0, objective };
        }
        if rec.exhausted(t + 1) {
            return CgRun { iterations: t, converged: false, objective };
        }
        t += 1;
        let rho = match rule {
            CgRule::LineSearch => (fw / dd).clamp(0.0, 1.0),
            CgRule::FixedTwoOverT => 2.0 / (t as f64 + 1.0),
        };
        for (a, b) in s.iter_mut().zip(&d) {
            *a += rho * b;
        }
        for w in weights.values_mut() {
            *w *= 1.0 - rho;
        }
        weights.retain(|_, w| *w > 0.0);
        *weights.entry(order).or_insert(0.0) += rho;
    }
}
