//! Central-cut ellipsoid method on the Lovász extension over `[0,1]^p`.

use crate::linalg::{cholesky, dot, SymMatrix};
use crate::lovasz::{greedy_vertex, BaseVector};
use crate::oracle::Oracle;
use crate::set::Ordering;

use super::recorder::Recorder;
use super::subgradient::Average;

/// Ellipsoid `{x : (x-c)ᵀP⁻¹(x-c) <= 1}`.
#[derive(Debug, Clone)]
pub struct EllipsoidState {
    pub center: Vec<f64>,
    pub shape: Vec<f64>,
    p: usize,
}

impl EllipsoidState {
    /// The ball around `½1` containing `[0,1]^p`.
    pub fn unit_cube(p: usize) -> Self {
        let mut shape = vec![0.0; p * p];
        for i in 0..p {
            shape[i * p + i] = p as f64 / 4.0;
        }
        EllipsoidState { center: vec![0.5; p], shape, p }
    }

    /// Keeps the half `{x : zᵀ(x - c) <= 0}`.
    pub fn cut(&mut self, z: &[f64]) {
        let p = self.p;
        let pz: Vec<f64> = (0..p).map(|i| dot(&self.shape[i * p..(i + 1) * p], z)).collect();
        let zpz = dot(z, &pz);
        if zpz <= 0.0 {
            return;
        }
        let norm = zpz.sqrt();
        let b: Vec<f64> = pz.iter().map(|v| v / norm).collect();
        if p == 1 {
            self.center[0] -= 0.5 * b[0];
            self.shape[0] /= 4.0;
            return;
        }
        let pf = p as f64;
        for (c, bi) in self.center.iter_mut().zip(&b) {
            *c -= bi / (pf + 1.0);
        }
        let scale = pf * pf / (pf * pf - 1.0);
        let beta = 2.0 / (pf + 1.0);
        for i in 0..p {
            for j in i..p {
                let v = scale * (self.shape[i * p + j] - beta * b[i] * b[j]);
                self.shape[i * p + j] = v;
                self.shape[j * p + i] = v;
            }
        }
    }

    /// `log det P`, or `None` if the shape lost definiteness.
    pub fn log_det(&self) -> Option<f64> {
        let m = SymMatrix::from_rows(&self.shape.chunks(self.p.max(1)).map(|r| r.to_vec()).collect::<Vec<_>>());
        let l = cholesky(&m)?;
        Some((0..self.p).map(|i| 2.0 * l[i * self.p + i].ln()).sum())
    }

    fn most_violated(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for (k, &c) in self.center.iter().enumerate() {
            let (v, dir) = if c > 1.0 { (c - 1.0, 1.0) } else { (-c, -1.0) };
            if v > 0.0 && best.is_none_or(|b| v > b.1) {
                best = Some((k, v, dir));
            }
        }
        best.map(|(k, _, d)| (k, d))
    }
}

/// Per-step record of an ellipsoid run on the unreduced function.
pub struct EllipsoidRun {
    /// Best `f(c_t)` over feasible centers so far, one entry per step.
    pub best_value: Vec<f64>,
    pub log_det: Vec<f64>,
}

pub(crate) struct RunInfo {
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) fn run(g: &Oracle, gap_tol: f64, rec: &mut Recorder, mut on_step: impl FnMut(f64, &EllipsoidState)) -> RunInfo {
    let p = g.len();
    let mut e = EllipsoidState::unit_cube(p);
    let mut avg = Average::new(p);
    let mut best = f64::INFINITY;
    let mut t = 0;
    loop {
        let z = match e.most_violated() {
            Some((k, dir)) => {
                let mut z = vec![0.0; p];
                z[k] = dir;
                z
            }
            None => {
                let order = Ordering::decreasing(&e.center);
                let (s, chain) = greedy_vertex(g, &order);
                rec.prefixes(order.as_slice(), &chain);
                best = best.min(dot(&e.center, &s));
                avg.push(&s, &order);
                rec.dual(&avg.s, || avg.base());
                rec.dual(&s, || BaseVector { s: s.clone(), support: vec![(order.clone(), 1.0)] });
                s
            }
        };
        rec.row(t);
        on_step(best, &e);
        if rec.gap() <= gap_tol || z.iter().all(|&v| v == 0.0) {
            return RunInfo { iterations: t, converged: rec.gap() <= gap_tol };
        }
        if rec.exhausted(t + 1) {
            return RunInfo { iterations: t, converged: false };
        }
        t += 1;
        e.cut(&z);
    }
}
