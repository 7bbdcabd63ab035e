//! Wolfe's minimum-norm-point algorithm on the base polytope.

use crate::linalg::dot;
use crate::lovasz::{greedy_vertex, BaseVector};
use crate::oracle::Oracle;
use crate::set::Ordering;

use super::recorder::Recorder;

/// Final state of a min-norm-point run.
pub struct MnpRun {
    pub base: BaseVector,
    pub fw_gap: f64,
    pub iterations: usize,
    pub converged: bool,
    /// The last vertex was dropped for conditioning.
    pub ill_conditioned: bool,
    /// `½‖y_t‖²` after each major cycle.
    pub objective: Vec<f64>,
}

/// Corral of affinely independent vertices with the upper-triangular factor
/// `R` of `M = 11ᵀ + XᵀX`.
struct Corral {
    points: Vec<Vec<f64>>,
    orders: Vec<Ordering>,
    lambda: Vec<f64>,
    r: Vec<Vec<f64>>,
}

impl Corral {
    fn new(x: Vec<f64>, o: Ordering) -> Self {
        let d = (1.0 + dot(&x, &x)).sqrt();
        Corral { points: vec![x], orders: vec![o], lambda: vec![1.0], r: vec![vec![d]] }
    }

    fn len(&self) -> usize {
        self.points.len()
    }

    fn max_diag(&self) -> f64 {
        (0..self.len()).map(|i| self.r[i][i] * self.r[i][i]).fold(0.0, f64::max)
    }

    /// Appends `x` unless its pivot is too small relative to the diagonal.
    fn push(&mut self, x: Vec<f64>, o: Ordering) -> bool {
        let k = self.len();
        let m: Vec<f64> = self.points.iter().map(|y| 1.0 + dot(y, &x)).collect();
        let mut col = vec![0.0; k];
        for i in 0..k {
            let mut v = m[i];
            for j in 0..i {
                v -= self.r[j][i] * col[j];
            }
            col[i] = v / self.r[i][i];
        }
        let diag = 1.0 + dot(&x, &x);
        let rho2 = diag - dot(&col, &col);
        if rho2 <= 1e-12 * self.max_diag().max(diag) {
            return false;
        }
        for (row, c) in self.r.iter_mut().zip(&col) {
            row.push(*c);
        }
        let mut last = vec![0.0; k + 1];
        last[k] = rho2.sqrt();
        self.r.push(last);
        self.points.push(x);
        self.orders.push(o);
        self.lambda.push(0.0);
        true
    }

    fn remove(&mut self, i: usize) {
        self.points.remove(i);
        self.orders.remove(i);
        self.lambda.remove(i);
        for row in &mut self.r {
            row.remove(i);
        }
        let k = self.len();
        for j in i..k {
            let a = self.r[j][j];
            let b = self.r[j + 1][j];
            let h = a.hypot(b);
            if h == 0.0 {
                continue;
            }
            let (c, s) = (a / h, b / h);
            for col in j..k {
                let u = self.r[j][col];
                let v = self.r[j + 1][col];
                self.r[j][col] = c * u + s * v;
                self.r[j + 1][col] = -s * u + c * v;
            }
        }
        self.r.pop();
    }

    /// Affine minimizer weights `α ∝ M⁻¹1`.
    fn affine(&self) -> Vec<f64> {
        let k = self.len();
        let mut u = vec![0.0; k];
        for i in 0..k {
            let mut v = 1.0;
            for j in 0..i {
                v -= self.r[j][i] * u[j];
            }
            u[i] = v / self.r[i][i];
        }
        let mut a = vec![0.0; k];
        for i in (0..k).rev() {
            let mut v = u[i];
            for j in i + 1..k {
                v -= self.r[i][j] * a[j];
            }
            a[i] = v / self.r[i][i];
        }
        let total: f64 = a.iter().sum();
        a.iter().map(|x| x / total).collect()
    }

    fn point(&self) -> Vec<f64> {
        let mut y = vec![0.0; self.points[0].len()];
        for (x, &l) in self.points.iter().zip(&self.lambda) {
            for (yi, xi) in y.iter_mut().zip(x) {
                *yi += l * xi;
            }
        }
        y
    }

    fn base(&self, y: &[f64]) -> BaseVector {
        BaseVector { s: y.to_vec(), support: self.orders.iter().cloned().zip(self.lambda.iter().copied()).collect() }
    }

    /// Minor cycles until the affine minimizer lies in the relative interior.
    fn minor_cycles(&mut self) {
        loop {
            let alpha = self.affine();
            if alpha.iter().all(|&a| a > 1e-14) {
                self.lambda = alpha;
                return;
            }
            let mut theta = 1.0f64;
            let mut arg = 0;
            for (i, (&l, &a)) in self.lambda.iter().zip(&alpha).enumerate() {
                if a <= 1e-14 {
                    let t = if l - a > 0.0 { l / (l - a) } else { 0.0 };
                    if t < theta {
                        theta = t;
                        arg = i;
                    }
                }
            }
            for (l, a) in self.lambda.iter_mut().zip(&alpha) {
                *l = ((1.0 - theta) * *l + theta * a).max(0.0);
            }
            self.lambda[arg] = 0.0;
            let mut i = 0;
            while i < self.len() {
                if self.lambda[i] <= 1e-15 && self.len() > 1 {
                    self.remove(i);
                } else {
                    i += 1;
                }
            }
            let total: f64 = self.lambda.iter().sum();
            for l in &mut self.lambda {
                *l /= total;
            }
            if self.len() == 1 {
                self.lambda[0] = 1.0;
                return;
            }
        }
    }
}

/// Projects 0 onto `B(g)`; candidates and certificates are offered to `rec`
/// after every major cycle. Stops when `yᵀy - min_{q∈B} yᵀq <= tol` or when
/// the recorder's certified gap is at most `gap_tol`.
pub(crate) fn run(g: &Oracle, tol: f64, gap_tol: f64, rec: &mut Recorder, observe: &mut dyn FnMut(&[f64])) -> MnpRun {
    let p = g.len();
    let o = Ordering::identity(p);
    let (x0, chain) = greedy_vertex(g, &o);
    rec.prefixes(o.as_slice(), &chain);
    let mut corral = Corral::new(x0, o);
    let mut y = corral.point();
    let mut objective = Vec::new();
    let mut iter = 0;
    let mut ill = false;
    let mut last_added: Option<Ordering> = None;
    loop {
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        let order = Ordering::decreasing(&neg);
        let (q, chain) = greedy_vertex(g, &order);
        rec.prefixes(order.as_slice(), &chain);
        rec.dual(&y, || corral.base(&y));
        rec.row(iter);
        objective.push(0.5 * dot(&y, &y));
        observe(&y);
        let fw_gap = dot(&y, &y) - dot(&y, &q);
        let scale = 1.0 + dot(&y, &y);
        if fw_gap <= tol * scale.max(1.0) || rec.gap() <= gap_tol {
            return MnpRun { base: corral.base(&y), fw_gap, iterations: iter, converged: true, ill_conditioned: ill, objective };
        }
        if ill || rec.exhausted(iter + 1) || last_added.as_ref() == Some(&order) || corral.orders.contains(&order) {
            return MnpRun { base: corral.base(&y), fw_gap, iterations: iter, converged: false, ill_conditioned: ill, objective };
        }
        iter += 1;
        if !corral.push(q, order.clone()) {
            ill = true;
            continue;
        }
        last_added = Some(order);
        corral.minor_cycles();
        y = corral.point();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn givens_removal_keeps_factorization() {
        let pts = vec![vec![1.0, 0.0, 2.0], vec![0.0, 1.0, -1.0], vec![3.0, 1.0, 0.5], vec![-1.0, 2.0, 0.0]];
        let mut c = Corral::new(pts[0].clone(), Ordering::identity(3));
        for x in &pts[1..] {
            assert!(c.push(x.clone(), Ordering::identity(3)));
        }
        c.remove(1);
        let k = c.len();
        for i in 0..k {
            for j in 0..k {
                let m: f64 = (0..k).map(|l| c.r[l][i] * c.r[l][j]).sum();
                let want = 1.0 + dot(&c.points[i], &c.points[j]);
                assert!((m - want).abs() < 1e-10);
            }
            for j in 0..i {
                assert!(c.r[i][j].abs() < 1e-12);
            }
        }
    }
}
