//! Search-space reduction from singleton tests, and lifting of reduced
//! solutions back to the full ground set.

use crate::lovasz::BaseVector;
use crate::oracle::Oracle;
use crate::set::{Ordering, Subset};

/// Outcome of [`reduce`]: every minimizer `A` of `F` satisfies
/// `a_min ⊆ A ⊆ a_max`, and `reduced` is `B ↦ F(a_min ∪ B) - F(a_min)` on
/// `free = a_max ∖ a_min` (increasing order).
pub struct Reduction {
    pub a_min: Subset,
    pub a_max: Subset,
    pub free: Vec<usize>,
    pub reduced: Oracle,
    pub f_amin: f64,
    /// Elements of `a_min` in the order they were fixed.
    min_order: Vec<usize>,
    /// Elements outside `a_max`, last removed first.
    out_order: Vec<usize>,
    /// Greedy components on `a_min` and outside `a_max`, all `<= 0` and `>= 0`.
    s_fixed: Vec<(usize, f64)>,
    dual_const: f64,
}

/// Restriction preprocessing: repeatedly fixes elements with
/// `F(A_min ∪ {k}) < F(A_min)` into the solution and removes elements with
/// `F(A_max) > F(A_max ∖ {k})`.
pub fn reduce(f: &Oracle) -> Reduction {
    let p = f.len();
    let full = Subset::full(p);
    let tol = 1e-12 * (1.0 + f.eval(&full).abs());
    let mut a_min = Subset::empty(p);
    let mut a_max = full;
    let mut min_order = Vec::new();
    let mut removed = Vec::new();
    let mut f_min = 0.0;
    loop {
        let free: Vec<usize> = a_max.difference(&a_min).to_vec();
        if free.is_empty() {
            break;
        }
        let add: Vec<usize> = free.iter().copied().filter(|&k| f.eval(&a_min.with(k)) - f_min < -tol).collect();
        for &k in &add {
            a_min.insert(k);
        }
        min_order.extend(&add);
        f_min = f.eval(&a_min);
        let free: Vec<usize> = a_max.difference(&a_min).to_vec();
        let f_max = f.eval(&a_max);
        let drop: Vec<usize> = free.iter().copied().filter(|&k| f_max - f.eval(&a_max.without(k)) > tol).collect();
        for &k in &drop {
            a_max.remove(k);
        }
        removed.extend(&drop);
        if add.is_empty() && drop.is_empty() {
            break;
        }
    }
    let free = a_max.difference(&a_min).to_vec();
    let reduced = f.minor(&a_min, &free);
    let out_order: Vec<usize> = removed.iter().rev().copied().collect();
    let mut s_fixed = Vec::with_capacity(min_order.len() + out_order.len());
    let mut prev = 0.0;
    for (&k, v) in min_order.iter().zip(f.chain(&Subset::empty(p), &min_order)) {
        s_fixed.push((k, v - prev));
        prev = v;
    }
    let mut prev = f.eval(&a_max);
    for (&k, v) in out_order.iter().zip(f.chain(&a_max, &out_order)) {
        s_fixed.push((k, v - prev));
        prev = v;
    }
    let dual_const = s_fixed.iter().map(|&(_, x)| x.min(0.0)).sum();
    Reduction { a_min, a_max, free, reduced, f_amin: f_min, min_order, out_order, s_fixed, dual_const }
}

/// `(A_min, A_max, reduced oracle)`.
pub fn restrict_search(f: &Oracle) -> (Subset, Subset, Oracle) {
    let r = reduce(f);
    (r.a_min, r.a_max, r.reduced)
}

impl Reduction {
    /// The trivial reduction with everything free.
    pub fn identity(f: &Oracle) -> Reduction {
        let p = f.len();
        Reduction {
            a_min: Subset::empty(p),
            a_max: Subset::full(p),
            free: (0..p).collect(),
            reduced: f.clone(),
            f_amin: 0.0,
            min_order: Vec::new(),
            out_order: Vec::new(),
            s_fixed: Vec::new(),
            dual_const: 0.0,
        }
    }

    pub fn ground_size(&self) -> usize {
        self.a_min.ground_size()
    }

    /// `A_min ∪ free[B]`.
    pub fn lift_set(&self, b: &Subset) -> Subset {
        let mut a = self.a_min.clone();
        for k in b.iter() {
            a.insert(self.free[k]);
        }
        a
    }

    /// Full-space value `F(A_min ∪ B)` from a reduced value.
    pub fn lift_primal(&self, reduced_value: f64) -> f64 {
        self.f_amin + reduced_value
    }

    /// Full-space `s₋(V)` of the lifted base from the reduced `s₋(V)`.
    pub fn lift_dual(&self, reduced_neg: f64) -> f64 {
        self.dual_const + reduced_neg
    }

    /// Full-space vector from a reduced one (fixed components filled in).
    pub fn lift_vector(&self, s: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ground_size()];
        for &(k, x) in &self.s_fixed {
            out[k] = x;
        }
        for (i, &k) in self.free.iter().enumerate() {
            out[k] = s[i];
        }
        out
    }

    fn lift_ordering(&self, o: &Ordering) -> Ordering {
        let mut v = Vec::with_capacity(self.ground_size());
        v.extend(&self.min_order);
        v.extend(o.as_slice().iter().map(|&i| self.free[i]));
        v.extend(&self.out_order);
        Ordering::from_vec_unchecked(v)
    }

    /// Base of `B(F)` from a base of `B(reduced)`: the fixed blocks are the
    /// greedy components of the preprocessing orders.
    pub fn lift_base(&self, b: &BaseVector) -> BaseVector {
        BaseVector {
            s: self.lift_vector(&b.s),
            support: b.support.iter().map(|(o, l)| (self.lift_ordering(o), *l)).collect(),
        }
    }

    /// The lifted base when nothing is left to optimize.
    pub fn trivial_base(&self) -> BaseVector {
        BaseVector { s: self.lift_vector(&[]), support: vec![(self.lift_ordering(&Ordering::identity(0)), 1.0)] }
    }
}
