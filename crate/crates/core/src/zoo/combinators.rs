//! Operations that preserve submodularity.

use std::sync::Arc;

use crate::error::{precondition, Result};
use crate::oracle::{CachePolicy, Oracle, SetFunction, SfmHandle};
use crate::polyhedra::{exhaustive_min_minus_modular, is_non_decreasing};
use crate::set::Subset;
use crate::zoo::concave::{Concave, ConcaveSpec};

/// Inner minimizations over at most this many elements are done by enumeration.
pub const INNER_BRUTE_FORCE_MAX: usize = 16;

/// `F(A) = z(A)`.
pub struct Modular {
    z: Vec<f64>,
}

impl Modular {
    pub fn new(z: Vec<f64>) -> Self {
        Modular { z }
    }
}

impl SetFunction for Modular {
    fn size(&self) -> usize {
        self.z.len()
    }
    fn value(&self, set: &Subset) -> f64 {
        set.sum(&self.z)
    }
    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        let mut acc = start.sum(&self.z);
        order
            .iter()
            .map(|&k| {
                acc += self.z[k];
                acc
            })
            .collect()
    }
    fn min_minus_modular(&self, t: &[f64]) -> Option<(Subset, f64)> {
        let d: Vec<f64> = self.z.iter().zip(t).map(|(a, b)| a - b).collect();
        let a = Subset::from_indices(d.len(), (0..d.len()).filter(|&k| d[k] <= 0.0));
        Some((a, d.iter().map(|x| x.min(0.0)).sum()))
    }
    fn minor(&self, _base: &Subset, elems: &[usize]) -> Option<Arc<dyn SetFunction>> {
        Some(Arc::new(Modular::new(elems.iter().map(|&k| self.z[k]).collect())))
    }
    fn modular_weights(&self) -> Option<Vec<f64>> {
        Some(self.z.clone())
    }
    fn name(&self) -> String {
        "modular".to_string()
    }
}

/// `G(A) = F(A) + z(A)`.
pub struct AddModular {
    f: Arc<dyn SetFunction>,
    z: Vec<f64>,
}

impl AddModular {
    pub fn new(f: Arc<dyn SetFunction>, z: Vec<f64>) -> Self {
        assert_eq!(f.size(), z.len(), "modular term length differs from ground size");
        AddModular { f, z }
    }
}

impl SetFunction for AddModular {
    fn size(&self) -> usize {
        self.z.len()
    }
    fn value(&self, set: &Subset) -> f64 {
        self.f.value(set) + set.sum(&self.z)
    }
    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        let mut acc = start.sum(&self.z);
        let mut vals = self.f.chain(start, order);
        for (v, &k) in vals.iter_mut().zip(order) {
            acc += self.z[k];
            *v += acc;
        }
        vals
    }
    fn min_minus_modular(&self, t: &[f64]) -> Option<(Subset, f64)> {
        let shifted: Vec<f64> = t.iter().zip(&self.z).map(|(a, b)| a - b).collect();
        self.f.min_minus_modular(&shifted)
    }
    fn minor(&self, base: &Subset, elems: &[usize]) -> Option<Arc<dyn SetFunction>> {
        let inner = self.f.minor(base, elems)?;
        Some(Arc::new(AddModular::new(inner, elems.iter().map(|&k| self.z[k]).collect())))
    }
    fn modular_weights(&self) -> Option<Vec<f64>> {
        let w = self.f.modular_weights()?;
        Some(w.iter().zip(&self.z).map(|(a, b)| a + b).collect())
    }
    fn name(&self) -> String {
        format!("{}+modular", self.f.name())
    }
}

/// `Σ_i F_i`.
pub struct Sum {
    p: usize,
    terms: Vec<Arc<dyn SetFunction>>,
}

impl Sum {
    pub fn new(p: usize, terms: Vec<Arc<dyn SetFunction>>) -> Result<Self> {
        if terms.iter().any(|t| t.size() != p) {
            return precondition("summands have different ground sets");
        }
        Ok(Sum { p, terms })
    }
}

impl SetFunction for Sum {
    fn size(&self) -> usize {
        self.p
    }
    fn value(&self, set: &Subset) -> f64 {
        self.terms.iter().map(|t| t.value(set)).sum()
    }
    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        let mut acc = vec![0.0; order.len()];
        for t in &self.terms {
            for (a, v) in acc.iter_mut().zip(t.chain(start, order)) {
                *a += v;
            }
        }
        acc
    }
    fn min_minus_modular(&self, z: &[f64]) -> Option<(Subset, f64)> {
        // fast only when at most one summand is not modular
        let mut shift = z.to_vec();
        let mut rest = Vec::new();
        for t in &self.terms {
            match t.modular_weights() {
                Some(w) => {
                    let off = t.value(&Subset::empty(self.p));
                    for (s, x) in shift.iter_mut().zip(&w) {
                        *s -= x;
                    }
                    rest.push(Err(off));
                }
                None => rest.push(Ok(t)),
            }
        }
        let offset: f64 = rest.iter().filter_map(|r| r.as_ref().err()).sum();
        let others: Vec<_> = rest.iter().filter_map(|r| r.as_ref().ok()).collect();
        match others.len() {
            0 => Modular::new(vec![0.0; self.p]).min_minus_modular(&shift).map(|(a, v)| (a, v + offset)),
            1 => others[0].min_minus_modular(&shift).map(|(a, v)| (a, v + offset)),
            _ => None,
        }
    }
    fn minor(&self, base: &Subset, elems: &[usize]) -> Option<Arc<dyn SetFunction>> {
        let terms = self.terms.iter().map(|t| t.minor(base, elems)).collect::<Option<Vec<_>>>()?;
        Some(Arc::new(Sum { p: elems.len(), terms }))
    }
    fn modular_weights(&self) -> Option<Vec<f64>> {
        let mut acc = vec![0.0; self.p];
        for t in &self.terms {
            for (a, w) in acc.iter_mut().zip(t.modular_weights()?) {
                *a += w;
            }
        }
        Some(acc)
    }
    fn name(&self) -> String {
        format!("sum({})", self.terms.iter().map(|t| t.name()).collect::<Vec<_>>().join(","))
    }
}

/// `λ F` with `λ >= 0`.
pub struct Scale {
    f: Arc<dyn SetFunction>,
    lambda: f64,
}

impl Scale {
    pub fn new(f: Arc<dyn SetFunction>, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return precondition(format!("scale factor must be finite and non-negative, got {lambda}"));
        }
        Ok(Scale { f, lambda })
    }
}

impl SetFunction for Scale {
    fn size(&self) -> usize {
        self.f.size()
    }
    fn value(&self, set: &Subset) -> f64 {
        self.lambda * self.f.value(set)
    }
    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        self.f.chain(start, order).into_iter().map(|v| self.lambda * v).collect()
    }
    fn min_minus_modular(&self, z: &[f64]) -> Option<(Subset, f64)> {
        if self.lambda == 0.0 {
            return Modular::new(vec![0.0; z.len()]).min_minus_modular(z);
        }
        let zs: Vec<f64> = z.iter().map(|x| x / self.lambda).collect();
        self.f.min_minus_modular(&zs).map(|(a, v)| (a, self.lambda * v))
    }
    fn minor(&self, base: &Subset, elems: &[usize]) -> Option<Arc<dyn SetFunction>> {
        let inner = self.f.minor(base, elems)?;
        Some(Arc::new(Scale { f: inner, lambda: self.lambda }))
    }
    fn modular_weights(&self) -> Option<Vec<f64>> {
        Some(self.f.modular_weights()?.into_iter().map(|w| self.lambda * w).collect())
    }
    fn name(&self) -> String {
        format!("scale({})", self.f.name())
    }
}

/// `G(A) = F(A) + F(V∖A) - F(V)`.
pub struct Symmetrize {
    f: Arc<dyn SetFunction>,
    full: f64,
}

impl Symmetrize {
    pub fn new(f: Arc<dyn SetFunction>) -> Self {
        let full = f.value(&Subset::full(f.size()));
        Symmetrize { f, full }
    }
}

impl SetFunction for Symmetrize {
    fn size(&self) -> usize {
        self.f.size()
    }
    fn value(&self, set: &Subset) -> f64 {
        self.f.value(set) + self.f.value(&set.complement()) - self.full
    }
    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        let n = order.len();
        if n == 0 {
            return Vec::new();
        }
        let forward = self.f.chain(start, order);
        // complements of start ∪ {o_1..o_k} are the prefixes of the reversed order
        let mut last = start.complement();
        for &k in order {
            last.remove(k);
        }
        let rev: Vec<usize> = order[1..].iter().rev().copied().collect();
        let mut back = vec![self.f.value(&last)];
        back.extend(self.f.chain(&last, &rev));
        (0..n).map(|k| forward[k] + back[n - 1 - k] - self.full).collect()
    }
    fn name(&self) -> String {
        format!("symmetrize({})", self.f.name())
    }
}

fn inner_min(f: &Oracle, z: &[f64], handle: Option<&Arc<dyn SfmHandle>>) -> f64 {
    if f.len() <= INNER_BRUTE_FORCE_MAX {
        return exhaustive_min_minus_modular(f, z).map(|r| r.value).unwrap_or(f64::NAN);
    }
    match handle {
        Some(h) => h.min_minus_modular(f, z).map(|r| r.1).unwrap_or(f64::NAN),
        None => f64::NAN,
    }
}

/// `G(A) = min_{B⊆A} F(B) + z(A∖B)`.
pub struct ConvolveModular {
    f: Oracle,
    z: Vec<f64>,
    handle: Option<Arc<dyn SfmHandle>>,
}

impl SetFunction for ConvolveModular {
    fn size(&self) -> usize {
        self.f.len()
    }
    fn value(&self, set: &Subset) -> f64 {
        if set.is_empty() {
            return 0.0;
        }
        let elems = set.to_vec();
        let zr: Vec<f64> = elems.iter().map(|&k| self.z[k]).collect();
        set.sum(&self.z) + inner_min(&self.f.restrict(set), &zr, self.handle.as_ref())
    }
    fn name(&self) -> String {
        format!("convolve({})", self.f.name())
    }
}

/// `G(A) = min_{B⊇A} F(B) - min_B F(B)`.
pub struct Monotonize {
    f: Oracle,
    min_all: f64,
    handle: Option<Arc<dyn SfmHandle>>,
}

impl SetFunction for Monotonize {
    fn size(&self) -> usize {
        self.f.len()
    }
    fn value(&self, set: &Subset) -> f64 {
        let c = self.f.contract(set);
        let m = if c.is_empty() { 0.0 } else { inner_min(&c, &vec![0.0; c.len()], self.handle.as_ref()) };
        self.f.eval(set) + m - self.min_all
    }
    fn name(&self) -> String {
        format!("monotonize({})", self.f.name())
    }
}

/// `A ↦ φ(F(A))` for non-decreasing `F` and concave non-decreasing `φ`.
pub struct ConcaveCompose {
    f: Oracle,
    phi: Concave,
}

impl SetFunction for ConcaveCompose {
    fn size(&self) -> usize {
        self.f.len()
    }
    fn value(&self, set: &Subset) -> f64 {
        self.phi.eval(self.f.eval(set))
    }
    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        self.f.chain(start, order).into_iter().map(|v| self.phi.eval(v)).collect()
    }
    fn name(&self) -> String {
        format!("concave({})", self.f.name())
    }
}

/// `F(A) = min_{B⊆W} G(A ∪ B) - min_{B⊆W} G(B)` for `G` on `V ∪ W`.
pub struct PartialMin {
    g: Oracle,
    p: usize,
    w: Vec<usize>,
    handle: Option<Arc<dyn SfmHandle>>,
}

impl SetFunction for PartialMin {
    fn size(&self) -> usize {
        self.p
    }
    fn value(&self, set: &Subset) -> f64 {
        let q = self.g.len();
        let lifted = Subset::from_indices(q, set.iter());
        let c = self.g.minor(&lifted, &self.w);
        self.g.eval(&lifted) + inner_min(&c, &vec![0.0; self.w.len()], self.handle.as_ref())
    }
    fn name(&self) -> String {
        format!("partial_min({})", self.g.name())
    }
}

fn arc(f: &Oracle) -> Arc<dyn SetFunction> {
    Arc::new(f.clone())
}

/// `A ↦ z(A)`.
pub fn modular(z: Vec<f64>) -> Oracle {
    Oracle::new(Modular::new(z))
}

/// Restriction `F_A` on the elements of `a`.
pub fn restrict(f: &Oracle, a: &Subset) -> Oracle {
    f.restrict(a)
}

/// Contraction `F^A(B) = F(A ∪ B) - F(A)` on `V∖A`.
pub fn contract(f: &Oracle, a: &Subset) -> Oracle {
    f.contract(a)
}

pub fn sum(terms: &[Oracle]) -> Result<Oracle> {
    let p = match terms.first() {
        Some(t) => t.len(),
        None => return precondition("sum of no functions"),
    };
    Ok(Oracle::with_policy(Sum::new(p, terms.iter().map(arc).collect())?, CachePolicy::Disabled))
}

pub fn scale(f: &Oracle, lambda: f64) -> Result<Oracle> {
    Ok(Oracle::with_policy(Scale::new(arc(f), lambda)?, CachePolicy::Disabled))
}

/// `A ↦ F(A) + z(A)`.
pub fn add_modular(f: &Oracle, z: &[f64]) -> Oracle {
    f.add_modular(z)
}

pub fn symmetrize(f: &Oracle) -> Oracle {
    Oracle::with_policy(Symmetrize::new(arc(f)), CachePolicy::Disabled)
}

fn needs_handle(size: usize, handle: &Option<Arc<dyn SfmHandle>>) -> Result<()> {
    if size > INNER_BRUTE_FORCE_MAX && handle.is_none() {
        return precondition(format!(
            "inner minimization over {size} > {INNER_BRUTE_FORCE_MAX} elements needs a solver handle"
        ));
    }
    Ok(())
}

pub fn convolve_modular(f: &Oracle, z: &[f64], handle: Option<Arc<dyn SfmHandle>>) -> Result<Oracle> {
    if z.len() != f.len() {
        return precondition("modular term length differs from ground size");
    }
    needs_handle(f.len(), &handle)?;
    Ok(Oracle::new(ConvolveModular { f: f.clone(), z: z.to_vec(), handle }))
}

pub fn monotonize(f: &Oracle, handle: Option<Arc<dyn SfmHandle>>) -> Result<Oracle> {
    needs_handle(f.len(), &handle)?;
    let min_all = inner_min(f, &vec![0.0; f.len()], handle.as_ref());
    Ok(Oracle::new(Monotonize { f: f.clone(), min_all, handle }))
}

/// `A ↦ φ(F(A))`. Monotonicity of `F` is verified exhaustively when
/// `p <= 12`; larger inputs require `trusted = true`.
pub fn concave_compose(f: &Oracle, phi: ConcaveSpec, trusted: bool) -> Result<Oracle> {
    if f.len() <= 12 {
        if !is_non_decreasing(f)? {
            return precondition("concave composition needs a non-decreasing inner function");
        }
    } else if !trusted {
        return precondition("monotonicity cannot be verified for p > 12; pass trusted = true");
    }
    Ok(Oracle::new(ConcaveCompose { f: f.clone(), phi: Concave::new(phi)? }))
}

/// Partial minimum over the last `g.len() - p` elements of `g`.
pub fn partial_min(g: &Oracle, p: usize, handle: Option<Arc<dyn SfmHandle>>) -> Result<Oracle> {
    if p > g.len() {
        return precondition("partial minimum keeps more elements than the ground set has");
    }
    let w: Vec<usize> = (p..g.len()).collect();
    needs_handle(w.len(), &handle)?;
    Ok(Oracle::new(PartialMin { g: g.clone(), p, w, handle }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::FnSetFunction;

    fn any_nonempty(p: usize) -> Oracle {
        Oracle::new(FnSetFunction::new(p, |a: &Subset| if a.is_empty() { 0.0 } else { 1.0 }))
    }

    #[test]
    fn convolution_of_indicator() {
        let g = convolve_modular(&any_nonempty(4), &[0.2; 4], None).unwrap();
        assert!((g.eval(&Subset::from_indices(4, [0, 1, 2])) - 0.6).abs() < 1e-12);
        assert!((g.eval(&Subset::full(4)) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn symmetrized_cardinality_is_zero() {
        let f = Oracle::new(FnSetFunction::new(5, |a: &Subset| a.len() as f64));
        let g = symmetrize(&f);
        assert_eq!(g.eval(&Subset::from_indices(5, [1, 3])), 0.0);
        assert_eq!(g.chain(&Subset::empty(5), &[4, 2, 0]), vec![0.0; 3]);
    }

    #[test]
    fn symmetrize_chain_matches_values() {
        let f = Oracle::new(FnSetFunction::new(5, |a: &Subset| (a.sum(&[1.0, 2.0, 0.5, 3.0, 1.5])).sqrt()));
        let g = symmetrize(&f);
        let start = Subset::from_indices(5, [1]);
        let chain = g.chain(&start, &[3, 0, 4]);
        let mut cur = start.clone();
        for (k, v) in [3, 0, 4].into_iter().zip(chain) {
            cur.insert(k);
            assert!((g.eval(&cur) - v).abs() < 1e-14);
        }
    }

    #[test]
    fn sum_with_modular_keeps_fast_path() {
        let m = modular(vec![1.0, -2.0, 0.5]);
        let s = sum(&[m.clone(), m]).unwrap();
        let (a, v) = s.min_minus_modular(&[0.0; 3]).unwrap();
        assert_eq!(a.to_vec(), vec![1]);
        assert_eq!(v, -4.0);
    }

    #[test]
    fn monotonize_is_non_decreasing() {
        let f = Oracle::new(FnSetFunction::new(3, |a: &Subset| {
            let k = a.len() as f64;
            k * (3.0 - k) - 2.0 * a.contains(0) as u8 as f64
        }));
        let g = monotonize(&f, None).unwrap();
        assert!(is_non_decreasing(&g).unwrap());
        let fmin = crate::set::all_subsets(3).map(|a| f.eval(&a)).fold(f64::INFINITY, f64::min);
        for a in crate::set::all_subsets(3) {
            assert!(g.eval(&a) <= f.eval(&a) - fmin + 1e-12);
        }
    }
}
