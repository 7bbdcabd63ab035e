//! Set-function oracles.
//!
//! [`SetFunction`] is the trait implemented by concrete functions. [`Oracle`]
//! wraps a function, normalizes it so that `F(∅) = 0`, memoizes values and
//! counts evaluations. All algorithms in the crate take an `&Oracle`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

use crate::set::{GroundSet, Subset};

/// A real-valued function on the subsets of `{0, .., p-1}`.
pub trait SetFunction: Send + Sync {
    /// Ground-set size `p`.
    fn size(&self) -> usize;

    /// `F(A)`. Need not satisfy `F(∅) = 0`.
    fn value(&self, set: &Subset) -> f64;

    /// Values `F(start ∪ {o_1, .., o_k})` for `k = 1, .., order.len()`.
    ///
    /// Implementations override this when prefix values can be updated
    /// incrementally.
    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        let mut cur = start.clone();
        order
            .iter()
            .map(|&k| {
                cur.insert(k);
                self.value(&cur)
            })
            .collect()
    }

    /// Exact maximal minimizer of `F(A) - z(A)` with its value, when the
    /// function admits a combinatorial algorithm for it.
    fn min_minus_modular(&self, _z: &[f64]) -> Option<(Subset, f64)> {
        None
    }

    /// Structured form of `B ↦ F(base ∪ elems[B]) - F(base)` on
    /// `{0, .., elems.len()-1}`, when the family is closed under it.
    /// `elems` must be disjoint from `base`.
    fn minor(&self, _base: &Subset, _elems: &[usize]) -> Option<Arc<dyn SetFunction>> {
        None
    }

    /// The weights `z` when `F(A) = z(A) + F(∅)` is modular.
    fn modular_weights(&self) -> Option<Vec<f64>> {
        None
    }

    fn name(&self) -> String {
        "custom".to_string()
    }
}

impl<F: SetFunction + ?Sized> SetFunction for Arc<F> {
    fn size(&self) -> usize {
        (**self).size()
    }
    fn value(&self, set: &Subset) -> f64 {
        (**self).value(set)
    }
    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        (**self).chain(start, order)
    }
    fn min_minus_modular(&self, z: &[f64]) -> Option<(Subset, f64)> {
        (**self).min_minus_modular(z)
    }
    fn minor(&self, base: &Subset, elems: &[usize]) -> Option<Arc<dyn SetFunction>> {
        (**self).minor(base, elems)
    }
    fn modular_weights(&self) -> Option<Vec<f64>> {
        (**self).modular_weights()
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

/// Exact solver for `min_A F(A) - z(A)`, supplied to algorithms that need
/// an inner minimization (divide-and-conquer, difference of submodular
/// functions, some combinators).
pub trait SfmHandle: Send + Sync {
    /// A minimizer of `F(A) - z(A)` (the maximal one when the solver can
    /// identify it) and the minimum value.
    fn min_minus_modular(&self, f: &Oracle, z: &[f64]) -> crate::Result<(Subset, f64)>;
}

/// Function built from a closure, mostly for tests and quick experiments.
pub struct FnSetFunction<G> {
    p: usize,
    f: G,
}

impl<G: Fn(&Subset) -> f64 + Send + Sync> FnSetFunction<G> {
    pub fn new(p: usize, f: G) -> Self {
        FnSetFunction { p, f }
    }
}

impl<G: Fn(&Subset) -> f64 + Send + Sync> SetFunction for FnSetFunction<G> {
    fn size(&self) -> usize {
        self.p
    }
    fn value(&self, set: &Subset) -> f64 {
        (self.f)(set)
    }
}

/// Memoization policy of an [`Oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CachePolicy {
    /// Every distinct subset is stored; `calls` counts distinct subsets.
    #[default]
    Unbounded,
    /// Nothing is stored; `calls` counts every evaluation.
    Disabled,
}

struct Inner {
    func: Arc<dyn SetFunction>,
    ground: GroundSet,
    offset: f64,
    cache: Option<Mutex<HashMap<Subset, f64>>>,
    calls: AtomicU64,
}

/// Normalized, memoized and counted view of a [`SetFunction`].
///
/// Cloning is cheap and clones share the cache and the counter.
#[derive(Clone)]
pub struct Oracle(Arc<Inner>);

impl Oracle {
    pub fn new(func: impl SetFunction + 'static) -> Self {
        Oracle::from_arc(Arc::new(func), CachePolicy::Unbounded)
    }

    pub fn with_policy(func: impl SetFunction + 'static, policy: CachePolicy) -> Self {
        Oracle::from_arc(Arc::new(func), policy)
    }

    pub fn from_arc(func: Arc<dyn SetFunction>, policy: CachePolicy) -> Self {
        let p = func.size();
        let offset = func.value(&Subset::empty(p));
        let cache = match policy {
            CachePolicy::Unbounded => Some(Mutex::new(HashMap::new())),
            CachePolicy::Disabled => None,
        };
        Oracle(Arc::new(Inner { func, ground: GroundSet::new(p), offset, cache, calls: AtomicU64::new(0) }))
    }

    /// Replaces the ground-set labels.
    pub fn with_ground(self, ground: GroundSet) -> Self {
        assert_eq!(ground.len(), self.len());
        let inner = Arc::try_unwrap(self.0).unwrap_or_else(|_| panic!("with_ground on a shared oracle"));
        Oracle(Arc::new(Inner { ground, ..inner }))
    }

    pub fn ground(&self) -> &GroundSet {
        &self.0.ground
    }

    pub fn len(&self) -> usize {
        self.0.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn func(&self) -> &Arc<dyn SetFunction> {
        &self.0.func
    }

    /// Raw `F(∅)` subtracted by the normalization.
    pub fn offset(&self) -> f64 {
        self.0.offset
    }

    pub fn calls(&self) -> u64 {
        self.0.calls.load(AtomicOrdering::Relaxed)
    }

    pub fn reset_calls(&self) {
        self.0.calls.store(0, AtomicOrdering::Relaxed);
    }

    pub fn cache_policy(&self) -> CachePolicy {
        if self.0.cache.is_some() {
            CachePolicy::Unbounded
        } else {
            CachePolicy::Disabled
        }
    }

    fn count(&self, n: u64) {
        self.0.calls.fetch_add(n, AtomicOrdering::Relaxed);
    }

    /// Normalized value `F(A) - F(∅)`.
    pub fn eval(&self, set: &Subset) -> f64 {
        debug_assert_eq!(set.ground_size(), self.len());
        if set.is_empty() {
            return 0.0;
        }
        if let Some(cache) = &self.0.cache {
            if let Some(&v) = cache.lock().unwrap().get(set) {
                return v;
            }
            let v = self.0.func.value(set) - self.0.offset;
            self.count(1);
            cache.lock().unwrap().insert(set.clone(), v);
            v
        } else {
            self.count(1);
            self.0.func.value(set) - self.0.offset
        }
    }

    /// Evaluates without storing the result. Counted as one call.
    pub fn eval_transient(&self, set: &Subset) -> f64 {
        if set.is_empty() {
            return 0.0;
        }
        if let Some(cache) = &self.0.cache {
            if let Some(&v) = cache.lock().unwrap().get(set) {
                return v;
            }
        }
        self.count(1);
        self.0.func.value(set) - self.0.offset
    }

    /// Normalized values along `start ∪ {o_1, .., o_k}`.
    pub fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        let off = self.0.offset;
        let mut vals = self.0.func.chain(start, order);
        for v in vals.iter_mut() {
            *v -= off;
        }
        match &self.0.cache {
            None => self.count(order.len() as u64),
            Some(cache) => {
                let mut cache = cache.lock().unwrap();
                let mut cur = start.clone();
                let mut fresh = 0;
                for (i, &k) in order.iter().enumerate() {
                    cur.insert(k);
                    match cache.get(&cur) {
                        Some(&v) => vals[i] = v,
                        None => {
                            fresh += 1;
                            cache.insert(cur.clone(), vals[i]);
                        }
                    }
                }
                self.count(fresh);
            }
        }
        vals
    }

    /// Exact maximal minimizer of `F(A) - z(A)` (normalized value), if the
    /// function provides a combinatorial fast path.
    pub fn min_minus_modular(&self, z: &[f64]) -> Option<(Subset, f64)> {
        self.0.func.min_minus_modular(z).map(|(a, v)| (a, v - self.0.offset))
    }

    pub fn has_fast_path(&self) -> bool {
        let p = self.len();
        p > 0 && self.0.func.min_minus_modular(&vec![0.0; p]).is_some()
    }

    /// `B ↦ F(base ∪ elems[B]) - F(base)`, evaluated through this oracle.
    pub fn minor(&self, base: &Subset, elems: &[usize]) -> Oracle {
        let base_value = self.eval(base);
        let fast = self.0.func.minor(base, elems);
        let m = Minor { parent: self.clone(), base: base.clone(), elems: elems.to_vec(), base_value, fast };
        Oracle::from_arc(Arc::new(m), CachePolicy::Disabled)
    }

    /// Restriction `F_A` on the elements of `a` (in increasing order).
    pub fn restrict(&self, a: &Subset) -> Oracle {
        self.minor(&Subset::empty(self.len()), &a.to_vec())
    }

    /// Contraction `F^A(B) = F(A ∪ B) - F(A)` on the complement of `a`.
    pub fn contract(&self, a: &Subset) -> Oracle {
        self.minor(a, &a.complement().to_vec())
    }

    /// `A ↦ F(A) + z(A)`.
    pub fn add_modular(&self, z: &[f64]) -> Oracle {
        assert_eq!(z.len(), self.len());
        let f: Arc<dyn SetFunction> = Arc::new(self.clone());
        Oracle::from_arc(Arc::new(crate::zoo::AddModular::new(f, z.to_vec())), CachePolicy::Disabled)
    }
}

impl SetFunction for Oracle {
    fn size(&self) -> usize {
        self.len()
    }
    fn value(&self, set: &Subset) -> f64 {
        self.eval(set)
    }
    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        Oracle::chain(self, start, order)
    }
    fn min_minus_modular(&self, z: &[f64]) -> Option<(Subset, f64)> {
        Oracle::min_minus_modular(self, z)
    }
    fn minor(&self, base: &Subset, elems: &[usize]) -> Option<Arc<dyn SetFunction>> {
        self.0.func.minor(base, elems)
    }
    fn modular_weights(&self) -> Option<Vec<f64>> {
        self.0.func.modular_weights()
    }
    fn name(&self) -> String {
        self.0.func.name()
    }
}

struct Minor {
    parent: Oracle,
    base: Subset,
    elems: Vec<usize>,
    base_value: f64,
    fast: Option<Arc<dyn SetFunction>>,
}

impl Minor {
    fn lift(&self, set: &Subset) -> Subset {
        let mut s = self.base.clone();
        for k in set.iter() {
            s.insert(self.elems[k]);
        }
        s
    }
}

impl SetFunction for Minor {
    fn size(&self) -> usize {
        self.elems.len()
    }
    fn value(&self, set: &Subset) -> f64 {
        self.parent.eval(&self.lift(set)) - self.base_value
    }
    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        let lifted: Vec<usize> = order.iter().map(|&k| self.elems[k]).collect();
        let mut vals = self.parent.chain(&self.lift(start), &lifted);
        for v in vals.iter_mut() {
            *v -= self.base_value;
        }
        vals
    }
    fn min_minus_modular(&self, z: &[f64]) -> Option<(Subset, f64)> {
        self.fast.as_ref().and_then(|f| f.min_minus_modular(z))
    }
    fn minor(&self, base: &Subset, elems: &[usize]) -> Option<Arc<dyn SetFunction>> {
        self.fast.as_ref().and_then(|f| f.minor(base, elems))
    }
    fn modular_weights(&self) -> Option<Vec<f64>> {
        self.fast.as_ref().and_then(|f| f.modular_weights())
    }
    fn name(&self) -> String {
        format!("minor({})", self.parent.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq() -> Oracle {
        Oracle::new(FnSetFunction::new(4, |a: &Subset| (a.len() as f64).powi(2) + 3.0))
    }

    #[test]
    fn normalizes_and_counts_distinct() {
        let f = sq();
        assert_eq!(f.offset(), 3.0);
        let a = Subset::from_indices(4, [1, 2]);
        assert_eq!(f.eval(&a), 4.0);
        assert_eq!(f.eval(&a), 4.0);
        assert_eq!(f.calls(), 1);
        assert_eq!(f.eval(&Subset::empty(4)), 0.0);
        let vals = f.chain(&Subset::empty(4), &[1, 2, 0]);
        assert_eq!(vals, vec![1.0, 4.0, 9.0]);
        assert_eq!(f.calls(), 3);
    }

    #[test]
    fn disabled_cache_counts_every_call() {
        let f = Oracle::with_policy(FnSetFunction::new(3, |a: &Subset| a.len() as f64), CachePolicy::Disabled);
        let a = Subset::full(3);
        f.eval(&a);
        f.eval(&a);
        assert_eq!(f.calls(), 2);
    }

    #[test]
    fn minors_compose() {
        let f = sq();
        let a = Subset::from_indices(4, [0, 3]);
        let r = f.restrict(&a);
        assert_eq!(r.len(), 2);
        assert_eq!(r.eval(&Subset::full(2)), 4.0);
        let c = f.contract(&a);
        // F^A({x}) = 9 - 4
        assert_eq!(c.eval(&Subset::from_indices(2, [1])), 5.0);
        assert_eq!(c.chain(&Subset::empty(2), &[1, 0]), vec![5.0, 12.0]);
    }
}
