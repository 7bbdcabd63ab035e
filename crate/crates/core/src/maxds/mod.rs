//! Maximization heuristics and difference-of-submodular minimization.

use std::cmp::Ordering as CmpOrdering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{precondition, Result};
use crate::lovasz::greedy_vertex;
use crate::oracle::{Oracle, SfmHandle};
use crate::polyhedra::is_non_decreasing;
use crate::set::{Ordering, Subset};

/// Largest ground set on which monotonicity is checked exhaustively.
pub const MONOTONE_CHECK_MAX: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct MaxResult {
    pub chosen: Subset,
    pub value: f64,
    /// `(element, change in F)` per step.
    pub trace: Vec<(usize, f64)>,
    pub converged: bool,
}

/// `1 - (1 - 1/k)^k`.
pub fn greedy_ratio(k: usize) -> f64 {
    1.0 - (1.0 - 1.0 / k as f64).powi(k as i32)
}

#[derive(PartialEq)]
struct Entry {
    bound: f64,
    k: usize,
    round: usize,
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> CmpOrdering {
        self.bound.total_cmp(&other.bound).then(other.k.cmp(&self.k))
    }
}

/// Greedy selection of at most `k` elements for non-decreasing `F`, adding
/// the element of largest gain (smallest index on ties) until `k` elements
/// are chosen or no gain is positive. With `lazy`, stale gains are kept in a
/// priority queue as upper bounds; the choices are the same.
///
/// Monotonicity is checked when `p <= 12` and trusted otherwise.
pub fn greedy_max_cardinality(f: &Oracle, k: usize, lazy: bool) -> Result<MaxResult> {
    let p = f.len();
    if k == 0 || k > p {
        return precondition(format!("k must lie in 1..={p}, got {k}"));
    }
    if p <= MONOTONE_CHECK_MAX && !is_non_decreasing(f)? {
        return precondition("greedy maximization needs a non-decreasing function");
    }
    let mut chosen = Subset::empty(p);
    let mut value = 0.0;
    let mut trace = Vec::with_capacity(k);
    if lazy {
        let mut heap: BinaryHeap<Entry> =
            (0..p).map(|e| Entry { bound: f.eval(&Subset::from_indices(p, [e])), k: e, round: 0 }).collect();
        for round in 0..k {
            let refresh = |e: Entry| {
                if e.round == round {
                    e
                } else {
                    Entry { bound: f.eval(&chosen.with(e.k)) - value, k: e.k, round }
                }
            };
            let pick = loop {
                let Some(top) = heap.pop() else { break None };
                if top.round == round {
                    break Some(top);
                }
                heap.push(refresh(top));
            };
            // stale bounds may undershoot a tied gain by rounding
            let pick = pick.map(|mut best| {
                let slack = 1e-12 * (1.0 + best.bound.abs());
                let mut rest = Vec::new();
                while heap.peek().is_some_and(|e| e.bound >= best.bound - slack) {
                    let e = refresh(heap.pop().unwrap());
                    if e > best {
                        rest.push(std::mem::replace(&mut best, e));
                    } else {
                        rest.push(e);
                    }
                }
                heap.extend(rest);
                best
            });
            match pick {
                Some(e) if e.bound > 0.0 => {
                    chosen.insert(e.k);
                    value = f.eval(&chosen);
                    trace.push((e.k, e.bound));
                }
                _ => break,
            }
        }
    } else {
        for _ in 0..k {
            let mut best: Option<(usize, f64)> = None;
            for e in (0..p).filter(|&e| !chosen.contains(e)) {
                let gain = f.eval(&chosen.with(e)) - value;
                if best.is_none_or(|(_, g)| gain > g) {
                    best = Some((e, gain));
                }
            }
            match best {
                Some((e, gain)) if gain > 0.0 => {
                    chosen.insert(e);
                    value = f.eval(&chosen);
                    trace.push((e, gain));
                }
                _ => break,
            }
        }
    }
    Ok(MaxResult { chosen, value, trace, converged: true })
}

/// Best-improvement local search over single additions and removals. At
/// termination no flip improves `F` by more than `1e-12 (1 + |F(A)|)`.
pub fn local_search_max(f: &Oracle, start: &Subset, max_steps: usize) -> Result<MaxResult> {
    let p = f.len();
    if start.ground_size() != p {
        return precondition("start set has the wrong ground size");
    }
    let mut a = start.clone();
    let mut value = f.eval(&a);
    let mut trace = Vec::new();
    for _ in 0..max_steps {
        let mut best: Option<(usize, f64)> = None;
        for e in 0..p {
            let mut b = a.clone();
            b.toggle(e);
            let delta = f.eval(&b) - value;
            if best.is_none_or(|(_, d)| delta > d) {
                best = Some((e, delta));
            }
        }
        match best {
            Some((e, d)) if d > 1e-12 * (1.0 + value.abs()) => {
                a.toggle(e);
                value = f.eval(&a);
                trace.push((e, d));
            }
            _ => return Ok(MaxResult { chosen: a, value, trace, converged: true }),
        }
    }
    Ok(MaxResult { chosen: a, value, trace, converged: false })
}

/// Mean of `F` over `samples` uniformly random subsets.
pub fn random_subset_mean(f: &Oracle, samples: usize, seed: u64) -> f64 {
    let p = f.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: f64 = (0..samples)
        .map(|_| f.eval_transient(&Subset::from_indices(p, (0..p).filter(|_| rng.random_bool(0.5)))))
        .sum();
    total / samples as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct DsResult {
    pub set: Subset,
    pub value: f64,
    /// `F(A_t) - G(A_t)` after each round, starting with the start set.
    pub trace: Vec<f64>,
    pub rounds: usize,
    /// True when no single-element flip improves the final set.
    pub converged: bool,
}

/// Greedy ordering that lists `first` (increasing), then `then`, then the rest.
fn ordering_with_prefix(first: &Subset, then: Option<usize>) -> Ordering {
    let mut w = first.indicator();
    if let Some(k) = then {
        w[k] = 0.5;
    }
    Ordering::decreasing(&w)
}

/// Minimizes `F - G` for submodular `F`, `G` by repeatedly replacing `G`
/// with a modular lower bound `s ∈ B(G)` tight at the current set and
/// solving `min_B F(B) - s(B)`. The bound comes from the greedy ordering
/// with the current set first. When that step does not improve, an
/// improving single flip (if any) is targeted with an ordering tight at both
/// the set and its neighbour, so the final set is single-flip stable.
pub fn ds_minimize(f: &Oracle, g: &Oracle, start: &Subset, sfm: &dyn SfmHandle, max_rounds: usize) -> Result<DsResult> {
    let p = f.len();
    if g.len() != p || start.ground_size() != p {
        return precondition("F, G and the start set must share the ground set");
    }
    let obj = |a: &Subset| f.eval(a) - g.eval(a);
    let tol = |v: f64| 1e-12 * (1.0 + v.abs());
    let mut a = start.clone();
    let mut value = obj(&a);
    let mut trace = vec![value];
    for round in 1..=max_rounds {
        let (s, _) = greedy_vertex(g, &ordering_with_prefix(&a, None));
        let (b, _) = sfm.min_minus_modular(f, &s)?;
        let vb = obj(&b);
        if vb < value - tol(value) {
            a = b;
            value = vb;
            trace.push(value);
            continue;
        }
        let flip = (0..p).find(|&k| {
            let mut c = a.clone();
            c.toggle(k);
            obj(&c) < value - tol(value)
        });
        let Some(k) = flip else {
            return Ok(DsResult { set: a, value, trace, rounds: round, converged: true });
        };
        let order = if a.contains(k) { ordering_with_prefix(&a.without(k), Some(k)) } else { ordering_with_prefix(&a, Some(k)) };
        let (s, _) = greedy_vertex(g, &order);
        let (b, _) = sfm.min_minus_modular(f, &s)?;
        let vb = obj(&b);
        let mut c = a.clone();
        c.toggle(k);
        let vc = obj(&c);
        (a, value) = if vb <= vc { (b, vb) } else { (c, vc) };
        trace.push(value);
    }
    Ok(DsResult { set: a, value, trace, rounds: max_rounds, converged: false })
}
