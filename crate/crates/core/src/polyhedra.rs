//! Membership tests for the submodular, base, positive and symmetric
//! polyhedra, and small exhaustive diagnostics.

use std::collections::HashSet;

use crate::error::{precondition, Result};
use crate::oracle::Oracle;
use crate::set::{Ordering, Subset};

/// Largest ground set handled by exhaustive checks.
pub const BRUTE_FORCE_MAX: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polyhedron {
    /// `P(F) = {s : s(A) <= F(A) for all A}`.
    Submodular,
    /// `B(F) = P(F) ∩ {s(V) = F(V)}`.
    Base,
    /// `P+(F) = P(F) ∩ R^p_+`.
    Positive,
    /// `|P|(F) = {s : |s| ∈ P(F)}`.
    Symmetric,
}

/// Absolute slack used in membership tests.
pub fn membership_slack(f: &Oracle) -> f64 {
    let fv = f.eval(&Subset::full(f.len()));
    1e-9 * (1.0 + fv.abs())
}

/// All values `F(A)` indexed by bitmask. Calls are counted but not cached.
pub fn value_table(f: &Oracle) -> Result<Vec<f64>> {
    let p = f.len();
    if p > BRUTE_FORCE_MAX {
        return precondition(format!("exhaustive evaluation needs p <= {BRUTE_FORCE_MAX}, got {p}"));
    }
    Ok((0u64..(1u64 << p)).map(|m| f.eval_transient(&Subset::from_mask(p, m))).collect())
}

fn mask_sums(s: &[f64]) -> Vec<f64> {
    let p = s.len();
    let mut sums = vec![0.0; 1 << p];
    for m in 1usize..(1 << p) {
        let low = m.trailing_zeros() as usize;
        sums[m] = sums[m & (m - 1)] + s[low];
    }
    sums
}

/// Is `s` in the requested polyhedron of `F` (within [`membership_slack`])?
pub fn in_polyhedron(f: &Oracle, s: &[f64], which: Polyhedron) -> Result<bool> {
    let p = f.len();
    if s.len() != p {
        return precondition(format!("vector length {} differs from ground size {}", s.len(), p));
    }
    let slack = membership_slack(f);
    let s_eff: Vec<f64> = match which {
        Polyhedron::Symmetric => s.iter().map(|x| x.abs()).collect(),
        _ => s.to_vec(),
    };
    if which == Polyhedron::Positive && s.iter().any(|&x| x < -slack) {
        return Ok(false);
    }
    if which == Polyhedron::Base {
        let fv = f.eval(&Subset::full(p));
        if (s.iter().sum::<f64>() - fv).abs() > slack {
            return Ok(false);
        }
    }
    let min_gap = if p <= BRUTE_FORCE_MAX {
        let table = value_table(f)?;
        let sums = mask_sums(&s_eff);
        table.iter().zip(&sums).map(|(v, t)| v - t).fold(f64::INFINITY, f64::min)
    } else {
        let neg: Vec<f64> = s_eff.iter().map(|x| -x).collect();
        let g = f.add_modular(&neg);
        crate::sfm::minimize(&g, &crate::sfm::Algorithm::Auto, &crate::sfm::Budget::default())?.min_value
    };
    Ok(min_gap >= -slack)
}

/// Largest ground set handled by exhaustive minimization.
pub const EXHAUSTIVE_MIN_MAX: usize = 22;

/// Result of [`exhaustive_min_minus_modular`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveMin {
    pub value: f64,
    /// Minimizer with the smallest bitmask.
    pub first: Subset,
    /// Union of all minimizers (the maximal minimizer for submodular `F`).
    pub maximal: Subset,
}

/// Minimizes `F(A) - z(A)` by enumerating all `2^p` subsets (`p <= 22`).
pub fn exhaustive_min_minus_modular(f: &Oracle, z: &[f64]) -> Result<ExhaustiveMin> {
    let p = f.len();
    if p > EXHAUSTIVE_MIN_MAX {
        return precondition(format!("exhaustive minimization needs p <= {EXHAUSTIVE_MIN_MAX}, got {p}"));
    }
    if z.len() != p {
        return precondition("modular term length differs from ground size");
    }
    let zs = mask_sums(z);
    let vals: Vec<f64> = (0u64..(1u64 << p)).map(|m| f.eval_transient(&Subset::from_mask(p, m)) - zs[m as usize]).collect();
    let best = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Err(crate::Error::Numerical("non-finite oracle value during enumeration".into()));
    }
    let tol = 1e-12 * (1.0 + best.abs());
    let mut first = None;
    let mut union = 0u64;
    let mut largest = 0u64;
    for (m, &v) in vals.iter().enumerate() {
        if v <= best + tol {
            first.get_or_insert(m as u64);
            union |= m as u64;
            if (m as u64).count_ones() > largest.count_ones() {
                largest = m as u64;
            }
        }
    }
    let maximal = if vals[union as usize] <= best + tol { union } else { largest };
    Ok(ExhaustiveMin {
        value: vals[first.unwrap() as usize],
        first: Subset::from_mask(p, first.unwrap()),
        maximal: Subset::from_mask(p, maximal),
    })
}

/// Outcome of [`check_submodular`].
#[derive(Debug, Clone, PartialEq)]
pub enum SubmodularityCheck {
    Submodular,
    /// `F(A∪{k}) - F(A) = lhs < rhs = F(A∪{j,k}) - F(A∪{j})`.
    Violation { set: Subset, j: usize, k: usize, lhs: f64, rhs: f64 },
}

impl SubmodularityCheck {
    pub fn is_submodular(&self) -> bool {
        matches!(self, SubmodularityCheck::Submodular)
    }
}

/// Exhaustive check of diminishing returns for `p <= 20`.
pub fn check_submodular(f: &Oracle) -> Result<SubmodularityCheck> {
    let p = f.len();
    let t = value_table(f)?;
    let scale = t.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = 1e-9 * (1.0 + scale);
    for m in 0usize..(1 << p) {
        for j in 0..p {
            if m >> j & 1 == 1 {
                continue;
            }
            for k in (j + 1)..p {
                if m >> k & 1 == 1 {
                    continue;
                }
                let lhs = t[m | 1 << k] - t[m];
                let rhs = t[m | 1 << j | 1 << k] - t[m | 1 << j];
                if lhs < rhs - tol {
                    return Ok(SubmodularityCheck::Violation { set: Subset::from_mask(p, m as u64), j, k, lhs, rhs });
                }
            }
        }
    }
    Ok(SubmodularityCheck::Submodular)
}

/// Exhaustive check that `F` is non-decreasing, for `p <= 20`.
pub fn is_non_decreasing(f: &Oracle) -> Result<bool> {
    let p = f.len();
    let t = value_table(f)?;
    let scale = t.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = 1e-9 * (1.0 + scale);
    Ok((0usize..(1 << p)).all(|m| (0..p).all(|k| m >> k & 1 == 1 || t[m | 1 << k] >= t[m] - tol)))
}

/// Optimality of `s ∈ B(F)` for `max_{s∈B(F)} wᵀs`: every sup-level set of
/// `w` must be tight for `s` within `1e-8`. Values of `w` within `1e-9`
/// (relative) are treated as equal.
pub fn maximizer_optimality(f: &Oracle, w: &[f64], s: &[f64]) -> Result<bool> {
    let p = f.len();
    if w.len() != p || s.len() != p {
        return precondition("vector lengths differ from ground size");
    }
    let order = Ordering::decreasing(w);
    let j = order.as_slice();
    let mut set = Subset::empty(p);
    let mut acc = 0.0;
    for i in 0..p {
        set.insert(j[i]);
        acc += s[j[i]];
        let boundary = i + 1 == p || w[j[i]] - w[j[i + 1]] > 1e-9 * (1.0 + w[j[i]].abs());
        if boundary && (acc - f.eval(&set)).abs() > 1e-8 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Distinct greedy vertices of `B(F)` over all `p!` orderings (`p <= 8`).
pub fn extreme_points(f: &Oracle) -> Result<Vec<Vec<f64>>> {
    let p = f.len();
    if p > 8 {
        return precondition(format!("vertex enumeration needs p <= 8, got {p}"));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..p).collect();
    let mut visit = |perm: &[usize]| {
        let (s, _) = crate::lovasz::greedy_vertex(f, &Ordering::new(perm.to_vec()).unwrap());
        let key: Vec<i64> = s.iter().map(|x| (x * 1e9).round() as i64).collect();
        if seen.insert(key) {
            out.push(s);
        }
    };
    // Heap's algorithm
    let mut c = vec![0usize; p];
    visit(&perm);
    let mut i = 0;
    while i < p {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::FnSetFunction;

    #[test]
    fn square_cardinality_is_not_submodular() {
        let f = Oracle::new(FnSetFunction::new(3, |a: &Subset| (a.len() as f64).powi(2)));
        match check_submodular(&f).unwrap() {
            SubmodularityCheck::Violation { set, lhs, rhs, .. } => {
                assert!(set.is_empty());
                assert_eq!((lhs, rhs), (1.0, 3.0));
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn min_one_has_simplex_vertices() {
        let f = Oracle::new(FnSetFunction::new(3, |a: &Subset| a.len().min(1) as f64));
        let mut v = extreme_points(&f).unwrap();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(v, vec![vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]]);
        assert!(in_polyhedron(&f, &[0.5, 0.5, 0.0], Polyhedron::Base).unwrap());
        assert!(!in_polyhedron(&f, &[0.5, 0.6, 0.0], Polyhedron::Submodular).unwrap());
        assert!(in_polyhedron(&f, &[-0.5, 0.5, 0.0], Polyhedron::Symmetric).unwrap());
        assert!(!in_polyhedron(&f, &[-0.5, 0.5, 0.0], Polyhedron::Positive).unwrap());
    }
}
