//! Weighted set covers, `F(A) = Σ_G D(G) min{1, |A ∩ G|}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::graph::maxflow::{max_flow, StNetwork};
use crate::oracle::{Oracle, SetFunction};
use crate::set::Subset;

/// Groups (0-based element lists) with non-negative weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub p: usize,
    pub groups: Vec<(Vec<usize>, f64)>,
}

pub struct SetCover {
    p: usize,
    groups: Vec<(Vec<usize>, f64)>,
    member_of: Vec<Vec<usize>>,
}

impl SetCover {
    pub fn new(spec: CoverSpec) -> Result<Self> {
        let p = spec.p;
        let mut member_of = vec![Vec::new(); p];
        for (gi, (g, d)) in spec.groups.iter().enumerate() {
            if g.is_empty() {
                return precondition(format!("group {gi} is empty"));
            }
            if !(*d >= 0.0) || !d.is_finite() {
                return precondition(format!("group {gi} has invalid weight {d}"));
            }
            for &k in g {
                if k >= p {
                    return precondition(format!("group {gi} references element {k} outside 0..{p}"));
                }
                if member_of[k].last() != Some(&gi) {
                    member_of[k].push(gi);
                }
            }
        }
        Ok(SetCover { p, groups: spec.groups, member_of })
    }

    pub fn groups(&self) -> &[(Vec<usize>, f64)] {
        &self.groups
    }
}

impl SetFunction for SetCover {
    fn size(&self) -> usize {
        self.p
    }

    fn value(&self, set: &Subset) -> f64 {
        self.groups.iter().filter(|(g, _)| g.iter().any(|&k| set.contains(k))).map(|(_, d)| d).sum()
    }

    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        let mut hit = vec![false; self.groups.len()];
        let mut acc = 0.0;
        for k in start.iter() {
            for &g in &self.member_of[k] {
                if !hit[g] {
                    hit[g] = true;
                    acc += self.groups[g].1;
                }
            }
        }
        order
            .iter()
            .map(|&k| {
                for &g in &self.member_of[k] {
                    if !hit[g] {
                        hit[g] = true;
                        acc += self.groups[g].1;
                    }
                }
                acc
            })
            .collect()
    }

    fn min_minus_modular(&self, z: &[f64]) -> Option<(Subset, f64)> {
        // elements 0..p, groups p..p+m, source, sink
        let (p, m) = (self.p, self.groups.len());
        let (s, t) = (p + m, p + m + 1);
        let mut net = StNetwork::new(p + m + 2, s, t);
        for (k, &zk) in z.iter().enumerate() {
            if zk > 0.0 {
                net.add_arc(s, k, zk);
            } else if zk < 0.0 {
                net.add_arc(k, t, -zk);
            }
        }
        for (gi, (g, d)) in self.groups.iter().enumerate() {
            for &k in g {
                net.add_arc(k, p + gi, f64::INFINITY);
            }
            net.add_arc(p + gi, t, *d);
        }
        let res = max_flow(&net);
        let a = Subset::from_indices(p, (0..p).filter(|&k| res.maximal_source_side.contains(k)));
        let value = self.value(&a) - a.sum(z);
        Some((a, value))
    }

    fn minor(&self, base: &Subset, elems: &[usize]) -> Option<Arc<dyn SetFunction>> {
        let mut local = vec![usize::MAX; self.p];
        for (i, &k) in elems.iter().enumerate() {
            local[k] = i;
        }
        let groups = self
            .groups
            .iter()
            .filter(|(g, _)| !g.iter().any(|&k| base.contains(k)))
            .map(|(g, d)| (g.iter().filter(|&&k| local[k] != usize::MAX).map(|&k| local[k]).collect::<Vec<_>>(), *d))
            .filter(|(g, _)| !g.is_empty())
            .collect();
        Some(Arc::new(SetCover::new(CoverSpec { p: elems.len(), groups }).ok()?))
    }

    fn name(&self) -> String {
        "cover".to_string()
    }
}

pub fn set_cover(spec: CoverSpec) -> Result<Oracle> {
    Ok(Oracle::new(SetCover::new(spec)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_groups() {
        let f = set_cover(CoverSpec { p: 3, groups: vec![(vec![0, 1], 1.0), (vec![1, 2], 1.0)] }).unwrap();
        assert_eq!(f.eval(&Subset::from_indices(3, [1])), 2.0);
        assert_eq!(f.eval(&Subset::from_indices(3, [0])), 1.0);
    }

    #[test]
    fn flow_fast_path_matches_enumeration() {
        let spec = CoverSpec { p: 4, groups: vec![(vec![0, 1], 1.5), (vec![1, 2, 3], 1.0), (vec![3], 0.7)] };
        let cover = SetCover::new(spec).unwrap();
        let z = [1.0, 0.2, 0.9, 1.2];
        let (a, v) = cover.min_minus_modular(&z).unwrap();
        let best = crate::set::all_subsets(4).map(|s| cover.value(&s) - s.sum(&z)).fold(f64::INFINITY, f64::min);
        assert!((v - best).abs() < 1e-12);
        assert!((cover.value(&a) - a.sum(&z) - best).abs() < 1e-12);
    }
}
