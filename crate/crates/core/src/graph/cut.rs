//! Cut functions of weighted directed graphs.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::graph::maxflow::{max_flow, StNetwork};
use crate::oracle::{Oracle, SetFunction};
use crate::set::Subset;

/// Graph with non-negative arc weights `d(u, v)`. With `symmetric`, every
/// arc also counts in the reverse direction (an undirected edge).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedDigraph {
    pub n: usize,
    pub arcs: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub symmetric: bool,
}

impl WeightedDigraph {
    pub fn new(n: usize, arcs: Vec<(usize, usize, f64)>, symmetric: bool) -> Result<Self> {
        let g = WeightedDigraph { n, arcs, symmetric };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for &(u, v, c) in &self.arcs {
            if u >= self.n || v >= self.n {
                return precondition(format!("arc ({u}, {v}) references a vertex outside 0..{}", self.n));
            }
            if u == v {
                return precondition(format!("self-loop at vertex {u}"));
            }
            if !(c >= 0.0) || !c.is_finite() {
                return precondition(format!("arc ({u}, {v}) has invalid capacity {c}"));
            }
        }
        Ok(())
    }

    /// All arcs with symmetric edges expanded into both directions.
    pub fn directed_arcs(&self) -> Vec<(usize, usize, f64)> {
        let mut out = self.arcs.clone();
        if self.symmetric {
            out.extend(self.arcs.iter().map(|&(u, v, c)| (v, u, c)));
        }
        out
    }

    /// `d(A, V∖A)`.
    pub fn cut(&self, set: &Subset) -> f64 {
        self.directed_arcs().iter().filter(|&&(u, v, _)| set.contains(u) && !set.contains(v)).map(|a| a.2).sum()
    }

    /// Dense Laplacian `D - W` of the symmetrized weights.
    pub fn laplacian(&self) -> Vec<Vec<f64>> {
        let mut q = vec![vec![0.0; self.n]; self.n];
        for (u, v, c) in self.directed_arcs() {
            let w = if self.symmetric { c } else { c / 2.0 };
            q[u][v] -= w;
            q[v][u] -= w;
            q[u][u] += w;
            q[v][v] += w;
        }
        q
    }
}

/// `F(A) = d(A, V∖A) + u(A)`, where the unary term `u` arises from minors.
pub struct CutFunction {
    n: usize,
    arcs: Vec<(usize, usize, f64)>,
    unary: Vec<f64>,
    out_adj: Vec<Vec<(usize, f64)>>,
    in_adj: Vec<Vec<(usize, f64)>>,
}

impl CutFunction {
    pub fn new(g: &WeightedDigraph) -> Result<Self> {
        g.validate()?;
        Ok(CutFunction::from_parts(g.n, g.directed_arcs(), vec![0.0; g.n]))
    }

    fn from_parts(n: usize, arcs: Vec<(usize, usize, f64)>, unary: Vec<f64>) -> Self {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v, c) in &arcs {
            out_adj[u].push((v, c));
            in_adj[v].push((u, c));
        }
        CutFunction { n, arcs, unary, out_adj, in_adj }
    }
}

impl SetFunction for CutFunction {
    fn size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &Subset) -> f64 {
        let cut: f64 = self.arcs.iter().filter(|&&(u, v, _)| set.contains(u) && !set.contains(v)).map(|a| a.2).sum();
        cut + set.sum(&self.unary)
    }

    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        let mut inside = start.clone();
        let mut acc = self.value(start);
        order
            .iter()
            .map(|&k| {
                acc += self.unary[k];
                for &(v, c) in &self.out_adj[k] {
                    if !inside.contains(v) {
                        acc += c;
                    }
                }
                for &(u, c) in &self.in_adj[k] {
                    if inside.contains(u) {
                        acc -= c;
                    }
                }
                inside.insert(k);
                acc
            })
            .collect()
    }

    fn min_minus_modular(&self, z: &[f64]) -> Option<(Subset, f64)> {
        let n = self.n;
        let (s, t) = (n, n + 1);
        let mut net = StNetwork::new(n + 2, s, t);
        for &(u, v, c) in &self.arcs {
            net.add_arc(u, v, c);
        }
        for k in 0..n {
            let zk = z[k] - self.unary[k];
            if zk > 0.0 {
                net.add_arc(s, k, zk);
            } else if zk < 0.0 {
                net.add_arc(k, t, -zk);
            }
        }
        let res = max_flow(&net);
        let a = Subset::from_indices(n, (0..n).filter(|&k| res.maximal_source_side.contains(k)));
        let value = self.value(&a) - a.sum(z);
        Some((a, value))
    }

    fn minor(&self, base: &Subset, elems: &[usize]) -> Option<Arc<dyn SetFunction>> {
        let mut local = vec![usize::MAX; self.n];
        for (i, &k) in elems.iter().enumerate() {
            local[k] = i;
        }
        let mut unary: Vec<f64> = elems.iter().map(|&k| self.unary[k]).collect();
        let mut arcs = Vec::new();
        for &(u, v, c) in &self.arcs {
            match (local[u], local[v]) {
                (lu, lv) if lu != usize::MAX && lv != usize::MAX => arcs.push((lu, lv, c)),
                (lu, _) if lu != usize::MAX => {
                    if !base.contains(v) {
                        unary[lu] += c;
                    }
                }
                (_, lv) if lv != usize::MAX => {
                    if base.contains(u) {
                        unary[lv] -= c;
                    }
                }
                _ => {}
            }
        }
        Some(Arc::new(CutFunction::from_parts(elems.len(), arcs, unary)))
    }

    fn name(&self) -> String {
        "cut".to_string()
    }
}

pub fn cut_function(g: &WeightedDigraph) -> Result<Oracle> {
    Ok(Oracle::new(CutFunction::new(g)?))
}

/// Exact maximal minimizer and minimum of `A ↦ d(A, V∖A) - z(A)`.
pub fn min_cut_minus_modular(g: &WeightedDigraph, z: &[f64]) -> Result<(Subset, f64)> {
    if z.len() != g.n {
        return precondition("modular term length differs from vertex count");
    }
    Ok(CutFunction::new(g)?.min_minus_modular(z).expect("cut functions always have a flow formulation"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::chain;

    #[test]
    fn chain_cut_values() {
        let g = chain(3, 1.0);
        let f = cut_function(&g).unwrap();
        assert_eq!(f.eval(&Subset::from_indices(3, [1])), 2.0);
        assert_eq!(f.eval(&Subset::full(3)), 0.0);
    }

    #[test]
    fn two_node_chain_with_modular() {
        let (a, v) = min_cut_minus_modular(&chain(2, 1.0), &[2.0, -2.0]).unwrap();
        assert_eq!(a.to_vec(), vec![0]);
        assert_eq!(v, -1.0);
    }

    #[test]
    fn minors_match_generic_wrapper() {
        let g = WeightedDigraph::new(4, vec![(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (3, 0, 1.5), (0, 2, 0.7)], false)
            .unwrap();
        let cut = CutFunction::new(&g).unwrap();
        let f = Oracle::new(CutFunction::new(&g).unwrap());
        let base = Subset::from_indices(4, [1]);
        let elems = vec![0, 3];
        let fast = cut.minor(&base, &elems).unwrap();
        let generic = f.minor(&base, &elems);
        for m in 0..4u64 {
            let s = Subset::from_mask(2, m);
            assert!((fast.value(&s) - generic.eval(&s)).abs() < 1e-12);
        }
    }
}
