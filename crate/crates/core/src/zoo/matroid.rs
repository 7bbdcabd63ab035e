//! Rank function of a graphic matroid.

use crate::error::{precondition, Result};
use crate::oracle::{Oracle, SetFunction};
use crate::set::Subset;

/// Ground set = edges; `F(A) = n - #components(vertices, A)`.
pub struct GraphicMatroid {
    n: usize,
    edges: Vec<(usize, usize)>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Returns `true` when two components were merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

impl GraphicMatroid {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return precondition("graph needs at least one vertex");
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return precondition(format!("edge ({u}, {v}) references a vertex outside 0..{n}"));
        }
        Ok(GraphicMatroid { n, edges })
    }
}

impl SetFunction for GraphicMatroid {
    fn size(&self) -> usize {
        self.edges.len()
    }

    fn value(&self, set: &Subset) -> f64 {
        let mut uf = UnionFind::new(self.n);
        set.iter().filter(|&e| uf.union(self.edges[e].0, self.edges[e].1)).count() as f64
    }

    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        let mut uf = UnionFind::new(self.n);
        let mut rank = start.iter().filter(|&e| uf.union(self.edges[e].0, self.edges[e].1)).count();
        order
            .iter()
            .map(|&e| {
                if uf.union(self.edges[e].0, self.edges[e].1) {
                    rank += 1;
                }
                rank as f64
            })
            .collect()
    }

    fn name(&self) -> String {
        "matroid".to_string()
    }
}

pub fn graphic_matroid_rank(n: usize, edges: Vec<(usize, usize)>) -> Result<Oracle> {
    Ok(Oracle::new(GraphicMatroid::new(n, edges)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_rank() {
        let f = graphic_matroid_rank(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(f.eval(&Subset::from_indices(3, [0, 1])), 2.0);
        assert_eq!(f.eval(&Subset::full(3)), 2.0);
        assert!(graphic_matroid_rank(2, vec![(0, 2)]).is_err());
    }
}
