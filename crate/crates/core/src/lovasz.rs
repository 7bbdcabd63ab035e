//! Greedy algorithm, Lovász extension and base vectors.

use crate::error::{precondition, Error, Result};
use crate::oracle::Oracle;
use crate::set::{Ordering, Subset};

/// A point of the base polytope with its representation as a convex
/// combination of greedy vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseVector {
    pub s: Vec<f64>,
    pub support: Vec<(Ordering, f64)>,
}

impl BaseVector {
    /// The greedy vertex associated with `order`.
    pub fn vertex(f: &Oracle, order: Ordering) -> BaseVector {
        let s = greedy_vertex(f, &order).0;
        BaseVector { s, support: vec![(order, 1.0)] }
    }

    /// `Σ_k min(s_k, 0)`, a lower bound on `min_A F(A)`.
    pub fn negative_part(&self) -> f64 {
        negative_part(&self.s)
    }

    pub fn norm2(&self) -> f64 {
        self.s.iter().map(|x| x * x).sum()
    }

    /// `(1-rho) self + rho other`.
    pub fn combine(&self, other: &BaseVector, rho: f64) -> BaseVector {
        let s = self.s.iter().zip(&other.s).map(|(a, b)| (1.0 - rho) * a + rho * b).collect();
        let mut support: Vec<(Ordering, f64)> = Vec::with_capacity(self.support.len() + other.support.len());
        if rho < 1.0 {
            support.extend(self.support.iter().map(|(o, l)| (o.clone(), (1.0 - rho) * l)));
        }
        if rho > 0.0 {
            for (o, l) in &other.support {
                match support.iter_mut().find(|(q, _)| q == o) {
                    Some(entry) => entry.1 += rho * l,
                    None => support.push((o.clone(), rho * l)),
                }
            }
        }
        BaseVector { s, support }
    }
}

pub fn negative_part(s: &[f64]) -> f64 {
    s.iter().map(|&x| x.min(0.0)).sum()
}

/// Greedy order for `w`: decreasing values, ties broken by increasing index.
pub fn greedy_order(w: &[f64]) -> Ordering {
    Ordering::decreasing(w)
}

/// Greedy vertex `s` for `order` together with the chain values
/// `F({o_1..o_k})`, `k = 1..p`.
pub fn greedy_vertex(f: &Oracle, order: &Ordering) -> (Vec<f64>, Vec<f64>) {
    let p = f.len();
    let chain = f.chain(&Subset::empty(p), order.as_slice());
    let mut s = vec![0.0; p];
    let mut prev = 0.0;
    for (&k, &v) in order.as_slice().iter().zip(&chain) {
        s[k] = v - prev;
        prev = v;
    }
    (s, chain)
}

fn check_finite(w: &[f64], what: &str) -> Result<()> {
    match w.iter().position(|x| !x.is_finite()) {
        Some(k) => Err(Error::Numerical(format!("non-finite {what} at index {k}"))),
        None => Ok(()),
    }
}

/// Greedy maximizer of `wᵀs` over `B(F)` and the value `f(w)`.
pub fn greedy(f: &Oracle, w: &[f64]) -> Result<(BaseVector, f64)> {
    if w.len() != f.len() {
        return precondition(format!("weight length {} differs from ground size {}", w.len(), f.len()));
    }
    check_finite(w, "weight")?;
    let order = greedy_order(w);
    let (s, chain) = greedy_vertex(f, &order);
    check_finite(&chain, "oracle value")?;
    let value = w.iter().zip(&s).map(|(a, b)| a * b).sum();
    Ok((BaseVector { s, support: vec![(order, 1.0)] }, value))
}

/// Lovász extension `f(w)`, computed from the level-set formula
/// `Σ_k F({j_1..j_k}) (w_{j_k} - w_{j_{k+1}}) + F(V) w_{j_p}`.
pub fn lovasz(f: &Oracle, w: &[f64]) -> Result<f64> {
    let p = f.len();
    if w.len() != p {
        return precondition(format!("weight length {} differs from ground size {}", w.len(), p));
    }
    check_finite(w, "weight")?;
    if p == 0 {
        return Ok(0.0);
    }
    let order = greedy_order(w);
    let j = order.as_slice();
    let chain = f.chain(&Subset::empty(p), j);
    check_finite(&chain, "oracle value")?;
    let mut total = chain[p - 1] * w[j[p - 1]];
    for k in 0..p - 1 {
        total += chain[k] * (w[j[k]] - w[j[k + 1]]);
    }
    Ok(total)
}

/// A subgradient of the Lovász extension at `w` (the greedy vertex).
pub fn lovasz_subgradient(f: &Oracle, w: &[f64]) -> Result<Vec<f64>> {
    Ok(greedy(f, w)?.0.s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::FnSetFunction;

    #[test]
    fn greedy_matches_level_set_formula() {
        let f = Oracle::new(FnSetFunction::new(3, |a: &Subset| (a.len() as f64).sqrt()));
        let w = [0.3, -1.0, 2.0];
        let (b, v) = greedy(&f, &w).unwrap();
        assert!((v - lovasz(&f, &w).unwrap()).abs() < 1e-12);
        assert!((b.s[2] - 1.0).abs() < 1e-15);
        assert!((b.s.iter().sum::<f64>() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_weights() {
        let f = Oracle::new(FnSetFunction::new(2, |a: &Subset| a.len() as f64));
        assert!(matches!(greedy(&f, &[1.0]), Err(Error::Precondition(_))));
        assert!(matches!(greedy(&f, &[f64::NAN, 0.0]), Err(Error::Numerical(_))));
    }

    #[test]
    fn combine_merges_support() {
        let f = Oracle::new(FnSetFunction::new(2, |a: &Subset| a.len().min(1) as f64));
        let a = BaseVector::vertex(&f, Ordering::identity(2));
        let b = BaseVector::vertex(&f, Ordering::new(vec![1, 0]).unwrap());
        let c = a.combine(&b, 0.25).combine(&a, 0.5);
        assert_eq!(c.support.len(), 2);
        let total: f64 = c.support.iter().map(|x| x.1).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!((c.s[0] - 0.875).abs() < 1e-15);
    }
}
