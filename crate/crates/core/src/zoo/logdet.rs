//! Gaussian entropies: `F(A) = log det Q_AA` and the mutual-information
//! symmetrization.

use std::sync::Arc;

use crate::error::{precondition, Error, Result};
use crate::linalg::{cholesky, IncrementalCholesky, SymMatrix};
use crate::oracle::{Oracle, SetFunction};
use crate::set::Subset;
use crate::zoo::combinators::Symmetrize;

/// Symmetric positive definite matrix with a diagonal jitter.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix {
    pub q: SymMatrix,
    pub jitter: f64,
}

impl PsdMatrix {
    /// Uses the default jitter `1e-9 trace(Q) / p`.
    pub fn new(q: SymMatrix) -> Self {
        let jitter = if q.n == 0 { 0.0 } else { 1e-9 * q.trace() / q.n as f64 };
        PsdMatrix { q, jitter }
    }

    pub fn with_jitter(q: SymMatrix, jitter: f64) -> Self {
        PsdMatrix { q, jitter }
    }
}

pub struct LogDet {
    q: Arc<SymMatrix>,
    jitter: f64,
}

impl LogDet {
    pub fn new(m: PsdMatrix) -> Result<Self> {
        let PsdMatrix { mut q, jitter } = m;
        if !(jitter >= 0.0) {
            return precondition(format!("jitter must be non-negative, got {jitter}"));
        }
        if !q.is_symmetric(1e-12 * (1.0 + q.trace().abs())) {
            return precondition("matrix is not symmetric");
        }
        for i in 0..q.n {
            q.set(i, i, q.get(i, i) + jitter);
        }
        if q.n > 0 && cholesky(&q).is_none() {
            // locate the first failing leading minor for the message
            let mut inc = IncrementalCholesky::new();
            let size = (0..q.n).take_while(|&k| inc.push(&q, 0.0, k)).count() + 1;
            return Err(Error::Numerical(format!("Cholesky failed on the leading {size}x{size} submatrix")));
        }
        Ok(LogDet { q: Arc::new(q), jitter })
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }
}

impl SetFunction for LogDet {
    fn size(&self) -> usize {
        self.q.n
    }

    fn value(&self, set: &Subset) -> f64 {
        let mut inc = IncrementalCholesky::new();
        for k in set.iter() {
            if !inc.push(&self.q, 0.0, k) {
                return f64::NAN;
            }
        }
        inc.logdet()
    }

    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        let mut inc = IncrementalCholesky::new();
        let mut ok = start.iter().all(|k| inc.push(&self.q, 0.0, k));
        order
            .iter()
            .map(|&k| {
                ok = ok && inc.push(&self.q, 0.0, k);
                if ok {
                    inc.logdet()
                } else {
                    f64::NAN
                }
            })
            .collect()
    }

    fn name(&self) -> String {
        "logdet".to_string()
    }
}

/// `A ↦ log det Q_AA`.
pub fn log_det(q: PsdMatrix) -> Result<Oracle> {
    Ok(Oracle::new(LogDet::new(q)?))
}

/// `A ↦ log det Q_AA + log det Q_{V∖A,V∖A} - log det Q`.
pub fn gaussian_mutual_information(q: PsdMatrix) -> Result<Oracle> {
    Ok(Oracle::new(Symmetrize::new(Arc::new(LogDet::new(q)?))))
}
