//! Small dense linear-algebra helpers.

/// Row-major symmetric matrix.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SymMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = SymMatrix::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "matrix is not square");
            m.data[i * n..(i + 1) * n].copy_from_slice(r);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }
}

/// Cholesky factor of a principal submatrix, grown one index at a time.
#[derive(Debug, Clone)]
pub struct IncrementalCholesky {
    idx: Vec<usize>,
    rows: Vec<Vec<f64>>,
    logdet: f64,
}

impl IncrementalCholesky {
    pub fn new() -> Self {
        IncrementalCholesky { idx: Vec::new(), rows: Vec::new(), logdet: 0.0 }
    }

    /// `log det` of the current principal submatrix.
    pub fn logdet(&self) -> f64 {
        self.logdet
    }

    pub fn len(&self) -> usize {
        self.idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    /// Appends index `k` of `(q + jitter I)`. Returns `false` (leaving the
    /// factor unchanged) if the extended matrix is not positive definite.
    pub fn push(&mut self, q: &SymMatrix, jitter: f64, k: usize) -> bool {
        let m = self.idx.len();
        let mut r = vec![0.0; m + 1];
        for i in 0..m {
            let mut v = q.get(self.idx[i], k);
            let row = &self.rows[i];
            for j in 0..i {
                v -= row[j] * r[j];
            }
            r[i] = v / row[i];
        }
        let d = q.get(k, k) + jitter - r[..m].iter().map(|x| x * x).sum::<f64>();
        if d <= 0.0 || !d.is_finite() {
            return false;
        }
        r[m] = d.sqrt();
        self.logdet += d.ln();
        self.idx.push(k);
        self.rows.push(r);
        true
    }
}

impl Default for IncrementalCholesky {
    fn default() -> Self {
        Self::new()
    }
}

/// Dense Cholesky `A = L Lᵀ` (lower, row-major); `None` if not positive definite.
pub fn cholesky(a: &SymMatrix) -> Option<Vec<f64>> {
    let n = a.n;
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incremental_matches_dense() {
        let q = SymMatrix::from_rows(&[vec![4.0, 1.0, 0.5], vec![1.0, 3.0, 0.2], vec![0.5, 0.2, 2.0]]);
        let mut inc = IncrementalCholesky::new();
        for k in [2, 0, 1] {
            assert!(inc.push(&q, 0.0, k));
        }
        let l = cholesky(&q).unwrap();
        let dense: f64 = (0..3).map(|i| 2.0 * l[i * 3 + i].ln()).sum();
        assert!((inc.logdet() - dense).abs() < 1e-12);
    }

    #[test]
    fn rejects_singular() {
        let q = SymMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let mut inc = IncrementalCholesky::new();
        assert!(inc.push(&q, 0.0, 0));
        assert!(!inc.push(&q, 0.0, 1));
        assert_eq!(inc.len(), 1);
    }
}
