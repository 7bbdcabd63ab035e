//! Concave functions of modular functions, `F(A) = g(s(A))`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::oracle::{Oracle, SetFunction};
use crate::set::Subset;

/// A concave, non-decreasing scalar function on `[0, ∞)` with `g(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConcaveSpec {
    Identity,
    Sqrt,
    Log1p,
    MinWithOne,
    /// `x^exponent` with `0 < exponent <= 1`.
    Power { exponent: f64 },
    /// Linear interpolation of `(0,0)` and the given points, extended with
    /// the last slope.
    PiecewiseLinear { breakpoints: Vec<(f64, f64)> },
}

/// Evaluable form of a [`ConcaveSpec`].
#[derive(Debug, Clone)]
pub struct Concave {
    spec: ConcaveSpec,
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl Concave {
    pub fn new(spec: ConcaveSpec) -> Result<Self> {
        let (mut xs, mut ys, mut slopes) = (Vec::new(), Vec::new(), Vec::new());
        match &spec {
            ConcaveSpec::Power { exponent } if !(*exponent > 0.0 && *exponent <= 1.0) => {
                return precondition(format!("power exponent must lie in (0, 1], got {exponent}"));
            }
            ConcaveSpec::PiecewiseLinear { breakpoints } => {
                xs.push(0.0);
                ys.push(0.0);
                for &(x, y) in breakpoints {
                    if x == 0.0 {
                        if y != 0.0 {
                            return precondition("piecewise-linear function must vanish at 0");
                        }
                        continue;
                    }
                    if !(x > *xs.last().unwrap()) || !y.is_finite() {
                        return precondition("breakpoints must have strictly increasing positive abscissae");
                    }
                    xs.push(x);
                    ys.push(y);
                }
                if xs.len() < 2 {
                    return precondition("piecewise-linear function needs a breakpoint");
                }
                for i in 1..xs.len() {
                    slopes.push((ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]));
                }
                for w in slopes.windows(2) {
                    if w[1] > w[0] + 1e-12 {
                        return precondition("piecewise-linear function is not concave");
                    }
                }
                if *slopes.last().unwrap() < 0.0 {
                    return precondition("piecewise-linear function is not non-decreasing");
                }
            }
            _ => {}
        }
        Ok(Concave { spec, xs, ys, slopes })
    }

    pub fn spec(&self) -> &ConcaveSpec {
        &self.spec
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.spec {
            ConcaveSpec::Identity => x,
            ConcaveSpec::Sqrt => x.max(0.0).sqrt(),
            ConcaveSpec::Log1p => x.ln_1p(),
            ConcaveSpec::MinWithOne => x.min(1.0),
            ConcaveSpec::Power { exponent } => x.max(0.0).powf(*exponent),
            ConcaveSpec::PiecewiseLinear { .. } => {
                let i = match self.xs.partition_point(|&b| b <= x) {
                    0 => 0,
                    i => (i - 1).min(self.slopes.len() - 1),
                };
                self.ys[i] + self.slopes[i] * (x - self.xs[i])
            }
        }
    }
}

/// `F(A) = g(shift + s(A)) - g(shift)` with non-negative weights `s`.
pub struct ConcaveOfModular {
    weights: Vec<f64>,
    g: Arc<Concave>,
    shift: f64,
}

impl ConcaveOfModular {
    pub fn new(weights: Vec<f64>, g: Concave) -> Result<Self> {
        if let Some(k) = weights.iter().position(|&w| !(w >= 0.0) || !w.is_finite()) {
            return precondition(format!("weight {k} must be finite and non-negative"));
        }
        Ok(ConcaveOfModular { weights, g: Arc::new(g), shift: 0.0 })
    }
}

impl SetFunction for ConcaveOfModular {
    fn size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, set: &Subset) -> f64 {
        self.g.eval(self.shift + set.sum(&self.weights)) - self.g.eval(self.shift)
    }

    fn chain(&self, start: &Subset, order: &[usize]) -> Vec<f64> {
        let base = self.g.eval(self.shift);
        let mut acc = self.shift + start.sum(&self.weights);
        order
            .iter()
            .map(|&k| {
                acc += self.weights[k];
                self.g.eval(acc) - base
            })
            .collect()
    }

    fn minor(&self, base: &Subset, elems: &[usize]) -> Option<Arc<dyn SetFunction>> {
        Some(Arc::new(ConcaveOfModular {
            weights: elems.iter().map(|&k| self.weights[k]).collect(),
            g: self.g.clone(),
            shift: self.shift + base.sum(&self.weights),
        }))
    }

    fn name(&self) -> String {
        "cardinality".to_string()
    }
}

/// `A ↦ g(s(A))`.
pub fn cardinality_based(weights: Vec<f64>, g: ConcaveSpec) -> Result<Oracle> {
    Ok(Oracle::new(ConcaveOfModular::new(weights, Concave::new(g)?)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piecewise_linear_interpolates_and_extends() {
        let g = Concave::new(ConcaveSpec::PiecewiseLinear { breakpoints: vec![(1.0, 2.0), (3.0, 3.0)] }).unwrap();
        assert_eq!(g.eval(0.5), 1.0);
        assert_eq!(g.eval(2.0), 2.5);
        assert_eq!(g.eval(5.0), 4.0);
        assert!(Concave::new(ConcaveSpec::PiecewiseLinear { breakpoints: vec![(1.0, 1.0), (2.0, 3.0)] }).is_err());
    }

    #[test]
    fn sqrt_of_cardinality() {
        let f = cardinality_based(vec![1.0; 5], ConcaveSpec::Sqrt).unwrap();
        assert_eq!(f.eval(&Subset::from_indices(5, [0, 1, 2, 3])), 2.0);
        assert!(cardinality_based(vec![-1.0], ConcaveSpec::Sqrt).is_err());
    }
}
