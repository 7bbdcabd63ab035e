//! JSON description of set functions.
//!
//! Indices in specs are 1-based. Example:
//!
//! ```json
//! {"type": "add_modular",
//!  "f": {"type": "cut", "n": 3, "arcs": [[1, 2, 1.0], [2, 3, 1.0]], "symmetric": true},
//!  "z": [1.0, -0.5, 0.25]}
//! ```

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::graph::cut::{CutFunction, WeightedDigraph};
use crate::graph::io::{parse_edge_list, parse_matrix_csv};
use crate::linalg::SymMatrix;
use crate::oracle::{CachePolicy, Oracle, SetFunction, SfmHandle};
use crate::set::Subset;
use crate::zoo::combinators::{self, AddModular, Modular, Scale, Sum, Symmetrize};
use crate::zoo::concave::{Concave, ConcaveOfModular, ConcaveSpec};
use crate::zoo::cover::{CoverSpec, SetCover};
use crate::zoo::logdet::{LogDet, PsdMatrix};
use crate::zoo::matroid::GraphicMatroid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub elements: Vec<usize>,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// Either `edges` (path to an edge-list file) or inline `n` and `arcs`.
    Cut {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        edges: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        arcs: Option<Vec<(usize, usize, f64)>>,
        #[serde(default)]
        symmetric: bool,
    },
    Cover {
        p: usize,
        groups: Vec<GroupSpec>,
    },
    /// `g(s(A))`; `weights` defaults to all ones over `p` elements.
    Cardinality {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
        g: ConcaveSpec,
    },
    /// Either inline `matrix` rows or a CSV `matrix_file`.
    Logdet {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix_file: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        jitter: Option<f64>,
        #[serde(default)]
        mutual_information: bool,
    },
    Matroid {
        n: usize,
        edges: Vec<(usize, usize)>,
    },
    Modular {
        z: Vec<f64>,
    },
    Sum {
        terms: Vec<FunctionSpec>,
    },
    Scale {
        lambda: f64,
        f: Box<FunctionSpec>,
    },
    AddModular {
        f: Box<FunctionSpec>,
        z: Vec<f64>,
    },
    Restrict {
        f: Box<FunctionSpec>,
        set: Vec<usize>,
    },
    Contract {
        f: Box<FunctionSpec>,
        set: Vec<usize>,
    },
    Symmetrize {
        f: Box<FunctionSpec>,
    },
    ConvolveModular {
        f: Box<FunctionSpec>,
        z: Vec<f64>,
    },
    Monotonize {
        f: Box<FunctionSpec>,
    },
    ConcaveCompose {
        f: Box<FunctionSpec>,
        g: ConcaveSpec,
        #[serde(default)]
        trusted: bool,
    },
    /// Minimizes over the elements after the first `keep`.
    PartialMin {
        f: Box<FunctionSpec>,
        keep: usize,
    },
}

fn zero_based(idx: &[usize], p: usize) -> Result<Vec<usize>> {
    idx.iter()
        .map(|&k| if k >= 1 && k <= p { Ok(k - 1) } else { precondition(format!("index {k} outside 1..={p}")) })
        .collect()
}

impl FunctionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("specs serialize")
    }

    /// Builds a memoized oracle. Relative file paths resolve against `base_dir`.
    pub fn build(&self, base_dir: &Path, handle: Option<Arc<dyn SfmHandle>>) -> Result<Oracle> {
        self.build_with_policy(base_dir, handle, CachePolicy::Unbounded)
    }

    pub fn build_with_policy(
        &self,
        base_dir: &Path,
        handle: Option<Arc<dyn SfmHandle>>,
        policy: CachePolicy,
    ) -> Result<Oracle> {
        Ok(Oracle::from_arc(self.build_raw(base_dir, &handle)?, policy))
    }

    fn build_raw(&self, dir: &Path, handle: &Option<Arc<dyn SfmHandle>>) -> Result<Arc<dyn SetFunction>> {
        let inner = |f: &FunctionSpec| -> Result<Oracle> { Ok(Oracle::from_arc(f.build_raw(dir, handle)?, CachePolicy::Unbounded)) };
        Ok(match self {
            FunctionSpec::Cut { edges, n, arcs, symmetric } => {
                let g = match (edges, n, arcs) {
                    (Some(path), _, _) => {
                        let mut g = parse_edge_list(&std::fs::read_to_string(dir.join(path))?)?;
                        g.symmetric = *symmetric;
                        g
                    }
                    (None, Some(n), Some(arcs)) => {
                        let mut zb = Vec::with_capacity(arcs.len());
                        for &(u, v, c) in arcs {
                            let uv = zero_based(&[u, v], *n)?;
                            zb.push((uv[0], uv[1], c));
                        }
                        WeightedDigraph::new(*n, zb, *symmetric)?
                    }
                    _ => return precondition("cut spec needs `edges` or both `n` and `arcs`"),
                };
                Arc::new(CutFunction::new(&g)?)
            }
            FunctionSpec::Cover { p, groups } => {
                let groups =
                    groups.iter().map(|g| Ok((zero_based(&g.elements, *p)?, g.weight))).collect::<Result<Vec<_>>>()?;
                Arc::new(SetCover::new(CoverSpec { p: *p, groups })?)
            }
            FunctionSpec::Cardinality { p, weights, g } => {
                let w = match (weights, p) {
                    (Some(w), _) => w.clone(),
                    (None, Some(p)) => vec![1.0; *p],
                    _ => return precondition("cardinality spec needs `p` or `weights`"),
                };
                Arc::new(ConcaveOfModular::new(w, Concave::new(g.clone())?)?)
            }
            FunctionSpec::Logdet { matrix, matrix_file, jitter, mutual_information } => {
                let rows = match (matrix, matrix_file) {
                    (Some(m), _) => m.clone(),
                    (None, Some(path)) => parse_matrix_csv(&std::fs::read_to_string(dir.join(path))?)?,
                    _ => return precondition("logdet spec needs `matrix` or `matrix_file`"),
                };
                if rows.iter().any(|r| r.len() != rows.len()) {
                    return precondition("kernel matrix is not square");
                }
                let q = SymMatrix::from_rows(&rows);
                let m = match jitter {
                    Some(j) => PsdMatrix::with_jitter(q, *j),
                    None => PsdMatrix::new(q),
                };
                let f: Arc<dyn SetFunction> = Arc::new(LogDet::new(m)?);
                if *mutual_information {
                    Arc::new(Symmetrize::new(f))
                } else {
                    f
                }
            }
            FunctionSpec::Matroid { n, edges } => {
                let e = edges
                    .iter()
                    .map(|&(u, v)| zero_based(&[u, v], *n).map(|x| (x[0], x[1])))
                    .collect::<Result<Vec<_>>>()?;
                Arc::new(GraphicMatroid::new(*n, e)?)
            }
            FunctionSpec::Modular { z } => Arc::new(Modular::new(z.clone())),
            FunctionSpec::Sum { terms } => {
                let built = terms.iter().map(|t| t.build_raw(dir, handle)).collect::<Result<Vec<_>>>()?;
                let p = match built.first() {
                    Some(t) => t.size(),
                    None => return precondition("sum of no functions"),
                };
                Arc::new(Sum::new(p, built)?)
            }
            FunctionSpec::Scale { lambda, f } => Arc::new(Scale::new(f.build_raw(dir, handle)?, *lambda)?),
            FunctionSpec::AddModular { f, z } => {
                let f = f.build_raw(dir, handle)?;
                if f.size() != z.len() {
                    return precondition("modular term length differs from ground size");
                }
                Arc::new(AddModular::new(f, z.clone()))
            }
            FunctionSpec::Restrict { f, set } => {
                let o = inner(f)?;
                let s = Subset::from_indices(o.len(), zero_based(set, o.len())?);
                Arc::new(o.restrict(&s))
            }
            FunctionSpec::Contract { f, set } => {
                let o = inner(f)?;
                let s = Subset::from_indices(o.len(), zero_based(set, o.len())?);
                Arc::new(o.contract(&s))
            }
            FunctionSpec::Symmetrize { f } => Arc::new(Symmetrize::new(f.build_raw(dir, handle)?)),
            FunctionSpec::ConvolveModular { f, z } => Arc::new(combinators::convolve_modular(&inner(f)?, z, handle.clone())?),
            FunctionSpec::Monotonize { f } => Arc::new(combinators::monotonize(&inner(f)?, handle.clone())?),
            FunctionSpec::ConcaveCompose { f, g, trusted } => {
                Arc::new(combinators::concave_compose(&inner(f)?, g.clone(), *trusted)?)
            }
            FunctionSpec::PartialMin { f, keep } => Arc::new(combinators::partial_min(&inner(f)?, *keep, handle.clone())?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_spec_builds() {
        let text = r#"{"type":"add_modular",
            "f":{"type":"sum","terms":[
                {"type":"cut","n":3,"arcs":[[1,2,1.0],[2,3,1.0]],"symmetric":true},
                {"type":"cardinality","p":3,"g":{"kind":"sqrt"}}]},
            "z":[1.0,0.0,-1.0]}"#;
        let spec = FunctionSpec::from_json(text).unwrap();
        let f = spec.build(Path::new("."), None).unwrap();
        let a = Subset::from_indices(3, [1]);
        assert!((f.eval(&a) - 3.0).abs() < 1e-12);
        let back = FunctionSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn rejects_bad_indices() {
        let spec = FunctionSpec::from_json(r#"{"type":"matroid","n":2,"edges":[[1,3]]}"#).unwrap();
        assert!(spec.build(Path::new("."), None).is_err());
    }
}
