//! Seeded instance generators.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::graph::cut::WeightedDigraph;
use crate::linalg::{cholesky, SymMatrix};
use crate::zoo::CoverSpec;

/// Path `0 - 1 - .. - (p-1)` with undirected edges of equal weight.
pub fn chain(p: usize, weight: f64) -> WeightedDigraph {
    let arcs = (1..p).map(|k| (k - 1, k, weight)).collect();
    WeightedDigraph { n: p, arcs, symmetric: true }
}

/// `h × w` grid with 4-connectivity, vertex `(r, c)` at index `r w + c`.
pub fn grid2d(h: usize, w: usize, weight: f64) -> WeightedDigraph {
    let mut arcs = Vec::new();
    for r in 0..h {
        for c in 0..w {
            let k = r * w + c;
            if c + 1 < w {
                arcs.push((k, k + 1, weight));
            }
            if r + 1 < h {
                arcs.push((k, k + w, weight));
            }
        }
    }
    WeightedDigraph { n: h * w, arcs, symmetric: true }
}

/// Layered network in the style of the GENRMF generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredNetwork {
    pub graph: WeightedDigraph,
    pub frame_size: usize,
    pub frames: usize,
    /// Capacity of the in-frame arcs, also used for the terminal arcs.
    pub frame_capacity: f64,
}

impl LayeredNetwork {
    /// Modular weights `z` such that `cut(A) - z(A)` is, up to a constant,
    /// the capacity of the `s-t` cut whose source side is `A ∪ {s}` when a
    /// source feeds the first frame and the last frame drains into a sink.
    pub fn terminal_weights(&self) -> Vec<f64> {
        let n = self.graph.n;
        let f = self.frame_size;
        let mut z = vec![0.0; n];
        for k in 0..f {
            z[k] += self.frame_capacity;
            z[n - f + k] -= self.frame_capacity;
        }
        z
    }
}

/// `b` frames, each an `a × a` grid whose arcs point right and down with
/// capacity `c2 a²`; every vertex of frame `i` has one arc to a random vertex
/// of frame `i+1` (a random permutation) with capacity uniform in `[c1, c2]`.
pub fn genrmf_like(a: usize, b: usize, c1: f64, c2: f64, seed: u64) -> Result<LayeredNetwork> {
    if a == 0 || b == 0 {
        return precondition("frame side and frame count must be positive");
    }
    if !(c1 >= 0.0 && c2 >= c1) {
        return precondition(format!("capacity range [{c1}, {c2}] is invalid"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = a * a;
    let big = c2 * f as f64;
    let mut arcs = Vec::new();
    for frame in 0..b {
        let off = frame * f;
        for r in 0..a {
            for c in 0..a {
                let k = off + r * a + c;
                if c + 1 < a {
                    arcs.push((k, k + 1, big));
                }
                if r + 1 < a {
                    arcs.push((k, k + a, big));
                }
            }
        }
        if frame + 1 < b {
            let mut perm: Vec<usize> = (0..f).collect();
            perm.shuffle(&mut rng);
            for (i, &j) in perm.iter().enumerate() {
                let cap = if c2 > c1 { rng.random_range(c1..=c2) } else { c1 };
                arcs.push((off + i, off + f + j, cap));
            }
        }
    }
    Ok(LayeredNetwork { graph: WeightedDigraph { n: f * b, arcs, symmetric: false }, frame_size: f, frames: b, frame_capacity: big })
}

/// Two-moons semi-supervised clustering instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoMoons {
    pub points: Vec<[f64; 2]>,
    /// Ground-truth moon of each point (0 or 1).
    pub classes: Vec<u8>,
    /// Indices of the labelled points.
    pub labeled: Vec<usize>,
    /// RBF parameter `α` of `k(x, y) = exp(-α ‖x - y‖²)`.
    pub alpha: f64,
    /// Kernel matrix plus `nugget · I`.
    pub kernel: SymMatrix,
    /// Modular prior: `-L` for labelled points of moon 0 (pushed into the
    /// set), `+L` for labelled points of moon 1, `0` otherwise.
    pub prior: Vec<f64>,
}

/// Parameters of [`two_moons_logdet`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoMoonsConfig {
    pub n: usize,
    pub noise: f64,
    /// `None` picks `α` so that the median pairwise kernel value is 1/2.
    pub bandwidth: Option<f64>,
    pub labeled: usize,
    pub nugget: f64,
    pub seed: u64,
}

impl Default for TwoMoonsConfig {
    fn default() -> Self {
        TwoMoonsConfig { n: 400, noise: 0.1, bandwidth: None, labeled: 16, nugget: 1e-2, seed: 0 }
    }
}

pub fn two_moons_logdet(cfg: &TwoMoonsConfig) -> Result<TwoMoons> {
    let n = cfg.n;
    if n < 2 || cfg.labeled > n {
        return precondition("two-moons needs n >= 2 and at most n labelled points");
    }
    if !(cfg.nugget >= 0.0) || !(cfg.noise >= 0.0) {
        return precondition("noise and nugget must be non-negative");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let normal = Normal::new(0.0, cfg.noise.max(f64::MIN_POSITIVE)).expect("valid normal");
    let mut points = Vec::with_capacity(n);
    let mut classes = Vec::with_capacity(n);
    for i in 0..n {
        let class = (i % 2) as u8;
        let theta = std::f64::consts::PI * rng.random::<f64>();
        let (x, y) = if class == 0 { (theta.cos(), theta.sin()) } else { (1.0 - theta.cos(), 0.5 - theta.sin()) };
        let (dx, dy) = if cfg.noise > 0.0 { (normal.sample(&mut rng), normal.sample(&mut rng)) } else { (0.0, 0.0) };
        points.push([x + dx, y + dy]);
        classes.push(class);
    }
    let d2 = |i: usize, j: usize| {
        let (a, b): (&[f64; 2], &[f64; 2]) = (&points[i], &points[j]);
        (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
    };
    let alpha = match cfg.bandwidth {
        Some(a) if a > 0.0 => a,
        Some(a) => return precondition(format!("bandwidth must be positive, got {a}")),
        None => {
            let mut all: Vec<f64> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| d2(i, j)).collect();
            all.sort_by(f64::total_cmp);
            let med = all[all.len() / 2];
            if med > 0.0 {
                std::f64::consts::LN_2 / med
            } else {
                1.0
            }
        }
    };
    let mut kernel = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let v = (-alpha * d2(i, j)).exp();
            kernel.set(i, j, if i == j { v + cfg.nugget } else { v });
        }
    }
    // balanced labels: labelled/2 from each moon
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, &c) in classes.iter().enumerate() {
        by_class[c as usize].push(i);
    }
    let mut labeled = Vec::new();
    for (c, pool) in by_class.iter_mut().enumerate() {
        pool.shuffle(&mut rng);
        let take = cfg.labeled / 2 + if c == 0 { cfg.labeled % 2 } else { 0 };
        labeled.extend(pool.iter().take(take.min(pool.len())));
    }
    labeled.sort_unstable();
    let big = 1.0 + singleton_mi_bound(&kernel)?;
    let mut prior = vec![0.0; n];
    for &i in &labeled {
        prior[i] = if classes[i] == 0 { -big } else { big };
    }
    Ok(TwoMoons { points, classes, labeled, alpha, kernel, prior })
}

/// `max_k log(K_kk (K⁻¹)_kk)`, the largest singleton mutual information.
/// It bounds every marginal of the mutual-information function.
fn singleton_mi_bound(k: &SymMatrix) -> Result<f64> {
    let n = k.n;
    let l = cholesky(k).ok_or_else(|| crate::Error::Numerical("kernel matrix is not positive definite".into()))?;
    // diag(K⁻¹) = column norms of L⁻¹
    let mut inv_diag = vec![0.0; n];
    let mut x = vec![0.0; n];
    for j in 0..n {
        x.iter_mut().for_each(|v| *v = 0.0);
        x[j] = 1.0 / l[j * n + j];
        for i in (j + 1)..n {
            let mut s = 0.0;
            for m in j..i {
                s -= l[i * n + m] * x[m];
            }
            x[i] = s / l[i * n + i];
        }
        for i in j..n {
            inv_diag[i] += x[i] * x[i];
        }
    }
    Ok((0..n).map(|i| (k.get(i, i) * inv_diag[i]).ln()).fold(0.0, f64::max))
}

/// `m` random groups over `p` elements with sizes in `1..=max_size` and
/// weights uniform in `[0.5, 1.5]`.
pub fn random_cover(p: usize, m: usize, max_size: usize, seed: u64) -> Result<CoverSpec> {
    if p == 0 || m == 0 || max_size == 0 {
        return precondition("cover sizes must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elems: Vec<usize> = (0..p).collect();
    let groups = (0..m)
        .map(|_| {
            let size = rng.random_range(1..=max_size.min(p));
            let mut g: Vec<usize> = elems.choose_multiple(&mut rng, size).copied().collect();
            g.sort_unstable();
            (g, rng.random_range(0.5..=1.5))
        })
        .collect();
    Ok(CoverSpec { p, groups })
}

/// Random directed network on `n` vertices with arc probability `density`
/// and capacities uniform in `[0, max_cap]`.
pub fn random_digraph(n: usize, density: f64, max_cap: f64, seed: u64) -> WeightedDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random::<f64>() < density {
                arcs.push((u, v, max_cap * rng.random::<f64>()));
            }
        }
    }
    WeightedDigraph { n, arcs, symmetric: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_generators() {
        assert_eq!(chain(3, 1.0).arcs, vec![(0, 1, 1.0), (1, 2, 1.0)]);
        assert_eq!(grid2d(2, 2, 1.0).arcs.len(), 4);
    }

    #[test]
    fn layered_network_is_acyclic_and_seeded() {
        let a = genrmf_like(4, 6, 1.0, 100.0, 7).unwrap();
        let b = genrmf_like(4, 6, 1.0, 100.0, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.graph.n, 96);
        assert!(a.graph.arcs.iter().all(|&(u, v, _)| u < v));
    }

    #[test]
    fn two_moons_median_kernel() {
        let tm = two_moons_logdet(&TwoMoonsConfig { n: 60, labeled: 4, nugget: 0.0, ..Default::default() }).unwrap();
        let mut vals: Vec<f64> = (0..60).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| tm.kernel.get(i, j)).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[vals.len() / 2] - 0.5).abs() < 0.02);
        assert_eq!(tm.labeled.len(), 4);
        assert!(tm.prior.iter().filter(|&&x| x != 0.0).count() == 4);
    }
}
