//! Benchmark instances. Every instance is a [`FunctionSpec`] so it can be
//! written out and replayed exactly.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use subq::graph::{chain, genrmf_like, grid2d, random_cover, two_moons_logdet, TwoMoonsConfig, WeightedDigraph};
use subq::zoo::spec::GroupSpec;
use subq::zoo::FunctionSpec;
use subq::{CachePolicy, Oracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Chain,
    Grid,
    GenrmfWideLike,
    GenrmfLongLike,
    TwoMoons,
    Cover,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Chain, Suite::Grid, Suite::GenrmfWideLike, Suite::GenrmfLongLike, Suite::TwoMoons, Suite::Cover];

    /// Greedy sweeps per solver run, sized so that the min-norm-point
    /// algorithm certifies a 1e-6 gap on the seed-0 instance.
    pub fn default_sweeps(self) -> u64 {
        match self {
            Suite::Chain | Suite::Grid | Suite::Cover => 1000,
            Suite::GenrmfWideLike => 2000,
            Suite::GenrmfLongLike => 20_000,
            Suite::TwoMoons => 200,
        }
    }

    /// Iterations per proximal run, enough for the min-norm-point algorithm
    /// to converge on the seed-0 instance.
    pub fn default_prox_iters(self) -> usize {
        match self {
            Suite::Grid => 5000,
            Suite::GenrmfLongLike => 3000,
            _ => 1000,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Chain => "chain",
            Suite::Grid => "grid",
            Suite::GenrmfWideLike => "genrmf-wide-like",
            Suite::GenrmfLongLike => "genrmf-long-like",
            Suite::TwoMoons => "two-moons",
            Suite::Cover => "cover",
        }
    }

    /// Parses a comma-separated list; `all` selects every suite.
    pub fn parse_list(text: &str) -> Result<Vec<Suite>, String> {
        if text.trim() == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        text.split(',').map(|s| s.trim().parse()).collect()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}` (expected one of chain, grid, genrmf-wide-like, genrmf-long-like, two-moons, cover, all)"))
    }
}

/// A generated instance: `F = spec`, to be minimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub suite: Suite,
    pub seed: u64,
    pub p: usize,
    pub spec: FunctionSpec,
}

impl Instance {
    /// Fresh uncached oracle with its own call counter.
    pub fn oracle(&self) -> subq::Result<Oracle> {
        self.spec.build_with_policy(Path::new("."), None, CachePolicy::Disabled)
    }
}

fn cut_spec(g: &WeightedDigraph) -> FunctionSpec {
    FunctionSpec::Cut {
        edges: None,
        n: Some(g.n),
        arcs: Some(g.arcs.iter().map(|&(u, v, c)| (u + 1, v + 1, c)).collect()),
        symmetric: g.symmetric,
    }
}

fn minus_modular(f: FunctionSpec, z: &[f64]) -> FunctionSpec {
    FunctionSpec::AddModular { f: Box::new(f), z: z.iter().map(|v| -v).collect() }
}

/// Piecewise-constant signal of `±1` blocks plus Gaussian noise, denoised by
/// the total variation of a chain: `F(A) = λ·cut(A) - z(A)`.
pub fn chain_instance(p: usize, lambda: f64, noise: f64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise).expect("valid noise level");
    let block = (p / 5).max(1);
    let z: Vec<f64> =
        (0..p).map(|k| if (k / block) % 2 == 0 { 1.0 } else { -1.0 } + normal.sample(&mut rng)).collect();
    let spec = minus_modular(cut_spec(&chain(p, lambda)), &z);
    Instance { name: format!("chain{p}"), suite: Suite::Chain, seed, p, spec }
}

/// Noisy disc on an `h × w` grid with 4-neighbour total variation.
pub fn grid_instance(h: usize, w: usize, lambda: f64, noise: f64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise).expect("valid noise level");
    let (cr, cc, rad) = (h as f64 / 2.0, w as f64 / 2.0, h.min(w) as f64 / 3.0);
    let mut z = Vec::with_capacity(h * w);
    for r in 0..h {
        for c in 0..w {
            let inside = (r as f64 + 0.5 - cr).hypot(c as f64 + 0.5 - cc) <= rad;
            z.push(if inside { 1.0 } else { -1.0 } + normal.sample(&mut rng));
        }
    }
    let spec = minus_modular(cut_spec(&grid2d(h, w, lambda)), &z);
    Instance { name: format!("grid{h}x{w}"), suite: Suite::Grid, seed, p: h * w, spec }
}

/// Layered network with a source feeding the first frame and the last frame
/// draining into a sink, as a cut function minus terminal weights.
pub fn genrmf_instance(a: usize, b: usize, suite: Suite, seed: u64) -> subq::Result<Instance> {
    let net = genrmf_like(a, b, 0.1, 1.0, seed)?;
    let spec = minus_modular(cut_spec(&net.graph), &net.terminal_weights());
    let name = format!("genrmf{a}x{a}x{b}");
    Ok(Instance { name, suite, seed, p: a * a * b, spec })
}

/// Gaussian mutual information on a two-moons point cloud plus the label prior.
pub fn two_moons_instance(n: usize, labeled: usize, seed: u64) -> subq::Result<Instance> {
    let tm = two_moons_logdet(&TwoMoonsConfig { n, labeled, seed, ..TwoMoonsConfig::default() })?;
    let rows = (0..n).map(|i| (0..n).map(|j| tm.kernel.get(i, j)).collect()).collect();
    let mi = FunctionSpec::Logdet { matrix: Some(rows), matrix_file: None, jitter: None, mutual_information: true };
    let spec = FunctionSpec::AddModular { f: Box::new(mi), z: tm.prior.clone() };
    Ok(Instance { name: format!("twomoons{n}"), suite: Suite::TwoMoons, seed, p: n, spec })
}

/// Weighted set cover minus a random modular reward.
pub fn cover_instance(p: usize, seed: u64) -> subq::Result<Instance> {
    let cover = random_cover(p, 2 * p, 5, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    // every element lies in about 6 groups of weight ~1
    let z: Vec<f64> = (0..p).map(|_| rng.random_range(0.0..4.0)).collect();
    let groups = cover
        .groups
        .iter()
        .map(|(g, w)| GroupSpec { elements: g.iter().map(|k| k + 1).collect(), weight: *w })
        .collect();
    let spec = minus_modular(FunctionSpec::Cover { p, groups }, &z);
    Ok(Instance { name: format!("cover{p}"), suite: Suite::Cover, seed, p, spec })
}

/// The desk-scale instance of a suite.
pub fn instance(suite: Suite, seed: u64) -> subq::Result<Instance> {
    match suite {
        Suite::Chain => Ok(chain_instance(100, 1.0, 0.5, seed)),
        Suite::Grid => Ok(grid_instance(30, 30, 0.5, 1.0, seed)),
        Suite::GenrmfWideLike => genrmf_instance(13, 3, suite, seed),
        Suite::GenrmfLongLike => genrmf_instance(4, 30, suite, seed),
        Suite::TwoMoons => two_moons_instance(400, 32, seed),
        Suite::Cover => cover_instance(200, seed),
    }
}

/// Instance of the proximal benchmark. Projecting onto the base polytope of
/// the full-size layered networks takes 10⁵ min-norm-point iterations, so
/// these suites use smaller networks of the same shape.
pub fn prox_instance(suite: Suite, seed: u64) -> subq::Result<Instance> {
    match suite {
        Suite::GenrmfWideLike => genrmf_instance(6, 2, suite, seed),
        Suite::GenrmfLongLike => genrmf_instance(3, 8, suite, seed),
        _ => instance(suite, seed),
    }
}
