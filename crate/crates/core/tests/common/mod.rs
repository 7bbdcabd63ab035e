#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subq::graph::{cut_function, random_cover, random_digraph};
use subq::linalg::SymMatrix;
use subq::zoo::{cardinality_based, gaussian_mutual_information, set_cover, ConcaveSpec, PsdMatrix};
use subq::Oracle;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut ChaCha8Rng, p: usize, scale: f64) -> Vec<f64> {
    (0..p).map(|_| rng.random_range(-scale..scale)).collect()
}

pub fn random_psd(rng: &mut ChaCha8Rng, p: usize) -> SymMatrix {
    let x: Vec<Vec<f64>> = (0..p).map(|_| (0..p).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let mut rows = vec![vec![0.0; p]; p];
    for i in 0..p {
        for j in 0..p {
            rows[i][j] = (0..p).map(|k| x[i][k] * x[j][k]).sum::<f64>() + if i == j { 0.1 } else { 0.0 };
        }
    }
    SymMatrix::from_rows(&rows)
}

/// One of four families, plus a random modular term.
pub fn random_instance(family: usize, p: usize, seed: u64) -> (String, Oracle) {
    let mut r = rng(seed);
    let (name, f) = match family % 4 {
        0 => ("cut", cut_function(&random_digraph(p, 0.4, 1.0, seed)).unwrap()),
        1 => ("cover", set_cover(random_cover(p, p + 2, 3, seed).unwrap()).unwrap()),
        2 => {
            let w: Vec<f64> = (0..p).map(|_| r.random_range(0.1..2.0)).collect();
            ("concave", cardinality_based(w, ConcaveSpec::Sqrt).unwrap())
        }
        _ => ("logdet_mi", gaussian_mutual_information(PsdMatrix::new(random_psd(&mut r, p))).unwrap()),
    };
    let scale = 1.0 + f.eval(&subq::Subset::full(p)).abs() / p as f64;
    let z = random_vector(&mut r, p, scale);
    (name.to_string(), f.add_modular(&z))
}
