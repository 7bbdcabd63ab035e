mod common;

use subq::graph::{chain, cut_function};
use subq::lovasz::greedy_vertex;
use subq::oracle::FnSetFunction;
use subq::polyhedra::{exhaustive_min_minus_modular, maximizer_optimality};
use subq::prox::*;
use subq::sfm::{AutoSolver, BruteForceSolver};
use subq::zoo::{scale, set_cover, CoverSpec};
use subq::{Oracle, Ordering, Subset};

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn card(p: usize) -> Oracle {
    Oracle::new(FnSetFunction::new(p, |a: &Subset| a.len() as f64))
}

fn at_most_one(p: usize) -> Oracle {
    Oracle::new(FnSetFunction::new(p, |a: &Subset| a.len().min(1) as f64))
}

/// Hildreth's dual coordinate ascent for projection onto `{w_i >= w_j}`.
fn qp_isotonic(z: &[f64], cons: &[(usize, usize)]) -> Vec<f64> {
    let mut mu = vec![0.0; cons.len()];
    let mut w = z.to_vec();
    for _ in 0..200_000 {
        let mut change = 0.0f64;
        for (c, &(i, j)) in cons.iter().enumerate() {
            // constraint w_j - w_i <= 0
            let viol = w[j] - w[i];
            let step = (viol / 2.0).max(-mu[c]);
            mu[c] += step;
            w[j] -= step;
            w[i] += step;
            change = change.max(step.abs());
        }
        if change < 1e-14 {
            break;
        }
    }
    w
}

#[test]
fn mnp_prox_examples() {
    let r = prox_quadratic_mnp(&card(4), &[0.0; 4]).unwrap();
    assert!(close(&r.w, &[-1.0; 4], 1e-12));
    let f = at_most_one(3);
    let z = [0.2, 0.5, 0.3];
    let r = prox_quadratic_mnp(&f, &z).unwrap();
    assert!(close(&r.w, &[0.0; 3], 1e-12));
    assert!(r.gap <= 1e-9);
}

#[test]
fn dnc_hand_example() {
    let f = at_most_one(3);
    let z = vec![2.0, 0.0, 0.0];
    let r = divide_and_conquer(&f, &SeparableProblem::quadratic(z.clone()), &BruteForceSolver).unwrap();
    let m = prox_quadratic_mnp(&f, &z).unwrap();
    assert!(close(&r.w, &m.w, 1e-9));
    assert!(close(&r.s, &[1.0, 0.0, 0.0], 1e-12));
    assert!(r.depth >= 2);
    let modular = subq::zoo::modular(vec![1.0, -2.0, 0.5]);
    let r = divide_and_conquer(&modular, &SeparableProblem::quadratic(vec![0.3, 0.1, -4.0]), &BruteForceSolver).unwrap();
    assert!(r.depth <= 3);
    assert!(close(&r.s, &[1.0, -2.0, 0.5], 1e-12));
}

#[test]
fn dnc_agrees_with_mnp() {
    for seed in 0..40u64 {
        let p = 4 + (seed % 5) as usize;
        let (name, f) = common::random_instance(seed as usize, p, seed);
        let mut rng = common::rng(seed + 1000);
        let z = common::random_vector(&mut rng, p, 2.0);
        let a = divide_and_conquer(&f, &SeparableProblem::quadratic(z.clone()), &BruteForceSolver).unwrap();
        let b = prox_quadratic_mnp(&f, &z).unwrap();
        assert!(close(&a.w, &b.w, 1e-7), "{name} seed {seed}: {:?} vs {:?}", a.w, b.w);
        assert!(a.gap.abs() <= 1e-8 && b.gap <= 1e-8, "{name} seed {seed}: gaps {} {}", a.gap, b.gap);
        assert!(a.depth <= p);
        let s_from_w: Vec<f64> = a.w.iter().zip(&z).map(|(w, z)| z - w).collect();
        assert!(close(&a.s, &s_from_w, 1e-9));
        assert!(maximizer_optimality(&f, &a.w, &a.s).unwrap());
    }
}

#[test]
fn chain_tv_fast_path() {
    let p = 50;
    let g = chain(p, 1.0);
    let f = scale(&cut_function(&g).unwrap(), 0.3).unwrap();
    let mut rng = common::rng(5);
    let z: Vec<f64> = (0..p).map(|k| if k < p / 2 { 1.0 } else { -1.0 } + rand::Rng::random_range(&mut rng, -0.5..0.5)).collect();
    let a = divide_and_conquer(&f, &SeparableProblem::quadratic(z.clone()), &AutoSolver).unwrap();
    let b = prox_quadratic_mnp(&f, &z).unwrap();
    assert!(close(&a.w, &b.w, 1e-8));
    let p = 1000;
    let g = chain(p, 1.0);
    let f = scale(&cut_function(&g).unwrap(), 0.5).unwrap();
    let z: Vec<f64> = (0..p).map(|k| ((k / 100) % 2) as f64 + rand::Rng::random_range(&mut rng, -0.3..0.3)).collect();
    let r = divide_and_conquer(&f, &SeparableProblem::quadratic(z), &AutoSolver).unwrap();
    assert!(r.gap.abs() < 1e-6, "gap {}", r.gap);
}

#[test]
fn agglomeration_on_chain() {
    let p = 30;
    let g = cut_function(&chain(p, 1.0)).unwrap();
    let mut rng = common::rng(9);
    let z = common::random_vector(&mut rng, p, 2.0);
    let mut prev = usize::MAX;
    for i in 0..25 {
        let lambda = 0.05 * i as f64;
        let f = scale(&g, lambda).unwrap();
        let r = divide_and_conquer(&f, &SeparableProblem::quadratic(z.clone()), &AutoSolver).unwrap();
        let mut vals = r.w.clone();
        vals.sort_by(f64::total_cmp);
        vals.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert!(vals.len() <= prev);
        prev = vals.len();
    }
}

#[test]
fn thresholds_minimize_lambda_family() {
    for seed in 0..15u64 {
        let p = 4 + (seed % 6) as usize;
        let (name, f) = common::random_instance(seed as usize, p, seed + 50);
        let r = prox_quadratic_mnp(&f, &vec![0.0; p]).unwrap();
        let (lo, _) = threshold_minimizers(&r, 0.0).unwrap();
        let ex = exhaustive_min_minus_modular(&f, &vec![0.0; p]).unwrap();
        assert!((f.eval(&lo) - ex.value).abs() < 1e-9, "{name}");
        let span = r.w.iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1.0;
        let mut prev_max: Option<Subset> = None;
        for i in 0..50 {
            let lambda = -span + 2.0 * span * i as f64 / 49.0;
            let (lo, hi) = threshold_minimizers(&r, lambda).unwrap();
            let ex = exhaustive_min_minus_modular(&f, &vec![-lambda; p]).unwrap();
            let val = |a: &Subset| f.eval(a) + lambda * a.len() as f64;
            assert!((val(&lo) - ex.value).abs() < 1e-8, "{name} λ={lambda}");
            assert!((val(&hi) - ex.value).abs() < 1e-8, "{name} λ={lambda}");
            if let Some(prev) = &prev_max {
                assert!(hi.is_subset_of(prev));
            }
            prev_max = Some(hi);
        }
        let (lo, hi) = threshold_minimizers(&r, span).unwrap();
        assert!(lo.is_empty() && hi.is_empty());
        let (lo, hi) = threshold_minimizers(&r, -span).unwrap();
        assert!(lo.is_full() && hi.is_full());
    }
}

#[test]
fn unsolved_prox_is_rejected() {
    let r = ProxResult { w: vec![0.0], s: vec![0.0], gap: 1.0, depth: 0 };
    assert!(threshold_minimizers(&r, 0.0).is_err());
}

#[test]
fn gap_forms_agree() {
    for seed in 0..30u64 {
        let p = 3 + (seed % 6) as usize;
        let (_, f) = common::random_instance(seed as usize, p, seed + 7);
        let mut rng = common::rng(seed);
        let w = common::random_vector(&mut rng, p, 2.0);
        let z = common::random_vector(&mut rng, p, 2.0);
        let order = Ordering::decreasing(&common::random_vector(&mut rng, p, 1.0));
        let (s, _) = greedy_vertex(&f, &order);
        let problem = SeparableProblem::quadratic(z.clone());
        let a = gap_decomposed(&f, &w, &s, &problem).unwrap();
        let b = gap_integral_quadratic(&f, &w, &s, &z, None).unwrap();
        assert!((a - b).abs() < 1e-8 * (1.0 + a.abs()), "{a} vs {b}");
        assert!(a >= -1e-9);
    }
    let f = card(3);
    let s = vec![1.0; 3];
    let g = gap_decomposed(&f, &[0.0; 3], &s, &SeparableProblem::quadratic(vec![0.0; 3])).unwrap();
    assert!((g - 1.5).abs() < 1e-12);
}

#[test]
fn level_set_values_match_solution() {
    for seed in 0..20u64 {
        let p = 4 + (seed % 6) as usize;
        let (_, f) = common::random_instance(seed as usize, p, seed + 300);
        let r = prox_quadratic_mnp(&f, &vec![0.0; p]).unwrap();
        for (block, v) in level_set_values(&f, &r.w) {
            for k in block.iter() {
                assert!((r.w[k] - v).abs() < 1e-7);
            }
        }
    }
}

#[test]
fn pava_properties() {
    assert_eq!(pava(&[3.0, 1.0, 2.0], None), vec![3.0, 1.5, 1.5]);
    let z = [5.0, 4.0, 1.0];
    assert_eq!(pava(&z, None), z.to_vec());
    let cons: Vec<(usize, usize)> = (0..5).map(|i| (i, i + 1)).collect();
    let z = [0.3, 1.2, -0.5, 0.8, 0.9, -2.0];
    assert!(close(&pava(&z, None), &qp_isotonic(&z, &cons), 1e-9));
}

#[test]
fn improved_primal_beats_naive() {
    let f = card(4);
    let (w, gap) = improve_primal_isotonic(&f, &[1.0; 4]).unwrap();
    assert!(close(&w, &[-1.0; 4], 1e-12) && gap.abs() < 1e-12);
    let p = 40;
    let mut rng = common::rng(3);
    let z = common::random_vector(&mut rng, p, 1.0);
    let f = cut_function(&chain(p, 1.0)).unwrap().add_modular(&z);
    let mut strict = 0;
    let total = 40;
    for t in 1..=total {
        let r = subq::sfm::conditional_gradient(&f, t, subq::sfm::CgRule::LineSearch);
        let s = r.dual.unwrap().s;
        let naive_w: Vec<f64> = s.iter().map(|v| -v).collect();
        let naive = subq::lovasz::lovasz(&f, &naive_w).unwrap() + s.iter().map(|v| v * v).sum::<f64>();
        let (_, better) = improve_primal_isotonic(&f, &s).unwrap();
        assert!(better <= naive + 1e-9);
        if better < naive - 1e-12 {
            strict += 1;
        }
    }
    assert!(strict * 10 >= total * 9, "{strict} of {total}");
}

#[test]
fn transfers() {
    let f = at_most_one(2);
    let z = vec![2.0, -1.0];
    let problem = SeparableProblem::quadratic(z.clone());
    let b = divide_and_conquer(&f, &problem, &BruteForceSolver).unwrap();
    assert!(close(&b.s, &[1.0, 0.0], 1e-12));
    let pr = transfer_to_p(&f, &b, &problem).unwrap();
    assert!(close(&pr.s, &[1.0, -1.0], 1e-12));
    assert!(pr.gap.abs() < 1e-9);
    // z below t: projection onto P(F) is z itself
    let z = vec![-0.5, 0.2];
    let problem = SeparableProblem::quadratic(z.clone());
    let b = divide_and_conquer(&f, &problem, &BruteForceSolver).unwrap();
    let pr = transfer_to_p(&f, &b, &problem).unwrap();
    assert!(close(&pr.s, &z, 1e-12) && close(&pr.w, &[0.0, 0.0], 1e-12));
    // P+ and |P| certified by their gaps, |P| matches sign(z) * prox at |z|
    for seed in 0..10u64 {
        let p = 6;
        let spec = subq::graph::random_cover(p, 5, 3, seed).unwrap();
        let f = set_cover(spec).unwrap();
        let mut rng = common::rng(seed);
        let z = common::random_vector(&mut rng, p, 2.0);
        let problem = SeparableProblem::quadratic(z.clone());
        let b = divide_and_conquer(&f, &problem, &BruteForceSolver).unwrap();
        let plus = transfer_to_p_plus(&f, &b, &problem).unwrap();
        assert!(plus.gap.abs() < 1e-9, "P+ gap {}", plus.gap);
        assert!(plus.s.iter().all(|&v| v >= 0.0));
        let abs = prox_abs_p(&f, &problem, &BruteForceSolver).unwrap();
        assert!(abs.gap.abs() < 1e-9, "|P| gap {}", abs.gap);
        let za: Vec<f64> = z.iter().map(|v| v.abs()).collect();
        let pa = SeparableProblem::quadratic(za.clone());
        let bb = divide_and_conquer(&f, &pa, &BruteForceSolver).unwrap();
        let pp = transfer_to_p_plus(&f, &bb, &pa).unwrap();
        let expect: Vec<f64> = pp.w.iter().zip(&z).map(|(w, z)| w * z.signum()).collect();
        assert!(close(&abs.w, &expect, 1e-9));
    }
    let nonmono = Oracle::new(FnSetFunction::new(2, |a: &Subset| if a.len() == 1 { 1.0 } else { 0.0 }));
    let pr = ProxResult { w: vec![0.0; 2], s: vec![0.0; 2], gap: 0.0, depth: 0 };
    assert!(transfer_to_p_plus(&nonmono, &pr, &SeparableProblem::quadratic(vec![0.0; 2])).is_err());
}

#[test]
fn line_search_and_dual_norm() {
    let p = 4;
    let a = dual_norm_newton(&at_most_one(p), &[0.0; 4], &[1.0; 4], &BruteForceSolver).unwrap();
    assert!((a - 1.0 / p as f64).abs() < 1e-12);
    let s = [0.5, -3.0, 1.0, 2.0];
    assert!((omega_inf_dual(&card(p), &s, &BruteForceSolver).unwrap() - 3.0).abs() < 1e-12);
    for seed in 0..20u64 {
        let p = 5 + (seed % 5) as usize;
        let spec = subq::graph::random_cover(p, p, 3, seed).unwrap();
        let f = set_cover(spec).unwrap();
        let k = (seed as usize) % p;
        let mut t = vec![0.0; p];
        t[k] = 1.5;
        let mut rng = common::rng(seed);
        // a point of P(F): a scaled-down greedy vertex
        let order = Ordering::decreasing(&common::random_vector(&mut rng, p, 1.0));
        let base: Vec<f64> = greedy_vertex(&f, &order).0.iter().map(|v| 0.5 * v - 0.1).collect();
        let alpha = dual_norm_newton(&f, &base, &t, &BruteForceSolver).unwrap();
        let want = subq::set::all_subsets(p)
            .filter(|a| a.contains(k))
            .map(|a| (f.eval(&a) - a.sum(&base)) / 1.5)
            .fold(f64::INFINITY, f64::min);
        assert!((alpha - want).abs() < 1e-9, "{alpha} vs {want}");
    }
    assert!(dual_norm_newton(&card(2), &[0.0; 2], &[1.0, -1.0], &BruteForceSolver).is_err());
}

#[test]
fn omega2_closed_forms() {
    let z: Vec<f64> = vec![1.5, -0.3, 0.7, -2.0];
    let l1: f64 = z.iter().map(|v| v.abs()).sum();
    let l2: f64 = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    let (n, w) = omega_q_norm_and_prox(&card(4), &z, 2.0, &BruteForceSolver).unwrap();
    assert!((n - l1).abs() < 1e-9);
    let soft: Vec<f64> = z.iter().map(|v| v.signum() * (v.abs() - 1.0).max(0.0)).collect();
    assert!(close(&w, &soft, 1e-9));
    let (n, w) = omega_q_norm_and_prox(&at_most_one(4), &z, 2.0, &BruteForceSolver).unwrap();
    assert!((n - l2).abs() < 1e-9);
    let shrink: Vec<f64> = z.iter().map(|v| v * (1.0 - 1.0 / l2).max(0.0)).collect();
    assert!(close(&w, &shrink, 1e-9));
    let groups = vec![(vec![0, 1], 1.0), (vec![2, 3], 1.0)];
    let f = set_cover(CoverSpec { p: 4, groups: groups.clone() }).unwrap();
    let (n, w) = omega_q_norm_and_prox(&f, &z, 2.0, &BruteForceSolver).unwrap();
    let mut want_n = 0.0;
    let mut want_w = vec![0.0; 4];
    for (g, _) in &groups {
        let norm = g.iter().map(|&k| z[k] * z[k]).sum::<f64>().sqrt();
        want_n += norm;
        for &k in g {
            want_w[k] = z[k] * (1.0 - 1.0 / norm).max(0.0);
        }
    }
    assert!((n - want_n).abs() < 1e-9);
    assert!(close(&w, &want_w, 1e-9));
    let r = omega2_prox(&f, &z, &BruteForceSolver).unwrap();
    assert!(r.gap.abs() < 1e-9);
    assert!(omega_q_norm_and_prox(&f, &z, 3.0, &BruteForceSolver).is_err());
}

#[test]
fn isotonic_regression() {
    let z = vec![0.3, 1.2, -0.5, 0.8, 0.9, -2.0];
    let cons: Vec<(usize, usize)> = (0..5).map(|i| (i, i + 1)).collect();
    let w = isotonic_general(&z, &cons, &AutoSolver).unwrap();
    assert!(close(&w, &pava(&z, None), 1e-9));
    assert_eq!(isotonic_general(&z, &[], &AutoSolver).unwrap(), z);
    for seed in 0..20u64 {
        let p = 8;
        let mut rng = common::rng(seed);
        let z = common::random_vector(&mut rng, p, 2.0);
        let cons: Vec<(usize, usize)> = (0..p)
            .flat_map(|i| (i + 1..p).map(move |j| (i, j)))
            .filter(|_| rand::Rng::random_bool(&mut rng, 0.3))
            .collect();
        let w = isotonic_general(&z, &cons, &AutoSolver).unwrap();
        for &(i, j) in &cons {
            assert!(w[i] >= w[j] - 1e-9);
        }
        assert!(close(&w, &qp_isotonic(&z, &cons), 1e-6), "seed {seed}");
    }
    // a cycle forces equality
    let w = isotonic_general(&[1.0, 0.0], &[(0, 1), (1, 0)], &AutoSolver).unwrap();
    assert!(close(&w, &[0.5, 0.5], 1e-9));
}
