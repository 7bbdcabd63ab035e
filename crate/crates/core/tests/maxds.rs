mod common;

use subq::graph::{cut_function, random_cover, random_digraph, WeightedDigraph};
use subq::maxds::*;
use subq::oracle::FnSetFunction;
use subq::sfm::BruteForceSolver;
use subq::zoo::{modular, set_cover};
use subq::{Oracle, Subset};

fn best_of_size(f: &Oracle, k: usize) -> f64 {
    subq::set::all_subsets(f.len()).filter(|a| a.len() <= k).map(|a| f.eval(&a)).fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn greedy_examples() {
    let f = Oracle::new(FnSetFunction::new(5, |a: &Subset| a.len() as f64));
    let r = greedy_max_cardinality(&f, 3, false).unwrap();
    assert_eq!(r.chosen.len(), 3);
    assert_eq!(r.value, 3.0);
    let m = modular(vec![0.5, 3.0, 1.0, 2.0]);
    let r = greedy_max_cardinality(&m, 2, true).unwrap();
    assert_eq!(r.chosen.to_vec(), vec![1, 3]);
    assert!(greedy_max_cardinality(&m, 0, false).is_err());
    assert!(greedy_max_cardinality(&m, 5, false).is_err());
    let nonmono = Oracle::new(FnSetFunction::new(3, |a: &Subset| (a.len() == 1) as u8 as f64));
    assert!(greedy_max_cardinality(&nonmono, 1, false).is_err());
}

#[test]
fn greedy_ratio_and_lazy_equivalence() {
    for seed in 0..40u64 {
        let p = 6 + (seed % 9) as usize;
        let f = set_cover(random_cover(p, p, 4, seed).unwrap()).unwrap();
        for k in 1..=4.min(p) {
            let eager = greedy_max_cardinality(&f, k, false).unwrap();
            let lazy = greedy_max_cardinality(&f, k, true).unwrap();
            assert_eq!(eager, lazy);
            let opt = best_of_size(&f, k);
            assert!(eager.value >= greedy_ratio(k) * opt - 1e-9);
            assert!(eager.trace.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12));
        }
        let w: Vec<f64> = (0..p).map(|i| 1.0 + (i % 3) as f64 * 0.1).collect();
        let c = subq::zoo::cardinality_based(w, subq::zoo::ConcaveSpec::Sqrt).unwrap();
        assert_eq!(greedy_max_cardinality(&c, 3, false).unwrap(), greedy_max_cardinality(&c, 3, true).unwrap());
    }
}

#[test]
fn local_search_dominates_neighbours() {
    let tri = WeightedDigraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], true).unwrap();
    let f = cut_function(&tri).unwrap();
    let r = local_search_max(&f, &Subset::empty(3), 100).unwrap();
    assert_eq!(r.value, 2.0);
    let m = modular(vec![1.0, -1.0, 0.5, 0.0]);
    assert_eq!(local_search_max(&m, &Subset::empty(4), 100).unwrap().chosen.to_vec(), vec![0, 2]);
    for seed in 0..20u64 {
        let p = 5 + (seed % 6) as usize;
        let f = cut_function(&random_digraph(p, 0.5, 1.0, seed)).unwrap();
        let r = local_search_max(&f, &Subset::empty(p), 1000).unwrap();
        assert!(r.converged);
        for b in subq::set::all_subsets(p) {
            if b.is_subset_of(&r.chosen) || r.chosen.is_subset_of(&b) {
                assert!(f.eval(&b) <= r.value + 1e-9, "seed {seed}");
            }
        }
        let opt = best_of_size(&f, p);
        assert!(random_subset_mean(&f, 1000, seed) >= opt / 4.0 - 0.1 * opt);
    }
}

#[test]
fn ds_minimize_properties() {
    let (_, f) = common::random_instance(0, 6, 1);
    let zero = modular(vec![0.0; 6]);
    let r = ds_minimize(&f, &zero, &Subset::full(6), &BruteForceSolver, 10).unwrap();
    let best = subq::sfm::brute_force(&f).unwrap().min_value;
    assert!((r.value - best).abs() < 1e-9);
    let r = ds_minimize(&f, &f, &Subset::empty(6), &BruteForceSolver, 10).unwrap();
    assert_eq!(r.rounds, 1);
    assert!(r.value.abs() < 1e-12);
    for seed in 0..20u64 {
        let p = 5 + (seed % 6) as usize;
        let f = cut_function(&random_digraph(p, 0.5, 1.0, seed)).unwrap();
        let g = set_cover(random_cover(p, p, 3, seed + 9).unwrap()).unwrap();
        let start = Subset::from_indices(p, (0..p).filter(|k| k % 2 == 0));
        let r = ds_minimize(&f, &g, &start, &BruteForceSolver, 100).unwrap();
        assert!(r.converged);
        assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(r.value <= f.eval(&start) - g.eval(&start) + 1e-12);
        for k in 0..p {
            let mut c = r.set.clone();
            c.toggle(k);
            assert!(f.eval(&c) - g.eval(&c) >= r.value - 1e-9, "seed {seed}");
        }
    }
}
