mod common;

use std::path::Path;
use std::sync::Arc;

use common::{random_psd, rng};
use subq::graph::{chain, random_cover};
use subq::polyhedra::{check_submodular, is_non_decreasing};
use subq::set::all_subsets;
use subq::sfm::AutoSolver;
use subq::zoo::{self, cardinality_based, set_cover, ConcaveSpec, FunctionSpec, PsdMatrix};
use subq::{Oracle, SfmHandle, Subset};

fn handle() -> Option<Arc<dyn SfmHandle>> {
    Some(Arc::new(AutoSolver))
}

#[test]
fn known_values() {
    let f = cardinality_based(vec![1.0; 4], ConcaveSpec::MinWithOne).unwrap();
    assert_eq!(f.eval(&Subset::empty(4)), 0.0);
    assert_eq!(f.eval(&Subset::full(4)), 1.0);
    let cover = set_cover(zoo::CoverSpec { p: 3, groups: vec![(vec![0, 1], 2.0), (vec![2], 1.0)] }).unwrap();
    assert_eq!(cover.eval(&Subset::from_indices(3, [0])), 2.0);
    assert_eq!(cover.eval(&Subset::full(3)), 3.0);
    let rank = zoo::graphic_matroid_rank(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
    assert_eq!(rank.eval(&Subset::full(3)), 2.0);
    assert_eq!(rank.eval(&Subset::from_indices(3, [0, 1])), 2.0);
}

#[test]
fn log_det_matches_determinant() {
    let q = random_psd(&mut rng(3), 3);
    let f = zoo::log_det(PsdMatrix::with_jitter(q.clone(), 0.0)).unwrap();
    let det = q.get(0, 0) * q.get(1, 1) - q.get(0, 1) * q.get(1, 0);
    assert!((f.eval(&Subset::from_indices(3, [0, 1])) - det.ln()).abs() < 1e-10);
    assert_eq!(f.eval(&Subset::empty(3)), 0.0);
}

#[test]
fn combinators_preserve_submodularity() {
    let p = 6;
    let cut = subq::graph::cut_function(&chain(p, 1.0)).unwrap();
    let cover = set_cover(random_cover(p, 5, 3, 2).unwrap()).unwrap();
    let z = vec![0.5, -1.0, 0.3, 2.0, -0.4, 0.0];
    let half = Subset::from_indices(p, [1, 3, 5]);
    let fs: Vec<(&str, Oracle)> = vec![
        ("sum", zoo::sum(&[cut.clone(), cover.clone()]).unwrap()),
        ("scale", zoo::scale(&cover, 3.0).unwrap()),
        ("restrict", zoo::restrict(&cut, &half)),
        ("contract", zoo::contract(&cover, &half)),
        ("symmetrize", zoo::symmetrize(&cover)),
        ("convolve", zoo::convolve_modular(&cover, &z, handle()).unwrap()),
        ("monotonize", zoo::monotonize(&zoo::add_modular(&cut, &z), handle()).unwrap()),
        ("compose", zoo::concave_compose(&cover, ConcaveSpec::Log1p, false).unwrap()),
        ("partial_min", zoo::partial_min(&zoo::add_modular(&cut, &z), 3, handle()).unwrap()),
    ];
    for (name, f) in fs {
        assert!(check_submodular(&f).unwrap().is_submodular(), "{name}");
        assert_eq!(f.eval(&Subset::empty(f.len())), 0.0, "{name}");
    }
    let mono = zoo::monotonize(&zoo::add_modular(&cut, &z), handle()).unwrap();
    assert!(is_non_decreasing(&mono).unwrap());
}

#[test]
fn convolution_is_pointwise_minimum() {
    let cover = set_cover(random_cover(5, 4, 3, 9).unwrap()).unwrap();
    let z = vec![0.3, 1.2, 0.1, 2.0, 0.5];
    let conv = zoo::convolve_modular(&cover, &z, handle()).unwrap();
    for a in all_subsets(5) {
        let want = all_subsets(5)
            .filter(|b| b.is_subset_of(&a))
            .map(|b| cover.eval(&b) + a.difference(&b).sum(&z))
            .fold(f64::INFINITY, f64::min);
        assert!((conv.eval(&a) - want).abs() < 1e-9);
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(cardinality_based(vec![-1.0, 1.0], ConcaveSpec::Sqrt).is_err());
    assert!(zoo::scale(&zoo::modular(vec![1.0]), -2.0).is_err());
    assert!(set_cover(zoo::CoverSpec { p: 2, groups: vec![(vec![3], 1.0)] }).is_err());
    let not_psd = subq::linalg::SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
    assert!(zoo::log_det(PsdMatrix::new(not_psd)).is_err());
}

#[test]
fn specs_round_trip_and_build() {
    let text = r#"{"type":"sum","terms":[
        {"type":"cut","n":3,"arcs":[[1,2,1.0],[2,3,2.0]],"symmetric":true},
        {"type":"add_modular","f":{"type":"cardinality","p":3,"g":{"kind":"sqrt"}},"z":[1.0,-1.0,0.5]},
        {"type":"scale","lambda":2.0,"f":{"type":"modular","z":[1.0,2.0,3.0]}}]}"#;
    let spec = FunctionSpec::from_json(text).unwrap();
    let again = FunctionSpec::from_json(&spec.to_json()).unwrap();
    assert_eq!(spec, again);
    let f = spec.build(Path::new("."), None).unwrap();
    let a = Subset::from_indices(3, [0]);
    assert!((f.eval(&a) - (1.0 + 1.0 + 1.0 + 2.0)).abs() < 1e-12);
    let r = FunctionSpec::from_json(r#"{"type":"restrict","f":{"type":"modular","z":[1.0,2.0,3.0]},"set":[1,3]}"#).unwrap();
    assert_eq!(r.build(Path::new("."), None).unwrap().eval(&Subset::full(2)), 4.0);
    assert!(FunctionSpec::from_json(r#"{"type":"restrict","f":{"type":"modular","z":[1.0]},"set":[2]}"#)
        .unwrap()
        .build(Path::new("."), None)
        .is_err());
}
