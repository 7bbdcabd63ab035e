use std::fs;

use subq::sfm::{brute_force, minimize, Algorithm, Budget};
use subq_bench::prox::run_prox_bench_on;
use subq_bench::suites::{chain_instance, two_moons_instance};
use subq_bench::{run_sfm_bench, BenchConfig, Solver, Suite};

fn small_config(out: &std::path::Path) -> BenchConfig {
    BenchConfig {
        suites: vec![Suite::Chain],
        max_oracle_calls: Some(20_000),
        prox_iters: Some(50),
        out: Some(out.to_path_buf()),
        ..BenchConfig::default()
    }
}

#[test]
fn repeated_runs_write_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_sfm_bench(&small_config(a.path())).unwrap();
    run_sfm_bench(&small_config(b.path())).unwrap();
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.iter().any(|n| n.to_string_lossy().starts_with("trace_")));
    for name in names {
        let (pa, pb) = (a.path().join(&name), b.path().join(&name));
        if pa.is_file() {
            assert_eq!(fs::read(&pa).unwrap(), fs::read(&pb).unwrap(), "{name:?} differs");
        }
    }
}

#[test]
fn empty_solver_list_is_rejected() {
    let cfg = BenchConfig { solvers: vec![], out: None, ..BenchConfig::default() };
    assert!(run_sfm_bench(&cfg).is_err());
    assert!(Solver::parse_list("mnp,newton").is_err());
    assert_eq!(Solver::parse_list("all").unwrap(), Solver::ALL.to_vec());
}

#[test]
fn traces_are_monotone_and_bracket_the_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_sfm_bench(&small_config(dir.path())).unwrap();
    for inst in &report.instances {
        assert_eq!(inst.solvers.len(), Solver::ALL.len());
        for s in &inst.solvers {
            assert!(s.monotone, "{}", s.solver);
            assert!(s.opt_consistent, "{}", s.solver);
            assert!(s.oracle_calls <= inst.oracle_budget + inst.p as u64);
            assert!(s.primal_subopt >= -1e-9 && s.dual_subopt >= -1e-9);
        }
    }
}

#[test]
fn prox_isotonic_correction_never_hurts() {
    let cfg = BenchConfig { prox_iters: Some(200), out: None, ..BenchConfig::default() };
    let report = run_prox_bench_on(&[chain_instance(40, 1.0, 0.5, 3)], &cfg).unwrap();
    for s in &report.instances[0].solvers {
        assert!(s.pava_dominates, "{}", s.solver);
        assert!(s.final_pava_gap <= s.final_naive_gap + 1e-12);
    }
}

#[test]
fn small_two_moons_labels_match_enumeration() {
    let inst = two_moons_instance(12, 4, 1).unwrap();
    let f = inst.oracle().unwrap();
    let exact = brute_force(&f).unwrap();
    let r = minimize(&f, &Algorithm::MinNormPoint { tol: 1e-10 }, &Budget::iterations(10_000)).unwrap();
    assert!((f.eval(&r.minimizer) - exact.min_value).abs() <= 1e-9);
    assert_eq!(r.minimizer, exact.minimizer);
}
