mod common;

use common::{random_vector, rng};
use subq::graph::io::{parse_constraints, parse_edge_list, parse_vector, write_edge_list, write_vector};
use subq::graph::{
    chain, cut_function, genrmf_like, grid2d, max_flow, min_cut_minus_modular,
    random_digraph, StNetwork,
};
use subq::set::all_subsets;
use subq::sfm::brute_force;
use subq::Subset;

fn network(g: &subq::graph::WeightedDigraph, s: usize, t: usize) -> StNetwork {
    let mut net = StNetwork::new(g.n, s, t);
    for (u, v, c) in g.directed_arcs() {
        net.add_arc(u, v, c);
    }
    net
}

#[test]
fn max_flow_equals_min_cut() {
    for seed in 0..100 {
        let n = 2 + (seed % 8) as usize;
        let g = random_digraph(n, 0.5, 3.0, seed);
        let net = network(&g, 0, n - 1);
        let r = max_flow(&net);
        let cuts: Vec<(Subset, f64)> = all_subsets(n)
            .filter(|a| a.contains(0) && !a.contains(n - 1))
            .map(|a| {
                let c = net.cut_capacity(&a);
                (a, c)
            })
            .collect();
        let best = cuts.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        assert!((r.value - best).abs() < 1e-9, "seed {seed}");
        assert!(subq::graph::maxflow::flow_violation(&net, &r.flows) < 1e-9);
        for side in [&r.minimal_source_side, &r.maximal_source_side] {
            assert!((net.cut_capacity(side) - best).abs() < 1e-9);
        }
        assert!(r.minimal_source_side.is_subset_of(&r.maximal_source_side));
        for (a, c) in &cuts {
            if (c - best).abs() < 1e-9 {
                assert!(r.minimal_source_side.is_subset_of(a) && a.is_subset_of(&r.maximal_source_side));
            }
        }
    }
}

#[test]
fn unreachable_sink_has_zero_flow() {
    let mut net = StNetwork::new(3, 0, 2);
    net.add_arc(0, 1, 4.0);
    net.add_arc(2, 1, 1.0);
    let r = max_flow(&net);
    assert_eq!(r.value, 0.0);
    assert_eq!(r.minimal_source_side.to_vec(), vec![0, 1]);
}

#[test]
fn min_cut_minus_modular_matches_enumeration() {
    for seed in 0..60 {
        let n = 1 + (seed % 10) as usize;
        let g = random_digraph(n, 0.4, 2.0, 100 + seed);
        let z = random_vector(&mut rng(seed), n, 2.0);
        let (set, v) = min_cut_minus_modular(&g, &z).unwrap();
        let f = cut_function(&g).unwrap().add_modular(&z.iter().map(|x| -x).collect::<Vec<_>>());
        let b = brute_force(&f).unwrap();
        assert!((v - b.min_value).abs() < 1e-9);
        assert!((f.eval(&set) - v).abs() < 1e-9);
    }
}

#[test]
fn generators_have_expected_shape() {
    let c = chain(5, 2.0);
    assert_eq!(c.cut(&Subset::from_indices(5, [0, 1])), 2.0);
    assert_eq!(c.cut(&Subset::from_indices(5, [2])), 4.0);
    let g = grid2d(3, 4, 1.0);
    assert_eq!(g.n, 12);
    // interior vertex of a 3×4 grid has four neighbours
    assert_eq!(g.cut(&Subset::from_indices(12, [5])), 4.0);
    let net = genrmf_like(3, 4, 0.1, 1.0, 7).unwrap();
    assert_eq!(net.graph.n, 36);
    let z = net.terminal_weights();
    assert!(z[..9].iter().all(|&v| v > 0.0) && z[27..].iter().all(|&v| v < 0.0));
    assert_eq!(genrmf_like(3, 4, 0.1, 1.0, 7).unwrap(), net);
}

#[test]
fn text_formats_round_trip() {
    let g = random_digraph(6, 0.5, 3.0, 4);
    let back = parse_edge_list(&write_edge_list(&g)).unwrap();
    for a in all_subsets(6) {
        assert!((g.cut(&a) - back.cut(&a)).abs() < 1e-12);
    }
    let v = vec![1.5, -2.0, 0.1];
    assert_eq!(parse_vector(&write_vector(&v)).unwrap(), v);
    assert_eq!(parse_constraints("1 2\n3 1\n", 3).unwrap(), vec![(0, 1), (2, 0)]);
    assert!(parse_constraints("1 4\n", 3).is_err());
    assert!(parse_edge_list("2 1\n1 3 1.0\n").is_err());
    assert!(parse_edge_list("2 2\n1 2 1.0\n").is_err());
}
