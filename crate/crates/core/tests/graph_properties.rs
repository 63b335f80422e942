use emd1d::emd::{emd_discrete, ProbVector};
use emd1d::graph::{
    bfs_distances, build_emd_graph, cheeger_bounds, connected_components, earth_movers_graph,
    isoperimetric_number, laplacian, mean_distance, mean_distance_bounds, random_connected_graph, spectrum,
    threshold_sweep, EmdGraph, Payload, DEFAULT_EMG_CAP, ZERO_EIGENVALUE_TOLERANCE,
};
use emd1d::numerics::ratio;
use num::{BigRational, ToPrimitive};
use proptest::prelude::*;

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

#[test]
fn shortest_paths_in_emg_are_distances() {
    for n in 1..=4 {
        for s in 0..=4 {
            let g = earth_movers_graph(s, n, DEFAULT_EMG_CAP).unwrap();
            let comps: Vec<_> = g
                .payloads()
                .iter()
                .map(|p| match p {
                    Payload::Composition(c) => c.clone(),
                    _ => panic!("EMG vertices carry compositions"),
                })
                .collect();
            for (u, a) in comps.iter().enumerate() {
                let dist = bfs_distances(&g, u);
                for (v, b) in comps.iter().enumerate() {
                    assert_eq!(dist[v], Some(emd_discrete(a, b).unwrap() as usize), "{a} {b}");
                }
            }
        }
    }
}

#[test]
fn seeded_suite_sandwiches() {
    for seed in 0..50u64 {
        let m = 4 + (seed % 9) as usize;
        let g = random_connected_graph(m, 0.4, seed);
        let l2 = spectrum(&laplacian(&g)).unwrap().eigenvalues[1];
        let i = to_f64(&isoperimetric_number(&g).unwrap());
        let (lo, hi) = cheeger_bounds(l2, g.max_degree()).unwrap();
        assert!(lo <= i + 1e-9 && i <= hi + 1e-9, "seed {seed}: {lo} <= {i} <= {hi}");
        let rho = to_f64(&mean_distance(&g).unwrap());
        let (lo, _) = mean_distance_bounds(l2, g.max_degree(), m).unwrap();
        assert!(lo <= rho + 1e-9, "seed {seed}");
    }
}

#[test]
fn printed_mean_distance_upper_bound_is_not_a_valid_bound() {
    // K2 already breaks it: ln(1) = 0 makes the upper expression 0 < 1
    let (_, hi) = mean_distance_bounds(2.0, 1, 2).unwrap();
    assert_eq!(hi, 0.0);
    let violations = (0..50u64)
        .filter(|&seed| {
            let m = 4 + (seed % 9) as usize;
            let g = random_connected_graph(m, 0.4, seed);
            let l2 = spectrum(&laplacian(&g)).unwrap().eigenvalues[1];
            let (_, hi) = mean_distance_bounds(l2, g.max_degree(), m).unwrap();
            to_f64(&mean_distance(&g).unwrap()) > hi
        })
        .count();
    assert!(violations > 0);
}

fn random_graph() -> impl Strategy<Value = EmdGraph> {
    (1usize..=12).prop_flat_map(|m| {
        prop::collection::vec(any::<bool>(), m * (m - 1) / 2).prop_map(move |mask| {
            let pairs = (0..m).flat_map(|u| (u + 1..m).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| e).collect();
            EmdGraph::from_edges(m, &edges).unwrap()
        })
    })
}

fn distributions() -> impl Strategy<Value = Vec<ProbVector>> {
    (2usize..=6).prop_flat_map(|n| {
        prop::collection::vec(
            prop::collection::vec(0u64..20, n)
                .prop_filter("non-empty", |c| c.iter().any(|&x| x > 0))
                .prop_map(|c| ProbVector::from_counts(&c).unwrap()),
            1..10,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn laplacian_is_positive_semidefinite(g in random_graph()) {
        let s = spectrum(&laplacian(&g)).unwrap();
        prop_assert!(s.eigenvalues[0] >= -1e-10);
        prop_assert_eq!(s.zero_multiplicity(ZERO_EIGENVALUE_TOLERANCE), connected_components(&g).len());
    }

    #[test]
    fn ordered_pair_identity(g in random_graph()) {
        prop_assume!(g.vertex_count() >= 2 && connected_components(&g).len() == 1);
        let m = g.vertex_count();
        let all: usize = (0..m).map(|v| bfs_distances(&g, v).iter().flatten().sum::<usize>()).sum();
        let lhs = (ratio(1, 1) - ratio(1, m as i64)) * mean_distance(&g).unwrap();
        prop_assert_eq!(lhs, ratio(all as i64, (m * m) as i64));
    }

    #[test]
    fn sweep_counts_never_increase(d in distributions(), raw in prop::collection::vec(0u32..=100, 1..12)) {
        let mut ts: Vec<BigRational> = raw.into_iter().map(|k| ratio(k, 100)).collect();
        ts.sort();
        let counts: Vec<usize> = threshold_sweep(&d, &ts).unwrap().into_iter().map(|x| x.1).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] >= w[1]));
        for (t, c) in ts.iter().zip(&counts) {
            prop_assert_eq!(connected_components(&build_emd_graph(&d, t).unwrap()).len(), *c);
        }
    }
}
