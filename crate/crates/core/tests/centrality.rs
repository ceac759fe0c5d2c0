mod common;

use proptest::prelude::*;
use rggbc::centrality::{
    betweenness_brandes, betweenness_brandes_par, betweenness_bruteforce, normalize, pair_count, Normalization,
};
use rggbc::rgg::{sample_graph, Graph};
use rggbc::{ConnectionModel, DomainSpec, RngStream};

use common::{erdos_renyi, interior_hop_total, permuted};

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * x.abs().max(1.0))
}

#[test]
fn two_triangles_joined_by_a_bridge() {
    // 0-1-2 triangle, 3-4-5 triangle, bridge 2-3
    let g = Graph::unembedded(6, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap();
    // 2 relays {0,1} x {3,4,5}: 6 pairs, likewise 3.
    assert_eq!(betweenness_brandes(&g).values, vec![0.0, 0.0, 6.0, 6.0, 0.0, 0.0]);
}

#[test]
fn grid_graph_matches_bruteforce() {
    // 3x4 grid, 12 nodes: many tied shortest paths
    let idx = |r: usize, c: usize| r * 4 + c;
    let mut edges = Vec::new();
    for r in 0..3 {
        for c in 0..4 {
            if c + 1 < 4 {
                edges.push((idx(r, c), idx(r, c + 1)));
            }
            if r + 1 < 3 {
                edges.push((idx(r, c), idx(r + 1, c)));
            }
        }
    }
    let g = Graph::unembedded(12, &edges).unwrap();
    let a = betweenness_brandes(&g).values;
    let b = betweenness_bruteforce(&g).unwrap().values;
    assert!(close(&a, &b, 1e-12), "{a:?} vs {b:?}");
}

#[test]
fn sum_rule_on_sparse_rgg() {
    let d = DomainSpec::unit_disk();
    let g = sample_graph(&d, 60.0, ConnectionModel::soft(40.0, 2.0).unwrap(), &RngStream::new(9)).unwrap();
    let total: f64 = betweenness_brandes(&g).values.iter().sum();
    let expected = interior_hop_total(&g);
    assert!((total - expected).abs() <= 1e-9 * expected.max(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn brandes_matches_bruteforce_on_er(seed in any::<u64>(), n in 1usize..=10, p in 0.0f64..1.0) {
        let g = erdos_renyi(n, p, &mut RngStream::new(seed));
        let a = betweenness_brandes(&g).values;
        let b = betweenness_bruteforce(&g).unwrap().values;
        prop_assert!(close(&a, &b, 1e-12));
    }

    #[test]
    fn brandes_is_permutation_equivariant(seed in any::<u64>(), n in 2usize..40, p in 0.05f64..0.5) {
        let mut rng = RngStream::new(seed);
        let g = erdos_renyi(n, p, &mut rng);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            perm.swap(i, j);
        }
        let before = betweenness_brandes(&g).values;
        let after = betweenness_brandes(&permuted(&g, &perm)).values;
        for i in 0..n {
            prop_assert!((before[i] - after[perm[i]]).abs() <= 1e-9 * before[i].max(1.0));
        }
    }

    #[test]
    fn sum_rule_and_bounds(seed in any::<u64>(), n in 3usize..60, p in 0.02f64..0.6) {
        let g = erdos_renyi(n, p, &mut RngStream::new(seed));
        let raw = betweenness_brandes(&g);
        let expected = interior_hop_total(&g);
        prop_assert!((raw.values.iter().sum::<f64>() - expected).abs() <= 1e-9 * expected.max(1.0));
        let norm = normalize(&raw, Normalization::PairNormalized).unwrap();
        for &v in &norm.values {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v));
        }
        prop_assert!((pair_count(n) * norm.values[0] - raw.values[0]).abs() <= 1e-9 * raw.values[0].max(1.0));
    }

    #[test]
    fn parallel_is_identical_across_runs(seed in any::<u64>(), n in 2usize..120) {
        let g = erdos_renyi(n, 4.0 / n as f64, &mut RngStream::new(seed));
        let a = betweenness_brandes_par(&g);
        prop_assert_eq!(&a, &betweenness_brandes_par(&g));
        prop_assert!(close(&a.values, &betweenness_brandes(&g).values, 1e-9));
    }
}
