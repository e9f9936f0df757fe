//! Cross-checks of the CSR metric implementations against the dense
//! brute-force oracles in `common`.

mod common;

use common::DenseGraph;
use tagnet::graph::NodeId;
use tagnet::metrics::{
    self, average_path_length, degree_distribution, AplMode,
};
use tagnet::TagGraph;

/// Same partition, possibly different label values.
fn same_partition(a: &[u32], b: &[usize]) -> bool {
    use std::collections::HashMap;
    let mut fwd: HashMap<u32, usize> = HashMap::new();
    let mut back: HashMap<usize, u32> = HashMap::new();
    a.iter().zip(b).all(|(&x, &y)| {
        *fwd.entry(x).or_insert(y) == y && *back.entry(y).or_insert(x) == x
    })
}

#[test]
fn bfs_matches_matrix_squaring_on_random_graphs() {
    for seed in 0..40u64 {
        let n = 2 + (seed as usize * 7) % 49;
        let p = 0.02 + 0.2 * ((seed % 5) as f64);
        let dense = DenseGraph::random(n, p, seed);
        let g = dense.to_graph();
        let dist = dense.apsp_matrix_squaring();

        match (average_path_length::<f64>(&g, AplMode::Exact), dense.average_path_length()) {
            (Ok(got), Some((want_l, want_pairs))) => {
                assert!((got.l - want_l).abs() < 1e-9, "seed {seed}");
                assert_eq!(got.pairs_counted, want_pairs, "seed {seed}");
            }
            (Err(_), None) => {}
            (got, want) => panic!("seed {seed}: {got:?} vs {want:?}"),
        }

        // spot-check individual distances via a 1-source BFS done by hand
        for i in 0..n {
            let mut seen = vec![u32::MAX; n];
            seen[i] = 0;
            let mut q = std::collections::VecDeque::from([i]);
            while let Some(u) = q.pop_front() {
                for &v in g.neighbors(u as NodeId) {
                    if seen[v as usize] == u32::MAX {
                        seen[v as usize] = seen[u] + 1;
                        q.push_back(v as usize);
                    }
                }
            }
            for j in 0..n {
                let want = dist[i][j];
                let got = if seen[j] == u32::MAX { None } else { Some(seen[j]) };
                assert_eq!(got, want, "seed {seed} dist {i}->{j}");
            }
        }
    }
}

#[test]
fn triangle_counts_match_neighbor_pair_enumeration() {
    for seed in 0..40u64 {
        let n = 3 + (seed as usize * 5) % 45;
        let dense = DenseGraph::random(n, 0.25, 1000 + seed);
        let g = dense.to_graph();
        for i in 0..n {
            let got: Option<f64> = metrics::local_clustering(&g, i as NodeId).unwrap();
            let want = dense.local_clustering(i);
            match (got, want) {
                (Some(a), Some(b)) => assert!((a - b).abs() < 1e-12, "seed {seed} node {i}"),
                (None, None) => {}
                other => panic!("seed {seed} node {i}: {other:?}"),
            }
        }
    }
}

#[test]
fn degree_histogram_matches_adjacency_row_sums() {
    for seed in 0..40u64 {
        let n = 1 + (seed as usize * 3) % 50;
        let dense = DenseGraph::random(n, 0.15, 2000 + seed);
        let g = dense.to_graph();
        let dist = degree_distribution::<f64>(&g).unwrap();
        let mut want = std::collections::BTreeMap::new();
        for d in dense.degrees() {
            *want.entry(d).or_insert(0usize) += 1;
        }
        for (k, c) in want {
            assert_eq!(dist.count(k), c, "seed {seed} k={k}");
        }
    }
}

#[test]
fn component_labels_match_flood_fill() {
    for seed in 0..40u64 {
        let n = 1 + (seed as usize * 11) % 50;
        let dense = DenseGraph::random(n, 0.05, 3000 + seed);
        let g = dense.to_graph();
        let got = g.connected_components();
        let want = dense.components();
        assert!(same_partition(got.labels(), &want), "seed {seed}");
        let distinct: std::collections::BTreeSet<_> = want.iter().collect();
        assert_eq!(got.count(), distinct.len(), "seed {seed}");
    }
}

#[test]
fn metrics_invariant_under_node_permutation() {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    for seed in 0..10u64 {
        let dense = DenseGraph::random(30, 0.2, 4000 + seed);
        let g = dense.to_graph();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<NodeId> = (0..30).collect();
        perm.shuffle(&mut rng);
        let permuted = TagGraph::from_edges(
            30,
            g.edges().map(|(i, j)| (perm[i as usize], perm[j as usize])),
        );

        let c1 = metrics::average_clustering::<f64>(&g);
        let c2 = metrics::average_clustering::<f64>(&permuted);
        match (c1, c2) {
            (Ok(a), Ok(b)) => assert!((a.average - b.average).abs() < 1e-12),
            (Err(_), Err(_)) => {}
            other => panic!("{other:?}"),
        }
        let l1 = average_path_length::<f64>(&g, AplMode::Exact);
        let l2 = average_path_length::<f64>(&permuted, AplMode::Exact);
        match (l1, l2) {
            (Ok(a), Ok(b)) => {
                assert!((a.l - b.l).abs() < 1e-12);
                assert_eq!(a.pairs_counted, b.pairs_counted);
            }
            (Err(_), Err(_)) => {}
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn sampled_with_all_sources_equals_exact() {
    for seed in 0..5u64 {
        let g = tagnet::synth::generate_ba(200, 2, seed).unwrap();
        let exact = average_path_length::<f64>(&g, AplMode::Exact).unwrap();
        let sampled =
            average_path_length::<f64>(&g, AplMode::Sampled { sources: 200, seed }).unwrap();
        assert!((exact.l - sampled.l).abs() < 1e-12);
    }
}
