mod common;

use commdet_core::shift::{gaussian_kernel, medoid_shift, next_points, rms, DistanceMatrix};
use commdet_core::similarity::{build_knn, build_similarity, SimilarityMode};
use common::{arb_graph, unit_graph};
use proptest::prelude::*;

fn mode_strategy() -> impl Strategy<Value = SimilarityMode> {
    prop_oneof![Just(SimilarityMode::Weighted), Just(SimilarityMode::CommonNeighbor)]
}

/// `argmin_j Σ_k D(j,k) φ(D(i,k))`, evaluated directly; ties to the smallest j.
fn brute_next(d: &[Vec<f64>]) -> Vec<usize> {
    let n = d.len();
    (0..n)
        .map(|i| {
            let mut best = (f64::INFINITY, 0);
            for j in 0..n {
                let s: f64 = (0..n).map(|k| d[j][k] * (-d[i][k] / 2.0).exp()).sum();
                if s < best.0 {
                    best = (s, j);
                }
            }
            best.1
        })
        .collect()
}

/// Symmetric matrix with zero diagonal. Small integer entries make exact ties
/// common so the tie rule is exercised.
fn arb_distances() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=10).prop_flat_map(|n| {
        let entry = prop_oneof![(0u32..6).prop_map(f64::from), 0.0f64..20.0];
        prop::collection::vec(entry, n * n).prop_map(move |raw| {
            let mut d = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    d[i][j] = raw[i * n + j];
                    d[j][i] = raw[i * n + j];
                }
            }
            d
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn rms_terminates_without_cycles(g in arb_graph(1, 200), k in 1usize..12, mode in mode_strategy()) {
        let out = rms(&g, mode, k).unwrap();
        let n = g.node_count();
        let state = &out.state;
        prop_assert!(state.iteration_count() <= n);
        prop_assert_eq!(out.partition.len(), n);

        // every chain reaches a center, and DL never decreases along it
        let sim = build_similarity(&g, mode);
        let knn = build_knn(&sim, k).unwrap();
        let dl = knn.similarity_sums();
        let next = state.next_medoid();
        for &c in state.centers() {
            prop_assert_eq!(next[c], c);
        }
        for i in 0..n {
            let (mut m, mut steps) = (i, 0);
            while next[m] != m {
                prop_assert!(dl[next[m]] >= dl[m]);
                m = next[m];
                steps += 1;
                prop_assert!(steps <= n, "cycle through node {}", i);
            }
            prop_assert!(state.centers().contains(&m));
        }
        // one community per center
        prop_assert_eq!(out.partition.community_count(), state.centers().len());
        // per-iteration work is bounded by Σ (1 + |NN(i)|) and never grows
        let bound = n + knn.total_len();
        prop_assert!(state.work_per_iteration().iter().all(|&w| w <= bound));
        prop_assert!(state.work_per_iteration().windows(2).all(|w| w[1] <= w[0]));

        for _ in 0..2 {
            let again = rms(&g, mode, k).unwrap();
            prop_assert_eq!(&again.partition, &out.partition);
            prop_assert_eq!(again.state.next_medoid(), state.next_medoid());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn medoid_next_matches_brute_force(d in arb_distances()) {
        let m = DistanceMatrix::from_rows(&d).unwrap();
        prop_assert_eq!(next_points(&m, gaussian_kernel), brute_next(&d));
        let p = medoid_shift(&m, gaussian_kernel);
        prop_assert_eq!(p.len(), d.len());
    }
}

#[test]
fn disjoint_triangles_give_two_communities() {
    let g = unit_graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
    for k in 1..=4 {
        let out = rms(&g, SimilarityMode::CommonNeighbor, k).unwrap();
        assert_eq!(out.partition.labels(), &[0, 0, 0, 1, 1, 1], "k = {k}");
    }
    let out = rms(&g, SimilarityMode::CommonNeighbor, 2).unwrap();
    assert_eq!(out.state.centers(), &[0, 3]);
}
