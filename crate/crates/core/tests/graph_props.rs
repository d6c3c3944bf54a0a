mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use commdet_core::io::{format_edge_list, parse_edge_list};
use commdet_core::similarity::{build_knn, build_similarity, SimilarityMode};
use commdet_core::{build_graph, EdgeRecord, Graph};
use common::{arb_graph, name};
use proptest::prelude::*;

fn arb_records() -> impl Strategy<Value = Vec<EdgeRecord>> {
    let rec = (0usize..12, 0usize..12, prop_oneof![Just(1.0), 0.01f64..10.0])
        .prop_map(|(a, b, w)| EdgeRecord::new(name(a), name(b), w));
    prop::collection::vec(rec, 1..60)
}

/// Edges keyed by endpoint names, weights as raw bits.
fn by_name(g: &Graph) -> BTreeMap<(String, String), u64> {
    let names = g.node_names();
    g.edges()
        .map(|(i, j, w)| {
            let (a, b) = (names[i].clone(), names[j].clone());
            (if a < b { (a, b) } else { (b, a) }, w.to_bits())
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn structural_invariants(g in arb_graph(1, 40)) {
        let mut sum = 0.0;
        for i in 0..g.node_count() {
            let row = g.neighbors(i).unwrap();
            prop_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
            for &(j, w) in row {
                prop_assert!(j != i && w > 0.0);
                prop_assert_eq!(g.weight(j, i).map(f64::to_bits), Some(w.to_bits()));
            }
            sum += g.degree(i).unwrap();
        }
        let tw = g.total_weight();
        prop_assert!((tw - sum).abs() <= 1e-12 * tw.max(1.0));
    }

    #[test]
    fn record_order_does_not_matter(records in arb_records(), seed in any::<u64>()) {
        let mut shuffled = records.clone();
        // deterministic Fisher–Yates from the seed
        let mut s = seed | 1;
        for i in (1..shuffled.len()).rev() {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            shuffled.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let a = build_graph(&records, true).unwrap();
        let b = build_graph(&shuffled, true).unwrap();
        prop_assert_eq!(a.node_count(), b.node_count());
        prop_assert_eq!(by_name(&a), by_name(&b));
        prop_assert_eq!(a.total_weight().to_bits(), b.total_weight().to_bits());
        // identical input, identical graph including ids
        prop_assert_eq!(&build_graph(&records, true).unwrap(), &a);
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(2, 30)) {
        prop_assume!(g.edge_count() > 0);
        let text = format_edge_list(&g);
        let back = parse_edge_list(&text, Path::new("mem"), false, true).unwrap();
        prop_assert_eq!(by_name(&back), by_name(&g));
        prop_assert_eq!(&parse_edge_list(&text, Path::new("mem"), false, true).unwrap(), &back);
    }

    #[test]
    fn common_neighbor_matches_set_intersection(g in arb_graph(1, 50)) {
        let sim = build_similarity(&g, SimilarityMode::CommonNeighbor);
        let nbrs: Vec<BTreeSet<usize>> = (0..g.node_count())
            .map(|i| g.neighbors(i).unwrap().iter().map(|&(j, _)| j).collect())
            .collect();
        for (i, j, _) in g.edges() {
            let expected = nbrs[i].intersection(&nbrs[j]).count() as f64;
            prop_assert_eq!(sim.get(i, j), expected);
            prop_assert_eq!(sim.get(j, i), expected);
        }
    }

    #[test]
    fn knn_sums_grow_with_k(g in arb_graph(1, 30), mode in prop_oneof![Just(SimilarityMode::Weighted), Just(SimilarityMode::CommonNeighbor)]) {
        let sim = build_similarity(&g, mode);
        let mut prev = build_knn(&sim, 1).unwrap();
        for k in 2..6 {
            let next = build_knn(&sim, k).unwrap();
            for i in 0..g.node_count() {
                prop_assert!(next.similarity_sum(i) >= prev.similarity_sum(i));
                prop_assert!(next.neighbors(i).len() <= k);
            }
            prev = next;
        }
        prop_assert_eq!(&build_similarity(&g, mode), &sim);
        prop_assert_eq!(build_knn(&build_similarity(&g, mode), 3).unwrap(), build_knn(&sim, 3).unwrap());
    }
}
