#![allow(dead_code)]

use commdet_core::{EdgeRecord, Graph, GraphBuilder, Partition};
use proptest::prelude::*;

pub fn name(i: usize) -> String {
    format!("n{i}")
}

/// Graph on exactly `n` nodes (ids follow `n0..`) with the given weighted edges.
pub fn graph_from(n: usize, edges: &[(usize, usize, f64)]) -> Graph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_node(&name(i)).unwrap();
    }
    for &(u, v, w) in edges {
        b.add_record(&EdgeRecord::new(name(u), name(v), w)).unwrap();
    }
    b.build()
}

pub fn unit_graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    let e: Vec<(usize, usize, f64)> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
    graph_from(n, &e)
}

/// Random weighted graph with `lo..=hi` nodes.
pub fn arb_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        let edge = (0..n, 0..n, prop_oneof![Just(1.0), 0.1f64..5.0]);
        prop::collection::vec(edge, 0..=(n * 3)).prop_map(move |e| graph_from(n, &e))
    })
}

/// Random graph together with a random partition of its nodes.
pub fn arb_graph_and_partition(lo: usize, hi: usize) -> impl Strategy<Value = (Graph, Partition)> {
    arb_graph(lo, hi).prop_flat_map(|g| {
        let n = g.node_count();
        prop::collection::vec(0..n.max(1), n).prop_map(move |l| (g.clone(), Partition::from_labels(l)))
    })
}

/// Modularity from the definition `(1/2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j)`.
pub fn modularity_double_sum(g: &Graph, p: &Partition) -> f64 {
    let n = g.node_count();
    let two_m = g.total_weight();
    if two_m == 0.0 {
        return 0.0;
    }
    let k: Vec<f64> = (0..n).map(|i| g.degree(i).unwrap()).collect();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if p.label(i) == p.label(j) {
                let a = g.weight(i, j).unwrap_or(0.0);
                q += a - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}
