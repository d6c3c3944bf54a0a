use rand::seq::SliceRandom;
use rand::Rng;

use super::RngSeed;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq)]
pub struct LabelPropagation {
    pub partition: Partition,
    pub sweeps: usize,
    /// False when `max_sweeps` ran out before every node held a maximal label.
    pub converged: bool,
}

/// Scratch space for per-label neighbor weights.
struct LabelWeights {
    weight: Vec<f64>,
    touched: Vec<usize>,
}

impl LabelWeights {
    fn new(n: usize) -> Self {
        LabelWeights {
            weight: vec![0.0; n],
            touched: Vec::new(),
        }
    }

    /// Labels of maximal incident weight around `i`, ascending.
    fn maximal(&mut self, g: &Graph, labels: &[usize], i: usize) -> Vec<usize> {
        for &(j, w) in g.adj(i) {
            let l = labels[j];
            if self.weight[l] == 0.0 {
                self.touched.push(l);
            }
            self.weight[l] += w;
        }
        let max = self
            .touched
            .iter()
            .map(|&l| self.weight[l])
            .fold(f64::NEG_INFINITY, f64::max);
        let mut best: Vec<usize> = self
            .touched
            .iter()
            .copied()
            .filter(|&l| self.weight[l] == max)
            .collect();
        best.sort_unstable();
        for &l in &self.touched {
            self.weight[l] = 0.0;
        }
        self.touched.clear();
        best
    }
}

/// Asynchronous label propagation. Each node takes the label with the largest
/// total incident weight among its neighbors, ties broken uniformly at random.
/// Stops once every node already holds one of its maximal labels.
pub fn label_propagation(g: &Graph, seed: RngSeed, max_sweeps: usize) -> Result<LabelPropagation> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::InvalidParameter(
            "label propagation needs a non-empty graph".into(),
        ));
    }
    if max_sweeps == 0 {
        return Err(Error::InvalidParameter("max_sweeps must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut scratch = LabelWeights::new(n);

    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_sweeps {
        sweeps += 1;
        order.shuffle(&mut rng);
        for &i in &order {
            let best = scratch.maximal(g, &labels, i);
            if !best.is_empty() {
                labels[i] = best[rng.random_range(0..best.len())];
            }
        }
        if is_stable(g, &labels, &mut scratch) {
            converged = true;
            break;
        }
    }
    Ok(LabelPropagation {
        partition: Partition::from_labels(labels),
        sweeps,
        converged,
    })
}

fn is_stable(g: &Graph, labels: &[usize], scratch: &mut LabelWeights) -> bool {
    (0..g.node_count()).all(|i| {
        let best = scratch.maximal(g, labels, i);
        best.is_empty() || best.binary_search(&labels[i]).is_ok()
    })
}

/// True when every node's label has maximal incident weight among its
/// neighbors' labels.
pub fn holds_maximal_labels(g: &Graph, p: &Partition) -> bool {
    let mut scratch = LabelWeights::new(p.community_count().max(1));
    is_stable(g, p.labels(), &mut scratch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EdgeRecord};

    fn graph(edges: &[(&str, &str)]) -> Graph {
        let recs: Vec<EdgeRecord> = edges.iter().map(|&(a, b)| EdgeRecord::unit(a, b)).collect();
        build_graph(&recs, false).unwrap()
    }

    #[test]
    fn disjoint_triangles() {
        let g = graph(&[("a", "b"), ("b", "c"), ("c", "a"), ("d", "e"), ("e", "f"), ("f", "d")]);
        for seed in 0..25 {
            let r = label_propagation(&g, RngSeed(seed), 100).unwrap();
            assert!(r.converged);
            assert_eq!(r.partition.labels(), &[0, 0, 0, 1, 1, 1], "seed {seed}");
        }
    }

    #[test]
    fn single_node() {
        let g = graph(&[("a", "a")]);
        let r = label_propagation(&g, RngSeed(1), 100).unwrap();
        assert_eq!(r.partition.community_count(), 1);
        assert!(r.converged);
    }

    #[test]
    fn star_converges_to_stable_labels() {
        let g = graph(&[("c", "l1"), ("c", "l2"), ("c", "l3"), ("c", "l4")]);
        for seed in 0..10 {
            let r = label_propagation(&g, RngSeed(seed), 100).unwrap();
            assert!(r.converged);
            assert!(holds_maximal_labels(&g, &r.partition));
        }
    }

    #[test]
    fn reproducible_and_validated() {
        let g = graph(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("a", "c")]);
        let a = label_propagation(&g, RngSeed(9), 100).unwrap();
        let b = label_propagation(&g, RngSeed(9), 100).unwrap();
        assert_eq!(a, b);
        assert!(label_propagation(&g, RngSeed(9), 0).is_err());
    }
}
