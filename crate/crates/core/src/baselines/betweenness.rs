//! Brandes edge betweenness with edge length `1 / w`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::graph::Graph;

/// Path lengths within this relative tolerance count as equally short, so
/// that `1/3 + 1/3 + 1/3` ties with `1`.
const REL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Edge list plus incidence, with a liveness flag per edge so Girvan–Newman
/// can delete edges without rebuilding.
pub(crate) struct EdgeGraph {
    pub(crate) edges: Vec<(usize, usize, f64)>,
    pub(crate) incident: Vec<Vec<(usize, usize)>>,
    pub(crate) alive: Vec<bool>,
}

impl EdgeGraph {
    pub(crate) fn new(g: &Graph) -> Self {
        let edges: Vec<(usize, usize, f64)> = g.edges().collect();
        let mut incident = vec![Vec::new(); g.node_count()];
        for (e, &(u, v, _)) in edges.iter().enumerate() {
            incident[u].push((v, e));
            incident[v].push((u, e));
        }
        let alive = vec![true; edges.len()];
        EdgeGraph { edges, incident, alive }
    }

    pub(crate) fn node_count(&self) -> usize {
        self.incident.len()
    }

    /// Betweenness of every edge (0 for dead edges), each unordered node pair
    /// counted once.
    pub(crate) fn betweenness(&self) -> Vec<f64> {
        let n = self.node_count();
        let mut score = vec![0.0; self.edges.len()];
        let mut dist = vec![f64::INFINITY; n];
        let mut sigma = vec![0.0; n];
        let mut delta = vec![0.0; n];
        let mut done = vec![false; n];
        let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut order = Vec::with_capacity(n);
        let mut heap = BinaryHeap::new();

        for s in 0..n {
            dist.fill(f64::INFINITY);
            sigma.fill(0.0);
            delta.fill(0.0);
            done.fill(false);
            for p in &mut preds {
                p.clear();
            }
            order.clear();

            dist[s] = 0.0;
            sigma[s] = 1.0;
            heap.push(Reverse((Key(0.0), s)));
            while let Some(Reverse((Key(d), u))) = heap.pop() {
                if done[u] || d > dist[u] {
                    continue;
                }
                done[u] = true;
                order.push(u);
                for &(v, e) in &self.incident[u] {
                    if !self.alive[e] || done[v] {
                        continue;
                    }
                    let nd = d + 1.0 / self.edges[e].2;
                    let tol = REL_EPS * nd.max(1.0);
                    if nd < dist[v] - tol {
                        dist[v] = nd;
                        sigma[v] = sigma[u];
                        preds[v].clear();
                        preds[v].push((u, e));
                        heap.push(Reverse((Key(nd), v)));
                    } else if (nd - dist[v]).abs() <= tol {
                        sigma[v] += sigma[u];
                        preds[v].push((u, e));
                    }
                }
            }
            for &w in order.iter().rev() {
                for &(v, e) in &preds[w] {
                    let c = sigma[v] / sigma[w] * (1.0 + delta[w]);
                    score[e] += c;
                    delta[v] += c;
                }
            }
        }
        // every pair was counted from both endpoints
        for x in &mut score {
            *x /= 2.0;
        }
        score
    }
}

/// Shortest-path edge betweenness keyed by `(i, j)` with `i < j`.
pub fn edge_betweenness(g: &Graph) -> BTreeMap<(usize, usize), f64> {
    let eg = EdgeGraph::new(g);
    let scores = eg.betweenness();
    eg.edges.iter().zip(scores).map(|(&(u, v, _), b)| ((u, v), b)).collect()
}
