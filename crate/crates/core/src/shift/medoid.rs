//! Original medoid-shift over a dense distance matrix, plus the adapter that
//! turns a graph into shortest-path distances.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Dense symmetric distances with a zero diagonal, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidDistance(format!(
                "expected {} entries for {n} points, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            let d = data[i * n + i];
            if d != 0.0 {
                return Err(Error::InvalidDistance(format!("D({i},{i}) = {d}, expected 0")));
            }
            for j in 0..n {
                let v = data[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidDistance(format!("D({i},{j}) = {v}")));
                }
                if v != data[j * n + i] {
                    return Err(Error::InvalidDistance(format!(
                        "not symmetric at ({i},{j}): {v} vs {}",
                        data[j * n + i]
                    )));
                }
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDistance("matrix is not square".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// `exp(-d / 2)`.
pub fn gaussian_kernel(d: f64) -> f64 {
    (-d / 2.0).exp()
}

/// For every point `i`, the `j` minimizing `S(i, j) = Σ_k D(j, k) · φ(D(i, k))`,
/// ties to the smallest `j`.
pub fn next_points(d: &DistanceMatrix, phi: impl Fn(f64) -> f64) -> Vec<usize> {
    let n = d.len();
    let mut next = Vec::with_capacity(n);
    let mut weights = vec![0.0; n];
    for i in 0..n {
        for (w, &dik) in weights.iter_mut().zip(d.row(i)) {
            *w = phi(dik);
        }
        let mut best = 0;
        let mut best_score = f64::INFINITY;
        for j in 0..n {
            let score: f64 = d.row(j).iter().zip(&weights).map(|(&djk, &w)| djk * w).sum();
            if score < best_score {
                best = j;
                best_score = score;
            }
        }
        next.push(best);
    }
    next
}

/// Medoid-shift clustering: one cluster per root of the next-point forest.
///
/// The mapping can contain cycles (two points that each minimize the other's
/// index); a cycle is rooted at its smallest member.
pub fn medoid_shift(d: &DistanceMatrix, phi: impl Fn(f64) -> f64) -> Partition {
    let next = next_points(d, phi);
    Partition::from_labels(roots_with_cycles(&next))
}

fn roots_with_cycles(next: &[usize]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = next.len();
    let mut root = vec![UNSEEN; n];
    // position of each node on the current walk, to spot cycles
    let mut on_path = vec![UNSEEN; n];
    let mut path = Vec::new();
    for start in 0..n {
        if root[start] != UNSEEN {
            continue;
        }
        path.clear();
        let mut m = start;
        let r = loop {
            if root[m] != UNSEEN {
                break root[m];
            }
            if on_path[m] != UNSEEN {
                let cycle = &path[on_path[m]..];
                break *cycle.iter().min().expect("cycle is non-empty");
            }
            on_path[m] = path.len();
            path.push(m);
            if next[m] == m {
                break m;
            }
            m = next[m];
        };
        for &p in &path {
            root[p] = r;
            on_path[p] = UNSEEN;
        }
    }
    root
}

/// Shortest-path distances with edge length `1 / w`. Pairs in different
/// components get `2 ×` the largest finite distance (1 if there is none).
pub fn graph_to_distance(g: &Graph) -> DistanceMatrix {
    let n = g.node_count();
    let mut data = vec![f64::INFINITY; n * n];
    for s in 0..n {
        let row = &mut data[s * n..(s + 1) * n];
        dijkstra(g, s, row);
    }
    let max_finite = data.iter().copied().filter(|d| d.is_finite()).fold(0.0, f64::max);
    let sentinel = if max_finite > 0.0 { 2.0 * max_finite } else { 1.0 };
    for v in &mut data {
        if v.is_infinite() {
            *v = sentinel;
        }
    }
    // shortest paths are symmetric in exact arithmetic, but the two directions
    // can sum edge lengths in different orders
    for i in 0..n {
        for j in (i + 1)..n {
            let m = data[i * n + j].min(data[j * n + i]);
            data[i * n + j] = m;
            data[j * n + i] = m;
        }
    }
    DistanceMatrix { n, data }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn dijkstra(g: &Graph, source: usize, dist: &mut [f64]) {
    dist[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((Dist(0.0), source)));
    while let Some(Reverse((Dist(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in g.adj(u) {
            let nd = d + 1.0 / w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((Dist(nd), v)));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EdgeRecord};

    fn line(coords: &[f64]) -> DistanceMatrix {
        let rows: Vec<Vec<f64>> = coords
            .iter()
            .map(|a| coords.iter().map(|b| (a - b).abs()).collect())
            .collect();
        DistanceMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn single_point() {
        let d = DistanceMatrix::from_rows(&[vec![0.0]]).unwrap();
        let p = medoid_shift(&d, gaussian_kernel);
        assert_eq!(p.labels(), &[0]);
    }

    #[test]
    fn collinear_points() {
        // frozen from a brute-force evaluation of every S(i, j): each point's
        // own index is the smallest (S(0,0)=0.674 < S(0,1)=1.061, ...)
        let d = line(&[0.0, 1.0, 10.0]);
        assert_eq!(next_points(&d, gaussian_kernel), vec![0, 1, 2]);
        assert_eq!(medoid_shift(&d, gaussian_kernel).community_count(), 3);
    }

    #[test]
    fn separated_pairs_stay_apart() {
        // with two points the self term always wins: S(0,0) = d·φ(d) < d = S(0,1)
        let d = line(&[0.0, 0.1, 100.0, 100.1]);
        assert_eq!(next_points(&d, gaussian_kernel), vec![0, 1, 2, 3]);
    }

    #[test]
    fn separated_triples_merge() {
        let d = line(&[0.0, 0.1, 0.2, 100.0, 100.1, 100.2]);
        assert_eq!(next_points(&d, gaussian_kernel), vec![1, 1, 1, 4, 4, 4]);
        let p = medoid_shift(&d, gaussian_kernel);
        assert_eq!(p.labels(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn rejects_invalid_matrices() {
        assert!(DistanceMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(DistanceMatrix::from_rows(&[vec![-1.0]]).is_err());
        assert!(DistanceMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
        assert!(DistanceMatrix::from_rows(&[vec![0.0, 1.0]]).is_err());
        assert!(DistanceMatrix::from_rows(&[vec![0.0, f64::NAN], vec![f64::NAN, 0.0]]).is_err());
    }

    #[test]
    fn cycles_rooted_at_smallest_member() {
        assert_eq!(roots_with_cycles(&[1, 0, 0, 3]), vec![0, 0, 0, 3]);
        assert_eq!(roots_with_cycles(&[1, 2, 1]), vec![1, 1, 1]);
    }

    #[test]
    fn path_distance() {
        let g = build_graph(&[EdgeRecord::unit("a", "b"), EdgeRecord::unit("b", "c")], false).unwrap();
        let d = graph_to_distance(&g);
        assert_eq!(d.get(0, 2), 2.0);
        assert_eq!(d.get(0, 1), 1.0);
    }

    #[test]
    fn inverse_weight_length() {
        let g = build_graph(&[EdgeRecord::new("a", "b", 4.0)], false).unwrap();
        assert_eq!(graph_to_distance(&g).get(0, 1), 0.25);
    }

    #[test]
    fn disconnected_sentinel() {
        let g = build_graph(&[EdgeRecord::unit("a", "b"), EdgeRecord::unit("b", "c")], false)
            .unwrap()
            .with_isolated_nodes(["d"]);
        let d = graph_to_distance(&g);
        assert_eq!(d.get(0, 3), 4.0);
        assert_eq!(d.get(3, 3), 0.0);

        let lone = build_graph(&[EdgeRecord::unit("a", "a")], false).unwrap();
        let lone = lone.with_isolated_nodes(["b"]);
        assert_eq!(graph_to_distance(&lone).get(0, 1), 1.0);
    }
}
