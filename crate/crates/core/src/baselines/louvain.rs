//! Louvain modularity optimization: local node moves followed by community
//! aggregation, repeated until a level produces no move.

use rand::seq::SliceRandom;

use super::RngSeed;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Gains below this (in units of edge weight) are treated as no improvement.
const MIN_GAIN: f64 = 1e-12;

/// Weighted graph at one aggregation level. `self_loop[c]` carries the
/// internal weight of community `c` from the level below, counted twice.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    self_loop: Vec<f64>,
    degree: Vec<f64>,
}

impl Level {
    fn from_graph(g: &Graph) -> Self {
        let adj: Vec<Vec<(usize, f64)>> = (0..g.node_count()).map(|i| g.adj(i).to_vec()).collect();
        let degree = g.degrees();
        Level {
            self_loop: vec![0.0; adj.len()],
            adj,
            degree,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Collapse each community into a node. `labels` must be canonical.
    fn aggregate(&self, labels: &[usize], count: usize) -> Level {
        let mut self_loop = vec![0.0; count];
        let mut degree = vec![0.0; count];
        let mut maps: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); count];
        for i in 0..self.len() {
            let ci = labels[i];
            self_loop[ci] += self.self_loop[i];
            degree[ci] += self.degree[i];
            for &(j, w) in &self.adj[i] {
                let cj = labels[j];
                if ci == cj {
                    self_loop[ci] += w;
                } else {
                    *maps[ci].entry(cj).or_insert(0.0) += w;
                }
            }
        }
        Level {
            adj: maps.into_iter().map(|m| m.into_iter().collect()).collect(),
            self_loop,
            degree,
        }
    }
}

/// One round of local moves. Returns canonical labels and whether any node moved.
fn local_moves(level: &Level, two_m: f64, resolution: f64, rng: &mut impl rand::Rng) -> (Vec<usize>, bool) {
    let n = level.len();
    let mut community: Vec<usize> = (0..n).collect();
    let mut total: Vec<f64> = level.degree.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut link = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;

    loop {
        let mut moved = false;
        for &i in &order {
            let ci = community[i];
            let ki = level.degree[i];

            for &(j, w) in &level.adj[i] {
                let cj = community[j];
                if link[cj] == 0.0 {
                    touched.push(cj);
                }
                link[cj] += w;
            }

            total[ci] -= ki;
            let gain = |c: usize, link_c: f64| link_c - resolution * total[c] * ki / two_m;
            let mut best = ci;
            let mut best_gain = gain(ci, link[ci]);
            for &c in &touched {
                let g = gain(c, link[c]);
                if g > best_gain + MIN_GAIN {
                    best = c;
                    best_gain = g;
                }
            }
            total[best] += ki;
            if best != ci {
                community[i] = best;
                moved = true;
            }

            for &c in &touched {
                link[c] = 0.0;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    let p = Partition::from_labels(community);
    (p.labels().to_vec(), moved_any)
}

pub fn louvain(g: &Graph, resolution: f64, seed: RngSeed) -> Result<Partition> {
    if g.node_count() == 0 {
        return Err(Error::InvalidParameter("louvain needs a non-empty graph".into()));
    }
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    let two_m = g.total_weight();
    if two_m == 0.0 {
        return Ok(Partition::singletons(g.node_count()));
    }

    let mut rng = seed.rng();
    let mut assignment: Vec<usize> = (0..g.node_count()).collect();
    let mut level = Level::from_graph(g);
    loop {
        let (labels, moved) = local_moves(&level, two_m, resolution, &mut rng);
        if !moved {
            break;
        }
        let count = labels.iter().max().map_or(0, |&m| m + 1);
        for a in &mut assignment {
            *a = labels[*a];
        }
        level = level.aggregate(&labels, count);
    }
    Ok(Partition::from_labels(assignment))
}
