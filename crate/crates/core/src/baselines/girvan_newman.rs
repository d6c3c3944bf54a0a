//! Divisive clustering by repeated removal of the highest-betweenness edge.

use std::collections::VecDeque;

use super::betweenness::EdgeGraph;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::modularity;
use crate::partition::Partition;

/// Betweenness values this close (relative) to the maximum count as tied.
const TIE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DendrogramStep {
    /// Removed edge as `(min id, max id)`.
    pub removed: (usize, usize),
    /// Connected components after the removal.
    pub partition: Partition,
    /// Modularity of `partition` on the original graph.
    pub modularity: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dendrogram {
    pub steps: Vec<DendrogramStep>,
}

impl Dendrogram {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Index of the highest-modularity snapshot (earliest on ties).
    pub fn best_modularity(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, s) in self.steps.iter().enumerate() {
            if best.is_none_or(|b| s.modularity > self.steps[b].modularity) {
                best = Some(i);
            }
        }
        best
    }
}

fn components(eg: &EdgeGraph) -> Partition {
    let n = eg.node_count();
    let mut label = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &(v, e) in &eg.incident[u] {
                if eg.alive[e] && label[v] == usize::MAX {
                    label[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    Partition::from_labels(label)
}

/// Remove edges one at a time, highest betweenness first (ties to the
/// lexicographically smallest edge), recording the component partition after
/// each removal. Returns the best-modularity snapshot, or with `target` the
/// first snapshot with at least that many communities.
pub fn girvan_newman(g: &Graph, target: Option<usize>) -> Result<(Dendrogram, Partition)> {
    if g.node_count() == 0 {
        return Err(Error::InvalidParameter("girvan-newman needs a non-empty graph".into()));
    }
    if target == Some(0) {
        return Err(Error::InvalidParameter(
            "target community count must be positive".into(),
        ));
    }
    let mut eg = EdgeGraph::new(g);
    let mut dendrogram = Dendrogram::default();
    let mut remaining = eg.edges.len();

    while remaining > 0 {
        let scores = eg.betweenness();
        let max = scores
            .iter()
            .zip(&eg.alive)
            .filter(|(_, &a)| a)
            .map(|(&s, _)| s)
            .fold(f64::NEG_INFINITY, f64::max);
        let tol = TIE_EPS * max.abs().max(1.0);
        // edges are stored in lexicographic order, so the first hit wins ties
        let e = (0..eg.edges.len())
            .find(|&e| eg.alive[e] && scores[e] >= max - tol)
            .expect("an alive edge attains the maximum");
        eg.alive[e] = false;
        remaining -= 1;

        let partition = components(&eg);
        let q = modularity(g, &partition)?;
        let (u, v, _) = eg.edges[e];
        dendrogram.steps.push(DendrogramStep {
            removed: (u, v),
            partition,
            modularity: q,
        });
        if let Some(t) = target {
            if dendrogram
                .steps
                .last()
                .is_some_and(|s| s.partition.community_count() >= t)
            {
                break;
            }
        }
    }

    let chosen = match target {
        Some(_) => dendrogram.steps.last().map(|s| s.partition.clone()),
        None => dendrogram
            .best_modularity()
            .map(|i| dendrogram.steps[i].partition.clone()),
    };
    let partition = chosen.unwrap_or_else(|| components(&eg));
    Ok((dendrogram, partition))
}
