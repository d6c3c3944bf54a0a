//! Revised medoid-shift.
//!
//! Every node starts as a medoid. Each active medoid `i` shifts to the member
//! of `{i} ∪ NN(i)` with the largest similarity sum; the image of the active
//! set becomes the next active set, until it stops shrinking. Labels are the
//! roots reached by following `next_medoid` chains.
//!
//! Tie rule: among members sharing the maximum, the smallest id wins. Every
//! non-trivial shift therefore strictly increases `(sum, -id)`, so there are
//! no cycles and the active set shrinks on every iteration but the last.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::similarity::{build_knn, build_similarity, KnnTable, SimilarityMatrix, SimilarityMode};

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftState {
    next_medoid: Vec<usize>,
    iteration_count: usize,
    centers: Vec<usize>,
    work_per_iteration: Vec<usize>,
}

impl ShiftState {
    pub fn next_medoid(&self) -> &[usize] {
        &self.next_medoid
    }

    pub fn iteration_count(&self) -> usize {
        self.iteration_count
    }

    /// Fixed points of the shift mapping, ascending.
    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    /// Candidates examined in each iteration.
    pub fn work_per_iteration(&self) -> &[usize] {
        &self.work_per_iteration
    }
}

/// Shift target of `i` under the tie rule.
fn shift_target(i: usize, knn: &KnnTable) -> usize {
    let dl = knn.similarity_sums();
    let mut best = i;
    for &p in knn.neighbors(i) {
        let better = dl[p] > dl[best] || (dl[p] == dl[best] && p < best);
        if better {
            best = p;
        }
    }
    best
}

pub fn rms_cluster(sim: &SimilarityMatrix, knn: &KnnTable) -> Result<(ShiftState, Partition)> {
    let n = sim.node_count();
    if knn.node_count() != n {
        return Err(Error::InvalidParameter(format!(
            "knn table covers {} nodes, similarity matrix {}",
            knn.node_count(),
            n
        )));
    }

    let cap = n + 1;
    let mut next_medoid: Vec<usize> = (0..n).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut in_image = vec![false; n];
    let mut iteration_count = 0;
    let mut work_per_iteration = Vec::new();

    loop {
        iteration_count += 1;
        if iteration_count > cap {
            return Err(Error::IterationCap { cap });
        }
        let mut work = 0;
        for &i in &active {
            let target = shift_target(i, knn);
            work += 1 + knn.neighbors(i).len();
            next_medoid[i] = target;
            in_image[target] = true;
        }
        work_per_iteration.push(work);

        // the image of the active set is always a subset of it
        let image: Vec<usize> = active.iter().copied().filter(|&i| in_image[i]).collect();
        for &i in &active {
            in_image[i] = false;
        }
        if image.len() == active.len() {
            for &i in &active {
                debug_assert_eq!(next_medoid[i], i);
                next_medoid[i] = i;
            }
            break;
        }
        active = image;
    }

    let roots = follow_chains(&next_medoid)?;
    let partition = Partition::from_labels(roots.iter().copied());
    let state = ShiftState {
        next_medoid,
        iteration_count,
        centers: active,
        work_per_iteration,
    };
    Ok((state, partition))
}

/// Root of every node's `next` chain. Fails if a chain does not settle on a
/// fixed point within `n` steps.
pub(crate) fn follow_chains(next: &[usize]) -> Result<Vec<usize>> {
    let n = next.len();
    let mut roots = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = i;
        let mut steps = 0;
        while next[m] != m {
            m = next[m];
            steps += 1;
            if steps > n {
                return Err(Error::IterationCap { cap: n });
            }
        }
        roots.push(m);
    }
    Ok(roots)
}

/// Output of a complete run from a graph.
#[derive(Debug, Clone)]
pub struct RmsOutput {
    pub state: ShiftState,
    pub partition: Partition,
}

/// Similarity, nearest neighbors, medoid clustering and label assignment in
/// one call.
pub fn rms(g: &Graph, mode: SimilarityMode, k: usize) -> Result<RmsOutput> {
    let sim = build_similarity(g, mode);
    let knn = build_knn(&sim, k)?;
    let (state, partition) = rms_cluster(&sim, &knn)?;
    Ok(RmsOutput { state, partition })
}
