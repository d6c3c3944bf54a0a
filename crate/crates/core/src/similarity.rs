//! Node-pair similarity, k-nearest-neighbor lists and similarity sums.
//!
//! Similarity is only evaluated for adjacent pairs. In weighted mode it is the
//! edge weight; in common-neighbor mode it is `|N(i) ∩ N(j)|` with `N(i)`
//! excluding `i`. Zero similarities are not stored.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimilarityMode {
    /// Edge weight is the similarity.
    Weighted,
    /// Count of shared neighbors, for unweighted graphs.
    CommonNeighbor,
}

impl fmt::Display for SimilarityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimilarityMode::Weighted => "weighted",
            SimilarityMode::CommonNeighbor => "common-neighbor",
        })
    }
}

impl FromStr for SimilarityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weighted" | "passthrough" => Ok(SimilarityMode::Weighted),
            "common-neighbor" | "common-neighbour" | "cn" => Ok(SimilarityMode::CommonNeighbor),
            other => Err(Error::InvalidParameter(format!("unknown similarity mode {other:?}"))),
        }
    }
}

/// Sparse symmetric similarity; rows sorted by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    mode: SimilarityMode,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SimilarityMatrix {
    pub fn mode(&self) -> SimilarityMode {
        self.mode
    }

    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// Stored similarity, 0 for pairs that are not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let row = &self.rows[i];
        match row.binary_search_by_key(&j, |&(n, _)| n) {
            Ok(pos) => row[pos].1,
            Err(_) => 0.0,
        }
    }
}

pub fn build_similarity(g: &Graph, mode: SimilarityMode) -> SimilarityMatrix {
    let n = g.node_count();
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, j, w) in g.edges() {
        let s = match mode {
            SimilarityMode::Weighted => w,
            SimilarityMode::CommonNeighbor => common_neighbors(g.adj(i), g.adj(j)) as f64,
        };
        if s > 0.0 {
            rows[i].push((j, s));
            rows[j].push((i, s));
        }
    }
    // rows come out id-sorted because edges() is lexicographic
    SimilarityMatrix { mode, rows }
}

/// Size of the intersection of two id-sorted neighbor lists.
fn common_neighbors(a: &[(usize, f64)], b: &[(usize, f64)]) -> usize {
    let (mut x, mut y, mut count) = (0, 0, 0);
    while x < a.len() && y < b.len() {
        match a[x].0.cmp(&b[y].0) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                x += 1;
                y += 1;
            }
        }
    }
    count
}

/// Per-node nearest-neighbor lists and their similarity sums.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnTable {
    k: usize,
    nn: Vec<Vec<usize>>,
    dl: Vec<f64>,
}

impl KnnTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.nn.len()
    }

    /// Neighbors of `i`, most similar first, ties by ascending id.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.nn[i]
    }

    /// Similarity sum of `i` over its nearest neighbors.
    pub fn similarity_sum(&self, i: usize) -> f64 {
        self.dl[i]
    }

    pub fn similarity_sums(&self) -> &[f64] {
        &self.dl
    }

    /// Total list length, `Σ_i |NN(i)|`.
    pub fn total_len(&self) -> usize {
        self.nn.iter().map(Vec::len).sum()
    }
}

pub fn build_knn(sim: &SimilarityMatrix, k: usize) -> Result<KnnTable> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut nn = Vec::with_capacity(sim.node_count());
    let mut dl = Vec::with_capacity(sim.node_count());
    for i in 0..sim.node_count() {
        let mut row: Vec<(usize, f64)> = sim.row(i).to_vec();
        row.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        row.truncate(k);
        dl.push(row.iter().map(|&(_, s)| s).sum());
        nn.push(row.into_iter().map(|(j, _)| j).collect());
    }
    Ok(KnnTable { k, nn, dl })
}
