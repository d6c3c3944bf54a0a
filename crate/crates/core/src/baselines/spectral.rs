//! Normalized-cut spectral clustering: embed with the smallest eigenvectors of
//! `L_sym = I - D^{-1/2} A D^{-1/2}`, normalize rows, then run k-means.

use nalgebra::{DMatrix, SymmetricEigen};

use super::kmeans::{kmeans, KMeansOptions};
use super::RngSeed;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEmbedding {
    /// Nodes with positive degree, ascending; row `r` belongs to `active[r]`.
    pub active: Vec<usize>,
    /// The `k` smallest eigenvalues of `L_sym` over the active nodes, ascending.
    pub eigenvalues: Vec<f64>,
    /// Matching unit eigenvectors, one per entry, each of length `active.len()`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Row-normalized embedding, one row per active node.
    pub rows: Vec<Vec<f64>>,
    /// `L_sym` restricted to the active nodes.
    pub laplacian: DMatrix<f64>,
}

impl SpectralEmbedding {
    /// `‖L v - λ v‖` for each returned eigenpair.
    pub fn residuals(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&lambda, v)| {
                let v = nalgebra::DVector::from_column_slice(v);
                (&self.laplacian * &v - lambda * &v).norm()
            })
            .collect()
    }
}

fn normalized_laplacian(g: &Graph, active: &[usize]) -> DMatrix<f64> {
    let n = active.len();
    let mut pos = vec![usize::MAX; g.node_count()];
    for (r, &i) in active.iter().enumerate() {
        pos[i] = r;
    }
    let deg = g.degrees();
    let inv_sqrt: Vec<f64> = active.iter().map(|&i| 1.0 / deg[i].sqrt()).collect();
    let mut l = DMatrix::<f64>::identity(n, n);
    for (r, &i) in active.iter().enumerate() {
        for &(j, w) in g.adj(i) {
            let c = pos[j];
            l[(r, c)] -= w * inv_sqrt[r] * inv_sqrt[c];
        }
    }
    l
}

/// Spectral embedding of the positive-degree nodes into `k` dimensions.
pub fn spectral_embedding(g: &Graph, k: usize) -> Result<SpectralEmbedding> {
    let deg = g.degrees();
    let active: Vec<usize> = (0..g.node_count()).filter(|&i| deg[i] > 0.0).collect();
    if k == 0 || k > active.len() {
        return Err(Error::InvalidParameter(format!(
            "embedding dimension must be in 1..={}, got {k}",
            active.len()
        )));
    }
    let laplacian = normalized_laplacian(g, &active);
    let eig = SymmetricEigen::new(laplacian.clone());
    let mut order: Vec<usize> = (0..active.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    order.truncate(k);

    let eigenvalues: Vec<f64> = order.iter().map(|&c| eig.eigenvalues[c]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&c| eig.eigenvectors.column(c).iter().copied().collect())
        .collect();
    let rows = (0..active.len())
        .map(|r| {
            let row: Vec<f64> = eigenvectors.iter().map(|v| v[r]).collect();
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.iter().map(|x| x / norm).collect()
            } else {
                row
            }
        })
        .collect();
    Ok(SpectralEmbedding {
        active,
        eigenvalues,
        eigenvectors,
        rows,
        laplacian,
    })
}

/// Spectral clustering into `num_clusters` groups. Degree-zero nodes become
/// singletons up front and count towards `num_clusters`.
pub fn spectral_ncut(g: &Graph, num_clusters: usize, seed: RngSeed) -> Result<Partition> {
    let n = g.node_count();
    if num_clusters < 2 || num_clusters > n {
        return Err(Error::InvalidParameter(format!(
            "num_clusters must be in 2..={n}, got {num_clusters}"
        )));
    }
    let deg = g.degrees();
    let isolated = deg.iter().filter(|&&d| d == 0.0).count();
    let active_count = n - isolated;
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    if active_count > 0 {
        let k = num_clusters.saturating_sub(isolated).clamp(1, active_count);
        let emb = spectral_embedding(g, k)?;
        let fit = kmeans(&emb.rows, k, seed, KMeansOptions::default())?;
        for (&i, &c) in emb.active.iter().zip(&fit.assignment) {
            labels[i] = c;
        }
        next = k;
    }
    for l in labels.iter_mut().filter(|l| **l == usize::MAX) {
        *l = next;
        next += 1;
    }
    Ok(Partition::from_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EdgeRecord};

    fn graph(edges: &[(&str, &str)]) -> Graph {
        let recs: Vec<EdgeRecord> = edges.iter().map(|&(a, b)| EdgeRecord::unit(a, b)).collect();
        build_graph(&recs, false).unwrap()
    }

    fn triangles() -> Graph {
        graph(&[("a", "b"), ("b", "c"), ("c", "a"), ("d", "e"), ("e", "f"), ("f", "d")])
    }

    fn barbell() -> Graph {
        graph(&[
            ("a", "b"),
            ("b", "c"),
            ("c", "a"),
            ("c", "d"),
            ("d", "e"),
            ("e", "f"),
            ("f", "d"),
        ])
    }

    #[test]
    fn disjoint_triangles_recovered() {
        let g = triangles();
        let emb = spectral_embedding(&g, 2).unwrap();
        assert!(emb.eigenvalues.iter().all(|l| l.abs() < 1e-10));
        for seed in 0..10 {
            let p = spectral_ncut(&g, 2, RngSeed(seed)).unwrap();
            assert_eq!(p.labels(), &[0, 0, 0, 1, 1, 1]);
        }
    }

    #[test]
    fn barbell_split_at_bridge() {
        let p = spectral_ncut(&barbell(), 2, RngSeed(0)).unwrap();
        assert_eq!(p.labels(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn all_singletons_at_full_rank() {
        let g = barbell();
        let p = spectral_ncut(&g, 6, RngSeed(0)).unwrap();
        assert_eq!(p.community_count(), 6);
    }

    #[test]
    fn rows_unit_and_residuals_small() {
        let emb = spectral_embedding(&barbell(), 3).unwrap();
        for row in &emb.rows {
            let norm: f64 = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-8);
        }
        assert!(emb.residuals().iter().all(|&r| r < 1e-6));
        // barbell spectrum starts at 0
        assert!(emb.eigenvalues[0].abs() < 1e-10);
        assert!(emb.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn isolated_nodes_are_singletons() {
        let g = triangles().with_isolated_nodes(["x"]);
        let p = spectral_ncut(&g, 3, RngSeed(0)).unwrap();
        assert_eq!(p.labels(), &[0, 0, 0, 1, 1, 1, 2]);
    }

    #[test]
    fn invalid_cluster_count() {
        let g = barbell();
        assert!(spectral_ncut(&g, 1, RngSeed(0)).is_err());
        assert!(spectral_ncut(&g, 7, RngSeed(0)).is_err());
    }
}
