//! Classical comparison methods.

mod betweenness;
mod girvan_newman;
mod kmeans;
mod label_propagation;
mod louvain;
mod spectral;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use betweenness::edge_betweenness;
pub use girvan_newman::{girvan_newman, Dendrogram, DendrogramStep};
pub use kmeans::{kmeans, KMeansOptions, KMeansResult};
pub use label_propagation::{holds_maximal_labels, label_propagation, LabelPropagation};
pub use louvain::louvain;
pub use spectral::{spectral_embedding, spectral_ncut, SpectralEmbedding};

/// Seed for every stochastic baseline. A fixed seed gives a bit-identical run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub(crate) fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        RngSeed(v)
    }
}
