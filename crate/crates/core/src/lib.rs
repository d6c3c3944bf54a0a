//! Community detection around revised medoid-shift, with classical baselines,
//! partition metrics, dataset loaders and an experiment harness.

pub mod baselines;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod partition;
pub mod shift;
pub mod similarity;

pub use error::{Error, Result};
pub use graph::{build_graph, EdgeRecord, Graph, GraphBuilder};
pub use partition::Partition;
