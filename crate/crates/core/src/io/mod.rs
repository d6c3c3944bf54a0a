//! Dataset loaders and result writers.

mod edge_list;
mod gml;
mod ground_truth;
mod manifest;
mod results;

pub use edge_list::{format_edge_list, load_edge_list, parse_edge_list, write_edge_list};
pub use gml::{load_gml, parse_gml};
pub use ground_truth::{load_ground_truth, parse_ground_truth, GroundTruth};
pub use manifest::{sha256_file, Dataset, DatasetEntry, DatasetFormat, DatasetManifest, DATA_DIR_ENV};
pub use results::{format_results, write_results, OutputFormat};
