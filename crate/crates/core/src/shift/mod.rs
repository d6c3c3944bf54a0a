//! Shift-based clustering: revised medoid-shift over k-nearest-neighbor
//! similarity sums, and the original distance-based medoid-shift.

mod medoid;
mod rms;

pub use medoid::{gaussian_kernel, graph_to_distance, medoid_shift, next_points, DistanceMatrix};
pub use rms::{rms, rms_cluster, RmsOutput, ShiftState};
