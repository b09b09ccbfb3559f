//! Reverse-time-migration indicators, normalization and image metrics.

mod engine;
mod grid;
mod metrics;

pub use engine::{
    image, image_farfield, image_nearfield_plane, image_nearfield_point, image_phaseless, phaseless_data, Branch,
    Imager, IndicatorId, IndicatorSpec, ReceiverKernel, SourceKernel,
};
pub use grid::{normalize, normalize_abs, GridSpec, SamplingGrid};
pub use metrics::{
    above_threshold_clusters, boundary_distances, localization, Cluster, Localization,
};
