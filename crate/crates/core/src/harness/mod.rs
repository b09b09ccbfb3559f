//! Noise, data files, experiment configs, image emission and the validation suite.

mod checks;
mod config;
mod emit;
mod experiment;
mod io;
mod noise;
mod report;

pub use checks::{
    correlation_residuals, green_representation, quadrature_convergence, run_criterion, sign_convention,
    validate_suite, Level, ValidationOptions, CRITERIA,
};
pub use config::{parse_curves, parse_real, ExperimentConfig, Normalization};
pub use emit::{emit_grid, grid_csv, grid_ppm, outline_cells, palette, palette_indices, OUTLINE_INDEX};
pub use experiment::{
    compute_images, data_path, emit_images, image_stage, load_data, localization_checks, required_data,
    run_experiment, save_data, simulate_stage, write_run_files, DataSet, ImageResult, LOCALIZATION_RADIUS,
};
pub use io::{format_matrix, load_matrix, parse_matrix, save_matrix};
pub use noise::{add_noise, add_noise_on_stream, gaussian_pair, NoiseSpec};
pub use report::{CheckResult, RunReport, Timing};
