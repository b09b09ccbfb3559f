use std::path::{Path, PathBuf};
use std::time::Instant;

use super::config::{ExperimentConfig, Normalization};
use super::emit::emit_grid;
use super::io::{load_matrix, save_matrix};
use super::noise::{add_noise_on_stream, NoiseSpec};
use super::report::RunReport;
use crate::error::{Error, Result};
use crate::forward::{simulate_many, DataKind, DataMatrix, Excitation, Scatterer};
use crate::imaging::{boundary_distances, localization, normalize, normalize_abs, Imager, IndicatorSpec, SamplingGrid};

/// Largest allowed distance from the image maximum to the boundary.
pub const LOCALIZATION_RADIUS: f64 = 0.5;

/// Measurements for one noise level, noise already applied.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    pub delta: f64,
    pub matrices: Vec<DataMatrix>,
}

impl DataSet {
    /// The matrix an indicator reads, with |u| taken of total-field data.
    pub fn for_indicator(&self, spec: &IndicatorSpec) -> Result<DataMatrix> {
        let stored = if spec.kind == DataKind::TotalMagnitude { DataKind::TotalField } else { spec.kind };
        let m = self
            .matrices
            .iter()
            .find(|m| m.kind == stored && m.excitation == spec.excitation)
            .ok_or_else(|| {
                Error::Contract(format!("{} needs {} data under {} excitation", spec.id, stored.tag(), spec.excitation.tag()))
            })?;
        if spec.kind == DataKind::TotalMagnitude {
            m.magnitude()
        } else {
            Ok(m.clone())
        }
    }
}

/// Kinds to simulate for the requested indicators, grouped by excitation.
pub fn required_data(config: &ExperimentConfig) -> Vec<(Excitation, Vec<DataKind>)> {
    let mut out: Vec<(Excitation, Vec<DataKind>)> = Vec::new();
    for exc in [Excitation::PointSource, Excitation::PlaneWave] {
        let mut kinds = Vec::new();
        for id in &config.indicators {
            let spec = IndicatorSpec::standard(*id);
            let k = if spec.kind == DataKind::TotalMagnitude { DataKind::TotalField } else { spec.kind };
            if spec.excitation == exc && !kinds.contains(&k) {
                kinds.push(k);
            }
        }
        if !kinds.is_empty() {
            out.push((exc, kinds));
        }
    }
    out
}

/// Noise stream of a (kind, excitation) pair, independent of which indicators are requested.
fn stream_of(kind: DataKind, excitation: Excitation) -> u64 {
    let k = match kind {
        DataKind::Scattered => 0,
        DataKind::NormalDerivative => 1,
        DataKind::Moment => 2,
        DataKind::Force => 3,
        DataKind::FarField => 4,
        DataKind::TotalField => 5,
        DataKind::TotalMagnitude => 6,
    };
    2 * k + if excitation == Excitation::PlaneWave { 1 } else { 0 }
}

/// Clean data for every required kind, then one noisy copy per level.
pub fn simulate_stage(config: &ExperimentConfig, report: &mut RunReport) -> Result<Vec<DataSet>> {
    let t = Instant::now();
    let scatterer = Scatterer::new(config.params, config.curves.clone(), config.bc);
    let mut clean = Vec::new();
    for (exc, kinds) in required_data(config) {
        clean.extend(simulate_many(&scatterer, &config.array, &kinds, exc, config.backend).map_err(|e| e.context("simulate"))?);
    }
    report.time("simulate", t.elapsed().as_secs_f64());
    config
        .noise_levels
        .iter()
        .map(|&delta| {
            let spec = NoiseSpec::new(delta, config.seed)?;
            let matrices = clean
                .iter()
                .map(|m| add_noise_on_stream(m, spec, stream_of(m.kind, m.excitation)))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.context("noise"))?;
            Ok(DataSet { delta, matrices })
        })
        .collect()
}

fn level_tag(delta: f64) -> String {
    format!("{delta}")
}

pub fn data_path(dir: &Path, m: &DataMatrix, delta: f64) -> PathBuf {
    dir.join(format!("data_{}_{}_{}.bhm", m.kind.tag(), m.excitation.tag(), level_tag(delta)))
}

pub fn save_data(dir: &Path, sets: &[DataSet]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for set in sets {
        for m in &set.matrices {
            save_matrix(m, &data_path(dir, m, set.delta))?;
        }
    }
    Ok(())
}

/// Read back the files `save_data` wrote for this config.
pub fn load_data(config: &ExperimentConfig, dir: &Path) -> Result<Vec<DataSet>> {
    let mut sets = Vec::new();
    for &delta in &config.noise_levels {
        let mut matrices = Vec::new();
        for (exc, kinds) in required_data(config) {
            for kind in kinds {
                let path = dir.join(format!("data_{}_{}_{}.bhm", kind.tag(), exc.tag(), level_tag(delta)));
                matrices.push(load_matrix(&path).map_err(|e| e.context(&path.display().to_string()))?);
            }
        }
        sets.push(DataSet { delta, matrices });
    }
    Ok(sets)
}

/// One normalized image.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageResult {
    pub spec: IndicatorSpec,
    pub delta: f64,
    pub grid: SamplingGrid,
}

impl ImageResult {
    pub fn stem(&self, scene: &str) -> String {
        format!("{}_{scene}_{}", self.spec.id, level_tag(self.delta))
    }
}

/// Image and normalize each table row at every level.
pub fn compute_images(config: &ExperimentConfig, sets: &[DataSet], specs: &[IndicatorSpec]) -> Result<Vec<ImageResult>> {
    let imager = Imager::new(config.grid, config.array, config.params).map_err(|e| e.context("image"))?;
    let mut out = Vec::new();
    for set in sets {
        for spec in specs {
            let data = set.for_indicator(spec)?;
            let raw = imager.image(spec, &data).map_err(|e| e.context(&format!("image {}", spec.id)))?;
            let grid = match config.normalization {
                Normalization::Signed => normalize(&raw),
                Normalization::Abs => normalize_abs(&raw),
            }
            .map_err(|e| e.context(&format!("normalize {}", spec.id)))?;
            out.push(ImageResult { spec: *spec, delta: set.delta, grid });
        }
    }
    Ok(out)
}

/// `I<j>_<scene>_<delta>.csv` and `.ppm` for every image, outlines drawn from the true curves.
pub fn emit_images(config: &ExperimentConfig, images: &[ImageResult]) -> Result<()> {
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for im in images {
        let stem = im.stem(&config.name);
        emit_grid(&im.grid, &dir.join(format!("{stem}.csv")), &dir.join(format!("{stem}.ppm")), &config.curves)?;
    }
    Ok(())
}

/// Argmax-distance and near/far contrast entries for every image.
pub fn localization_checks(config: &ExperimentConfig, images: &[ImageResult], report: &mut RunReport) {
    if config.curves.is_empty() {
        return;
    }
    let distances = boundary_distances(&config.grid, &config.curves);
    for im in images {
        let stem = im.stem(&config.name);
        let loc = localization(&im.grid, &distances, config.params.kappa);
        report.push(
            format!("{stem} argmax distance"),
            loc.argmax_distance,
            format!("<= {LOCALIZATION_RADIUS}"),
            loc.argmax_distance <= LOCALIZATION_RADIUS,
            format!("argmax ({:.3}, {:.3})", loc.argmax[0], loc.argmax[1]),
        );
        report.push(
            format!("{stem} contrast"),
            loc.near_mean - loc.far_mean,
            "> 0",
            loc.contrast_holds(),
            format!("near {:.4} far {:.4}", loc.near_mean, loc.far_mean),
        );
    }
}

/// Image, normalize and emit every requested indicator, adding localization checks.
pub fn image_stage(config: &ExperimentConfig, sets: &[DataSet], report: &mut RunReport) -> Result<Vec<ImageResult>> {
    let t = Instant::now();
    let specs: Vec<IndicatorSpec> = config.indicators.iter().map(|id| IndicatorSpec::standard(*id)).collect();
    let images = compute_images(config, sets, &specs)?;
    emit_images(config, &images)?;
    localization_checks(config, &images, report);
    report.time("image", t.elapsed().as_secs_f64());
    Ok(images)
}

/// Simulate, add noise, save the data, image, emit, and write `report.json` and `config.txt`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    let mut report = RunReport::default();
    let sets = simulate_stage(config, &mut report)?;
    save_data(&config.output_dir, &sets)?;
    image_stage(config, &sets, &mut report)?;
    write_run_files(config, &report)?;
    Ok(report)
}

pub fn write_run_files(config: &ExperimentConfig, report: &RunReport) -> Result<()> {
    let dir = &config.output_dir;
    report.write(&dir.join("report.json"), false)?;
    // the copy names its own directory as "." so runs into different directories match byte for byte
    let mut copy = config.clone();
    copy.output_dir = PathBuf::from(".");
    let path = dir.join("config.txt");
    std::fs::write(&path, copy.to_text()).map_err(|e| Error::io(&path, e))
}
