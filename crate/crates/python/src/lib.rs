//! Python module `pybiharm`: thin wrappers over the core types.

use std::path::PathBuf;

use biharm::forward::{self, Backend, BoundaryCondition, DataKind, Excitation, Scatterer};
use biharm::geometry;
use biharm::harness::{self, ExperimentConfig, Level, NoiseSpec, ValidationOptions};
use biharm::imaging::{self, IndicatorId};
use biharm::specfun::{self, KernelKind};
use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

fn err(e: biharm::Error) -> PyErr {
    match e {
        biharm::Error::Io { .. } => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

#[pyclass(name = "WaveParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyWaveParams(specfun::WaveParams);

#[pymethods]
impl PyWaveParams {
    #[new]
    #[pyo3(signature = (kappa = 2.0 * std::f64::consts::PI, nu = specfun::WaveParams::DEFAULT_NU))]
    fn new(kappa: f64, nu: f64) -> PyResult<Self> {
        specfun::WaveParams::new(kappa, nu).map(Self).map_err(err)
    }
    #[getter]
    fn kappa(&self) -> f64 {
        self.0.kappa
    }
    #[getter]
    fn nu(&self) -> f64 {
        self.0.nu
    }
    fn __repr__(&self) -> String {
        format!("WaveParams(kappa={}, nu={})", self.0.kappa, self.0.nu)
    }
}

#[pyclass(name = "Curve", frozen, from_py_object)]
#[derive(Clone)]
struct PyCurve(geometry::Curve);

#[pymethods]
impl PyCurve {
    #[staticmethod]
    #[pyo3(signature = (center = (0.0, 0.0), radius = 1.0))]
    fn circle(center: (f64, f64), radius: f64) -> PyResult<Self> {
        geometry::Curve::circle([center.0, center.1], radius).map(Self).map_err(err)
    }
    #[staticmethod]
    #[pyo3(signature = (shift = (0.0, 0.0), scale = 1.0))]
    fn kite(shift: (f64, f64), scale: f64) -> PyResult<Self> {
        geometry::Curve::kite([shift.0, shift.1], scale).map(Self).map_err(err)
    }
    /// Curves in config syntax, e.g. "circle(-2, -2, 1) kite(2, 2, 1)".
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Vec<Self>> {
        Ok(harness::parse_curves(text).map_err(err)?.into_iter().map(Self).collect())
    }
    fn point(&self, t: f64) -> (f64, f64) {
        let p = self.0.point(t);
        (p[0], p[1])
    }
    fn contains(&self, x: (f64, f64)) -> bool {
        self.0.contains([x.0, x.1])
    }
    fn distance(&self, x: (f64, f64)) -> f64 {
        self.0.distance([x.0, x.1])
    }
}

#[pyclass(name = "ArrayGeometry", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyArray(geometry::ArrayGeometry);

#[pymethods]
impl PyArray {
    #[new]
    #[pyo3(signature = (receiver_radius = 10.0, source_radius = 10.0, receivers = 128, sources = 128, directions = 128))]
    fn new(receiver_radius: f64, source_radius: f64, receivers: usize, sources: usize, directions: usize) -> PyResult<Self> {
        geometry::ArrayGeometry::new(receiver_radius, source_radius, receivers, sources, directions).map(Self).map_err(err)
    }
    #[getter]
    fn receiver_radius(&self) -> f64 {
        self.0.receiver_radius
    }
    #[getter]
    fn source_radius(&self) -> f64 {
        self.0.source_radius
    }
    #[getter]
    fn counts(&self) -> (usize, usize, usize) {
        (self.0.receivers, self.0.sources, self.0.directions)
    }
    fn receiver(&self, i: usize) -> (f64, f64) {
        let p = self.0.receiver(i);
        (p[0], p[1])
    }
    fn source(&self, i: usize) -> (f64, f64) {
        let p = self.0.source(i);
        (p[0], p[1])
    }
}

#[pyclass(name = "DataMatrix", frozen, from_py_object)]
#[derive(Clone)]
struct PyData(forward::DataMatrix);

#[pymethods]
impl PyData {
    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind.tag()
    }
    #[getter]
    fn excitation(&self) -> &'static str {
        self.0.excitation.tag()
    }
    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.rows, self.0.cols)
    }
    /// Entries in row-major order.
    fn values(&self) -> Vec<Complex64> {
        self.0.values.clone()
    }
    fn get(&self, row: usize, col: usize) -> PyResult<Complex64> {
        if row >= self.0.rows || col >= self.0.cols {
            return Err(PyValueError::new_err(format!("index ({row}, {col}) outside {}x{}", self.0.rows, self.0.cols)));
        }
        Ok(self.0.get(row, col))
    }
    fn magnitude(&self) -> PyResult<Self> {
        self.0.magnitude().map(Self).map_err(err)
    }
    fn save(&self, path: PathBuf) -> PyResult<()> {
        harness::save_matrix(&self.0, &path).map_err(err)
    }
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        harness::load_matrix(&path).map(Self).map_err(err)
    }
}

#[pyclass(name = "GridSpec", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyGridSpec(imaging::GridSpec);

#[pymethods]
impl PyGridSpec {
    #[new]
    #[pyo3(signature = (bounds = (-6.0, 6.0, -6.0, 6.0), nx = 121, ny = 121))]
    fn new(bounds: (f64, f64, f64, f64), nx: usize, ny: usize) -> PyResult<Self> {
        imaging::GridSpec::new([bounds.0, bounds.1, bounds.2, bounds.3], nx, ny).map(Self).map_err(err)
    }
    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.nx, self.0.ny)
    }
    fn point(&self, k: usize) -> (f64, f64) {
        let p = self.0.point(k);
        (p[0], p[1])
    }
}

#[pyclass(name = "SamplingGrid", frozen, from_py_object)]
#[derive(Clone)]
struct PyGrid(imaging::SamplingGrid);

#[pymethods]
impl PyGrid {
    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.spec.nx, self.0.spec.ny)
    }
    /// Values with x varying fastest.
    fn values(&self) -> Vec<f64> {
        self.0.values.clone()
    }
    fn get(&self, ix: usize, iy: usize) -> f64 {
        self.0.get(ix, iy)
    }
    /// Location and value of the maximum.
    fn argmax(&self) -> ((f64, f64), f64) {
        let (k, v) = self.0.argmax();
        let p = self.0.spec.point(k);
        ((p[0], p[1]), v)
    }
    fn normalized(&self) -> PyResult<Self> {
        imaging::normalize(&self.0).map(Self).map_err(err)
    }
    fn save(&self, csv: PathBuf, ppm: PathBuf, outline: Vec<PyCurve>) -> PyResult<()> {
        let curves: Vec<geometry::Curve> = outline.into_iter().map(|c| c.0).collect();
        harness::emit_grid(&self.0, &csv, &ppm, &curves).map_err(err)
    }
}

fn default_params() -> specfun::WaveParams {
    specfun::WaveParams::new(2.0 * std::f64::consts::PI, specfun::WaveParams::DEFAULT_NU).expect("valid defaults")
}

fn backend(name: &str) -> PyResult<Backend> {
    match name {
        "auto" => Ok(Backend::Auto),
        "modal" => Ok(Backend::Modal),
        "mfs" => Ok(Backend::Mfs(forward::MfsConfig::default())),
        other => Err(PyValueError::new_err(format!("backend '{other}' is not auto, modal or mfs"))),
    }
}

/// Synthetic measurements of one kind ("usc", "dn_usc", "m_usc", "n_usc", "ufar", "utotal").
#[pyfunction]
#[pyo3(signature = (curves, kind, excitation = "point", bc = "clamped", params = None, array = None, backend_name = "auto"))]
fn simulate(
    curves: Vec<PyCurve>,
    kind: &str,
    excitation: &str,
    bc: &str,
    params: Option<PyWaveParams>,
    array: Option<PyArray>,
    backend_name: &str,
) -> PyResult<PyData> {
    let params = params.map(|p| p.0).unwrap_or_else(default_params);
    let scat = Scatterer::new(params, curves.into_iter().map(|c| c.0).collect(), BoundaryCondition::parse(bc).map_err(err)?);
    let array = array.map(|a| a.0).unwrap_or_default();
    let kind = DataKind::from_tag(kind).map_err(err)?;
    let excitation = Excitation::from_tag(excitation).map_err(err)?;
    forward::simulate(&scat, &array, kind, excitation, backend(backend_name)?).map(PyData).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (data, delta, seed = 1))]
fn add_noise(data: &PyData, delta: f64, seed: u64) -> PyResult<PyData> {
    harness::add_noise(&data.0, NoiseSpec::new(delta, seed).map_err(err)?).map(PyData).map_err(err)
}

/// Raw (unnormalized) image of indicator `j` in 1..=11 on the grid.
#[pyfunction]
#[pyo3(signature = (j, data, grid = None))]
fn image(j: usize, data: &PyData, grid: Option<PyGridSpec>) -> PyResult<PyGrid> {
    let id = IndicatorId::new(j).map_err(err)?;
    let grid = grid.map(|g| g.0).unwrap_or_default();
    imaging::image(id, &data.0, grid).map(PyGrid).map_err(err)
}

/// Data term (|u|² − |Φ|²)/Φ of the phaseless indicator from |u_total|, row-major.
#[pyfunction]
fn phaseless_data(data: &PyData) -> PyResult<Vec<Complex64>> {
    imaging::phaseless_data(&data.0).map_err(err)
}

/// Φ_κ, K0/(2π) or the biharmonic Green's function at distance |x − y|.
#[pyfunction]
#[pyo3(signature = (kind, x, y, params = None))]
fn kernel(kind: &str, x: (f64, f64), y: (f64, f64), params: Option<PyWaveParams>) -> PyResult<Complex64> {
    let kind = match kind {
        "helmholtz" => KernelKind::Helmholtz,
        "modified" => KernelKind::ModifiedHelmholtz,
        "biharmonic" => KernelKind::Biharmonic,
        other => return Err(PyValueError::new_err(format!("kernel '{other}' is not helmholtz, modified or biharmonic"))),
    };
    let params = params.map(|p| p.0).unwrap_or_else(default_params);
    specfun::kernel_value(kind, params, [x.0, x.1], [y.0, y.1]).map_err(err)
}

/// H_n^(1)(t).
#[pyfunction]
fn hankel1(n: u32, t: f64) -> PyResult<Complex64> {
    specfun::hankel1(n, t).map_err(err)
}

type CheckTuple = (String, f64, String, bool, String);

fn checks(report: &harness::RunReport) -> Vec<CheckTuple> {
    report.checks.iter().map(|c| (c.name.clone(), c.measured, c.tolerance.clone(), c.passed, c.detail.clone())).collect()
}

/// Run an experiment from a config file (or built-in example 1, 2 or 3) into `out`.
/// Returns (name, measured, tolerance, passed, detail) per localization check.
#[pyfunction]
#[pyo3(signature = (out, config = None, example = 1, seed = None))]
fn reconstruct(out: PathBuf, config: Option<PathBuf>, example: u8, seed: Option<u64>) -> PyResult<Vec<CheckTuple>> {
    let mut c = match (config, example) {
        (Some(path), _) => ExperimentConfig::from_file(&path).map_err(err)?,
        (None, 1) => ExperimentConfig::example1(),
        (None, 2) => ExperimentConfig::example2(),
        (None, 3) => ExperimentConfig::example3(),
        (None, n) => return Err(PyValueError::new_err(format!("no built-in example {n}"))),
    };
    c.output_dir = out;
    if let Some(s) = seed {
        c.seed = s;
    }
    harness::run_experiment(&c).map(|r| checks(&r)).map_err(err)
}

/// One numbered validation criterion (1..=14) at level "fast" or "full".
#[pyfunction]
#[pyo3(signature = (n, level = "fast"))]
fn criterion(n: usize, level: &str) -> PyResult<CheckTuple> {
    if !(1..=harness::CRITERIA.len()).contains(&n) {
        return Err(PyValueError::new_err(format!("criteria are numbered 1..={}", harness::CRITERIA.len())));
    }
    let opts = ValidationOptions::new(Level::parse(level).map_err(err)?);
    let c = harness::run_criterion(n, &opts);
    Ok((c.name, c.measured, c.tolerance, c.passed, c.detail))
}

#[pymodule]
fn pybiharm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWaveParams>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyArray>()?;
    m.add_class::<PyData>()?;
    m.add_class::<PyGridSpec>()?;
    m.add_class::<PyGrid>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(add_noise, m)?)?;
    m.add_function(wrap_pyfunction!(image, m)?)?;
    m.add_function(wrap_pyfunction!(phaseless_data, m)?)?;
    m.add_function(wrap_pyfunction!(kernel, m)?)?;
    m.add_function(wrap_pyfunction!(hankel1, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(criterion, m)?)?;
    Ok(())
}
