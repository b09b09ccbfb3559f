//! Method of fundamental solutions with a two-density (κ and iκ) basis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::problem::{incident_jet, trace, Incidence, Scatterer, Scene};
use crate::error::{Error, Result};
use crate::geometry::{discretize, BoundaryNode, Curve, Jet3};
use crate::linalg::LeastSquares;
use crate::specfun::{kernel_jet, KernelKind, WaveParams};

/// Residuals above this are reported as solve failures.
pub const FAILURE_RESIDUAL: f64 = 1e-3;

/// Discretization knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MfsConfig {
    /// Sources sit at the curve's complex parameter t − i·ln(offset); a circle of radius a maps to radius offset·a.
    pub offset: f64,
    /// Sources per curve (each carries a κ and an iκ density).
    pub sources: usize,
    /// Collocation nodes per curve.
    pub collocation: usize,
    /// Relative singular-value cutoff.
    pub svd_cutoff: f64,
    /// Residual above which `converged` is cleared.
    pub tolerance: f64,
}

impl Default for MfsConfig {
    fn default() -> Self {
        Self { offset: 0.8, sources: 96, collocation: 256, svd_cutoff: 1e-13, tolerance: 1e-6 }
    }
}

impl MfsConfig {
    fn validate(&self) -> Result<()> {
        if !(self.offset > 0.0 && self.offset < 1.0) {
            return Err(Error::Contract(format!("source offset factor must lie in (0, 1), got {}", self.offset)));
        }
        if self.sources == 0 {
            return Err(Error::Contract("at least one source per curve is required".into()));
        }
        if self.collocation < 2 * self.sources {
            return Err(Error::Contract(format!(
                "collocation count {} must be at least twice the source count {}",
                self.collocation, self.sources
            )));
        }
        Ok(())
    }
}

/// Densities of an MFS solve.
#[derive(Debug, Clone, PartialEq)]
pub struct MfsSolution {
    pub params: WaveParams,
    pub curves: Vec<Curve>,
    pub sources: Vec<[f64; 2]>,
    /// Helmholtz (κ) densities.
    pub c: Vec<Complex64>,
    /// Modified Helmholtz (iκ) densities.
    pub d: Vec<Complex64>,
    /// max |boundary residual| / max |incident trace| over collocation rows.
    pub residual: f64,
    pub converged: bool,
}

/// Factored boundary system for one obstacle, reusable across incident fields.
#[derive(Debug, Clone)]
pub struct MfsOperator {
    pub scatterer: Scatterer,
    pub config: MfsConfig,
    pub sources: Vec<[f64; 2]>,
    pub nodes: Vec<BoundaryNode>,
    system: DMatrix<Complex64>,
    row_scale: [f64; 2],
    solver: LeastSquares,
}

fn source_points(curves: &[Curve], config: &MfsConfig) -> Result<Vec<[f64; 2]>> {
    let mut out = Vec::with_capacity(curves.len() * config.sources);
    for (ci, curve) in curves.iter().enumerate() {
        for j in 0..config.sources {
            let t = 2.0 * std::f64::consts::PI * j as f64 / config.sources as f64;
            let y = curve.complexified_point(t, config.offset);
            for (cj, other) in curves.iter().enumerate() {
                let inside = other.contains(y);
                if (cj == ci) != inside {
                    return Err(Error::Geometry(format!(
                        "MFS source {j} of curve {ci} does not lie inside its own obstacle only"
                    )));
                }
            }
            out.push(y);
        }
    }
    Ok(out)
}

impl MfsOperator {
    pub fn new(scatterer: &Scatterer, config: MfsConfig) -> Result<Self> {
        config.validate()?;
        if scatterer.curves.is_empty() {
            return Err(Error::Contract("MFS needs at least one obstacle".into()));
        }
        let params = scatterer.params;
        let sources = source_points(&scatterer.curves, &config)?;
        let mut nodes = Vec::with_capacity(scatterer.curves.len() * config.collocation);
        for c in &scatterer.curves {
            nodes.extend(discretize(c, config.collocation)?);
        }
        let traces = scatterer.bc.traces();
        let row_scale = [params.kappa.powi(-traces[0].order()), params.kappa.powi(-traces[1].order())];
        let ns = sources.len();
        let rows: Vec<Vec<Complex64>> = nodes
            .par_iter()
            .map(|node| -> Result<Vec<Complex64>> {
                let mut row = vec![Complex64::new(0.0, 0.0); 4 * ns];
                for (j, y) in sources.iter().enumerate() {
                    let a = kernel_jet(KernelKind::Helmholtz, params, node.point, *y)?;
                    let b = kernel_jet(KernelKind::ModifiedHelmholtz, params, node.point, *y)?;
                    row[j] = trace(&a, node, params.nu, traces[0])? * row_scale[0];
                    row[ns + j] = trace(&b, node, params.nu, traces[0])? * row_scale[0];
                    row[2 * ns + j] = trace(&a, node, params.nu, traces[1])? * row_scale[1];
                    row[3 * ns + j] = trace(&b, node, params.nu, traces[1])? * row_scale[1];
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let nn = nodes.len();
        let mut system = DMatrix::<Complex64>::zeros(2 * nn, 2 * ns);
        for (i, row) in rows.iter().enumerate() {
            for j in 0..2 * ns {
                system[(2 * i, j)] = row[j];
                system[(2 * i + 1, j)] = row[2 * ns + j];
            }
        }
        let solver = LeastSquares::new(&system, config.svd_cutoff);
        Ok(Self { scatterer: scatterer.clone(), config, sources, nodes, system, row_scale, solver })
    }

    /// Right-hand side −(ℬ₁, ℬ₂)u^in at the collocation nodes.
    pub fn rhs(&self, incidence: &Incidence) -> Result<DVector<Complex64>> {
        let params = self.scatterer.params;
        let traces = self.scatterer.bc.traces();
        let mut b = DVector::<Complex64>::zeros(2 * self.nodes.len());
        for (i, node) in self.nodes.iter().enumerate() {
            let jet = incident_jet(incidence, params, node.point)?;
            b[2 * i] = -trace(&jet, node, params.nu, traces[0])? * self.row_scale[0];
            b[2 * i + 1] = -trace(&jet, node, params.nu, traces[1])? * self.row_scale[1];
        }
        Ok(b)
    }

    /// Densities for many right-hand sides (columns of `b`).
    pub fn densities(&self, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        self.solver.solve_many(b)
    }

    /// Relative residual of a density vector against a right-hand side.
    pub fn residual_of(&self, x: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
        let r = &self.system * x - b;
        let num = r.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let den = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if den > 0.0 {
            num / den
        } else {
            num
        }
    }

    pub fn rank(&self) -> usize {
        self.solver.rank
    }

    fn package(&self, x: &DVector<Complex64>, residual: f64) -> MfsSolution {
        let ns = self.sources.len();
        MfsSolution {
            params: self.scatterer.params,
            curves: self.scatterer.curves.clone(),
            sources: self.sources.clone(),
            c: x.iter().take(ns).cloned().collect(),
            d: x.iter().skip(ns).cloned().collect(),
            residual,
            converged: residual <= self.config.tolerance,
        }
    }

    /// Solve for one incident field.
    pub fn solve(&self, incidence: &Incidence) -> Result<MfsSolution> {
        self.scatterer.with_incidence(*incidence).validate()?;
        let b = self.rhs(incidence)?;
        let x = self.solver.solve(&b);
        let residual = self.residual_of(&x, &b);
        if !(residual <= FAILURE_RESIDUAL) {
            return Err(Error::Solve {
                residual,
                context: format!(
                    "MFS boundary residual too large ({} bc, rank {} of {})",
                    self.scatterer.bc.name(),
                    self.solver.rank,
                    2 * self.sources.len()
                ),
            });
        }
        Ok(self.package(&x, residual))
    }

    /// Package densities computed elsewhere (e.g. by batched `densities`).
    pub fn solution_from(&self, x: &DVector<Complex64>, b: &DVector<Complex64>) -> MfsSolution {
        let residual = self.residual_of(x, b);
        self.package(x, residual)
    }
}

/// Convenience: build the operator and solve one scene.
pub fn solve_mfs(scene: &Scene, config: MfsConfig) -> Result<MfsSolution> {
    MfsOperator::new(&scene.scatterer(), config)?.solve(&scene.incidence)
}

impl MfsSolution {
    fn check_exterior(&self, x: [f64; 2]) -> Result<()> {
        if self.curves.iter().any(|c| c.contains(x)) {
            return Err(Error::Domain(format!("point ({}, {}) lies inside an obstacle", x[0], x[1])));
        }
        Ok(())
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.c.iter_mut().for_each(|v| *v *= s);
        out.d.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn jet(&self, x: [f64; 2]) -> Result<Jet3> {
        self.check_exterior(x)?;
        self.jet_unchecked(x)
    }

    /// The κ-density part, which alone radiates.
    pub fn propagating(&self, x: [f64; 2]) -> Result<Complex64> {
        self.check_exterior(x)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (y, c) in self.sources.iter().zip(&self.c) {
            let r = (x[0] - y[0]).hypot(x[1] - y[1]);
            acc += c * crate::specfun::helmholtz_value(self.params.kappa, r);
        }
        Ok(acc)
    }

    pub fn farfield(&self, xhat: [f64; 2]) -> Complex64 {
        let k = self.params.kappa;
        self.sources
            .iter()
            .zip(&self.c)
            .map(|(y, c)| c * Complex64::from_polar(1.0, -k * (xhat[0] * y[0] + xhat[1] * y[1])))
            .sum()
    }

    /// Boundary residual re-measured on `n` nodes per curve.
    pub fn boundary_residual(&self, scene: &Scene, n: usize) -> Result<f64> {
        let traces = scene.bc.traces();
        let nu = self.params.nu;
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for curve in &self.curves {
            for node in discretize(curve, n)? {
                let inc = incident_jet(&scene.incidence, self.params, node.point)?;
                let sc = self.jet_unchecked(node.point)?;
                for tr in traces.iter() {
                    let s = self.params.kappa.powi(-tr.order());
                    let ti = trace(&inc, &node, nu, *tr)? * s;
                    let ts = trace(&sc, &node, nu, *tr)? * s;
                    num = num.max((ti + ts).norm());
                    den = den.max(ti.norm());
                }
            }
        }
        Ok(if den > 0.0 { num / den } else { num })
    }

    /// Jet without the exterior check, e.g. on the boundary itself. Invalid at source points.
    pub fn jet_unchecked(&self, x: [f64; 2]) -> Result<Jet3> {
        let mut acc = Jet3::zero();
        for ((y, c), d) in self.sources.iter().zip(&self.c).zip(&self.d) {
            acc = acc + kernel_jet(KernelKind::Helmholtz, self.params, x, *y)? * *c;
            acc = acc + kernel_jet(KernelKind::ModifiedHelmholtz, self.params, x, *y)? * *d;
        }
        Ok(acc)
    }
}
