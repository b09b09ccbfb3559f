use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::data::{DataKind, DataMatrix, Excitation};
use super::mfs::{MfsConfig, MfsOperator, MfsSolution, FAILURE_RESIDUAL};
use super::modal::{solve_circle_modes, ModalSolution};
use super::problem::{Incidence, Scatterer, Scene};
use crate::error::{Error, Result};
use crate::geometry::{apply_m_polar_at, apply_n_polar_at, circle_node, ArrayGeometry, Jet3};
use crate::specfun::{helmholtz_value, kernel_jet, KernelKind, WaveParams};

/// Forward solver choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Backend {
    /// Modal series for a single centered circle, MFS otherwise.
    Auto,
    Modal,
    Mfs(MfsConfig),
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Auto
    }
}

/// A solved scattered field.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Modal(ModalSolution),
    Mfs(MfsSolution),
    /// No obstacle: the scattered field vanishes.
    Empty(WaveParams),
}

impl Solution {
    pub fn params(&self) -> WaveParams {
        match self {
            Solution::Modal(m) => m.params,
            Solution::Mfs(m) => m.params,
            Solution::Empty(p) => *p,
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        match self {
            Solution::Modal(m) => Solution::Modal(m.scaled(c)),
            Solution::Mfs(m) => Solution::Mfs(m.scaled(c)),
            Solution::Empty(p) => Solution::Empty(*p),
        }
    }
}

/// Solve one scene with the chosen backend.
pub fn solve(scene: &Scene, backend: Backend) -> Result<Solution> {
    if scene.curves.is_empty() {
        return Ok(Solution::Empty(scene.params));
    }
    match resolve_backend(&scene.scatterer(), backend)? {
        Backend::Modal => Ok(Solution::Modal(solve_circle_modes(scene, None)?)),
        Backend::Mfs(cfg) => Ok(Solution::Mfs(MfsOperator::new(&scene.scatterer(), cfg)?.solve(&scene.incidence)?)),
        Backend::Auto => unreachable!("resolved above"),
    }
}

fn resolve_backend(scatterer: &Scatterer, backend: Backend) -> Result<Backend> {
    match backend {
        Backend::Auto => Ok(if scatterer.centered_circle_radius().is_some() {
            Backend::Modal
        } else {
            Backend::Mfs(MfsConfig::default())
        }),
        Backend::Modal => {
            if scatterer.centered_circle_radius().is_none() {
                return Err(Error::Contract("modal backend needs one circle centered at the origin".into()));
            }
            Ok(Backend::Modal)
        }
        other => Ok(other),
    }
}

/// Scattered field and derivatives through order 3 at an exterior point.
pub fn eval_scattered_jet(solution: &Solution, x: [f64; 2]) -> Result<Jet3> {
    match solution {
        Solution::Modal(m) => m.jet(x),
        Solution::Mfs(m) => m.jet(x),
        Solution::Empty(_) => Ok(Jet3::zero()),
    }
}

/// Far-field pattern in direction x̂.
pub fn eval_farfield(solution: &Solution, xhat: [f64; 2]) -> Complex64 {
    match solution {
        Solution::Modal(m) => m.farfield(xhat),
        Solution::Mfs(m) => m.farfield(xhat),
        Solution::Empty(_) => Complex64::new(0.0, 0.0),
    }
}

/// Radiating part u^pr of the scattered field.
pub fn propagating_part(solution: &Solution, x: [f64; 2]) -> Result<Complex64> {
    match solution {
        Solution::Modal(m) => m.propagating(x),
        Solution::Mfs(m) => m.propagating(x),
        Solution::Empty(_) => Ok(Complex64::new(0.0, 0.0)),
    }
}

fn column_incidence(array: &ArrayGeometry, excitation: Excitation, k: usize) -> Incidence {
    match excitation {
        Excitation::PointSource => Incidence::PointSource { location: array.source(k) },
        Excitation::PlaneWave => Incidence::PlaneWave { direction: array.direction(k) },
    }
}

/// Measurement of one kind taken from a scattered-field jet at a receiver.
fn receiver_trace(kind: DataKind, jet: &Jet3, radius: f64, angle: f64, nu: f64) -> Result<Complex64> {
    let node = circle_node(radius, angle);
    match kind {
        DataKind::Scattered | DataKind::TotalField | DataKind::TotalMagnitude => Ok(jet.value()),
        DataKind::NormalDerivative => Ok(node.normal[0] * jet.get(1, 0) + node.normal[1] * jet.get(0, 1)),
        DataKind::Moment => apply_m_polar_at(jet, &node, nu),
        DataKind::Force => apply_n_polar_at(jet, &node, nu),
        DataKind::FarField => Err(Error::Contract("far-field data is not a receiver trace".into())),
    }
}

fn finish_entry(kind: DataKind, array: &ArrayGeometry, params: WaveParams, row: usize, col: usize, sc: Complex64) -> Complex64 {
    match kind {
        DataKind::TotalField | DataKind::TotalMagnitude => {
            let xr = array.receiver(row);
            let xs = array.source(col);
            let tot = sc + helmholtz_value(params.kappa, (xr[0] - xs[0]).hypot(xr[1] - xs[1]));
            if kind == DataKind::TotalMagnitude {
                Complex64::new(tot.norm(), 0.0)
            } else {
                tot
            }
        }
        _ => sc,
    }
}

fn check_array(scatterer: &Scatterer, array: &ArrayGeometry, excitation: Excitation) -> Result<()> {
    for k in 0..array.receivers {
        if scatterer.contains(array.receiver(k)) {
            return Err(Error::Domain(format!("receiver {k} lies inside an obstacle")));
        }
    }
    if excitation == Excitation::PointSource {
        for k in 0..array.sources {
            if scatterer.contains(array.source(k)) {
                return Err(Error::Domain(format!("source {k} lies inside an obstacle")));
            }
        }
    }
    Ok(())
}

/// Simulate one data matrix.
pub fn simulate(
    scatterer: &Scatterer,
    array: &ArrayGeometry,
    kind: DataKind,
    excitation: Excitation,
    backend: Backend,
) -> Result<DataMatrix> {
    Ok(simulate_many(scatterer, array, &[kind], excitation, backend)?.remove(0))
}

/// Simulate several data kinds sharing one set of forward solves.
pub fn simulate_many(
    scatterer: &Scatterer,
    array: &ArrayGeometry,
    kinds: &[DataKind],
    excitation: Excitation,
    backend: Backend,
) -> Result<Vec<DataMatrix>> {
    for &k in kinds {
        DataMatrix::check_kind_excitation(k, excitation)?;
    }
    let params = scatterer.params;
    if scatterer.curves.is_empty() {
        return kinds
            .iter()
            .map(|&k| {
                let mut d = DataMatrix::zeros(k, excitation, params, *array)?;
                for r in 0..d.rows {
                    for c in 0..d.cols {
                        let v = finish_entry(k, array, params, r, c, Complex64::new(0.0, 0.0));
                        d.set(r, c, v);
                    }
                }
                Ok(d)
            })
            .collect();
    }
    check_array(scatterer, array, excitation)?;
    match resolve_backend(scatterer, backend)? {
        Backend::Modal => simulate_modal(scatterer, array, kinds, excitation),
        Backend::Mfs(cfg) => simulate_mfs(scatterer, array, kinds, excitation, cfg),
        Backend::Auto => unreachable!("resolved above"),
    }
}

fn simulate_modal(
    scatterer: &Scatterer,
    array: &ArrayGeometry,
    kinds: &[DataKind],
    excitation: Excitation,
) -> Result<Vec<DataMatrix>> {
    let params = scatterer.params;
    let ncols = match excitation {
        Excitation::PointSource => array.sources,
        Excitation::PlaneWave => array.directions,
    };
    let needs_jets = kinds.iter().any(|k| !k.is_farfield());
    // one column of every requested kind per solve
    let columns: Vec<Vec<Vec<Complex64>>> = (0..ncols)
        .into_par_iter()
        .map(|col| -> Result<Vec<Vec<Complex64>>> {
            let scene = scatterer.with_incidence(column_incidence(array, excitation, col));
            let sol = solve_circle_modes(&scene, None)?;
            let jets: Vec<Jet3> = if needs_jets {
                (0..array.receivers).map(|r| sol.jet(array.receiver(r))).collect::<Result<_>>()?
            } else {
                Vec::new()
            };
            kinds
                .iter()
                .map(|&kind| {
                    if kind.is_farfield() {
                        Ok((0..array.directions).map(|r| sol.farfield(array.direction(r))).collect())
                    } else {
                        jets.iter()
                            .enumerate()
                            .map(|(r, jet)| {
                                let sc = receiver_trace(kind, jet, array.receiver_radius, array.receiver_angle(r), params.nu)?;
                                Ok(finish_entry(kind, array, params, r, col, sc))
                            })
                            .collect()
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    kinds
        .iter()
        .enumerate()
        .map(|(ki, &kind)| {
            let (rows, cols) = DataMatrix::shape_for(kind, excitation, array);
            let mut values = vec![Complex64::new(0.0, 0.0); rows * cols];
            for (c, col) in columns.iter().enumerate() {
                for (r, v) in col[ki].iter().enumerate() {
                    values[r * cols + c] = *v;
                }
            }
            DataMatrix::new(kind, excitation, values, params, *array)
        })
        .collect()
}

/// Rows mapping MFS densities to measurements of one kind.
fn evaluation_matrix(op: &MfsOperator, array: &ArrayGeometry, kind: DataKind) -> Result<DMatrix<Complex64>> {
    let params = op.scatterer.params;
    let ns = op.sources.len();
    if kind.is_farfield() {
        let mut e = DMatrix::<Complex64>::zeros(array.directions, 2 * ns);
        for r in 0..array.directions {
            let d = array.direction(r);
            for (j, y) in op.sources.iter().enumerate() {
                e[(r, j)] = Complex64::from_polar(1.0, -params.kappa * (d[0] * y[0] + d[1] * y[1]));
            }
        }
        return Ok(e);
    }
    let rows: Vec<Vec<Complex64>> = (0..array.receivers)
        .into_par_iter()
        .map(|r| -> Result<Vec<Complex64>> {
            let x = array.receiver(r);
            let angle = array.receiver_angle(r);
            let mut row = vec![Complex64::new(0.0, 0.0); 2 * ns];
            for (j, y) in op.sources.iter().enumerate() {
                let a = kernel_jet(KernelKind::Helmholtz, params, x, *y)?;
                let b = kernel_jet(KernelKind::ModifiedHelmholtz, params, x, *y)?;
                row[j] = receiver_trace(kind, &a, array.receiver_radius, angle, params.nu)?;
                row[ns + j] = receiver_trace(kind, &b, array.receiver_radius, angle, params.nu)?;
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(array.receivers, 2 * ns, |i, j| rows[i][j]))
}

fn simulate_mfs(
    scatterer: &Scatterer,
    array: &ArrayGeometry,
    kinds: &[DataKind],
    excitation: Excitation,
    cfg: MfsConfig,
) -> Result<Vec<DataMatrix>> {
    let params = scatterer.params;
    let op = MfsOperator::new(scatterer, cfg)?;
    let ncols = match excitation {
        Excitation::PointSource => array.sources,
        Excitation::PlaneWave => array.directions,
    };
    let rhs_cols: Vec<DVector<Complex64>> = (0..ncols)
        .into_par_iter()
        .map(|c| op.rhs(&column_incidence(array, excitation, c)))
        .collect::<Result<_>>()?;
    let nrows = rhs_cols[0].len();
    let b = DMatrix::from_fn(nrows, ncols, |i, j| rhs_cols[j][i]);
    let x = op.densities(&b);
    let mut worst: f64 = 0.0;
    for c in 0..ncols {
        let xc = x.column(c).into_owned();
        worst = worst.max(op.residual_of(&xc, &rhs_cols[c]));
    }
    if !(worst <= FAILURE_RESIDUAL) {
        return Err(Error::Solve {
            residual: worst,
            context: format!("MFS boundary residual too large for {} bc", scatterer.bc.name()),
        });
    }
    kinds
        .iter()
        .map(|&kind| {
            let e = evaluation_matrix(&op, array, kind)?;
            let vals = &e * &x;
            let (rows, cols) = DataMatrix::shape_for(kind, excitation, array);
            let mut values = Vec::with_capacity(rows * cols);
            for r in 0..rows {
                for c in 0..cols {
                    values.push(finish_entry(kind, array, params, r, c, vals[(r, c)]));
                }
            }
            DataMatrix::new(kind, excitation, values, params, *array)
        })
        .collect()
}
