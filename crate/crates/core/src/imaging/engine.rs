use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{GridSpec, SamplingGrid};
use crate::error::{Error, Result};
use crate::forward::{DataKind, DataMatrix, Excitation};
use crate::geometry::ArrayGeometry;
use crate::specfun::{helmholtz_value, WaveParams};

/// Which of the eleven indicators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndicatorId(u8);

impl IndicatorId {
    pub fn new(j: usize) -> Result<Self> {
        if (1..=11).contains(&j) {
            Ok(Self(j as u8))
        } else {
            Err(Error::Contract(format!("indicator index {j} outside 1..=11")))
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> Vec<IndicatorId> {
        (1..=11).map(|j| IndicatorId(j as u8)).collect()
    }

    pub fn kind(self) -> DataKind {
        IndicatorSpec::standard(self).kind
    }

    pub fn excitation(self) -> Excitation {
        IndicatorSpec::standard(self).excitation
    }
}

impl std::fmt::Display for IndicatorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "I{}", self.0)
    }
}

/// Factor multiplying the data along the row index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReceiverKernel {
    /// Φ_κ(z, x_r) over the receiver circle
    Point,
    /// e^{−iκ z·x̂} over the direction set
    FarDirection,
}

/// Factor multiplying the data along the column index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKernel {
    /// Φ_κ(z, x_s) over the source circle
    Point,
    /// e^{iκ z·d} over the direction set
    PlaneWave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Re,
    Im,
}

/// One row of the indicator table:
/// I(z) = coefficient·κ^power · Branch Σ_r Σ_s w_r w_s A_r(z) B_s(z) D̃(r, s),
/// where D̃ is conj(data), or the phaseless quotient for I11.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorSpec {
    pub id: IndicatorId,
    pub receiver: ReceiverKernel,
    pub source: SourceKernel,
    pub coefficient: f64,
    pub kappa_power: i32,
    pub branch: Branch,
    pub kind: DataKind,
    pub excitation: Excitation,
}

impl IndicatorSpec {
    pub fn standard(id: IndicatorId) -> Self {
        use Branch::*;
        use DataKind::*;
        use Excitation::*;
        let q = 1.0 / (4.0 * PI);
        let (receiver, source, coefficient, kappa_power, branch, kind, excitation) = match id.get() {
            1 => (ReceiverKernel::Point, SourceKernel::Point, -2.0, 4, Im, Scattered, PointSource),
            2 => (ReceiverKernel::Point, SourceKernel::Point, -2.0, 3, Re, NormalDerivative, PointSource),
            3 => (ReceiverKernel::Point, SourceKernel::Point, 2.0, 2, Im, Moment, PointSource),
            4 => (ReceiverKernel::Point, SourceKernel::Point, -2.0, 1, Re, Force, PointSource),
            5 => (ReceiverKernel::Point, SourceKernel::PlaneWave, -q, 3, Im, Scattered, PlaneWave),
            6 => (ReceiverKernel::Point, SourceKernel::PlaneWave, -q, 2, Re, NormalDerivative, PlaneWave),
            7 => (ReceiverKernel::Point, SourceKernel::PlaneWave, q, 1, Im, Moment, PlaneWave),
            8 => (ReceiverKernel::Point, SourceKernel::PlaneWave, -q, 0, Re, Force, PlaneWave),
            9 => (ReceiverKernel::FarDirection, SourceKernel::Point, -q, 3, Im, FarField, PointSource),
            10 => (ReceiverKernel::FarDirection, SourceKernel::PlaneWave, -q * q / 2.0, 2, Im, FarField, PlaneWave),
            11 => (ReceiverKernel::Point, SourceKernel::Point, -2.0, 4, Im, TotalMagnitude, PointSource),
            _ => unreachable!("IndicatorId is validated on construction"),
        };
        Self { id, receiver, source, coefficient, kappa_power, branch, kind, excitation }
    }

    pub fn prefactor(&self, kappa: f64) -> f64 {
        self.coefficient * kappa.powi(self.kappa_power)
    }

    fn check_data(&self, data: &DataMatrix) -> Result<()> {
        if data.kind != self.kind || data.excitation != self.excitation {
            return Err(Error::Contract(format!(
                "{} needs {} data with {} excitation, got {} / {}",
                self.id,
                self.kind.tag(),
                self.excitation.tag(),
                data.kind.tag(),
                data.excitation.tag()
            )));
        }
        Ok(())
    }
}

/// Quotient (|u|² − |Φ_κ(x_r,x_s)|²)/Φ_κ(x_r,x_s) from total-field magnitudes, row-major.
/// Fails when |Φ_κ(x_r,x_s)| < 1e-14 or is not finite.
pub fn phaseless_data(data: &DataMatrix) -> Result<Vec<Complex64>> {
    if data.kind != DataKind::TotalMagnitude || data.excitation != Excitation::PointSource {
        return Err(Error::Contract("phaseless imaging needs |u| data under point sources".into()));
    }
    let k = data.params.kappa;
    let mut out = Vec::with_capacity(data.values.len());
    for r in 0..data.rows {
        let xr = data.array.receiver(r);
        for s in 0..data.cols {
            let xs = data.array.source(s);
            let phi = helmholtz_value(k, (xr[0] - xs[0]).hypot(xr[1] - xs[1]));
            let magnitude = phi.norm();
            // coincident points give an infinite divisor, which is rejected too
            if !(magnitude >= 1e-14 && magnitude.is_finite()) {
                return Err(Error::Divisor { row: r, col: s, magnitude });
            }
            let m = data.get(r, s).re;
            out.push((m * m - magnitude * magnitude) / phi);
        }
    }
    Ok(out)
}

const CHUNK: usize = 512;

/// Kernel blocks for one set of sampling points and an array, shared across indicators.
#[derive(Debug)]
pub struct Imager {
    pub grid: Option<GridSpec>,
    pub array: ArrayGeometry,
    pub params: WaveParams,
    points: Vec<[f64; 2]>,
    blocks: [OnceLock<DMatrix<Complex64>>; 4],
}

impl Imager {
    pub fn new(grid: GridSpec, array: ArrayGeometry, params: WaveParams) -> Result<Self> {
        grid.check_inside(&array)?;
        Ok(Self { grid: Some(grid), array, params, points: grid.points(), blocks: Default::default() })
    }

    /// Scattered sampling points instead of a grid (probes, symmetry checks).
    pub fn at_points(points: Vec<[f64; 2]>, array: ArrayGeometry, params: WaveParams) -> Result<Self> {
        for p in &points {
            array.check_encloses([p[0], p[0], p[1], p[1]])?;
        }
        Ok(Self { grid: None, array, params, points, blocks: Default::default() })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// (nodes × grid points) block, column z holding the kernel at every node.
    fn block(&self, slot: usize) -> &DMatrix<Complex64> {
        self.blocks[slot].get_or_init(|| {
            let k = self.params.kappa;
            let a = &self.array;
            let (n, value): (usize, Box<dyn Fn([f64; 2], usize) -> Complex64 + Sync>) = match slot {
                0 => (a.receivers, Box::new(move |z, i| point_kernel(k, z, a.receiver(i)))),
                1 => (a.directions, Box::new(move |z, i| plane(-k, z, a.direction(i)))),
                2 => (a.sources, Box::new(move |z, i| point_kernel(k, z, a.source(i)))),
                _ => (a.directions, Box::new(move |z, i| plane(k, z, a.direction(i)))),
            };
            let mut data = vec![Complex64::new(0.0, 0.0); n * self.points.len()];
            data.par_chunks_mut(n).zip(self.points.par_iter()).for_each(|(col, z)| {
                for (i, v) in col.iter_mut().enumerate() {
                    *v = value(*z, i);
                }
            });
            DMatrix::from_vec(n, self.points.len(), data)
        })
    }

    /// Same wavenumber, radii and the two point counts the indicator sums over.
    fn check_recording(&self, spec: &IndicatorSpec, data: &DataMatrix) -> Result<()> {
        let a = &self.array;
        let b = &data.array;
        let rows = match spec.receiver {
            ReceiverKernel::Point => a.receivers,
            ReceiverKernel::FarDirection => a.directions,
        };
        let cols = match spec.source {
            SourceKernel::Point => a.sources,
            SourceKernel::PlaneWave => a.directions,
        };
        if data.params != self.params
            || a.receiver_radius != b.receiver_radius
            || a.source_radius != b.source_radius
            || (data.rows, data.cols) != (rows, cols)
        {
            return Err(Error::Contract("data was recorded on a different array or wavenumber".into()));
        }
        Ok(())
    }

    fn receiver_block(&self, kernel: ReceiverKernel) -> (&DMatrix<Complex64>, f64) {
        match kernel {
            ReceiverKernel::Point => (self.block(0), self.array.receiver_weight()),
            ReceiverKernel::FarDirection => (self.block(1), self.array.direction_weight()),
        }
    }

    fn source_block(&self, kernel: SourceKernel) -> (&DMatrix<Complex64>, f64) {
        match kernel {
            SourceKernel::Point => (self.block(2), self.array.source_weight()),
            SourceKernel::PlaneWave => (self.block(3), self.array.direction_weight()),
        }
    }

    /// Indicator values on the grid.
    pub fn image(&self, spec: &IndicatorSpec, data: &DataMatrix) -> Result<SamplingGrid> {
        let grid = self.grid.ok_or_else(|| Error::Contract("imager was built on scattered points".into()))?;
        SamplingGrid::new(grid, self.evaluate(spec, data)?)
    }

    /// Indicator values at every sampling point, in point order.
    pub fn evaluate(&self, spec: &IndicatorSpec, data: &DataMatrix) -> Result<Vec<f64>> {
        spec.check_data(data)?;
        self.check_recording(spec, data)?;
        let weighted: Vec<Complex64> = if spec.kind == DataKind::TotalMagnitude {
            phaseless_data(data)?
        } else {
            data.values.iter().map(|v| v.conj()).collect()
        };
        let (a, wr) = self.receiver_block(spec.receiver);
        let (b, ws) = self.source_block(spec.source);
        let d = DMatrix::from_row_slice(data.rows, data.cols, &weighted);
        let scale = spec.prefactor(self.params.kappa) * wr * ws;
        let nz = self.points.len();
        let mut values = vec![0.0; nz];
        values.par_chunks_mut(CHUNK).enumerate().for_each(|(c, out)| {
            let start = c * CHUNK;
            let cols = b.columns(start, out.len());
            let inner = &d * cols;
            for (j, v) in out.iter_mut().enumerate() {
                let acc: Complex64 = a.column(start + j).iter().zip(inner.column(j).iter()).map(|(x, y)| x * y).sum();
                *v = scale
                    * match spec.branch {
                        Branch::Re => acc.re,
                        Branch::Im => acc.im,
                    };
            }
        });
        Ok(values)
    }
}

fn point_kernel(kappa: f64, z: [f64; 2], x: [f64; 2]) -> Complex64 {
    helmholtz_value(kappa, (z[0] - x[0]).hypot(z[1] - x[1]))
}

/// e^{i k z·d}
fn plane(k: f64, z: [f64; 2], d: [f64; 2]) -> Complex64 {
    Complex64::from_polar(1.0, k * (z[0] * d[0] + z[1] * d[1]))
}

/// Any indicator from the standard table.
pub fn image(id: IndicatorId, data: &DataMatrix, grid: GridSpec) -> Result<SamplingGrid> {
    Imager::new(grid, data.array, data.params)?.image(&IndicatorSpec::standard(id), data)
}

fn image_in(range: std::ops::RangeInclusive<usize>, j: usize, data: &DataMatrix, grid: GridSpec) -> Result<SamplingGrid> {
    if !range.contains(&j) {
        return Err(Error::Contract(format!("indicator {j} is not in {}..={}", range.start(), range.end())));
    }
    image(IndicatorId::new(j)?, data, grid)
}

/// I1..I4 from point-source near-field data.
pub fn image_nearfield_point(j: usize, data: &DataMatrix, grid: GridSpec) -> Result<SamplingGrid> {
    image_in(1..=4, j, data, grid)
}

/// I5..I8 from plane-wave near-field data.
pub fn image_nearfield_plane(j: usize, data: &DataMatrix, grid: GridSpec) -> Result<SamplingGrid> {
    image_in(5..=8, j, data, grid)
}

/// I9 (point sources) or I10 (plane waves) from far-field data.
pub fn image_farfield(j: usize, data: &DataMatrix, grid: GridSpec) -> Result<SamplingGrid> {
    image_in(9..=10, j, data, grid)
}

/// I11 from total-field magnitudes.
pub fn image_phaseless(data: &DataMatrix, grid: GridSpec) -> Result<SamplingGrid> {
    image(IndicatorId(11), data, grid)
}
