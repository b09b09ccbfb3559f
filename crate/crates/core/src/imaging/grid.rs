use crate::error::{Error, Result};
use crate::geometry::ArrayGeometry;

/// Sampling box and resolution, without values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// (xmin, xmax, ymin, ymax)
    pub bounds: [f64; 4],
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { bounds: [-6.0, 6.0, -6.0, 6.0], nx: 121, ny: 121 }
    }
}

impl GridSpec {
    pub fn new(bounds: [f64; 4], nx: usize, ny: usize) -> Result<Self> {
        if bounds.iter().any(|b| !b.is_finite()) || !(bounds[0] < bounds[1] && bounds[2] < bounds[3]) {
            return Err(Error::Geometry(format!("invalid grid bounds {bounds:?}")));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::Geometry(format!("grid resolution {nx}×{ny} needs at least 2 points per axis")));
        }
        Ok(Self { bounds, nx, ny })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.bounds[0] + (self.bounds[1] - self.bounds[0]) * ix as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.bounds[2] + (self.bounds[3] - self.bounds[2]) * iy as f64 / (self.ny - 1) as f64
    }

    /// Point of flat index `k` (x fastest).
    pub fn point(&self, k: usize) -> [f64; 2] {
        [self.x(k % self.nx), self.y(k / self.nx)]
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    pub fn check_inside(&self, array: &ArrayGeometry) -> Result<()> {
        array.check_encloses(self.bounds)
    }
}

/// Real image values on a grid, row-major with x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl SamplingGrid {
    pub fn new(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::Contract(format!("{} values for a {}×{} grid", values.len(), spec.nx, spec.ny)));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("grid values must be finite".into()));
        }
        Ok(Self { spec, values })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self { spec, values: vec![0.0; spec.len()] }
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.spec.nx + ix]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Flat index and value of the largest entry (first on ties).
    pub fn argmax(&self) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for (k, &v) in self.values.iter().enumerate() {
            if v > best.1 {
                best = (k, v);
            }
        }
        best
    }

    /// max |a − b| over the grid.
    pub fn max_diff(&self, other: &SamplingGrid) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Divide by the signed maximum, so the output peaks at exactly 1.
pub fn normalize(grid: &SamplingGrid) -> Result<SamplingGrid> {
    if grid.values.iter().all(|v| *v == 0.0) {
        return Err(Error::Normalization("grid is identically zero".into()));
    }
    let m = grid.max();
    if !(m > 0.0) {
        return Err(Error::Normalization(format!(
            "signed maximum {m:e} is not positive; dividing would not give a peak of 1"
        )));
    }
    Ok(SamplingGrid { spec: grid.spec, values: grid.values.iter().map(|v| v / m).collect() })
}

/// Divide by max |I| instead of the signed maximum.
pub fn normalize_abs(grid: &SamplingGrid) -> Result<SamplingGrid> {
    let m = grid.max_abs();
    if m == 0.0 {
        return Err(Error::Normalization("grid is identically zero".into()));
    }
    Ok(SamplingGrid { spec: grid.spec, values: grid.values.iter().map(|v| v / m).collect() })
}
