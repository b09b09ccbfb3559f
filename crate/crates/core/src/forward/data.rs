use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::ArrayGeometry;
use crate::specfun::WaveParams;

/// Measured quantity stored in a data matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DataKind {
    /// u^sc on the receiver circle
    Scattered,
    /// ∂ₙu^sc on the receiver circle (radial derivative)
    NormalDerivative,
    /// Mu^sc on the receiver circle
    Moment,
    /// Nu^sc on the receiver circle
    Force,
    /// u∞ at the observation directions
    FarField,
    /// complex u^sc + u^in on the receiver circle (point sources only)
    TotalField,
    /// |u^sc + u^in| on the receiver circle (point sources only)
    TotalMagnitude,
}

impl DataKind {
    pub fn tag(self) -> &'static str {
        match self {
            DataKind::Scattered => "usc",
            DataKind::NormalDerivative => "dn_usc",
            DataKind::Moment => "m_usc",
            DataKind::Force => "n_usc",
            DataKind::FarField => "ufar",
            DataKind::TotalField => "utotal",
            DataKind::TotalMagnitude => "abs_utotal",
        }
    }

    pub fn from_tag(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "usc" => DataKind::Scattered,
            "dn_usc" => DataKind::NormalDerivative,
            "m_usc" => DataKind::Moment,
            "n_usc" => DataKind::Force,
            "ufar" => DataKind::FarField,
            "utotal" => DataKind::TotalField,
            "abs_utotal" => DataKind::TotalMagnitude,
            other => return Err(Error::Parse { line: 0, message: format!("unknown data kind '{other}'") }),
        })
    }

    /// Rows index far-field directions rather than receivers.
    pub fn is_farfield(self) -> bool {
        self == DataKind::FarField
    }

    pub fn is_real(self) -> bool {
        self == DataKind::TotalMagnitude
    }
}

/// How each column is excited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Excitation {
    /// Point sources on the source circle
    PointSource,
    /// Plane waves from the direction set
    PlaneWave,
}

impl Excitation {
    pub fn tag(self) -> &'static str {
        match self {
            Excitation::PointSource => "point",
            Excitation::PlaneWave => "plane",
        }
    }

    pub fn from_tag(s: &str) -> Result<Self> {
        match s.trim() {
            "point" => Ok(Excitation::PointSource),
            "plane" => Ok(Excitation::PlaneWave),
            other => Err(Error::Parse { line: 0, message: format!("unknown excitation '{other}'") }),
        }
    }
}

/// Complex measurements, rows = receivers or directions, columns = sources or directions.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    pub kind: DataKind,
    pub excitation: Excitation,
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub values: Vec<Complex64>,
    pub params: WaveParams,
    pub array: ArrayGeometry,
}

impl DataMatrix {
    /// Expected (rows, cols) for a kind and excitation on an array.
    pub fn shape_for(kind: DataKind, excitation: Excitation, array: &ArrayGeometry) -> (usize, usize) {
        let rows = if kind.is_farfield() { array.directions } else { array.receivers };
        let cols = match excitation {
            Excitation::PointSource => array.sources,
            Excitation::PlaneWave => array.directions,
        };
        (rows, cols)
    }

    pub fn check_kind_excitation(kind: DataKind, excitation: Excitation) -> Result<()> {
        if matches!(kind, DataKind::TotalField | DataKind::TotalMagnitude) && excitation != Excitation::PointSource {
            return Err(Error::Contract(format!("{} data requires point-source excitation", kind.tag())));
        }
        Ok(())
    }

    pub fn new(
        kind: DataKind,
        excitation: Excitation,
        values: Vec<Complex64>,
        params: WaveParams,
        array: ArrayGeometry,
    ) -> Result<Self> {
        Self::check_kind_excitation(kind, excitation)?;
        let (rows, cols) = Self::shape_for(kind, excitation, &array);
        if values.len() != rows * cols {
            return Err(Error::Contract(format!(
                "data shape mismatch: {} entries for {rows}×{cols}",
                values.len()
            )));
        }
        if kind.is_real() && values.iter().any(|v| v.im != 0.0 || v.re < 0.0) {
            return Err(Error::Contract("magnitude data must be real and nonnegative".into()));
        }
        Ok(Self { kind, excitation, rows, cols, values, params, array })
    }

    pub fn zeros(kind: DataKind, excitation: Excitation, params: WaveParams, array: ArrayGeometry) -> Result<Self> {
        let (r, c) = Self::shape_for(kind, excitation, &array);
        Self::new(kind, excitation, vec![Complex64::new(0.0, 0.0); r * c], params, array)
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.values[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.values[row * self.cols + col] = v;
    }

    /// Multiply every entry by a real factor.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Magnitude matrix of a complex total-field matrix.
    pub fn magnitude(&self) -> Result<Self> {
        if self.kind != DataKind::TotalField {
            return Err(Error::Contract("magnitude is taken of total-field data".into()));
        }
        let values = self.values.iter().map(|v| Complex64::new(v.norm(), 0.0)).collect();
        Self::new(DataKind::TotalMagnitude, self.excitation, values, self.params, self.array)
    }
}
