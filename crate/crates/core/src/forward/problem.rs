use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{apply_m, apply_n, normal_derivative, BoundaryNode, Curve, Jet3};
use crate::specfun::{kernel_jet, regular_jet, KernelKind, WaveParams};

/// A boundary trace of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trace {
    Value,
    NormalDerivative,
    Moment,
    Force,
}

impl Trace {
    /// Differential order of the trace.
    pub fn order(self) -> i32 {
        match self {
            Trace::Value => 0,
            Trace::NormalDerivative => 1,
            Trace::Moment => 2,
            Trace::Force => 3,
        }
    }
}

/// Plate boundary conditions, each prescribing a pair of traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryCondition {
    /// u and ∂ₙu
    #[default]
    Clamped,
    /// u and Mu
    SimplySupported,
    /// ∂ₙu and Nu
    RollerSupported,
    /// Mu and Nu
    Free,
}

impl BoundaryCondition {
    pub fn traces(self) -> [Trace; 2] {
        match self {
            BoundaryCondition::Clamped => [Trace::Value, Trace::NormalDerivative],
            BoundaryCondition::SimplySupported => [Trace::Value, Trace::Moment],
            BoundaryCondition::RollerSupported => [Trace::NormalDerivative, Trace::Force],
            BoundaryCondition::Free => [Trace::Moment, Trace::Force],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Clamped => "clamped",
            BoundaryCondition::SimplySupported => "simply-supported",
            BoundaryCondition::RollerSupported => "roller-supported",
            BoundaryCondition::Free => "free",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "clamped" => Ok(BoundaryCondition::Clamped),
            "simply-supported" | "simply_supported" | "simply" => Ok(BoundaryCondition::SimplySupported),
            "roller-supported" | "roller_supported" | "roller" => Ok(BoundaryCondition::RollerSupported),
            "free" => Ok(BoundaryCondition::Free),
            other => Err(Error::Config(format!("unknown boundary condition '{other}'"))),
        }
    }
}

/// Apply one trace to a jet at a boundary node.
pub fn trace(jet: &Jet3, node: &BoundaryNode, nu: f64, which: Trace) -> Result<Complex64> {
    match which {
        Trace::Value => Ok(jet.value()),
        Trace::NormalDerivative => Ok(normal_derivative(jet, node)),
        Trace::Moment => Ok(apply_m(jet, node, nu)),
        Trace::Force => apply_n(jet, node, nu),
    }
}

/// Incident field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Incidence {
    /// e^{iκx·d}
    PlaneWave { direction: [f64; 2] },
    /// Φ_κ(x, x_s)
    PointSource { location: [f64; 2] },
    /// Im Φ_κ(x, z) = J0(κ|x − z|)/4
    Regularized { center: [f64; 2] },
}

impl Incidence {
    pub fn plane_wave(direction: [f64; 2]) -> Result<Self> {
        if ((direction[0].hypot(direction[1])) - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("plane-wave direction must be a unit vector".into()));
        }
        Ok(Incidence::PlaneWave { direction })
    }

    pub fn plane_wave_at_angle(angle: f64) -> Self {
        Incidence::PlaneWave { direction: [angle.cos(), angle.sin()] }
    }
}

/// Incident field jet at x.
pub fn incident_jet(incidence: &Incidence, params: WaveParams, x: [f64; 2]) -> Result<Jet3> {
    match *incidence {
        Incidence::PlaneWave { direction } => Ok(Jet3::plane(
            Complex64::new(1.0, 0.0),
            [params.kappa * direction[0], params.kappa * direction[1]],
            x,
        )),
        Incidence::PointSource { location } => kernel_jet(KernelKind::Helmholtz, params, x, location),
        Incidence::Regularized { center } => Ok(regular_jet(params, x, center)),
    }
}

/// Obstacle description without an incident field: a template for many solves.
#[derive(Debug, Clone, PartialEq)]
pub struct Scatterer {
    pub params: WaveParams,
    pub curves: Vec<Curve>,
    pub bc: BoundaryCondition,
}

impl Scatterer {
    pub fn new(params: WaveParams, curves: Vec<Curve>, bc: BoundaryCondition) -> Self {
        Self { params, curves, bc }
    }

    pub fn with_incidence(&self, incidence: Incidence) -> Scene {
        Scene { params: self.params, curves: self.curves.clone(), bc: self.bc, incidence }
    }

    /// True when x lies inside any component.
    pub fn contains(&self, x: [f64; 2]) -> bool {
        self.curves.iter().any(|c| c.contains(x))
    }

    /// Radius of the single origin-centered circle, if that is the geometry.
    pub fn centered_circle_radius(&self) -> Option<f64> {
        match self.curves.as_slice() {
            [c] => match c.shape {
                crate::geometry::CurveShape::Circle { center, radius } if center == [0.0, 0.0] && !c.reversed => {
                    Some(radius)
                }
                _ => None,
            },
            _ => None,
        }
    }
}

/// A complete forward problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub params: WaveParams,
    pub curves: Vec<Curve>,
    pub bc: BoundaryCondition,
    pub incidence: Incidence,
}

impl Scene {
    pub fn scatterer(&self) -> Scatterer {
        Scatterer { params: self.params, curves: self.curves.clone(), bc: self.bc }
    }

    /// Checks that a point source does not sit inside an obstacle.
    pub fn validate(&self) -> Result<()> {
        if let Incidence::PointSource { location } = self.incidence {
            if self.curves.iter().any(|c| c.contains(location)) {
                return Err(Error::Domain("point source lies inside an obstacle".into()));
            }
        }
        if let Incidence::PlaneWave { direction } = self.incidence {
            if ((direction[0].hypot(direction[1])) - 1.0).abs() > 1e-12 {
                return Err(Error::Domain("plane-wave direction must be a unit vector".into()));
            }
        }
        Ok(())
    }
}
