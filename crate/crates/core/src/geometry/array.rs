use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Receiver circle, source circle and direction set, all centered at the origin.
///
/// Receivers sit at angles 2πk/N_r. Sources are offset by half a step,
/// 2π(k + ½)/N_s, so that receiver and source never coincide when R_r = R_s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    pub receiver_radius: f64,
    pub source_radius: f64,
    pub receivers: usize,
    pub sources: usize,
    pub directions: usize,
}

impl Default for ArrayGeometry {
    fn default() -> Self {
        Self { receiver_radius: 10.0, source_radius: 10.0, receivers: 128, sources: 128, directions: 128 }
    }
}

/// Required clearance between the sampling domain and the array circles.
pub const ARRAY_MARGIN: f64 = 0.5;

impl ArrayGeometry {
    pub fn new(receiver_radius: f64, source_radius: f64, receivers: usize, sources: usize, directions: usize) -> Result<Self> {
        if !(receiver_radius > 0.0 && source_radius > 0.0) {
            return Err(Error::Geometry("array radii must be positive".into()));
        }
        if receivers == 0 || sources == 0 || directions == 0 {
            return Err(Error::Geometry("array point counts must be positive".into()));
        }
        Ok(Self { receiver_radius, source_radius, receivers, sources, directions })
    }

    pub fn receiver_angle(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.receivers as f64
    }

    pub fn source_angle(&self, k: usize) -> f64 {
        2.0 * PI * (k as f64 + 0.5) / self.sources as f64
    }

    pub fn direction_angle(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.directions as f64
    }

    pub fn receiver(&self, k: usize) -> [f64; 2] {
        let (s, c) = self.receiver_angle(k).sin_cos();
        [self.receiver_radius * c, self.receiver_radius * s]
    }

    pub fn source(&self, k: usize) -> [f64; 2] {
        let (s, c) = self.source_angle(k).sin_cos();
        [self.source_radius * c, self.source_radius * s]
    }

    pub fn direction(&self, k: usize) -> [f64; 2] {
        let (s, c) = self.direction_angle(k).sin_cos();
        [c, s]
    }

    pub fn receiver_weight(&self) -> f64 {
        2.0 * PI * self.receiver_radius / self.receivers as f64
    }

    pub fn source_weight(&self) -> f64 {
        2.0 * PI * self.source_radius / self.sources as f64
    }

    pub fn direction_weight(&self) -> f64 {
        2.0 * PI / self.directions as f64
    }

    /// Check that the box [xmin,xmax]×[ymin,ymax] sits inside both circles with margin.
    pub fn check_encloses(&self, bounds: [f64; 4]) -> Result<()> {
        let corner = bounds[0].abs().max(bounds[1].abs()).hypot(bounds[2].abs().max(bounds[3].abs()));
        let inner = self.receiver_radius.min(self.source_radius);
        if corner + ARRAY_MARGIN > inner {
            return Err(Error::Geometry(format!(
                "sampling box reaches radius {corner:.3}, array circles need clearance {ARRAY_MARGIN} beyond it (inner radius {inner})"
            )));
        }
        Ok(())
    }
}
