use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Shape of a closed parametric curve, t ∈ [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub enum CurveShape {
    Circle { center: [f64; 2], radius: f64 },
    /// shift + scale·(0.65 cos 2t + cos t − 0.65, 1.5 sin t)
    Kite { shift: [f64; 2], scale: f64 },
    /// Star-shaped: center + r(t)(cos t, sin t), r(t) = a0 + Σ a_k cos kt + b_k sin kt.
    TrigPolynomial { center: [f64; 2], cos: Vec<f64>, sin: Vec<f64> },
}

/// A closed curve bounding one obstacle component.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub shape: CurveShape,
    /// Traverse clockwise instead of counterclockwise.
    pub reversed: bool,
}

/// A point on a curve with its local frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryNode {
    pub t: f64,
    pub point: [f64; 2],
    /// (x2', −x1')/|x'|: outward for counterclockwise curves.
    pub normal: [f64; 2],
    /// x'/|x'| = (−n2, n1).
    pub tangent: [f64; 2],
    pub jacobian: f64,
    /// Signed curvature, with dn/ds = curvature·tangent.
    pub curvature: f64,
    pub weight: f64,
}

impl Curve {
    pub fn circle(center: [f64; 2], radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Geometry(format!("circle radius must be positive, got {radius}")));
        }
        Ok(Self { shape: CurveShape::Circle { center, radius }, reversed: false })
    }

    pub fn kite(shift: [f64; 2], scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::Geometry(format!("kite scale must be positive, got {scale}")));
        }
        Ok(Self { shape: CurveShape::Kite { shift, scale }, reversed: false })
    }

    /// Radial trig polynomial; `cos[0]` is the mean radius. Rejects non-positive radii.
    pub fn trig_polynomial(center: [f64; 2], cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.is_empty() {
            return Err(Error::Geometry("trig polynomial needs a constant term".into()));
        }
        let c = Self { shape: CurveShape::TrigPolynomial { center, cos, sin }, reversed: false };
        for k in 0..512 {
            let t = 2.0 * PI * k as f64 / 512.0;
            if c.radial(t).0 <= 0.0 {
                return Err(Error::Geometry("trig polynomial radius must stay positive".into()));
            }
        }
        Ok(c)
    }

    pub fn reversed(&self) -> Self {
        Self { shape: self.shape.clone(), reversed: !self.reversed }
    }

    fn radial(&self, t: f64) -> (f64, f64, f64) {
        match &self.shape {
            CurveShape::TrigPolynomial { cos, sin, .. } => {
                let mut r = cos[0];
                let mut dr = 0.0;
                let mut ddr = 0.0;
                for (k, &a) in cos.iter().enumerate().skip(1) {
                    let kf = k as f64;
                    let (s, c) = (kf * t).sin_cos();
                    r += a * c;
                    dr -= a * kf * s;
                    ddr -= a * kf * kf * c;
                }
                for (k, &b) in sin.iter().enumerate() {
                    let kf = (k + 1) as f64;
                    let (s, c) = (kf * t).sin_cos();
                    r += b * s;
                    dr += b * kf * c;
                    ddr -= b * kf * kf * s;
                }
                (r, dr, ddr)
            }
            _ => (0.0, 0.0, 0.0),
        }
    }

    /// Position and first two parameter derivatives, counterclockwise.
    fn raw(&self, t: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        let (s, c) = t.sin_cos();
        match &self.shape {
            CurveShape::Circle { center, radius } => (
                [center[0] + radius * c, center[1] + radius * s],
                [-radius * s, radius * c],
                [-radius * c, -radius * s],
            ),
            CurveShape::Kite { shift, scale } => {
                let (s2, c2) = (2.0 * t).sin_cos();
                (
                    [shift[0] + scale * (0.65 * c2 + c - 0.65), shift[1] + scale * 1.5 * s],
                    [scale * (-1.3 * s2 - s), scale * 1.5 * c],
                    [scale * (-2.6 * c2 - c), -scale * 1.5 * s],
                )
            }
            CurveShape::TrigPolynomial { center, .. } => {
                let (r, dr, ddr) = self.radial(t);
                (
                    [center[0] + r * c, center[1] + r * s],
                    [dr * c - r * s, dr * s + r * c],
                    [ddr * c - 2.0 * dr * s - r * c, ddr * s + 2.0 * dr * c - r * s],
                )
            }
        }
    }

    /// Position, x'(t), x''(t) honoring orientation.
    pub fn derivatives(&self, t: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        if self.reversed {
            let (p, d1, d2) = self.raw(-t);
            (p, [-d1[0], -d1[1]], d2)
        } else {
            self.raw(t)
        }
    }

    pub fn point(&self, t: f64) -> [f64; 2] {
        self.derivatives(t).0
    }

    /// Evaluate the node at parameter t (weight left at zero).
    pub fn eval(&self, t: f64) -> Result<BoundaryNode> {
        if !t.is_finite() {
            return Err(Error::Geometry(format!("non-finite curve parameter {t}")));
        }
        let (p, d1, d2) = self.derivatives(t);
        let jac = d1[0].hypot(d1[1]);
        if !(jac > 1e-12) {
            return Err(Error::Geometry(format!("degenerate jacobian {jac:e} at t = {t}")));
        }
        let tangent = [d1[0] / jac, d1[1] / jac];
        let normal = [d1[1] / jac, -d1[0] / jac];
        let curvature = (d1[0] * d2[1] - d1[1] * d2[0]) / jac.powi(3);
        Ok(BoundaryNode { t, point: p, normal, tangent, jacobian: jac, curvature, weight: 0.0 })
    }

    /// A point strictly inside the enclosed region.
    pub fn interior_point(&self) -> [f64; 2] {
        match &self.shape {
            CurveShape::Circle { center, .. } => *center,
            CurveShape::Kite { shift, .. } => *shift,
            CurveShape::TrigPolynomial { center, .. } => *center,
        }
    }

    /// Winding-number test against a dense polygonal approximation.
    pub fn contains(&self, x: [f64; 2]) -> bool {
        if let CurveShape::Circle { center, radius } = &self.shape {
            return (x[0] - center[0]).hypot(x[1] - center[1]) < *radius;
        }
        let n = 1024;
        let mut winding = 0.0;
        let mut prev = self.raw(0.0).0;
        for k in 1..=n {
            let p = self.raw(2.0 * PI * k as f64 / n as f64).0;
            let a = (prev[1] - x[1]).atan2(prev[0] - x[0]);
            let b = (p[1] - x[1]).atan2(p[0] - x[0]);
            let mut d = b - a;
            while d > PI {
                d -= 2.0 * PI;
            }
            while d < -PI {
                d += 2.0 * PI;
            }
            winding += d;
            prev = p;
        }
        winding.abs() > PI
    }

    /// Distance from x to the curve, by dense sampling plus local refinement.
    pub fn distance(&self, x: [f64; 2]) -> f64 {
        if let CurveShape::Circle { center, radius } = &self.shape {
            return ((x[0] - center[0]).hypot(x[1] - center[1]) - radius).abs();
        }
        let n = 720;
        let dist = |t: f64| {
            let p = self.raw(t).0;
            (p[0] - x[0]).hypot(p[1] - x[1])
        };
        let h = 2.0 * PI / n as f64;
        let (mut best_t, mut best) = (0.0, f64::INFINITY);
        for k in 0..n {
            let t = k as f64 * h;
            let d = dist(t);
            if d < best {
                best = d;
                best_t = t;
            }
        }
        // golden-section refinement on the bracketing interval
        let (mut a, mut b) = (best_t - h, best_t + h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if dist(c) < dist(d) {
                b = d;
            } else {
                a = c;
            }
        }
        best.min(dist(0.5 * (a + b)))
    }

    /// Copy of the curve scaled by `factor` about its interior point.
    pub fn shrunk_point(&self, t: f64, factor: f64) -> [f64; 2] {
        let c = self.interior_point();
        let p = self.point(t);
        [c[0] + factor * (p[0] - c[0]), c[1] + factor * (p[1] - c[1])]
    }

    /// The curve at complex parameter t + iτ with τ = −ln(factor), read as z = x₁ + i·x₂.
    ///
    /// For a circle this is the copy scaled by `factor` about the center. For other
    /// shapes the inward shift shrinks where the curve bends sharply.
    pub fn complexified_point(&self, t: f64, factor: f64) -> [f64; 2] {
        let tau = -factor.ln();
        let t = if self.reversed { -t } else { t };
        let s = Complex64::new(t, tau);
        let eis = (Complex64::i() * s).exp();
        let z = match &self.shape {
            CurveShape::Circle { center, radius } => Complex64::new(center[0], center[1]) + eis * *radius,
            CurveShape::Kite { shift, scale } => {
                let x1 = s.cos() + (s * 2.0).cos() * 0.65 - 0.65;
                let x2 = s.sin() * 1.5;
                Complex64::new(shift[0], shift[1]) + (x1 + Complex64::i() * x2) * *scale
            }
            CurveShape::TrigPolynomial { center, cos, sin } => {
                let mut r = Complex64::new(cos[0], 0.0);
                for (k, &a) in cos.iter().enumerate().skip(1) {
                    r += (s * k as f64).cos() * a;
                }
                for (k, &b) in sin.iter().enumerate() {
                    r += (s * (k + 1) as f64).sin() * b;
                }
                Complex64::new(center[0], center[1]) + r * eis
            }
        };
        [z.re, z.im]
    }
}

/// Equispaced nodes with periodic trapezoid weights.
pub fn discretize(curve: &Curve, n: usize) -> Result<Vec<BoundaryNode>> {
    if n < 16 || n % 2 != 0 {
        return Err(Error::Contract(format!("node count must be even and at least 16, got {n}")));
    }
    let h = 2.0 * PI / n as f64;
    (0..n)
        .map(|k| {
            let mut node = curve.eval(k as f64 * h)?;
            node.weight = h * node.jacobian;
            Ok(node)
        })
        .collect()
}

/// Nodes for every component, concatenated.
pub fn discretize_all(curves: &[Curve], n: usize) -> Result<Vec<BoundaryNode>> {
    let mut out = Vec::with_capacity(curves.len() * n);
    for c in curves {
        out.extend(discretize(c, n)?);
    }
    Ok(out)
}

/// Node on a centered circle of radius r at angle θ, outward normal.
pub fn circle_node(radius: f64, theta: f64) -> BoundaryNode {
    let (s, c) = theta.sin_cos();
    BoundaryNode {
        t: theta,
        point: [radius * c, radius * s],
        normal: [c, s],
        tangent: [-s, c],
        jacobian: radius,
        curvature: 1.0 / radius,
        weight: 0.0,
    }
}
