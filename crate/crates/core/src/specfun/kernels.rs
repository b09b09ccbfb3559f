//! Fundamental solutions of the Helmholtz, modified Helmholtz and biharmonic
//! wave operators, with Cartesian jets through order three.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::bessel::{jy01, k01_scaled};
use crate::error::{Error, Result};
use crate::geometry::Jet3;

/// Distances below this are treated as coincident points.
pub const SINGULARITY_RADIUS: f64 = 1e-12;

/// Wavenumber and Poisson ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParams {
    pub kappa: f64,
    pub nu: f64,
}

impl WaveParams {
    pub const DEFAULT_NU: f64 = 0.25;

    pub fn new(kappa: f64, nu: f64) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::Domain(format!("wavenumber must be positive, got {kappa}")));
        }
        if !(0.0..0.5).contains(&nu) {
            return Err(Error::Domain(format!("Poisson ratio must lie in [0, 0.5), got {nu}")));
        }
        Ok(Self { kappa, nu })
    }

    pub fn with_kappa(kappa: f64) -> Result<Self> {
        Self::new(kappa, Self::DEFAULT_NU)
    }
}

/// Which fundamental solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// (i/4) H0(κr)
    Helmholtz,
    /// K0(κr)/(2π), the Helmholtz kernel at wavenumber iκ
    ModifiedHelmholtz,
    /// (Φ_iκ − Φ_κ)/(2κ²)
    Biharmonic,
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Φ_κ and its first three radial derivatives at distance r.
pub fn helmholtz_radial(kappa: f64, r: f64) -> [Complex64; 4] {
    let t = kappa * r;
    let (j0, j1, y0, y1) = jy01(t);
    let h0 = Complex64::new(j0, y0);
    let h1 = Complex64::new(j1, y1);
    let g = [h0, -h1, -h0 + h1 / t, h1 + h0 / t - 2.0 * h1 / (t * t)];
    let s = 0.25 * I;
    [s * g[0], s * g[1] * kappa, s * g[2] * kappa * kappa, s * g[3] * kappa.powi(3)]
}

/// Φ_iκ = K0(κr)/(2π) and its first three radial derivatives.
pub fn modified_radial(kappa: f64, r: f64) -> [Complex64; 4] {
    let t = kappa * r;
    let (k0s, k1s) = k01_scaled(t);
    let e = (-t).exp();
    let (k0, k1) = (k0s * e, k1s * e);
    let g = [k0, -k1, k0 + k1 / t, -k1 - k0 / t - 2.0 * k1 / (t * t)];
    let s = 1.0 / (2.0 * PI);
    [c(s * g[0]), c(s * g[1] * kappa), c(s * g[2] * kappa * kappa), c(s * g[3] * kappa.powi(3))]
}

fn biharmonic_radial(kappa: f64, r: f64) -> [Complex64; 4] {
    let h = helmholtz_radial(kappa, r);
    let m = modified_radial(kappa, r);
    let s = 1.0 / (2.0 * kappa * kappa);
    [(m[0] - h[0]) * s, (m[1] - h[1]) * s, (m[2] - h[2]) * s, (m[3] - h[3]) * s]
}

fn separation(x: [f64; 2], y: [f64; 2]) -> Result<([f64; 2], f64)> {
    let d = [x[0] - y[0], x[1] - y[1]];
    let r = d[0].hypot(d[1]);
    if r < SINGULARITY_RADIUS {
        return Err(Error::Singularity(format!(
            "kernel evaluated at coincident points ({}, {})",
            x[0], x[1]
        )));
    }
    Ok((d, r))
}

/// Kernel value and x-derivatives through order 3.
pub fn kernel_jet(kind: KernelKind, params: WaveParams, x: [f64; 2], y: [f64; 2]) -> Result<Jet3> {
    let (d, r) = separation(x, y)?;
    let f = match kind {
        KernelKind::Helmholtz => helmholtz_radial(params.kappa, r),
        KernelKind::ModifiedHelmholtz => modified_radial(params.kappa, r),
        KernelKind::Biharmonic => biharmonic_radial(params.kappa, r),
    };
    Ok(Jet3::radial(f, d, r))
}

/// Kernel value only.
pub fn kernel_value(kind: KernelKind, params: WaveParams, x: [f64; 2], y: [f64; 2]) -> Result<Complex64> {
    let (_, r) = separation(x, y)?;
    Ok(match kind {
        KernelKind::Helmholtz => helmholtz_value(params.kappa, r),
        KernelKind::ModifiedHelmholtz => {
            let t = params.kappa * r;
            c(k01_scaled(t).0 * (-t).exp() / (2.0 * PI))
        }
        KernelKind::Biharmonic => biharmonic_radial(params.kappa, r)[0],
    })
}

/// (i/4) H0(κr) without derivative work.
#[inline]
pub fn helmholtz_value(kappa: f64, r: f64) -> Complex64 {
    let (j0, _, y0, _) = jy01(kappa * r);
    Complex64::new(-0.25 * y0, 0.25 * j0)
}

/// Jet of Im Φ_κ(x, z) = J0(κ|x − z|)/4, smooth through x = z.
pub fn regular_jet(params: WaveParams, x: [f64; 2], z: [f64; 2]) -> Jet3 {
    let kappa = params.kappa;
    let d = [x[0] - z[0], x[1] - z[1]];
    let rho = d[0] * d[0] + d[1] * d[1];
    let r = rho.sqrt();
    let t = kappa * r;
    if t < 1e-2 {
        // J0(κr) = Σ (−a ρ)^k/(k!)², a = κ²/4; truncated after ρ³
        let a = 0.25 * kappa * kappa;
        let h0 = 1.0 - a * rho + a * a * rho * rho / 4.0 - a.powi(3) * rho.powi(3) / 36.0;
        let h1 = -a + a * a * rho / 2.0 - a.powi(3) * rho * rho / 12.0;
        let h2 = a * a / 2.0 - a.powi(3) * rho / 6.0;
        let h3 = -a.powi(3) / 6.0;
        return Jet3::of_squared_radius([c(0.25 * h0), c(0.25 * h1), c(0.25 * h2), c(0.25 * h3)], d);
    }
    let (j0, j1, _, _) = jy01(t);
    let g = [j0, -j1, -j0 + j1 / t, j1 + j0 / t - 2.0 * j1 / (t * t)];
    let f = [c(0.25 * g[0]), c(0.25 * g[1] * kappa), c(0.25 * g[2] * kappa * kappa), c(0.25 * g[3] * kappa.powi(3))];
    Jet3::radial(f, d, r)
}

/// Finite-difference residual of the kernel's own operator at x:
/// |Δ_h Φ + κ²Φ| (Helmholtz), |Δ_h Φ − κ²Φ| (modified), |Δ²_h G − κ⁴G| (biharmonic).
pub fn pde_residual_check(kind: KernelKind, params: WaveParams, x: [f64; 2], y: [f64; 2], h: f64) -> Result<f64> {
    let f = |dx: f64, dy: f64| kernel_value(kind, params, [x[0] + dx * h, x[1] + dy * h], y);
    let k2 = params.kappa * params.kappa;
    let f0 = f(0.0, 0.0)?;
    let cross = f(1.0, 0.0)? + f(-1.0, 0.0)? + f(0.0, 1.0)? + f(0.0, -1.0)?;
    match kind {
        KernelKind::Helmholtz => Ok(((cross - 4.0 * f0) / (h * h) + k2 * f0).norm()),
        KernelKind::ModifiedHelmholtz => Ok(((cross - 4.0 * f0) / (h * h) - k2 * f0).norm()),
        KernelKind::Biharmonic => {
            let diag = f(1.0, 1.0)? + f(-1.0, 1.0)? + f(1.0, -1.0)? + f(-1.0, -1.0)?;
            let far = f(2.0, 0.0)? + f(-2.0, 0.0)? + f(0.0, 2.0)? + f(0.0, -2.0)?;
            let bilap = (20.0 * f0 - 8.0 * cross + 2.0 * diag + far) / h.powi(4);
            Ok((bilap - k2 * k2 * f0).norm())
        }
    }
}
