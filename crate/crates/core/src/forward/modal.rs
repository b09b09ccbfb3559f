//! Fourier-mode solution for a single origin-centered circle.
//!
//! u^sc = Σ_n [α_n H_n(κr) + β_n K_n(κr)] e^{inθ}. The α part radiates, the
//! β part is evanescent.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::problem::{BoundaryCondition, Incidence, Scene, Trace};
use crate::error::{Error, Result};
use crate::geometry::{Jet3, MultiIndex};
use crate::specfun::{bessel_j_seq, bessel_k_scaled_seq, hankel1_seq, WaveParams};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Modal coefficients of the scattered field.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalSolution {
    pub params: WaveParams,
    pub radius: f64,
    pub max_mode: usize,
    /// α_n for n = −N..=N, stored at n + N.
    pub alpha: Vec<Complex64>,
    /// β_n for n = −N..=N, stored at n + N.
    pub beta: Vec<Complex64>,
    /// Largest relative residual of the per-mode 2×2 systems.
    pub mode_residual: f64,
}

/// Default truncation: ⌈κa⌉ + 20.
pub fn default_max_mode(params: WaveParams, radius: f64) -> usize {
    (params.kappa * radius).ceil() as usize + 20
}

/// Values of H_m, J_m and K_m(κr) for m = 0..=order, with signed access.
pub(crate) struct RadialTable {
    h: Vec<Complex64>,
    j: Vec<f64>,
    k: Vec<f64>,
    pub t: f64,
}

impl RadialTable {
    pub(crate) fn new(kappa: f64, r: f64, order: usize) -> Result<Self> {
        let t = kappa * r;
        let h = hankel1_seq(order, t)?;
        let j = bessel_j_seq(order, t)?;
        let e = (-t).exp();
        let k = bessel_k_scaled_seq(order, t)?.into_iter().map(|v| v * e).collect();
        Ok(Self { h, j, k, t })
    }

    fn sign(n: i64) -> f64 {
        if n < 0 && n % 2 != 0 {
            -1.0
        } else {
            1.0
        }
    }

    pub(crate) fn h(&self, n: i64) -> Complex64 {
        self.h[n.unsigned_abs() as usize] * Self::sign(n)
    }

    pub(crate) fn j(&self, n: i64) -> f64 {
        self.j[n.unsigned_abs() as usize] * Self::sign(n)
    }

    pub(crate) fn k(&self, n: i64) -> f64 {
        self.k[n.unsigned_abs() as usize]
    }
}

#[derive(Clone, Copy)]
enum Family {
    Oscillatory,
    Modified,
}

/// (Z, Z', Z'', Z''') in t for a cylinder function of signed order n.
fn t_derivatives(z: Complex64, z_prev: Complex64, n: i64, t: f64, fam: Family) -> [Complex64; 4] {
    let nf = n as f64;
    let n2 = nf * nf;
    let (s, d1) = match fam {
        Family::Oscillatory => (1.0, z_prev - nf / t * z),
        Family::Modified => (-1.0, -z_prev - nf / t * z),
    };
    let d2 = -d1 / t - (s - n2 / (t * t)) * z;
    let d3 = -d2 / t + d1 / (t * t) - (s - n2 / (t * t)) * d1 - 2.0 * n2 / t.powi(3) * z;
    [z, d1, d2, d3]
}

fn to_radial(d: [Complex64; 4], kappa: f64) -> [Complex64; 4] {
    [d[0], d[1] * kappa, d[2] * kappa * kappa, d[3] * kappa.powi(3)]
}

/// Trace of f(r) e^{inθ} on the circle r = a, for the outward radial normal.
fn mode_trace(f: [Complex64; 4], n: i64, a: f64, nu: f64, which: Trace) -> Complex64 {
    let n2 = (n * n) as f64;
    match which {
        Trace::Value => f[0],
        Trace::NormalDerivative => f[1],
        Trace::Moment => f[2] + nu * (f[1] / a - n2 * f[0] / (a * a)),
        Trace::Force => {
            let dl = f[3] + f[2] / a - f[1] / (a * a) - n2 * f[1] / (a * a) + 2.0 * n2 * f[0] / a.powi(3);
            -dl + (1.0 - nu) * n2 / (a * a) * (f[1] - f[0] / a)
        }
    }
}

/// Fourier coefficients c_n of the incident field in the basis J_n(κr)e^{inθ}.
fn incident_modes(incidence: &Incidence, params: WaveParams, n_max: usize) -> Result<Vec<Complex64>> {
    let nm = n_max as i64;
    let kappa = params.kappa;
    match *incidence {
        Incidence::PlaneWave { direction } => {
            let phi = direction[1].atan2(direction[0]);
            Ok((-nm..=nm).map(|n| I.powi(n as i32) * Complex64::from_polar(1.0, -(n as f64) * phi)).collect())
        }
        Incidence::PointSource { location } => {
            let rs = location[0].hypot(location[1]);
            let ths = location[1].atan2(location[0]);
            let tab = RadialTable::new(kappa, rs, n_max)?;
            Ok((-nm..=nm).map(|n| 0.25 * I * tab.h(n) * Complex64::from_polar(1.0, -(n as f64) * ths)).collect())
        }
        Incidence::Regularized { center } => {
            let rz = center[0].hypot(center[1]);
            if rz * kappa < 1e-300 {
                return Ok((-nm..=nm).map(|n| Complex64::new(if n == 0 { 0.25 } else { 0.0 }, 0.0)).collect());
            }
            let thz = center[1].atan2(center[0]);
            let tab = RadialTable::new(kappa, rz, n_max)?;
            Ok((-nm..=nm).map(|n| 0.25 * tab.j(n) * Complex64::from_polar(1.0, -(n as f64) * thz)).collect())
        }
    }
}

/// Solve the exterior problem for a single circle centered at the origin.
///
/// `max_mode` defaults to ⌈κa⌉ + 20, raised for point sources close to the
/// circle so the incident expansion converges.
pub fn solve_circle_modes(scene: &Scene, max_mode: Option<usize>) -> Result<ModalSolution> {
    let radius = scene
        .scatterer()
        .centered_circle_radius()
        .ok_or_else(|| Error::Contract("modal solver needs one circle centered at the origin".into()))?;
    scene.validate()?;
    let params = scene.params;
    let kappa = params.kappa;
    let nu = params.nu;
    let mut n_max = max_mode.unwrap_or_else(|| default_max_mode(params, radius));
    if max_mode.is_none() {
        if let Incidence::PointSource { location } = scene.incidence {
            let rs = location[0].hypot(location[1]);
            if rs > radius {
                let extra = (37.0 / (rs / radius).ln()).ceil() as usize;
                n_max = n_max.max(extra.min(400));
            }
        }
    }
    let tab = RadialTable::new(kappa, radius, n_max + 1)?;
    let cin = incident_modes(&scene.incidence, params, n_max)?;
    let traces = scene.bc.traces();
    let nm = n_max as i64;
    let t = tab.t;
    let mut alpha = Vec::with_capacity(2 * n_max + 1);
    let mut beta = Vec::with_capacity(2 * n_max + 1);
    let mut worst: f64 = 0.0;
    for n in -nm..=nm {
        let h = to_radial(t_derivatives(tab.h(n), tab.h(n - 1), n, t, Family::Oscillatory), kappa);
        let k = to_radial(
            t_derivatives(Complex64::new(tab.k(n), 0.0), Complex64::new(tab.k(n - 1), 0.0), n, t, Family::Modified),
            kappa,
        );
        let j = to_radial(
            t_derivatives(Complex64::new(tab.j(n), 0.0), Complex64::new(tab.j(n - 1), 0.0), n, t, Family::Oscillatory),
            kappa,
        );
        let c = cin[(n + nm) as usize];
        let a11 = mode_trace(h, n, radius, nu, traces[0]);
        let a12 = mode_trace(k, n, radius, nu, traces[0]);
        let a21 = mode_trace(h, n, radius, nu, traces[1]);
        let a22 = mode_trace(k, n, radius, nu, traces[1]);
        let b1 = -c * mode_trace(j, n, radius, nu, traces[0]);
        let b2 = -c * mode_trace(j, n, radius, nu, traces[1]);
        let det = a11 * a22 - a12 * a21;
        let scale = (a11 * a22).norm() + (a12 * a21).norm();
        if !(det.norm() > 1e-12 * scale) {
            let msg = format!("mode {n}: boundary system determinant {:.3e} relative to {:.3e}", det.norm(), scale);
            return Err(if scene.bc == BoundaryCondition::Free {
                Error::ExcludedWavenumber(msg)
            } else {
                Error::Solve { residual: f64::INFINITY, context: msg }
            });
        }
        let al = (b1 * a22 - a12 * b2) / det;
        let be = (a11 * b2 - a21 * b1) / det;
        let r1 = a11 * al + a12 * be - b1;
        let r2 = a21 * al + a22 * be - b2;
        let denom = (a11 * al).norm() + (a12 * be).norm() + (a21 * al).norm() + (a22 * be).norm() + b1.norm() + b2.norm();
        if denom > 0.0 {
            worst = worst.max((r1.norm() + r2.norm()) / denom);
        }
        alpha.push(al);
        beta.push(be);
    }
    Ok(ModalSolution { params, radius, max_mode: n_max, alpha, beta, mode_residual: worst })
}

/// Coefficients of ∂1^a1 ∂2^a2 expanded in P^p Q^(o−p), P = ∂1 + i∂2, Q = ∂1 − i∂2.
fn ladder_coefficients(mi: MultiIndex) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, -0.5); // 1/(2i)
    for step in 0..mi.order() {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        let (fp, fq) = if step < mi.a1 { (half, half) } else { (half_i, -half_i) };
        for (p, v) in c.iter().enumerate() {
            next[p + 1] += v * fp;
            next[p] += v * fq;
        }
        c = next;
    }
    c
}

impl ModalSolution {
    pub fn alpha(&self, n: i64) -> Complex64 {
        self.alpha[(n + self.max_mode as i64) as usize]
    }

    pub fn beta(&self, n: i64) -> Complex64 {
        self.beta[(n + self.max_mode as i64) as usize]
    }

    /// Multiply every coefficient by c.
    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.alpha.iter_mut().for_each(|v| *v *= c);
        out.beta.iter_mut().for_each(|v| *v *= c);
        out
    }

    fn check_exterior(&self, x: [f64; 2]) -> Result<f64> {
        let r = x[0].hypot(x[1]);
        if r <= self.radius * (1.0 - 1e-12) {
            return Err(Error::Domain(format!("point ({}, {}) lies inside the obstacle", x[0], x[1])));
        }
        Ok(r)
    }

    /// Shift sums S(s) = Σ_n c_n Z_{n+s} e^{i(n+s)θ}, s = −3..=3, for both families.
    fn shift_sums(&self, r: f64, theta: f64, with_evanescent: bool) -> Result<([Complex64; 7], [Complex64; 7])> {
        let n_max = self.max_mode as i64;
        let tab = RadialTable::new(self.params.kappa, r, self.max_mode + 3)?;
        let mut sh = [Complex64::new(0.0, 0.0); 7];
        let mut sk = [Complex64::new(0.0, 0.0); 7];
        for n in -n_max..=n_max {
            let a = self.alpha(n);
            let b = self.beta(n);
            for (idx, s) in (-3i64..=3).enumerate() {
                let m = n + s;
                let phase = Complex64::from_polar(1.0, m as f64 * theta);
                sh[idx] += a * tab.h(m) * phase;
                if with_evanescent {
                    sk[idx] += b * tab.k(m) * phase;
                }
            }
        }
        Ok((sh, sk))
    }

    /// Scattered-field jet at an exterior point.
    pub fn jet(&self, x: [f64; 2]) -> Result<Jet3> {
        let r = self.check_exterior(x)?;
        let theta = x[1].atan2(x[0]);
        let (sh, sk) = self.shift_sums(r, theta, true)?;
        let kappa = self.params.kappa;
        let mut d = [Complex64::new(0.0, 0.0); 10];
        for mi in MultiIndex::all() {
            let o = mi.order() as i32;
            let coef = ladder_coefficients(mi);
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, c) in coef.iter().enumerate() {
                let p = p as i32;
                let q = o - p;
                let s = (p - q + 3) as usize;
                let hfac = (-kappa).powi(p) * kappa.powi(q);
                let kfac = (-kappa).powi(p + q);
                acc += c * (sh[s] * hfac + sk[s] * kfac);
            }
            d[mi.slot()] = acc;
        }
        Ok(Jet3::from_array(d))
    }

    /// The radiating (Hankel) part of the scattered field.
    pub fn propagating(&self, x: [f64; 2]) -> Result<Complex64> {
        let r = self.check_exterior(x)?;
        let theta = x[1].atan2(x[0]);
        Ok(self.shift_sums(r, theta, false)?.0[3])
    }

    /// Far-field pattern in direction x̂.
    pub fn farfield(&self, xhat: [f64; 2]) -> Complex64 {
        let theta = xhat[1].atan2(xhat[0]);
        let n_max = self.max_mode as i64;
        let mut s = Complex64::new(0.0, 0.0);
        for n in -n_max..=n_max {
            s += self.alpha(n) * (-I).powi(n as i32) * Complex64::from_polar(1.0, n as f64 * theta);
        }
        -4.0 * I * s
    }
}

/// Far-field normalization: u^sc(ρx̂) ≈ e^{iπ/4}/√(8πκ) · e^{iκρ}/√ρ · u∞(x̂).
pub fn farfield_factor(kappa: f64, rho: f64) -> Complex64 {
    Complex64::from_polar(1.0, PI / 4.0 + kappa * rho) / (8.0 * PI * kappa * rho).sqrt()
}
