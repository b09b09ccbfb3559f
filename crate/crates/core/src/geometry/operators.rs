//! Bending moment M and transverse force N.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{BoundaryNode, Jet3};
use crate::error::{Error, Result};

/// n·H·n.
pub fn normal_hessian(jet: &Jet3, n: [f64; 2]) -> Complex64 {
    n[0] * n[0] * jet.get(2, 0) + 2.0 * n[0] * n[1] * jet.get(1, 1) + n[1] * n[1] * jet.get(0, 2)
}

/// −[(v11 − v22) n1 n2 − v12 (n1² − n2²)].
pub fn twisting_part(jet: &Jet3, n: [f64; 2]) -> Complex64 {
    -((jet.get(2, 0) - jet.get(0, 2)) * (n[0] * n[1]) - jet.get(1, 1) * (n[0] * n[0] - n[1] * n[1]))
}

/// Normal derivative n·∇v.
pub fn normal_derivative(jet: &Jet3, node: &BoundaryNode) -> Complex64 {
    node.normal[0] * jet.get(1, 0) + node.normal[1] * jet.get(0, 1)
}

/// M v = νΔv + (1 − ν) n·H·n.
pub fn apply_m(jet: &Jet3, node: &BoundaryNode, nu: f64) -> Complex64 {
    debug_assert!(jet.order() >= 2, "bending moment needs second derivatives");
    nu * jet.laplacian() + (1.0 - nu) * normal_hessian(jet, node.normal)
}

/// Tangential derivative of the twisting part along the curve, from third
/// derivatives and the curvature of the node.
pub fn tangential_twist_derivative(jet: &Jet3, node: &BoundaryNode) -> Complex64 {
    let n = node.normal;
    let tau = node.tangent;
    let along = |a: (u8, u8), b: (u8, u8)| tau[0] * jet.get(a.0, a.1) + tau[1] * jet.get(b.0, b.1);
    let d11 = along((3, 0), (2, 1));
    let d12 = along((2, 1), (1, 2));
    let d22 = along((1, 2), (0, 3));
    let field = -((d11 - d22) * (n[0] * n[1]) - d12 * (n[0] * n[0] - n[1] * n[1]));
    let turning = -(jet.get(2, 0) - jet.get(0, 2)) * (n[0] * n[0] - n[1] * n[1]) - 4.0 * jet.get(1, 1) * (n[0] * n[1]);
    field + node.curvature * turning
}

/// N v = −∂ₙΔv − (1 − ν) ∂ₛ(twisting part), with ∂ₛ by the chain rule.
pub fn apply_n(jet: &Jet3, node: &BoundaryNode, nu: f64) -> Result<Complex64> {
    if jet.order() < 3 {
        return Err(Error::Contract("transverse force needs third derivatives".into()));
    }
    let gl = jet.grad_laplacian();
    let dn_lap = node.normal[0] * gl[0] + node.normal[1] * gl[1];
    Ok(-dn_lap - (1.0 - nu) * tangential_twist_derivative(jet, node))
}

/// d/dt of equispaced periodic samples via FFT.
pub fn spectral_derivative(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf = values.to_vec();
    fwd.process(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        let m = if k < n / 2 {
            k as f64
        } else if k == n / 2 && n % 2 == 0 {
            0.0
        } else {
            k as f64 - n as f64
        };
        *v *= Complex64::new(0.0, m / n as f64);
    }
    inv.process(&mut buf);
    buf
}

/// N at every node of one discretized curve, with ∂ₛ done spectrally on the
/// sampled twisting part. Nodes must come from `discretize` on a single curve.
pub fn apply_n_spectral(jets: &[Jet3], nodes: &[BoundaryNode], nu: f64) -> Result<Vec<Complex64>> {
    if jets.len() != nodes.len() {
        return Err(Error::Contract("one jet per node is required".into()));
    }
    if jets.iter().any(|j| j.order() < 3) {
        return Err(Error::Contract("transverse force needs third derivatives".into()));
    }
    let twist: Vec<Complex64> = jets.iter().zip(nodes).map(|(j, n)| twisting_part(j, n.normal)).collect();
    let dt = spectral_derivative(&twist);
    Ok(jets
        .iter()
        .zip(nodes)
        .zip(dt)
        .map(|((jet, node), d)| {
            let gl = jet.grad_laplacian();
            let dn_lap = node.normal[0] * gl[0] + node.normal[1] * gl[1];
            -dn_lap - (1.0 - nu) * d / node.jacobian
        })
        .collect())
}

/// Polar derivatives of a field at a point on a centered circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarDerivatives {
    pub radius: f64,
    pub d_r: Complex64,
    pub d_theta: Complex64,
    pub d_theta_theta: Complex64,
    pub d_r_theta: Complex64,
    pub d_r_theta_theta: Complex64,
    pub laplacian: Complex64,
    pub d_r_laplacian: Complex64,
}

impl PolarDerivatives {
    /// Derive the polar quantities from a Cartesian jet at x ≠ 0.
    pub fn from_jet(jet: &Jet3, x: [f64; 2]) -> Result<Self> {
        let r = x[0].hypot(x[1]);
        if r < 1e-12 {
            return Err(Error::Contract("polar derivatives need a point off the origin".into()));
        }
        let er = [x[0] / r, x[1] / r];
        let et = [-er[1], er[0]];
        let grad = |v: [f64; 2]| v[0] * jet.get(1, 0) + v[1] * jet.get(0, 1);
        let hess = |a: [f64; 2], b: [f64; 2]| {
            a[0] * b[0] * jet.get(2, 0) + (a[0] * b[1] + a[1] * b[0]) * jet.get(1, 1) + a[1] * b[1] * jet.get(0, 2)
        };
        let third = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        let cnt = [i, j, k].iter().filter(|&&q| q == 1).count() as u8;
                        s += a[i] * b[j] * c[k] * jet.get(3 - cnt, cnt);
                    }
                }
            }
            s
        };
        let d_r = grad(er);
        let err = hess(er, er);
        let ett = hess(et, et);
        let gl = jet.grad_laplacian();
        Ok(Self {
            radius: r,
            d_r,
            d_theta: r * grad(et),
            d_theta_theta: -r * d_r + r * r * ett,
            d_r_theta: grad(et) + r * hess(er, et),
            d_r_theta_theta: -d_r + r * ett + r * (ett - err) + r * r * third(er, et, et),
            laplacian: jet.laplacian(),
            d_r_laplacian: er[0] * gl[0] + er[1] * gl[1],
        })
    }
}

/// M = Δw − (1 − ν)(w_r/r + w_θθ/r²).
pub fn apply_m_polar(p: &PolarDerivatives, nu: f64) -> Complex64 {
    let r = p.radius;
    p.laplacian - (1.0 - nu) * (p.d_r / r + p.d_theta_theta / (r * r))
}

/// N = −∂_rΔw − (1 − ν) r⁻² ∂_θ(w_rθ − w_θ/r).
pub fn apply_n_polar(p: &PolarDerivatives, nu: f64) -> Complex64 {
    let r = p.radius;
    -p.d_r_laplacian - (1.0 - nu) / (r * r) * (p.d_r_theta_theta - p.d_theta_theta / r)
}

fn check_circular(node: &BoundaryNode) -> Result<()> {
    let r = node.point[0].hypot(node.point[1]);
    let radial = [node.point[0] / r, node.point[1] / r];
    let align = radial[0] * node.normal[0] + radial[1] * node.normal[1];
    if r < 1e-12 || (align - 1.0).abs() > 1e-10 || (node.curvature * r - 1.0).abs() > 1e-8 {
        return Err(Error::Contract("polar operators need a node on a centered circle with outward normal".into()));
    }
    Ok(())
}

/// Polar M at a node on a centered circle.
pub fn apply_m_polar_at(jet: &Jet3, node: &BoundaryNode, nu: f64) -> Result<Complex64> {
    check_circular(node)?;
    Ok(apply_m_polar(&PolarDerivatives::from_jet(jet, node.point)?, nu))
}

/// Polar N at a node on a centered circle.
pub fn apply_n_polar_at(jet: &Jet3, node: &BoundaryNode, nu: f64) -> Result<Complex64> {
    check_circular(node)?;
    if jet.order() < 3 {
        return Err(Error::Contract("transverse force needs third derivatives".into()));
    }
    Ok(apply_n_polar(&PolarDerivatives::from_jet(jet, node.point)?, nu))
}
