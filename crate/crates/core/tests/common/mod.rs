#![allow(dead_code)]

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    // split into panels first so oscillatory integrands are resolved
    let panels = 64;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let hi = lo + h;
        let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += rec(f, lo, hi, fa, fm, fb, whole, tol / panels as f64, 22);
    }
    total
}

/// J_n(t) from its periodic integral representation (trapezoid rule is spectrally exact).
pub fn j_oracle(n: u32, t: f64) -> f64 {
    let m = (2.0 * (t + n as f64) + 200.0) as usize;
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let mut s = 0.0;
    for k in 0..m {
        let tau = k as f64 * h;
        s += (n as f64 * tau - t * tau.sin()).cos();
    }
    s / m as f64
}

/// Y_n(t) from the Schläfli-type integral representation.
pub fn y_oracle(n: u32, t: f64) -> f64 {
    use std::f64::consts::PI;
    let nf = n as f64;
    let a = adaptive_simpson(&|tau: f64| (t * tau.sin() - nf * tau).sin(), 0.0, PI, 1e-16);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let upper = ((40.0 + nf) / t.max(1e-3)).asinh().max(1.0) + 2.0;
    let b = adaptive_simpson(
        &|u: f64| ((nf * u).exp() + sign * (-nf * u).exp()) * (-t * u.sinh()).exp(),
        0.0,
        upper,
        1e-16,
    );
    (a - b) / PI
}

/// K_n(t) = ∫_0^∞ e^{−t cosh s} cosh(ns) ds.
pub fn k_oracle(n: u32, t: f64) -> f64 {
    let upper = ((60.0 + t) / t).acosh() + 1.0;
    adaptive_simpson(&|s: f64| (-t * s.cosh()).exp() * (n as f64 * s).cosh(), 0.0, upper, 1e-17 * (-t).exp().max(1e-300))
}

/// I_n(t) = (1/π)∫_0^π e^{t cos τ} cos(nτ) dτ.
pub fn i_oracle(n: u32, t: f64) -> f64 {
    let m = (2.0 * (t + n as f64) + 200.0) as usize;
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let mut s = 0.0;
    for k in 0..m {
        let tau = k as f64 * h;
        s += (t * tau.cos()).exp() * (n as f64 * tau).cos();
    }
    s / m as f64
}

/// J_n(t) = Σ (−1)^k (t/2)^{2k+n}/(k!(k+n)!), for small t.
pub fn j_series_oracle(n: u32, t: f64) -> f64 {
    power_series(n, t, -1.0)
}

/// I_n(t) = Σ (t/2)^{2k+n}/(k!(k+n)!).
pub fn i_series_oracle(n: u32, t: f64) -> f64 {
    power_series(n, t, 1.0)
}

fn power_series(n: u32, t: f64, sign: f64) -> f64 {
    let x = t / 2.0;
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= x / k as f64;
    }
    let mut term = lead;
    let mut sum = 0.0;
    for k in 0..500u32 {
        sum += term;
        term *= sign * x * x / ((k + 1) as f64 * (k + 1 + n) as f64);
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}
