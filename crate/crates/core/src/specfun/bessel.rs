//! Integer-order cylinder functions of real positive argument.
//!
//! J and Y: ascending series below 2, Miller recurrence paired with the
//! Steed continued fraction for H0'/H0 up to 25, Hankel asymptotics beyond.
//! K: ascending series below 2, Steed continued fraction above. I is obtained
//! from a backward ratio recurrence and the I/K Wronskian.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 2.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;
const MAX_ORDER: u32 = 200;
const EPS: f64 = 1e-17;
const FPMIN: f64 = 1e-300;

/// Which cylinder function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    J,
    Y,
    I,
    K,
}

fn check_arg(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("cylinder function argument must be positive and finite, got {t}")));
    }
    Ok(())
}

fn check_order(n: u32) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::Domain(format!("order {n} exceeds supported maximum {MAX_ORDER}")));
    }
    Ok(())
}

/// Evaluate J_n, Y_n, I_n or K_n at t > 0.
pub fn bessel_eval(kind: BesselKind, order: u32, t: f64) -> Result<f64> {
    check_arg(t)?;
    check_order(order)?;
    let n = order as usize;
    match kind {
        BesselKind::J => Ok(j_seq_unchecked(n, t)[n]),
        BesselKind::Y => Ok(y_seq_unchecked(n, t)[n]),
        BesselKind::K => {
            let ks = k_scaled_seq_unchecked(n, t);
            Ok(ks[n] * (-t).exp())
        }
        BesselKind::I => {
            let scaled = i_scaled_unchecked(n, t);
            let v = scaled * t.exp();
            if !v.is_finite() {
                return Err(Error::Range { what: format!("I_{order}({t}) overflows"), saturated: f64::MAX });
            }
            Ok(v)
        }
    }
}

/// e^{-t} I_n(t), finite for every t > 0.
pub fn bessel_i_scaled(order: u32, t: f64) -> Result<f64> {
    check_arg(t)?;
    check_order(order)?;
    Ok(i_scaled_unchecked(order as usize, t))
}

/// e^{t} K_n(t), finite for every t > 0.
pub fn bessel_k_scaled(order: u32, t: f64) -> Result<f64> {
    check_arg(t)?;
    check_order(order)?;
    Ok(k_scaled_seq_unchecked(order as usize, t)[order as usize])
}

/// H^(1)_n(t) = J_n(t) + i Y_n(t).
pub fn hankel1(order: u32, t: f64) -> Result<Complex64> {
    check_arg(t)?;
    check_order(order)?;
    let n = order as usize;
    let j = j_seq_unchecked(n, t);
    let y = y_seq_unchecked(n, t);
    Ok(Complex64::new(j[n], y[n]))
}

/// J_0..=J_nmax at t. Orders beyond 200 are allowed here for modal sums.
pub fn bessel_j_seq(nmax: usize, t: f64) -> Result<Vec<f64>> {
    check_arg(t)?;
    Ok(j_seq_unchecked(nmax, t))
}

/// Y_0..=Y_nmax at t by upward recurrence.
pub fn bessel_y_seq(nmax: usize, t: f64) -> Result<Vec<f64>> {
    check_arg(t)?;
    Ok(y_seq_unchecked(nmax, t))
}

/// H^(1)_0..=H^(1)_nmax at t.
pub fn hankel1_seq(nmax: usize, t: f64) -> Result<Vec<Complex64>> {
    check_arg(t)?;
    let j = j_seq_unchecked(nmax, t);
    let y = y_seq_unchecked(nmax, t);
    Ok(j.into_iter().zip(y).map(|(a, b)| Complex64::new(a, b)).collect())
}

/// e^{t} K_0..=K_nmax at t by upward recurrence.
pub fn bessel_k_scaled_seq(nmax: usize, t: f64) -> Result<Vec<f64>> {
    check_arg(t)?;
    Ok(k_scaled_seq_unchecked(nmax, t))
}

// ---------------------------------------------------------------------------
// J0, J1, Y0, Y1

/// (J0, J1, Y0, Y1) at t > 0.
pub(crate) fn jy01(t: f64) -> (f64, f64, f64, f64) {
    if t < SERIES_LIMIT {
        jy01_series(t)
    } else if t < ASYMPTOTIC_LIMIT {
        let (j0, j1) = j01_miller(t);
        let (p, q) = steed_cf2(t);
        let y0 = (j1 + p * j0) / q;
        let y1 = -q * j0 - p * y0;
        (j0, j1, y0, y1)
    } else {
        let (j0, y0) = hankel_asymptotic(0, t);
        let (j1, y1) = hankel_asymptotic(1, t);
        (j0, j1, y0, y1)
    }
}

fn jy01_series(t: f64) -> (f64, f64, f64, f64) {
    let q = 0.25 * t * t;
    let mut j0 = 0.0;
    let mut s1 = 0.0;
    let mut y0s = 0.0;
    let mut y1s = 0.0;
    // term_k = (-q)^k / (k!)^2, term1_k = (-q)^k / (k!(k+1)!)
    let mut a = 1.0;
    let mut b = 1.0;
    let mut harm = 0.0;
    for k in 0..40 {
        let kf = k as f64;
        if k > 0 {
            harm += 1.0 / kf;
        }
        j0 += a;
        s1 += b;
        y0s += harm * a;
        let psi_sum = 2.0 * harm + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA;
        y1s += psi_sum * b;
        if a.abs() < 1e-18 && k > 2 {
            break;
        }
        a *= -q / ((kf + 1.0) * (kf + 1.0));
        b *= -q / ((kf + 1.0) * (kf + 2.0));
    }
    let j1 = 0.5 * t * s1;
    let lg = (0.5 * t).ln() + EULER_GAMMA;
    let y0 = (2.0 / PI) * (lg * j0 - y0s);
    let y1 = -2.0 / (PI * t) + (2.0 / PI) * (0.5 * t).ln() * j1 - (0.5 * t / PI) * y1s;
    (j0, j1, y0, y1)
}

fn miller_start(nmax: usize, t: f64) -> usize {
    let top = (nmax as f64).max(t);
    let m = top + 20.0 + (40.0 * top).sqrt() + 12.0 * t.cbrt();
    let m = m.ceil() as usize;
    m + (m % 2)
}

/// Unnormalized backward recurrence; returns (values 0..=nmax, even sum J0+2ΣJ_2k).
fn miller_raw(nmax: usize, t: f64) -> (Vec<f64>, f64) {
    let m = miller_start(nmax, t);
    let mut out = vec![0.0; nmax + 1];
    let mut jp = 0.0;
    let mut j = 1.0;
    let mut sum = 0.0;
    let two_over_t = 2.0 / t;
    let mut k = m;
    loop {
        // j holds J_k (up to scale), jp holds J_{k+1}
        if k <= nmax {
            out[k] = j;
        }
        if k % 2 == 0 {
            sum += if k == 0 { j } else { 2.0 * j };
        }
        if k == 0 {
            break;
        }
        let jm = (k as f64) * two_over_t * j - jp;
        jp = j;
        j = jm;
        k -= 1;
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp *= 1e-250;
            sum *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    (out, sum)
}

fn j01_miller(t: f64) -> (f64, f64) {
    let (v, sum) = miller_raw(1, t);
    (v[0] / sum, v[1] / sum)
}

/// Steed's continued fraction for p + iq = H0'(t)/H0(t), valid for t ≥ 2.
fn steed_cf2(x: f64) -> (f64, f64) {
    let xi = 1.0 / x;
    let mut a = 0.25;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for i in 2..100_000 {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            break;
        }
    }
    (p, q)
}

/// Hankel asymptotic expansion; returns (J_n, Y_n).
fn hankel_asymptotic(n: u32, t: f64) -> (f64, f64) {
    let mu = 4.0 * (n as f64) * (n as f64);
    let mut pp = 1.0;
    let mut qq = 0.0;
    let mut term: f64 = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * 8.0 * t);
        let mag = term.abs();
        if mag > last || mag < 1e-18 {
            break;
        }
        last = mag;
        // k odd contributes to Q, k even to P, with alternating signs in pairs
        match k % 4 {
            1 => qq += term,
            2 => pp -= term,
            3 => qq -= term,
            _ => pp += term,
        }
    }
    let phase = (n as f64) * FRAC_PI_2 + FRAC_PI_4;
    let (sp, cp) = phase.sin_cos();
    let (st, ct) = t.sin_cos();
    // cos(t - phase), sin(t - phase) with accurate reduction of t
    let c = ct * cp + st * sp;
    let s = st * cp - ct * sp;
    let amp = (2.0 / (PI * t)).sqrt();
    (amp * (pp * c - qq * s), amp * (pp * s + qq * c))
}

fn j_seq_unchecked(nmax: usize, t: f64) -> Vec<f64> {
    if nmax == 0 {
        return vec![jy01(t).0];
    }
    if t >= ASYMPTOTIC_LIMIT && (nmax as f64) < t {
        let (j0, j1, _, _) = jy01(t);
        let mut out = Vec::with_capacity(nmax + 1);
        out.push(j0);
        out.push(j1);
        for k in 1..nmax {
            let next = 2.0 * (k as f64) / t * out[k] - out[k - 1];
            out.push(next);
        }
        return out;
    }
    let (raw, sum) = miller_raw(nmax.max(1), t);
    let scale = if t < ASYMPTOTIC_LIMIT {
        1.0 / sum
    } else {
        let (j0, j1, _, _) = jy01(t);
        let m = raw[0].abs().max(raw[1].abs());
        let (a, b) = (raw[0] / m, raw[1] / m);
        (j0 * a + j1 * b) / (a * a + b * b) / m
    };
    raw.into_iter().take(nmax + 1).map(|v| v * scale).collect()
}

fn y_seq_unchecked(nmax: usize, t: f64) -> Vec<f64> {
    let (_, _, y0, y1) = jy01(t);
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(y0);
    if nmax >= 1 {
        out.push(y1);
    }
    for k in 1..nmax {
        let next = 2.0 * (k as f64) / t * out[k] - out[k - 1];
        out.push(next);
    }
    out
}

// ---------------------------------------------------------------------------
// K and I

/// (e^t K0(t), e^t K1(t)).
pub(crate) fn k01_scaled(t: f64) -> (f64, f64) {
    if t < SERIES_LIMIT {
        let (k0, k1) = k01_series(t);
        let e = t.exp();
        (k0 * e, k1 * e)
    } else {
        k01_steed(t)
    }
}

fn k01_series(t: f64) -> (f64, f64) {
    let q = 0.25 * t * t;
    let mut i0 = 0.0;
    let mut i1s = 0.0;
    let mut k0s = 0.0;
    let mut k1s = 0.0;
    let mut a = 1.0;
    let mut b = 1.0;
    let mut harm = 0.0;
    for k in 0..40 {
        let kf = k as f64;
        if k > 0 {
            harm += 1.0 / kf;
        }
        i0 += a;
        i1s += b;
        k0s += harm * a;
        let psi_sum = 2.0 * harm + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA;
        k1s += psi_sum * b;
        if a < 1e-18 && k > 2 {
            break;
        }
        a *= q / ((kf + 1.0) * (kf + 1.0));
        b *= q / ((kf + 1.0) * (kf + 2.0));
    }
    let i1 = 0.5 * t * i1s;
    let lg = (0.5 * t).ln();
    let k0 = -(lg + EULER_GAMMA) * i0 + k0s;
    let k1 = 1.0 / t + lg * i1 - 0.25 * t * k1s;
    (k0, k1)
}

/// Steed's continued fraction for K0, K1 at t ≥ 2, scaled by e^t.
fn k01_steed(x: f64) -> (f64, f64) {
    let xmu2 = 0.0;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - xmu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..100_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - a1 * h) / x;
    (k0, k1)
}

fn k_scaled_seq_unchecked(nmax: usize, t: f64) -> Vec<f64> {
    let (k0, k1) = k01_scaled(t);
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(k0);
    if nmax >= 1 {
        out.push(k1);
    }
    for k in 1..nmax {
        let next = out[k - 1] + 2.0 * (k as f64) / t * out[k];
        out.push(next);
    }
    out
}

/// e^{-t} I_n(t) from the ratio I_{n+1}/I_n and the Wronskian
/// I_n K_{n+1} + I_{n+1} K_n = 1/t.
fn i_scaled_unchecked(n: usize, t: f64) -> f64 {
    let top = (n as f64).max(t);
    let m = n + 30 + (40.0 * top).sqrt().ceil() as usize + (n as f64).max(0.0) as usize / 4;
    let mut r = 0.0;
    for k in (n..m).rev() {
        r = 1.0 / (2.0 * (k as f64 + 1.0) / t + r);
    }
    let ks = k_scaled_seq_unchecked(n + 1, t);
    1.0 / (t * (ks[n + 1] + r * ks[n]))
}
