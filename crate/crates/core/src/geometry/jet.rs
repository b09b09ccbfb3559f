use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Multi-index (a1, a2) with a1 + a2 ≤ 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    pub a1: u8,
    pub a2: u8,
}

impl MultiIndex {
    pub fn new(a1: u8, a2: u8) -> Result<Self> {
        if a1 as u16 + a2 as u16 > 3 {
            return Err(Error::Contract(format!("multi-index ({a1},{a2}) exceeds order 3")));
        }
        Ok(Self { a1, a2 })
    }

    pub fn order(self) -> u8 {
        self.a1 + self.a2
    }

    /// Flat storage slot: orders are stored consecutively, a2 ascending within an order.
    pub fn slot(self) -> usize {
        let o = self.order() as usize;
        o * (o + 1) / 2 + self.a2 as usize
    }

    /// All multi-indices in storage order.
    pub fn all() -> [MultiIndex; 10] {
        let mut out = [MultiIndex { a1: 0, a2: 0 }; 10];
        let mut k = 0;
        for o in 0..=3u8 {
            for a2 in 0..=o {
                out[k] = MultiIndex { a1: o - a2, a2 };
                k += 1;
            }
        }
        out
    }

    /// Axis list, e.g. (2,1) -> [0,0,1].
    pub fn axes(self) -> Vec<usize> {
        let mut v = vec![0; self.a1 as usize];
        v.extend(std::iter::repeat_n(1, self.a2 as usize));
        v
    }
}

/// A complex field value with its Cartesian partial derivatives through order 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    d: [Complex64; 10],
    order: u8,
}

impl Default for Jet3 {
    fn default() -> Self {
        Self::zero()
    }
}

impl Jet3 {
    pub fn zero() -> Self {
        Self { d: [Complex64::new(0.0, 0.0); 10], order: 3 }
    }

    /// Build from the 10 entries in storage order (see [`MultiIndex::slot`]).
    pub fn from_array(d: [Complex64; 10]) -> Self {
        Self { d, order: 3 }
    }

    /// Build a jet whose entries above `order` are unknown.
    pub fn with_order(d: [Complex64; 10], order: u8) -> Self {
        let mut d = d;
        for mi in MultiIndex::all() {
            if mi.order() > order {
                d[mi.slot()] = Complex64::new(0.0, 0.0);
            }
        }
        Self { d, order: order.min(3) }
    }

    /// Highest order for which entries are populated.
    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn as_array(&self) -> &[Complex64; 10] {
        &self.d
    }

    pub fn value(&self) -> Complex64 {
        self.d[0]
    }

    pub fn get(&self, a1: u8, a2: u8) -> Complex64 {
        self.d[MultiIndex { a1, a2 }.slot()]
    }

    pub fn at(&self, mi: MultiIndex) -> Complex64 {
        self.d[mi.slot()]
    }

    pub fn set(&mut self, a1: u8, a2: u8, v: Complex64) {
        self.d[MultiIndex { a1, a2 }.slot()] = v;
    }

    pub fn gradient(&self) -> [Complex64; 2] {
        [self.d[1], self.d[2]]
    }

    /// v11 + v22.
    pub fn laplacian(&self) -> Complex64 {
        self.d[3] + self.d[5]
    }

    /// Gradient of the Laplacian: (v111 + v122, v112 + v222).
    pub fn grad_laplacian(&self) -> [Complex64; 2] {
        [self.d[6] + self.d[8], self.d[7] + self.d[9]]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut d = self.d;
        for v in d.iter_mut() {
            *v *= c;
        }
        Self { d, order: self.order }
    }

    pub fn conj(&self) -> Self {
        let mut d = self.d;
        for v in d.iter_mut() {
            *v = v.conj();
        }
        Self { d, order: self.order }
    }

    /// Jet of a radial function f(r), r = |x - y|, given f, f', f'', f'''.
    pub fn radial(f: [Complex64; 4], disp: [f64; 2], r: f64) -> Self {
        let u = [disp[0] / r, disp[1] / r];
        let a = (f[2] - f[1] / r) / r;
        let b = f[1] / r;
        let c3 = f[3] - 3.0 * a;
        let mut d = [Complex64::new(0.0, 0.0); 10];
        d[0] = f[0];
        for mi in MultiIndex::all().iter().skip(1) {
            let ax = mi.axes();
            d[mi.slot()] = match ax.len() {
                1 => f[1] * u[ax[0]],
                2 => {
                    let (i, j) = (ax[0], ax[1]);
                    (f[2] - b) * (u[i] * u[j]) + if i == j { b } else { Complex64::new(0.0, 0.0) }
                }
                _ => {
                    let (i, j, k) = (ax[0], ax[1], ax[2]);
                    let delta = |p: usize, q: usize| if p == q { 1.0 } else { 0.0 };
                    c3 * (u[i] * u[j] * u[k])
                        + a * (delta(i, j) * u[k] + delta(i, k) * u[j] + delta(j, k) * u[i])
                }
            };
        }
        Self { d, order: 3 }
    }

    /// Jet of h(ρ), ρ = |d|², given h, h', h'', h''' in ρ. Smooth at d = 0.
    pub fn of_squared_radius(h: [Complex64; 4], disp: [f64; 2]) -> Self {
        let mut d = [Complex64::new(0.0, 0.0); 10];
        d[0] = h[0];
        let delta = |p: usize, q: usize| if p == q { 1.0 } else { 0.0 };
        for mi in MultiIndex::all().iter().skip(1) {
            let ax = mi.axes();
            d[mi.slot()] = match ax.len() {
                1 => 2.0 * h[1] * disp[ax[0]],
                2 => {
                    let (i, j) = (ax[0], ax[1]);
                    4.0 * h[2] * (disp[i] * disp[j]) + 2.0 * h[1] * delta(i, j)
                }
                _ => {
                    let (i, j, k) = (ax[0], ax[1], ax[2]);
                    8.0 * h[3] * (disp[i] * disp[j] * disp[k])
                        + 4.0 * h[2] * (delta(i, j) * disp[k] + delta(i, k) * disp[j] + delta(j, k) * disp[i])
                }
            };
        }
        Self { d, order: 3 }
    }

    /// Jet of c·e^{i k·x} at x for a wave vector k.
    pub fn plane(amplitude: Complex64, wave: [f64; 2], x: [f64; 2]) -> Self {
        let i = Complex64::new(0.0, 1.0);
        let v = amplitude * (i * (wave[0] * x[0] + wave[1] * x[1])).exp();
        let mut d = [Complex64::new(0.0, 0.0); 10];
        for mi in MultiIndex::all() {
            let f = (i * wave[0]).powu(mi.a1 as u32) * (i * wave[1]).powu(mi.a2 as u32);
            d[mi.slot()] = v * f;
        }
        Self { d, order: 3 }
    }

    /// Jet in the second argument y of a function of x - y.
    pub fn flip_argument(&self) -> Self {
        let mut d = self.d;
        for mi in MultiIndex::all() {
            if mi.order() % 2 == 1 {
                d[mi.slot()] = -d[mi.slot()];
            }
        }
        Self { d, order: self.order }
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(o.d.iter()) {
            *a += *b;
        }
        Jet3 { d, order: self.order.min(o.order) }
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        self + (-o)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for Jet3 {
    type Output = Jet3;
    fn mul(self, c: Complex64) -> Jet3 {
        self.scale(c)
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, c: f64) -> Jet3 {
        self.scale(Complex64::new(c, 0.0))
    }
}
