//! Grid output: CSV of (x, y, value) and a binary PPM heatmap.
//!
//! Colormap: grid values map linearly from [min, max] onto palette indices
//! 0..=254; a constant grid maps to index 0. Index i < 255 takes its color from
//! the piecewise-linear ramp through
//! (0,0,128) → (0,0,255) → (0,255,255) → (255,255,0) → (255,0,0) → (128,0,0)
//! at t = i/254 ∈ {0, 0.125, 0.375, 0.625, 0.875, 1}. Index 255 is white and
//! marks the obstacle outline. Image rows run from ymax (top) to ymin.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Curve;
use crate::imaging::SamplingGrid;

pub const OUTLINE_INDEX: u8 = 255;

const STOPS: [(f64, [f64; 3]); 6] = [
    (0.0, [0.0, 0.0, 128.0]),
    (0.125, [0.0, 0.0, 255.0]),
    (0.375, [0.0, 255.0, 255.0]),
    (0.625, [255.0, 255.0, 0.0]),
    (0.875, [255.0, 0.0, 0.0]),
    (1.0, [128.0, 0.0, 0.0]),
];

/// The fixed 256-entry palette.
pub fn palette() -> [[u8; 3]; 256] {
    let mut p = [[255u8; 3]; 256];
    for (i, entry) in p.iter_mut().enumerate().take(255) {
        let t = i as f64 / 254.0;
        let k = STOPS.windows(2).position(|w| t <= w[1].0).unwrap_or(STOPS.len() - 2);
        let (t0, c0) = STOPS[k];
        let (t1, c1) = STOPS[k + 1];
        let f = (t - t0) / (t1 - t0);
        for ch in 0..3 {
            entry[ch] = (c0[ch] + f * (c1[ch] - c0[ch])).round() as u8;
        }
    }
    p
}

/// Palette index of every grid value, row-major with x fastest.
pub fn palette_indices(grid: &SamplingGrid) -> Vec<u8> {
    let lo = grid.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = grid.max();
    let span = hi - lo;
    grid.values
        .iter()
        .map(|v| if span > 0.0 { ((v - lo) / span * 254.0).round() as u8 } else { 0 })
        .collect()
}

/// Grid cells crossed by the curves, as flat indices.
pub fn outline_cells(grid: &SamplingGrid, curves: &[Curve]) -> Vec<usize> {
    let s = &grid.spec;
    let hx = (s.bounds[1] - s.bounds[0]) / (s.nx - 1) as f64;
    let hy = (s.bounds[3] - s.bounds[2]) / (s.ny - 1) as f64;
    let mut cells = Vec::new();
    for c in curves {
        let n = 8 * (s.nx + s.ny);
        for k in 0..n {
            let p = c.point(2.0 * std::f64::consts::PI * k as f64 / n as f64);
            let ix = ((p[0] - s.bounds[0]) / hx).round();
            let iy = ((p[1] - s.bounds[2]) / hy).round();
            if ix >= 0.0 && iy >= 0.0 && (ix as usize) < s.nx && (iy as usize) < s.ny {
                cells.push(iy as usize * s.nx + ix as usize);
            }
        }
    }
    cells.sort_unstable();
    cells.dedup();
    cells
}

pub fn grid_csv(grid: &SamplingGrid) -> String {
    let mut s = String::with_capacity(grid.values.len() * 72);
    for (k, v) in grid.values.iter().enumerate() {
        let p = grid.spec.point(k);
        let _ = writeln!(s, "{:.16e},{:.16e},{:.16e}", p[0], p[1], v);
    }
    s
}

/// Binary P6 bytes of the heatmap, with the outline drawn when curves are given.
pub fn grid_ppm(grid: &SamplingGrid, outline: &[Curve]) -> Vec<u8> {
    let (nx, ny) = (grid.spec.nx, grid.spec.ny);
    let mut idx = palette_indices(grid);
    for k in outline_cells(grid, outline) {
        idx[k] = OUTLINE_INDEX;
    }
    let pal = palette();
    let mut out = format!("P6\n{nx} {ny}\n255\n").into_bytes();
    out.reserve(3 * nx * ny);
    for row in (0..ny).rev() {
        for col in 0..nx {
            out.extend_from_slice(&pal[idx[row * nx + col] as usize]);
        }
    }
    out
}

pub fn emit_grid(grid: &SamplingGrid, csv_path: &Path, image_path: &Path, outline: &[Curve]) -> Result<()> {
    fs::write(csv_path, grid_csv(grid)).map_err(|e| Error::io(csv_path, e))?;
    fs::write(image_path, grid_ppm(grid, outline)).map_err(|e| Error::io(image_path, e))
}
