use rayon::prelude::*;

use super::grid::{GridSpec, SamplingGrid};
use crate::geometry::Curve;

/// Distance from every grid point to the nearest curve.
pub fn boundary_distances(spec: &GridSpec, curves: &[Curve]) -> Vec<f64> {
    spec.points()
        .par_iter()
        .map(|p| curves.iter().map(|c| c.distance(*p)).fold(f64::INFINITY, f64::min))
        .collect()
}

/// Where the image peaks relative to Γ and how it contrasts near vs far from Γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Localization {
    pub argmax: [f64; 2],
    pub argmax_distance: f64,
    /// Mean over points within 1/κ of Γ.
    pub near_mean: f64,
    /// Mean over points farther than 3/κ from Γ.
    pub far_mean: f64,
}

impl Localization {
    pub fn contrast_holds(&self) -> bool {
        self.near_mean > self.far_mean
    }
}

pub fn localization(grid: &SamplingGrid, distances: &[f64], kappa: f64) -> Localization {
    let (k, _) = grid.argmax();
    let mean = |keep: &dyn Fn(f64) -> bool| {
        let (sum, n) = grid
            .values
            .iter()
            .zip(distances)
            .filter(|(_, d)| keep(**d))
            .fold((0.0, 0usize), |(s, n), (v, _)| (s + v, n + 1));
        if n == 0 {
            f64::NAN
        } else {
            sum / n as f64
        }
    };
    Localization {
        argmax: grid.spec.point(k),
        argmax_distance: distances[k],
        near_mean: mean(&|d| d <= 1.0 / kappa),
        far_mean: mean(&|d| d > 3.0 / kappa),
    }
}

/// 8-connected set of grid cells above a threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub cells: Vec<usize>,
    pub points: Vec<[f64; 2]>,
}

impl Cluster {
    pub fn centroid(&self) -> [f64; 2] {
        let n = self.points.len() as f64;
        let s = self.points.iter().fold([0.0, 0.0], |a, p| [a[0] + p[0], a[1] + p[1]]);
        [s[0] / n, s[1] / n]
    }

    /// Smallest point-to-point distance between two clusters.
    pub fn gap(&self, other: &Cluster) -> f64 {
        self.points
            .iter()
            .flat_map(|p| other.points.iter().map(move |q| (p[0] - q[0]).hypot(p[1] - q[1])))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Connected components of {value > threshold}, largest first.
pub fn above_threshold_clusters(grid: &SamplingGrid, threshold: f64) -> Vec<Cluster> {
    let (nx, ny) = (grid.spec.nx, grid.spec.ny);
    let mut seen = vec![false; nx * ny];
    let mut out = Vec::new();
    for start in 0..nx * ny {
        if seen[start] || !(grid.values[start] > threshold) {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut cells = Vec::new();
        while let Some(k) = stack.pop() {
            cells.push(k);
            let (ix, iy) = ((k % nx) as isize, (k / nx) as isize);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (jx, jy) = (ix + dx, iy + dy);
                    if jx < 0 || jy < 0 || jx >= nx as isize || jy >= ny as isize {
                        continue;
                    }
                    let j = jy as usize * nx + jx as usize;
                    if !seen[j] && grid.values[j] > threshold {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        cells.sort_unstable();
        let points = cells.iter().map(|&k| grid.spec.point(k)).collect();
        out.push(Cluster { cells, points });
    }
    out.sort_by(|a, b| b.cells.len().cmp(&a.cells.len()).then(a.cells[0].cmp(&b.cells[0])));
    out
}
