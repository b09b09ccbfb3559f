//! Column-scaled truncated-SVD least squares.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

// The explicit pseudo-inverse loses digits; a couple of residual corrections recover them.
const REFINEMENT_STEPS: usize = 2;

/// A precomputed pseudo-inverse of a column-scaled matrix.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    a: DMatrix<Complex64>,
    pinv: DMatrix<Complex64>,
    pub rank: usize,
    pub sigma_max: f64,
    pub sigma_min_kept: f64,
}

impl LeastSquares {
    /// Factor `a`, dropping singular values below `rel_cutoff·σmax`.
    pub fn new(a: &DMatrix<Complex64>, rel_cutoff: f64) -> Self {
        let ncols = a.ncols();
        let norms: Vec<f64> = (0..ncols)
            .map(|j| {
                let n = a.column(j).norm();
                if n > 0.0 {
                    n
                } else {
                    1.0
                }
            })
            .collect();
        let mut scaled = a.clone();
        for (j, n) in norms.iter().enumerate() {
            scaled.column_mut(j).scale_mut(1.0 / n);
        }
        let svd = scaled.svd(true, true);
        let u = svd.u.expect("left singular vectors requested");
        let v_t = svd.v_t.expect("right singular vectors requested");
        let sv = svd.singular_values;
        let sigma_max = sv.iter().cloned().fold(0.0, f64::max);
        let cutoff = rel_cutoff * sigma_max;
        let keep: Vec<usize> = (0..sv.len()).filter(|&k| sv[k] > cutoff).collect();
        let sigma_min_kept = keep.iter().map(|&k| sv[k]).fold(f64::INFINITY, f64::min);
        // pinv = D⁻¹ V Σ⁺ Uᴴ restricted to kept singular triplets
        let mut vs = DMatrix::<Complex64>::zeros(ncols, keep.len());
        let mut uh = DMatrix::<Complex64>::zeros(keep.len(), a.nrows());
        for (c, &k) in keep.iter().enumerate() {
            let inv = 1.0 / sv[k];
            for j in 0..ncols {
                vs[(j, c)] = v_t[(k, j)].conj() * (inv / norms[j]);
            }
            for i in 0..a.nrows() {
                uh[(c, i)] = u[(i, k)].conj();
            }
        }
        Self { a: a.clone(), pinv: &vs * &uh, rank: keep.len(), sigma_max, sigma_min_kept }
    }

    pub fn solve(&self, b: &DVector<Complex64>) -> DVector<Complex64> {
        let mut x = &self.pinv * b;
        for _ in 0..REFINEMENT_STEPS {
            x += &self.pinv * (b - &self.a * &x);
        }
        x
    }

    /// Columns of `b` solved together.
    pub fn solve_many(&self, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut x = &self.pinv * b;
        for _ in 0..REFINEMENT_STEPS {
            x += &self.pinv * (b - &self.a * &x);
        }
        x
    }

    pub fn pseudo_inverse(&self) -> &DMatrix<Complex64> {
        &self.pinv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_solution_of_consistent_system() {
        let a = DMatrix::from_fn(6, 3, |i, j| {
            Complex64::new(((i + 1) as f64).powi(j as i32), (i as f64 - j as f64).sin()) * 10f64.powi(j as i32)
        });
        let x = DVector::from_vec(vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0), Complex64::new(0.0, 3.0)]);
        let b = &a * &x;
        let ls = LeastSquares::new(&a, 1e-13);
        let got = ls.solve(&b);
        assert_eq!(ls.rank, 3);
        assert!((got - x).norm() < 1e-10);
    }
}
