//! Cylinder functions and fundamental solutions.

mod bessel;
mod kernels;

pub use bessel::{
    bessel_eval, bessel_i_scaled, bessel_j_seq, bessel_k_scaled, bessel_k_scaled_seq, bessel_y_seq,
    hankel1, hankel1_seq, BesselKind,
};
pub use kernels::{
    helmholtz_radial, helmholtz_value, kernel_jet, kernel_value, modified_radial, pde_residual_check,
    regular_jet, KernelKind, WaveParams, SINGULARITY_RADIUS,
};
