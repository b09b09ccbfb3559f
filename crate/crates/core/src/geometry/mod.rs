//! Curves, boundary nodes, receiver arrays and plate boundary operators.

mod array;
mod curve;
mod jet;
mod operators;

pub use array::{ArrayGeometry, ARRAY_MARGIN};
pub use curve::{circle_node, discretize, discretize_all, BoundaryNode, Curve, CurveShape};
pub use jet::{Jet3, MultiIndex};
pub use operators::{
    apply_m, apply_m_polar, apply_m_polar_at, apply_n, apply_n_polar, apply_n_polar_at, apply_n_spectral,
    normal_derivative, normal_hessian, spectral_derivative, tangential_twist_derivative, twisting_part,
    PolarDerivatives,
};
