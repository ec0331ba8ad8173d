//! The functors `theta^s`, their adjunctions, and the Frobenius structure.

pub mod adjoint;
pub mod cover;
pub mod theta;

pub use adjoint::{adjunction_suite, check_adjunction, transpose_backward, transpose_forward, AdjunctionId, Direction, NaturalityData, Side};
pub use cover::{
    canonical_deflation, canonical_inflation, concentrated, project, project_morphism, stably_zero, test_injective,
    test_projective, Canonical, CoverMode, Lift, StableZero,
};
pub use theta::{theta0, theta1, theta_s, theta_s_morphism};
