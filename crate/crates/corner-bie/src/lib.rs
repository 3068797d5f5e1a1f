//! Boundary integral equation solver for the 2D Lamé system on piecewise
//! smooth domains with corners.
//!
//! The crate has three layers:
//!
//! * closed-form machinery for the corner analysis: Mellin-type singular
//!   integrals, the 4x4 wedge symbol and its Taylor blocks, and the
//!   transcendental characteristic equations whose roots are the corner
//!   singular exponents ([`mellin`], [`spectrum`]);
//! * a Nyström discretization of the interior Dirichlet problem whose panel
//!   refinement is driven by the computed exponents through a Legendre-tail
//!   indicator ([`quadrature`], [`panelizer`], [`solver`]);
//! * brute-force reference computations that validate every closed form used
//!   above ([`oracle`]).

pub mod error;
pub mod geometry;
pub mod kernels;
pub mod mellin;
pub mod oracle;
pub mod panelizer;
pub mod params;
pub mod quadrature;
pub mod report;
pub mod solver;
pub mod spectrum;

pub use error::Error;
pub use params::ElasticParams;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// 2-vector of coordinates.
pub type Vec2 = nalgebra::Vector2<f64>;
/// Real 2x2 matrix (kernel blocks).
pub type Mat2 = nalgebra::Matrix2<f64>;
/// Complex scalar.
pub type C64 = num_complex::Complex64;
/// Complex 4x4 matrix (wedge symbol and Taylor blocks).
pub type CMat4 = nalgebra::Matrix4<C64>;
/// Complex 4-vector (wedge kernel vectors).
pub type CVec4 = nalgebra::Vector4<C64>;

/// Rotation matrix `[[0, 1], [-1, 0]]` appearing in the traction kernel.
pub fn rot_l() -> Mat2 {
    Mat2::new(0.0, 1.0, -1.0, 0.0)
}
