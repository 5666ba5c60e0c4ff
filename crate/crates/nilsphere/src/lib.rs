//! Spherical analysis on the free two-step nilpotent Lie group `N_p` with
//! the conjugation actions of `O_p` and `SO_p`.
//!
//! The crate builds the group in exponential coordinates ([`lie`]), reduces
//! skew-symmetric central elements to their block-diagonal normal forms
//! ([`canonical`]), evaluates the bounded spherical functions of the pair
//! `(N_p, K)` by two independent routes — the integrand/K-average route
//! ([`spherical`]) and the representation matrix-element route
//! ([`representation`]) — and checks the sub-Laplacian spectrum
//! ([`sublaplacian`]) and the radial Plancherel identity ([`plancherel`])
//! at small `p`.
//!
//! All numerical kernels are generic over the scalar type through
//! [`scalar::Real`]; concrete `f64` aliases live at the crate root.

pub mod canonical;
pub mod error;
pub mod haar;
pub mod lie;
pub(crate) mod linalg;
pub mod plancherel;
pub mod quad;
pub mod representation;
pub mod scalar;
pub mod special;
pub mod spherical;
pub mod sublaplacian;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` aliases for the main domain types.
pub type VVector64 = lie::VVector<f64>;
pub type ZSkew64 = lie::ZSkew<f64>;
pub type GroupPoint64 = lie::GroupPoint<f64>;
pub type LambdaSpec64 = canonical::LambdaSpec<f64>;
pub type OrbitProfile64 = canonical::OrbitProfile<f64>;
pub type SphericalIndex64 = canonical::SphericalIndex<f64>;
pub type MCEstimate64 = haar::MCEstimate<f64>;
