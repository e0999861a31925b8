//! Hyperbolic-cross Fourier approximation of multivariate periodic
//! functions, with rearrangement-based Lorentz norms in mixed form.
//!
//! The crate provides:
//!
//! - sparse spectra of trigonometric polynomials, dyadic block
//!   decomposition and discrete transforms ([`spectral`]);
//! - one-dimensional and iterated mixed Lorentz / Lebesgue norms computed
//!   by exact step-profile integration, iterated sequence norms, and the
//!   smoothness-class membership functional ([`norms`]);
//! - families of mixed modulus-of-continuity-type functions with axiom
//!   and almost-monotonicity checkers ([`modulus`]);
//! - the threshold level sets and hyperbolic-cross frequency sets they
//!   drive, plus hyperplane sections and the cube apparatus used by the
//!   extremal constructions ([`index_sets`]);
//! - Dirichlet/Fejer kernels and the extremal witness functions
//!   ([`witnesses`]);
//! - one-sided numerical checks of the block-norm inequalities on seeded
//!   polynomial ensembles ([`inequalities`]).

pub mod error;
pub mod index_sets;
pub mod inequalities;
pub mod modulus;
pub mod norms;
mod rational;
pub mod spectral;
pub mod witnesses;

pub use error::{Error, Result};
pub use num_complex::Complex64;
