//! Prime-number error terms, the zeros that drive them, and their limiting
//! distributions.
//!
//! The pipeline has two sides. The *truth* side sieves μ, λ and Λ and
//! evaluates normalized error terms exactly ([`arith`]). The *model* side
//! locates zeros of ζ and Dirichlet L-functions ([`zeta`], [`zeros`]),
//! turns them into explicit-formula coefficients ([`model`]), and studies the
//! resulting almost-periodic functions empirically ([`limdist`]) and through
//! their Bessel-product characteristic functions ([`fourier`]).
//!
//! Numeric kernels are generic over [`Scalar`] (`f32`/`f64`); the aliases
//! below fix the `f64` instantiation used by everything that touches data
//! files.

pub mod arith;
pub mod error;
pub mod fourier;
pub mod limdist;
pub mod model;
pub mod numeric;
pub mod special;
pub mod zeros;
pub mod zeta;

pub use error::{Error, ErrorClass, Result};
pub use numeric::{KahanSum, Scalar};

pub use num_complex::Complex64;

/// A point of the complex plane.
pub type ComplexPoint = Complex64;

pub type CoefficientModel = model::CoefficientModel<f64>;
pub type VectorModel = model::VectorModel<f64>;
pub type CharFnSpec = fourier::CharFnSpec<f64>;
