//! Exact interaction groups extending shift actions of `ℕᵏ`, and their
//! minimal admissible dilations.
//!
//! The exact engine ([`cylinder`], [`cocycle`], [`interaction`],
//! [`dilation`], [`kernels`]) is generic over a [`Scalar`]; the aliases
//! below fix it to arbitrary-precision rationals, which is what every
//! verification routine is meant to run with. [`circle`] is the floating
//! point companion for the circle and solenoid, generic over
//! `num_traits::Float`.

pub mod circle;
pub mod cocycle;
pub mod cylinder;
pub mod dilation;
pub mod error;
pub mod interaction;
pub mod io;
pub mod kernels;
pub mod lattice;
pub mod linalg;
pub mod report;
pub mod scalar;

pub use cocycle::{Cocycle, CocycleMode};
pub use cylinder::{CylinderFunction, ShiftSystem, Word};
pub use dilation::{Dilation, DilationElement};
pub use error::{Error, Result};
pub use interaction::InteractionSystem;
pub use kernels::FiniteKernel;
pub use lattice::{ball, LatticeElement, OreSemigroup};
pub use report::{CheckEntry, Status, VerificationReport};
pub use scalar::Scalar;

/// Exact scalar used by the verification engine.
pub type Rational = num_rational::BigRational;

pub type ExactFunction = CylinderFunction<Rational>;
pub type ExactCocycle = Cocycle<Rational>;
pub type ExactSystem = InteractionSystem<Rational>;
pub type ExactElement = DilationElement<Rational>;
pub type ExactKernel = FiniteKernel<Rational>;

/// Floating-point instantiations, for quick experiments where exactness is
/// not needed.
pub type FunctionF64 = CylinderFunction<f64>;
pub type CocycleF64 = Cocycle<f64>;

pub type Complex64 = num_complex::Complex<f64>;
