//! Quadratic extensions of rational function fields over finite fields.
//!
//! The crate enumerates the separable quadratic extensions `F / F_q(x)` of a given
//! genus, computes their L-polynomials from splitting data, and evaluates the
//! character sums, Gauss sums and family moments built from them. Everything is
//! exact except complex evaluations of L-functions and Euler products.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod character;
pub mod cyclo;
pub mod divisor;
pub mod error;
pub mod field;
pub mod identities;
pub mod lfunction;
pub mod linalg;
pub mod moments;
pub mod place;
pub mod poly;
pub mod quadratic;
pub mod rational;
pub mod riemann_roch;
pub mod ring;
pub mod roots;

pub use divisor::{Divisor, EffectiveDivisors};
pub use error::{Error, Result};
pub use field::{Fe, Field};
pub use lfunction::LPolynomial;
pub use place::{BaseField, Place};
pub use poly::Poly;
pub use quadratic::{ExtKind, QuadExt};
pub use rational::RationalFunction;
pub use riemann_roch::RrSpace;
