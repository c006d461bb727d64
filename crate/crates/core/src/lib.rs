//! Phases of Dirichlet L-functions on and near the critical line.
//!
//! - [`arith`]: characters, Gauss sums, the prime sieve, `Li`.
//! - [`gammaphase`]: phase of the `Γ` prefactor, two routes.
//! - [`lfunction`]: `L`, `ξ`, `η`, zeros.
//! - [`eulerphase`]: truncated Euler-product phase, windows, oscillation ledgers.
//! - [`verify`]: the acceptance checks.
//!
//! Numerical code is generic over [`Real`] (`f32`, `f64`); the aliases below fix `f64`.

// `!(x > 0)` style guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod error;
pub mod eulerphase;
pub mod gammaphase;
pub mod lfunction;
pub mod quad;
pub mod scalar;
pub mod sum;
pub mod verify;

pub use arith::{enumerate_characters, sieve_primes, DirichletCharacter, PrimeTable};
pub use error::{Error, Result};
pub use gammaphase::PrefactorParams;
pub use scalar::Real;

pub type SPoint64 = arith::SPoint<f64>;
pub type SPoint32 = arith::SPoint<f32>;
pub type Xi64 = lfunction::Xi<f64>;
pub type LSeries64 = lfunction::LSeries<f64>;
pub type EulerTerms64 = eulerphase::EulerTerms<f64>;
pub type WindowParams64 = eulerphase::WindowParams<f64>;
pub type OscillationLedger64 = eulerphase::OscillationLedger<f64>;
pub type ZeroRecord64 = lfunction::ZeroRecord<f64>;
