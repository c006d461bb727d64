//! Phase of the prefactor `(q/π)^{(s+α)/2} Γ((s+α)/2)` and its derivatives.
//!
//! Two independent routes: the Gauss–Weierstrass product ([`gw`]) and the
//! Stirling expansion ([`stirling`]).

mod crossing;
mod gw;
mod lngamma;
mod mixed;
mod stirling;

pub use crossing::{find_mixed_crossing, find_t_cross, Crossing};
pub use gw::{gw_dphase_dt, gw_log_gamma_phase, prefactor_dphase_dt, prefactor_phase, GwSum, DEFAULT_GW_TERMS};
pub use lngamma::{digamma, ln_gamma};
pub use mixed::{mixed_second_derivative, Route};
pub use stirling::{
    bernoulli, stirling_dphase_dt, stirling_im1, stirling_im2, stirling_im2_approx, stirling_im3, stirling_phase,
    stirling_valid_from, StirlingConfig, StirlingTerm,
};

use crate::error::{domain, Result};

/// `(q, α, α₁)`: `(q, 0, 0)` even, `(q, 1, 1)` odd, `(1, 2, 0)` for `ζ(s)(s−1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrefactorParams {
    pub q: u64,
    pub alpha: u8,
    pub alpha1: u8,
}

impl PrefactorParams {
    pub fn new(q: u64, alpha: u8, alpha1: u8) -> Result<Self> {
        match (alpha, alpha1) {
            (0, 0) | (1, 1) => {}
            (2, 0) if q == 1 => {}
            (2, 0) => return domain("alpha = 2 requires q = 1"),
            _ => return domain(format!("unsupported (alpha, alpha1) = ({alpha}, {alpha1})")),
        }
        if q == 0 {
            return domain("modulus q must be at least 1");
        }
        Ok(Self { q, alpha, alpha1 })
    }

    pub fn even(q: u64) -> Self {
        Self {
            q: q.max(1),
            alpha: 0,
            alpha1: 0,
        }
    }

    pub fn odd(q: u64) -> Self {
        Self {
            q: q.max(1),
            alpha: 1,
            alpha1: 1,
        }
    }

    pub fn zeta() -> Self {
        Self {
            q: 1,
            alpha: 2,
            alpha1: 0,
        }
    }

    /// Even or odd prefactor matching a character's parity.
    pub fn for_parity(q: u64, alpha: u8) -> Self {
        if alpha == 1 {
            Self::odd(q)
        } else {
            Self::even(q)
        }
    }
}
