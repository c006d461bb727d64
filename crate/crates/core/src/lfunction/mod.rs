//! `L(s, χ)`, the completed `ξ`, the real-normalised `η`, angular momentum,
//! reduction identities and critical-line zeros.

mod eta;
mod reduction;
mod series;
mod sufficient;
mod xi;
mod zeros;

pub use eta::{
    angular_momentum, angular_momentum_from_samples, eta_curvature, eta_eval, eta_grid, eta_sample, EtaCurvature,
    EtaSample,
};
pub use reduction::{reduction_identities, ReductionEntry, ReductionReport};
pub use series::{l_eval, LSeries, LValue};
pub use sufficient::sufficient_condition_check;
pub use xi::{functional_equation_residual, xi_eval, Xi};
pub use zeros::{find_zeros_on_line, ZeroKind, ZeroRecord};
