//! Euler-product phase, its windowed `t`-derivative estimators, the
//! oscillation ledger and the critical-line level check.
//!
//! Every prime sum runs in ascending prime order; class-resolved quantities are
//! obtained by tagging each term with its residue class, never by regrouping.

mod ledger;
mod level;
mod spikes;
mod terms;
mod window;

pub use ledger::{
    build_oscillation_ledger, covered_approx, hdep_integral, largest_valid_k, oscillation_boundaries, rho_ratios,
    HDepIntegral, LedgerCell, OscillationLedger, RhoRatios,
};
pub use level::{colocated, level_check, LevelCheck};
pub use spikes::{flag_spikes, Spike};
pub use terms::{euler_phase, euler_phase_by_class, ClassPhase, EulerTerms};
pub use window::{
    estimator_residual, phase_scan, windowed_ratio_approx, windowed_ratio_exact, Estimator, EstimatorResidual,
    PhaseScan, WindowParams,
};
