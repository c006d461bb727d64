use super::spikes::Spike;
use super::terms::EulerTerms;
use super::window::{windowed_ratio_exact, WindowParams};
use crate::arith::SPoint;
use crate::error::{domain, Result};
use crate::lfunction::Xi;
use crate::scalar::{from_u64, Real};

/// `ln√(tq/2π) + Δ∠L_EP/Δt` against `∂∠ξ/∂t`.
#[derive(Clone, Copy, Debug)]
pub struct LevelCheck<T> {
    pub t: T,
    pub eps: T,
    pub ratio: T,
    /// `−ln√(tq/2π)`, the level the windowed ratio approaches.
    pub target: T,
    pub lhs: T,
    pub phase_derivative: T,
    pub defect: T,
    /// `∂∠ξ/∂t` averaged over the same window, `∠[ξ(t+w)/ξ(t−w)] / 2w`.
    pub windowed_phase_derivative: T,
    pub windowed_defect: T,
    /// `t` lies inside a supplied spike strip.
    pub excluded: bool,
}

pub fn level_check<T: Real>(
    t: T,
    eps: T,
    terms: &EulerTerms<T>,
    window: &WindowParams<T>,
    xi: &Xi<T>,
    spikes: &[T],
) -> Result<LevelCheck<T>> {
    if !(t > T::zero()) {
        return domain(format!("level check needs t > 0, got {t}"));
    }
    if xi.character().modulus() != terms.modulus() || xi.character().index() != terms.chi_index() {
        return domain("xi evaluator and prime terms belong to different characters");
    }
    let q = from_u64::<T>(terms.modulus());
    let level = (t * q / T::TAU()).sqrt().ln();
    let ratio = windowed_ratio_exact(t, eps, terms, window)?;
    let lhs = level + ratio;
    let dphase = xi.phase_derivative(SPoint::new(eps, t), T::from_f64(1e-3).expect("literal"))?;
    let w = window.half_width();
    let turn = xi.xi(SPoint::new(eps, t + w))? / xi.xi(SPoint::new(eps, t - w))?;
    let windowed = turn.arg() / (w + w);
    let strip = window.delta_t();
    Ok(LevelCheck {
        t,
        eps,
        ratio,
        target: -level,
        lhs,
        phase_derivative: dphase,
        defect: lhs - dphase,
        windowed_phase_derivative: windowed,
        windowed_defect: lhs - windowed,
        excluded: spikes.iter().any(|&s| (t - s).abs() <= strip),
    })
}

/// True when every zero lies within `tol` of some spike.
pub fn colocated<T: Real>(zeros: &[T], spikes: &[Spike<T>], tol: T) -> bool {
    zeros.iter().all(|&z| spikes.iter().any(|s| (s.t - z).abs() <= tol))
}
