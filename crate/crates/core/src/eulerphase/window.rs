use rayon::prelude::*;

use super::terms::{check_eps, EulerTerms};
use crate::error::{domain, Result};
use crate::scalar::{from_u64, lit, Real};
use crate::sum::OrderedSum;

/// Window `t ± π/ln p*` and the prime cutoff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowParams<T> {
    ln_p_star: T,
    p_max: T,
}

impl<T: Real> WindowParams<T> {
    pub fn new(p_star: T, p_max: u64) -> Result<Self> {
        if !(p_star > T::one()) {
            return domain(format!("p_star must exceed 1, got {p_star}"));
        }
        if from_u64::<T>(p_max) < p_star {
            return domain(format!("p_max = {p_max} is below p_star = {p_star}"));
        }
        Ok(Self {
            ln_p_star: p_star.ln(),
            p_max: from_u64(p_max),
        })
    }

    /// `p* = p_max`.
    pub fn at_cutoff(p_max: u64) -> Result<Self> {
        Self::new(from_u64(p_max), p_max)
    }

    /// The `p* → ∞` limit at a given half-width `π/ln p*`, with no cutoff
    /// (`p_max = ∞`); the prime table supplies the actual truncation.
    pub fn with_half_width(half_width: T) -> Result<Self> {
        if !(half_width > T::zero()) {
            return domain(format!("half-width must be positive, got {half_width}"));
        }
        Ok(Self {
            ln_p_star: T::PI() / half_width,
            p_max: T::infinity(),
        })
    }

    pub fn p_star(&self) -> T {
        self.ln_p_star.exp()
    }

    pub fn p_max(&self) -> T {
        self.p_max
    }

    pub fn ln_p_star(&self) -> T {
        self.ln_p_star
    }

    /// `π / ln p*`.
    pub fn half_width(&self) -> T {
        T::PI() / self.ln_p_star
    }

    /// `Δt = 2π / ln p*`.
    pub fn delta_t(&self) -> T {
        T::TAU() / self.ln_p_star()
    }
}

/// `−(ln p*/2π) Σ [atan(…)]_{t−π/ln p*}^{t+π/ln p*}`, termwise in ascending `p`.
pub fn windowed_ratio_exact<T: Real>(t: T, eps: T, terms: &EulerTerms<T>, window: &WindowParams<T>) -> Result<T> {
    check_eps(eps)?;
    let w = window.half_width();
    let mut acc = OrderedSum::new();
    for i in 0..terms.len() {
        acc.add(terms.arctan_term(i, t + w, eps)? - terms.arctan_term(i, t - w, eps)?);
    }
    Ok(-window.ln_p_star() / T::TAU() * acc.value())
}

/// `−(ln p*/π) Σ cos a · sin(π ln p / ln p*) / p^{1/2+ε}`.
pub fn windowed_ratio_approx<T: Real>(t: T, eps: T, terms: &EulerTerms<T>, window: &WindowParams<T>) -> Result<T> {
    check_eps(eps)?;
    let lp = window.ln_p_star();
    let mut acc = OrderedSum::new();
    for i in 0..terms.len() {
        let (_, c) = terms.angle(i, t);
        acc.add(c * (T::PI() * terms.ln_p(i) / lp).sin() / terms.weight(i, eps));
    }
    Ok(-lp / T::PI() * acc.value())
}

/// Difference between the exact and cosine estimators, split as
/// `atan x − x` (higher order) plus the `sin a cos a / ((P − cos a) P)` coupling,
/// with `x = sin a / (P − cos a)`, `P = p^{1/2+ε}`.
#[derive(Clone, Copy, Debug)]
pub struct EstimatorResidual<T> {
    pub exact: T,
    pub approx: T,
    pub higher: T,
    pub coupled: T,
    pub residual: T,
}

fn atan_minus_x<T: Real>(x: T) -> T {
    if x.abs() < lit(1e-3) {
        let x2 = x * x;
        x * x2 * (-lit::<T>(1.0 / 3.0) + x2 * (lit::<T>(0.2) - x2 * lit::<T>(1.0 / 7.0)))
    } else {
        x.atan() - x
    }
}

pub fn estimator_residual<T: Real>(
    t: T,
    eps: T,
    terms: &EulerTerms<T>,
    window: &WindowParams<T>,
) -> Result<EstimatorResidual<T>> {
    check_eps(eps)?;
    let w = window.half_width();
    let scale = -window.ln_p_star() / T::TAU();
    let mut higher = OrderedSum::new();
    let mut coupled = OrderedSum::new();
    let pieces = |i: usize, t: T| -> Result<(T, T)> {
        let (s, c) = terms.angle(i, t);
        let p = terms.weight(i, eps);
        let den = p - c;
        if den.abs() < lit(1e-14) {
            terms.arctan_term(i, t, eps)?;
        }
        Ok((atan_minus_x(s / den), s * c / (den * p)))
    };
    for i in 0..terms.len() {
        let (h1, c1) = pieces(i, t + w)?;
        let (h0, c0) = pieces(i, t - w)?;
        higher.add(h1 - h0);
        coupled.add(c1 - c0);
    }
    let exact = windowed_ratio_exact(t, eps, terms, window)?;
    let approx = windowed_ratio_approx(t, eps, terms, window)?;
    let (higher, coupled) = (scale * higher.value(), scale * coupled.value());
    Ok(EstimatorResidual {
        exact,
        approx,
        higher,
        coupled,
        residual: exact - approx,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimator {
    ExactArctan,
    CosineApprox,
}

/// Windowed phase-derivative samples on a `t` grid.
#[derive(Clone, Debug)]
pub struct PhaseScan<T> {
    pub q: u64,
    pub chi_index: usize,
    pub eps: T,
    pub t_grid: Vec<T>,
    pub values: Vec<T>,
    pub estimator: Estimator,
    pub window: WindowParams<T>,
}

/// Evaluates an estimator on a strictly increasing grid, one task per `t`.
pub fn phase_scan<T: Real>(
    terms: &EulerTerms<T>,
    eps: T,
    t_grid: &[T],
    estimator: Estimator,
    window: &WindowParams<T>,
) -> Result<PhaseScan<T>> {
    if !t_grid.windows(2).all(|w| w[0] < w[1]) {
        return domain("t grid must be strictly increasing");
    }
    let values = t_grid
        .par_iter()
        .map(|&t| match estimator {
            Estimator::ExactArctan => windowed_ratio_exact(t, eps, terms, window),
            Estimator::CosineApprox => windowed_ratio_approx(t, eps, terms, window),
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(PhaseScan {
        q: terms.modulus(),
        chi_index: terms.chi_index(),
        eps,
        t_grid: t_grid.to_vec(),
        values,
        estimator,
        window: *window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{enumerate_characters, sieve_primes, SPoint};
    use crate::eulerphase::euler_phase;

    fn terms(q: u64, idx: usize, p_max: u64) -> EulerTerms<f64> {
        let chi = &enumerate_characters(q).unwrap()[idx];
        EulerTerms::new(chi, &sieve_primes(p_max, q).unwrap()).unwrap()
    }

    #[test]
    fn window_geometry() {
        let w = WindowParams::new(1e6f64, 1_000_000).unwrap();
        assert!((w.delta_t() - 2.0 * w.half_width()).abs() < 1e-15);
        assert!(WindowParams::new(1e6f64, 10).is_err());
        assert!(WindowParams::new(1.0f64, 10).is_err());
    }

    #[test]
    fn exact_matches_phase_difference() {
        let t = terms(3, 1, 20_000);
        let w = WindowParams::new(1000.0, 20_000).unwrap();
        let h = w.half_width();
        let d = (euler_phase(SPoint::new(0.2, 5.0 + h), &t).unwrap()
            - euler_phase(SPoint::new(0.2, 5.0 - h), &t).unwrap())
            / (2.0 * h);
        assert!((d - windowed_ratio_exact(5.0, 0.2, &t, &w).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn narrow_window_matches_derivative() {
        let t = terms(5, 1, 10_000);
        let w = WindowParams::with_half_width(1e-3f64).unwrap();
        let h = 1e-4;
        let fd = (euler_phase(SPoint::new(1.0, 6.0 + h), &t).unwrap()
            - euler_phase(SPoint::new(1.0, 6.0 - h), &t).unwrap())
            / (2.0 * h);
        assert!((fd - windowed_ratio_exact(6.0, 1.0, &t, &w).unwrap()).abs() < 1e-4);
    }

    #[test]
    fn cutoff_prime_contributes_nothing() {
        // with p* equal to a prime in the table, that term's sine factor vanishes
        let t = terms(3, 1, 97);
        let last = t.truncated(89);
        let w = WindowParams::new(97.0, 97).unwrap();
        let a = windowed_ratio_approx(3.3, 0.0, &t, &w).unwrap();
        let b = windowed_ratio_approx(3.3, 0.0, &last, &w).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn estimators_close_at_eps_one() {
        let t = terms(5, 1, 100_000);
        let w = WindowParams::at_cutoff(100_000).unwrap();
        let e = windowed_ratio_exact(10.0, 1.0, &t, &w).unwrap();
        let a = windowed_ratio_approx(10.0, 1.0, &t, &w).unwrap();
        assert!((e - a).abs() < 0.05);
    }

    #[test]
    fn residual_decomposition() {
        let t = terms(3, 1, 50_000);
        let w = WindowParams::at_cutoff(50_000).unwrap();
        let r = estimator_residual(8.04, 0.25, &t, &w).unwrap();
        assert!((r.residual - (r.higher + r.coupled)).abs() < 1e-10);
        // at ε = 2 the p = 2 coupling term alone is about 0.02
        let r2 = estimator_residual(7.0, 2.0, &t, &w).unwrap();
        assert!(r2.residual.abs() < 0.03);
        let r3 = estimator_residual(7.0, 4.0, &t, &w).unwrap();
        assert!(r3.residual.abs() < r2.residual.abs() / 4.0, "{r3:?}");
        // real character: both estimators are even in t, so is the residual
        let real = terms(5, 2, 50_000);
        let rp = estimator_residual(3.0, 0.0, &real, &w).unwrap();
        let rm = estimator_residual(-3.0, 0.0, &real, &w).unwrap();
        assert!((rp.residual - rm.residual).abs() < 1e-12);
    }

    #[test]
    fn scan_deterministic_and_ordered() {
        let t = terms(3, 1, 20_000);
        let w = WindowParams::at_cutoff(20_000).unwrap();
        let grid: Vec<f64> = (0..40).map(|i| 1.0 + 0.25 * i as f64).collect();
        let a = phase_scan(&t, 0.0, &grid, Estimator::ExactArctan, &w).unwrap();
        let b = phase_scan(&t, 0.0, &grid, Estimator::ExactArctan, &w).unwrap();
        assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
        assert_eq!(a.values[7], windowed_ratio_exact(grid[7], 0.0, &t, &w).unwrap());
        assert!(phase_scan(&t, 0.0, &[2.0, 1.0], Estimator::ExactArctan, &w).is_err());
    }
}
