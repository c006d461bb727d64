use crate::arith::SPoint;
use crate::error::{Error, Result};
use crate::scalar::{from_u64, lit, Real};
use crate::sum::OrderedSum;

use super::PrefactorParams;

pub const DEFAULT_GW_TERMS: u64 = 1_000_000;

/// A truncated product sum with its convergence diagnostics.
#[derive(Clone, Copy, Debug)]
pub struct GwSum<T> {
    /// Partial sum through `n = N`.
    pub value: T,
    /// Magnitude of the `n = N` term.
    pub last_term: T,
    /// `|v(N) − v(N/2)|`; the tail decays like `1/N`, so this tracks it.
    pub tail_estimate: T,
    /// `2v(N) − v(N/2)`: one Richardson step in `1/N`.
    pub extrapolated: T,
}

fn shift<T: Real>(eps: T, alpha: u8) -> T {
    lit::<T>(0.5) + eps + from_u64(alpha as u64)
}

fn pole_guard<T: Real>(c: T, t: T, n_terms: u64) -> Result<()> {
    // |z + n| with z = c/2 + it/2; closest n to −c/2
    let half = lit::<T>(0.5);
    let re = c * half;
    let n = (-re).round().max(T::zero()).min(from_u64(n_terms));
    let d = ((re + n).powi(2) + (t * half).powi(2)).sqrt();
    if d < lit(1e-12) {
        return Err(Error::Pole {
            n: n.to_u64().unwrap_or(0),
            re: re.to_f64().unwrap_or(0.0),
            im: (t * half).to_f64().unwrap_or(0.0),
        });
    }
    Ok(())
}

/// `r − atan r`, with a series for small `r`.
fn r_minus_atan<T: Real>(r: T) -> T {
    if r.abs() < lit(1e-3) {
        let r2 = r * r;
        r * r2 * (lit::<T>(1.0 / 3.0) - r2 * (lit::<T>(0.2) - r2 * lit::<T>(1.0 / 7.0)))
    } else {
        r - r.atan()
    }
}

fn finish<T: Real>(acc_half: T, acc: T, last: T) -> GwSum<T> {
    GwSum {
        value: acc,
        last_term: last.abs(),
        tail_estimate: (acc - acc_half).abs(),
        extrapolated: acc + acc - acc_half,
    }
}

/// Phase of `Γ(z)`, `z = (s+α)/2`, from the Weierstrass product truncated at `N`:
/// `−γt/2 − atan(t/c) + Σ_{n≤N} [t/(2n) − atan(t/(2n+c))]`, `c = 1/2 + ε + α`.
pub fn gw_log_gamma_phase<T: Real>(s: SPoint<T>, alpha: u8, n_terms: u64) -> Result<GwSum<T>> {
    if n_terms < 1 {
        return Err(Error::Domain("GW truncation N must be at least 1".into()));
    }
    let c = shift(s.eps, alpha);
    let t = s.t;
    pole_guard(c, t, n_terms)?;
    let two = lit::<T>(2.0);
    let mut acc = OrderedSum::new();
    acc.add(-T::euler_gamma() * t / two);
    acc.add(-t.atan2(c));
    let mut at_half = T::zero();
    let mut last = T::zero();
    for n in 1..=n_terms {
        let two_n = two * from_u64::<T>(n);
        let d = two_n + c;
        let r = t / d;
        // t/(2n) − atan(r) = t c/(2n d) + (r − atan r)
        let term = t * c / (two_n * d) + r_minus_atan(r);
        acc.add(term);
        if n == n_terms / 2 {
            at_half = acc.value();
        }
        last = term;
    }
    Ok(finish(at_half, acc.value(), last))
}

/// Termwise `t`-derivative of [`gw_log_gamma_phase`] at fixed `N`:
/// `−γ/2 − c/(c²+t²) + Σ (d c + t²)/(2n (d² + t²))`, `d = 2n + c`.
pub fn gw_dphase_dt<T: Real>(s: SPoint<T>, alpha: u8, n_terms: u64) -> Result<GwSum<T>> {
    if n_terms < 1 {
        return Err(Error::Domain("GW truncation N must be at least 1".into()));
    }
    let c = shift(s.eps, alpha);
    let t = s.t;
    pole_guard(c, t, n_terms)?;
    let two = lit::<T>(2.0);
    let t2 = t * t;
    let mut acc = OrderedSum::new();
    acc.add(-T::euler_gamma() / two);
    acc.add(-c / (c * c + t2));
    let mut at_half = T::zero();
    let mut last = T::zero();
    for n in 1..=n_terms {
        let two_n = two * from_u64::<T>(n);
        let d = two_n + c;
        let term = (d * c + t2) / (two_n * (d * d + t2));
        acc.add(term);
        if n == n_terms / 2 {
            at_half = acc.value();
        }
        last = term;
    }
    Ok(finish(at_half, acc.value(), last))
}

/// `(t/2) ln(q/π) + ∠Γ((s+α)/2)`, the phase of the full prefactor.
pub fn prefactor_phase<T: Real>(s: SPoint<T>, params: PrefactorParams, n_terms: u64) -> Result<GwSum<T>> {
    let g = gw_log_gamma_phase(s, params.alpha, n_terms)?;
    let shift = (from_u64::<T>(params.q) / T::PI()).ln() * s.t * lit(0.5);
    Ok(GwSum {
        value: g.value + shift,
        extrapolated: g.extrapolated + shift,
        ..g
    })
}

/// `½ ln(q/π) + ∂∠Γ((s+α)/2)/∂t`.
pub fn prefactor_dphase_dt<T: Real>(s: SPoint<T>, params: PrefactorParams, n_terms: u64) -> Result<GwSum<T>> {
    let g = gw_dphase_dt(s, params.alpha, n_terms)?;
    let shift = (from_u64::<T>(params.q) / T::PI()).ln() * lit(0.5);
    Ok(GwSum {
        value: g.value + shift,
        extrapolated: g.extrapolated + shift,
        ..g
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gammaphase::stirling_phase;
    use crate::gammaphase::StirlingConfig;
    use proptest::prelude::*;

    #[test]
    fn zero_at_t_zero() {
        for alpha in 0..3 {
            let v = gw_log_gamma_phase(SPoint::new(0.1, 0.0), alpha, 1000).unwrap();
            assert_eq!(v.value, 0.0);
        }
    }

    #[test]
    fn derivative_at_t_zero_closed_form() {
        // α=1, ε=0: −γ/2 − 1/(3/2) + Σ (1/(2n) − 1/(2n + 3/2))
        let n = 2000;
        let want: f64 = -0.5772156649015329 / 2.0 - 2.0 / 3.0
            + (1..=n)
                .map(|k| 1.0 / (2.0 * k as f64) - 1.0 / (2.0 * k as f64 + 1.5))
                .sum::<f64>();
        let got = gw_dphase_dt(SPoint::new(0.0, 0.0), 1, n).unwrap().value;
        assert!((got - want).abs() < 1e-13);
    }

    #[test]
    fn large_t_log_law() {
        // ½ln(q/π) + ∂∠Γ/∂t ≈ ln√(tq/2π) at t = 50, q = 3
        let t = 50.0;
        let v = prefactor_dphase_dt(SPoint::new(0.0, t), PrefactorParams::odd(3), DEFAULT_GW_TERMS).unwrap();
        assert!((v.extrapolated - (t * 3.0 / std::f64::consts::TAU).sqrt().ln()).abs() < 1e-3);
    }

    #[test]
    fn agrees_with_stirling_at_t5() {
        let s = SPoint::new(0.0f64, 5.0);
        let p = PrefactorParams::odd(1);
        let gw = prefactor_phase(s, p, DEFAULT_GW_TERMS).unwrap();
        let st = stirling_phase(5.0f64, 0.0, p, &StirlingConfig::default()).unwrap();
        assert!((gw.value - st.value).abs() <= st.error_bound + 10.0 * gw.tail_estimate);
    }

    #[test]
    fn pole_detected() {
        // z = (s+α)/2 = −1 requires c = −2: ε = −2.5, α = 0
        let e = gw_log_gamma_phase(SPoint::new(-2.5, 0.0), 0, 10).unwrap_err();
        assert!(matches!(e, Error::Pole { .. }));
    }

    #[test]
    fn richardson_reduces_error() {
        let s = SPoint::new(0.0f64, 7.0);
        let exact = gw_log_gamma_phase(s, 0, 4_000_000).unwrap().extrapolated;
        let v = gw_log_gamma_phase(s, 0, 10_000).unwrap();
        assert!((v.extrapolated - exact).abs() < 0.1 * (v.value - exact).abs());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn parity_in_t(t in 0.0f64..50.0, eps in -0.3f64..0.3, alpha in 0u8..3) {
            let a = gw_log_gamma_phase(SPoint::new(eps, t), alpha, 2000).unwrap().value;
            let b = gw_log_gamma_phase(SPoint::new(eps, -t), alpha, 2000).unwrap().value;
            prop_assert!((a + b).abs() <= 1e-12 * a.abs().max(1.0));
            let da = gw_dphase_dt(SPoint::new(eps, t), alpha, 2000).unwrap().value;
            let db = gw_dphase_dt(SPoint::new(eps, -t), alpha, 2000).unwrap().value;
            prop_assert_eq!(da, db);
        }
    }
}
