use num_complex::Complex;
use num_rational::Ratio;

use crate::error::{domain, Result};
use crate::scalar::{from_u64, lit, Real};

use super::PrefactorParams;

const BERNOULLI: [(i64, i64); 12] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
];

/// `B_{2k}` for `k = 1..=12`.
pub fn bernoulli(k: usize) -> Ratio<i64> {
    assert!((1..=BERNOULLI.len()).contains(&k), "B_2k tabulated for k = 1..=12");
    let (n, d) = BERNOULLI[k - 1];
    Ratio::new(n, d)
}

pub(crate) fn bernoulli_f<T: Real>(k: usize) -> T {
    let b = bernoulli(k);
    lit::<T>(*b.numer() as f64) / lit::<T>(*b.denom() as f64)
}

/// Stirling series length: terms `k = 1..K−1`, remainder bounded with `B_{2K}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StirlingConfig {
    k: usize,
    bernoulli: Vec<Ratio<i64>>,
}

impl Default for StirlingConfig {
    fn default() -> Self {
        Self::new(3).expect("K = 3 is valid")
    }
}

impl StirlingConfig {
    pub fn new(k: usize) -> Result<Self> {
        if !(2..=BERNOULLI.len()).contains(&k) {
            return domain(format!("Stirling K must be in 2..=12, got {k}"));
        }
        Ok(Self {
            k,
            bernoulli: (1..=k).map(bernoulli).collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coefficients(&self) -> &[Ratio<i64>] {
        &self.bernoulli
    }
}

/// A truncated asymptotic value with its remainder bound.
#[derive(Clone, Copy, Debug)]
pub struct StirlingTerm<T> {
    pub value: T,
    pub error_bound: T,
}

fn y<T: Real>(eps: T, alpha: u8) -> T {
    eps + from_u64(alpha as u64)
}

/// `z = (s+α)/2 − 1 = (2ε+2α−3)/4 + it/2`.
fn z_of<T: Real>(t: T, eps: T, alpha: u8) -> Complex<T> {
    Complex::new((lit::<T>(2.0) * y(eps, alpha) - lit(3.0)) / lit(4.0), t / lit(2.0))
}

/// `Im₁ = −t/2 + (t/2) ln(tq/2π) − π/8 + (π/4)(ε+α)`.
pub fn stirling_im1<T: Real>(t: T, eps: T, params: PrefactorParams) -> Result<T> {
    if !(t > T::zero()) {
        return domain(format!("Im1 requires t > 0, got {t}"));
    }
    let half = lit::<T>(0.5);
    Ok(
        -t * half + t * half * (t * from_u64::<T>(params.q) / T::TAU()).ln() - T::PI() / lit(8.0)
            + T::FRAC_PI_4() * y(eps, params.alpha),
    )
}

/// `Im₂ = (t/2) ln√(1+u²) + ((ε+α)/2 − 1/4) atan(−u)`, `u = (2(ε+α)−3)/(2t)`.
pub fn stirling_im2<T: Real>(t: T, eps: T, alpha: u8) -> Result<T> {
    if t == T::zero() || !t.is_finite() {
        return domain(format!("Im2 requires finite t != 0, got {t}"));
    }
    let yy = y(eps, alpha);
    let u = (lit::<T>(2.0) * yy - lit(3.0)) / (lit::<T>(2.0) * t);
    Ok(t * lit(0.25) * (u * u).ln_1p() + (yy * lit(0.5) - lit(0.25)) * (-u).atan())
}

/// Large-`t` quadratic form of `Im₂`: `−(2y−3)(2y+1)/(16t)`, `y = ε+α`.
/// Its mixed derivative is exactly `(2y−1)/(4t²)`.
pub fn stirling_im2_approx<T: Real>(t: T, eps: T, alpha: u8) -> Result<T> {
    if t == T::zero() || !t.is_finite() {
        return domain(format!("Im2 requires finite t != 0, got {t}"));
    }
    let yy = y(eps, alpha);
    let two = lit::<T>(2.0);
    Ok(-(two * yy - lit(3.0)) * (two * yy + T::one()) / (lit::<T>(16.0) * t))
}

/// `Im₃ = Im Σ_{k=1}^{K−1} B_{2k} / (2k(2k−1) z^{2k−1})` with the remainder bound
/// `|B_{2K}| / (2K(2K−1)|z|^{2K−1}) / cos^{2K}(arg z / 2)`.
pub fn stirling_im3<T: Real>(t: T, eps: T, alpha: u8, cfg: &StirlingConfig) -> Result<StirlingTerm<T>> {
    if !(t > T::zero()) {
        return domain(format!("Im3 requires t > 0, got {t}"));
    }
    let z = z_of(t, eps, alpha);
    let zinv = z.inv();
    let z2inv = zinv * zinv;
    let mut pow = zinv;
    let mut sum = Complex::new(T::zero(), T::zero());
    for k in 1..cfg.k() {
        let kk = from_u64::<T>(2 * k as u64);
        sum = sum + pow * (bernoulli_f::<T>(k) / (kk * (kk - T::one())));
        pow = pow * z2inv;
    }
    let kk = from_u64::<T>(2 * cfg.k() as u64);
    let bound = bernoulli_f::<T>(cfg.k()).abs()
        / (kk * (kk - T::one()) * z.norm().powf(kk - T::one()))
        / (z.arg() * lit(0.5)).cos().powf(kk);
    Ok(StirlingTerm {
        value: sum.im,
        error_bound: bound,
    })
}

/// `Im₁ + Im₂ + Im₃`, the phase of the full prefactor. Refuses `|t| < 0.5`;
/// negative `t` uses oddness.
pub fn stirling_phase<T: Real>(t: T, eps: T, params: PrefactorParams, cfg: &StirlingConfig) -> Result<StirlingTerm<T>> {
    if !(t.abs() >= lit(0.5)) {
        return domain(format!("Stirling route needs |t| >= 0.5, got {t}"));
    }
    if t < T::zero() {
        let r = stirling_phase(-t, eps, params, cfg)?;
        return Ok(StirlingTerm { value: -r.value, ..r });
    }
    let im3 = stirling_im3(t, eps, params.alpha, cfg)?;
    Ok(StirlingTerm {
        value: stirling_im1(t, eps, params)? + stirling_im2(t, eps, params.alpha)? + im3.value,
        error_bound: im3.error_bound,
    })
}

/// `½ ln(q/π) + ½ Re ψ(z+1)` with `ψ(z+1) ≈ ln z + 1/(2z) − Σ B_{2k}/(2k z^{2k})`.
pub fn stirling_dphase_dt<T: Real>(t: T, eps: T, params: PrefactorParams, cfg: &StirlingConfig) -> Result<T> {
    if !(t.abs() >= lit(0.5)) {
        return domain(format!("Stirling route needs |t| >= 0.5, got {t}"));
    }
    let z = z_of(t.abs(), eps, params.alpha);
    let zinv = z.inv();
    let z2inv = zinv * zinv;
    let mut psi = z.ln() + zinv * lit::<T>(0.5);
    let mut pow = z2inv;
    for k in 1..cfg.k() {
        psi = psi - pow * (bernoulli_f::<T>(k) / from_u64::<T>(2 * k as u64));
        pow = pow * z2inv;
    }
    let half = lit::<T>(0.5);
    Ok(half * (from_u64::<T>(params.q) / T::PI()).ln() + half * psi.re)
}

/// Smallest `t` on a `0.01` grid from `0.5` where the `R_{2K}` bound drops below
/// `tol`. This is the empirical stand-in for the asymptotic threshold.
pub fn stirling_valid_from<T: Real>(eps: T, alpha: u8, cfg: &StirlingConfig, tol: T) -> Option<T> {
    (0..100_000u64)
        .map(|i| lit::<T>(0.5) + from_u64::<T>(i) * lit(0.01))
        .find(|&t| stirling_im3(t, eps, alpha, cfg).is_ok_and(|r| r.error_bound < tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn table_exact() {
        let c = StirlingConfig::new(7).unwrap();
        let want = [(1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730), (7, 6)];
        for (b, (n, d)) in c.coefficients().iter().zip(want) {
            assert_eq!(*b, Ratio::new(n, d));
        }
        assert!(StirlingConfig::new(1).is_err());
        assert!(StirlingConfig::new(13).is_err());
    }

    #[test]
    fn im1_at_two_pi() {
        let v = stirling_im1(2.0 * PI, 0.0, PrefactorParams::zeta()).unwrap();
        assert!((v + 5.0 * PI / 8.0).abs() < 1e-14);
        assert!(stirling_im1(0.0, 0.0, PrefactorParams::zeta()).is_err());
    }

    #[test]
    fn im1_derivative_is_log_law() {
        let (t, h, p) = (10.0, 1e-4, PrefactorParams::odd(5));
        let d = (stirling_im1(t + h, 0.0, p).unwrap() - stirling_im1(t - h, 0.0, p).unwrap()) / (2.0 * h);
        assert!((d - (t * 5.0 / (2.0 * PI)).sqrt().ln()).abs() < 1e-8);
    }

    #[test]
    fn im1_slope_in_eps() {
        let p = PrefactorParams::odd(3);
        let a = stirling_im1(4.0, 0.3, p).unwrap() - stirling_im1(4.0, 0.1, p).unwrap();
        assert!((a - 0.2 * PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn im2_vanishes_on_balance() {
        assert_eq!(stirling_im2(3.7, 0.5, 1).unwrap(), 0.0);
        assert!(stirling_im2(1e8f64, 0.0, 0).unwrap().abs() < 1e-7);
        assert!(stirling_im2(0.0, 0.0, 0).is_err());
    }

    #[test]
    fn im2_approx_three_cases() {
        let (t, h) = (10.0f64, 1e-3);
        for (alpha, want) in [(2u8, 3.0), (1, 1.0), (0, -1.0)] {
            let f = |e: f64, t: f64| stirling_im2_approx(t, e, alpha).unwrap();
            let m = (f(h, t + h) - f(h, t - h) - f(-h, t + h) + f(-h, t - h)) / (4.0 * h * h);
            assert!((m - want / (4.0 * t * t)).abs() < 1e-6, "alpha {alpha}: {m}");
        }
    }

    #[test]
    fn im3_leading_term() {
        let r = stirling_im3(100.0f64, 0.0, 1, &StirlingConfig::default()).unwrap();
        assert!((r.value / (-1.0 / 600.0) - 1.0).abs() < 0.02);
    }

    #[test]
    fn im3_bound_decreasing() {
        let cfg = StirlingConfig::default();
        let b: Vec<f64> = [2.0, 5.0, 10.0, 50.0]
            .iter()
            .map(|&t| stirling_im3(t, 0.0, 1, &cfg).unwrap().error_bound)
            .collect();
        assert!(b.iter().all(|&x| x > 0.0));
        assert!(b.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn refuses_small_t() {
        let cfg = StirlingConfig::default();
        assert!(stirling_phase(0.3, 0.0, PrefactorParams::odd(3), &cfg).is_err());
        assert!(stirling_dphase_dt(0.3, 0.0, PrefactorParams::odd(3), &cfg).is_err());
    }

    #[test]
    fn phase_derivative_consistent() {
        let cfg = StirlingConfig::new(6).unwrap();
        let p = PrefactorParams::odd(7);
        let (t, h) = (6.0f64, 1e-4);
        let fd = (stirling_phase(t + h, 0.1, p, &cfg).unwrap().value
            - stirling_phase(t - h, 0.1, p, &cfg).unwrap().value)
            / (2.0 * h);
        assert!((fd - stirling_dphase_dt(t, 0.1, p, &cfg).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn validity_threshold_found() {
        let t = stirling_valid_from(0.0, 1, &StirlingConfig::default(), 1e-6).unwrap();
        assert!(t > 0.5 && t < 20.0);
    }
}
