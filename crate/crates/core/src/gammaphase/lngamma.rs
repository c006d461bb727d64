//! Complex `ln Γ` and `ψ` on the right half-plane.

use num_complex::Complex;

use super::stirling::bernoulli_f;
use crate::error::{domain, Result};
use crate::scalar::{from_u64, lit, Real};

const SHIFT_TO: f64 = 15.0;
const TERMS: usize = 8;

fn shift_count<T: Real>(z: Complex<T>) -> u64 {
    let need = lit::<T>(SHIFT_TO) - z.re;
    if need > T::zero() {
        need.ceil().to_u64().unwrap_or(0)
    } else {
        0
    }
}

/// `ln Γ(z)` for `Re z > 0`, continuous branch (imaginary part = `∠Γ(z)` with
/// `∠Γ(x) = 0` on the positive axis).
pub fn ln_gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if !(z.re > T::zero()) {
        return domain(format!("ln_gamma requires Re z > 0, got {z}"));
    }
    let m = shift_count(z);
    let mut shift = Complex::new(T::zero(), T::zero());
    for k in 0..m {
        shift = shift + (z + from_u64::<T>(k)).ln();
    }
    let w = z + from_u64::<T>(m);
    let winv = w.inv();
    let w2inv = winv * winv;
    let mut series = Complex::new(T::zero(), T::zero());
    let mut pow = winv;
    for k in 1..=TERMS {
        let kk = from_u64::<T>(2 * k as u64);
        series = series + pow * (bernoulli_f::<T>(k) / (kk * (kk - T::one())));
        pow = pow * w2inv;
    }
    let half = lit::<T>(0.5);
    Ok((w - half) * w.ln() - w + half * T::TAU().ln() + series - shift)
}

/// `ψ(z) = Γ'(z)/Γ(z)` for `Re z > 0`.
pub fn digamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if !(z.re > T::zero()) {
        return domain(format!("digamma requires Re z > 0, got {z}"));
    }
    let m = shift_count(z);
    let mut shift = Complex::new(T::zero(), T::zero());
    for k in 0..m {
        shift = shift + (z + from_u64::<T>(k)).inv();
    }
    let w = z + from_u64::<T>(m);
    let winv = w.inv();
    let w2inv = winv * winv;
    let mut psi = w.ln() - winv * lit::<T>(0.5);
    let mut pow = w2inv;
    for k in 1..=TERMS {
        psi = psi - pow * (bernoulli_f::<T>(k) / from_u64::<T>(2 * k as u64));
        pow = pow * w2inv;
    }
    Ok(psi - shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_axis_values() {
        // Γ(1/2) = √π, Γ(5) = 24
        let a = ln_gamma(Complex::new(0.5f64, 0.0)).unwrap();
        assert!((a.re - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
        assert!(a.im.abs() < 1e-15);
        let b = ln_gamma(Complex::new(5.0f64, 0.0)).unwrap();
        assert!((b.re - 24f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn recurrence() {
        let z = Complex::new(0.3f64, 7.2);
        let lhs = ln_gamma(z + 1.0).unwrap();
        let rhs = ln_gamma(z).unwrap() + z.ln();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn frozen_values() {
        // mpmath loggamma(0.75 + 5j)
        let v = ln_gamma(Complex::new(0.75f64, 5.0)).unwrap();
        assert!((v.re - (-6.532_998_117_330_44)).abs() < 1e-12, "{v}");
        assert!((v.im - 3.441_973_196_354_531).abs() < 1e-12, "{v}");
        // digamma(1) = −γ
        let d = digamma(Complex::new(1.0f64, 0.0)).unwrap();
        assert!((d.re + 0.577_215_664_901_532_9).abs() < 1e-14);
    }

    #[test]
    fn digamma_is_derivative() {
        let z = Complex::new(0.8f64, 3.0);
        let h = 1e-5;
        let fd = (ln_gamma(z + h).unwrap() - ln_gamma(z - h).unwrap()) / (2.0 * h);
        assert!((fd - digamma(z).unwrap()).norm() < 1e-8);
    }

    #[test]
    fn left_half_plane_rejected() {
        assert!(ln_gamma(Complex::new(-0.1f64, 1.0)).is_err());
    }
}
