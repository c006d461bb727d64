use num_complex::Complex;

use super::xi::Xi;
use crate::arith::{DirichletCharacter, SPoint};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// `η = e^{iθ₀} ξ` at one point.
#[derive(Clone, Copy, Debug)]
pub struct EtaSample<T> {
    pub t: T,
    pub eps: T,
    pub chi_index: usize,
    pub eta: Complex<T>,
    pub theta0: T,
}

pub fn eta_eval<T: Real>(t: T, eps: T, chi: &DirichletCharacter) -> Result<EtaSample<T>> {
    let xi = Xi::new(chi, t, eps.min(T::zero()))?;
    eta_sample(&xi, t, eps)
}

pub fn eta_sample<T: Real>(xi: &Xi<T>, t: T, eps: T) -> Result<EtaSample<T>> {
    Ok(EtaSample {
        t,
        eps,
        chi_index: xi.character().index(),
        eta: xi.eta(SPoint::new(eps, t))?,
        theta0: xi.theta0(),
    })
}

/// `η` on a grid, with the global sign fixed so that the first sample with
/// `|η| > tol` has positive real part.
pub fn eta_grid<T: Real>(xi: &Xi<T>, ts: &[T], eps: T, tol: T) -> Result<Vec<EtaSample<T>>> {
    let mut out: Vec<EtaSample<T>> = ts.iter().map(|&t| eta_sample(xi, t, eps)).collect::<Result<_>>()?;
    if let Some(first) = out.iter().find(|s| s.eta.norm() > tol) {
        if first.eta.re < T::zero() {
            for s in &mut out {
                s.eta = -s.eta;
            }
        }
    }
    Ok(out)
}

/// `𝓛 = Re ξ ∂ₜIm ξ − Im ξ ∂ₜRe ξ = Im(ξ̄ ∂ₜξ)`.
pub fn angular_momentum<T: Real>(xi: &Xi<T>, s: SPoint<T>, dt: T) -> Result<T> {
    if !(dt > T::zero()) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    let v = xi.xi(s)?;
    let d = xi.dxi_dt(s, dt)?;
    Ok((v.conj() * d).im)
}

/// `𝓛` from three samples `f(t−dt), f(t), f(t+dt)` of any complex function.
pub fn angular_momentum_from_samples<T: Real>(prev: Complex<T>, mid: Complex<T>, next: Complex<T>, dt: T) -> T {
    let d = (next - prev) / (dt + dt);
    mid.re * d.im - mid.im * d.re
}

/// `[η′]² − ηη″` on the critical line, and the same quantity as the forward
/// difference `(𝓛(δ) − 𝓛(0))/δ`.
#[derive(Clone, Copy, Debug)]
pub struct EtaCurvature<T> {
    pub t: T,
    pub eta: T,
    pub d1: T,
    pub d2: T,
    pub quantity: T,
    pub via_angular_momentum: T,
}

impl<T: Real> EtaCurvature<T> {
    pub fn relative_gap(&self) -> T {
        (self.quantity - self.via_angular_momentum).abs() / self.quantity.abs().max(T::min_positive_value())
    }
}

pub fn eta_curvature<T: Real>(xi: &Xi<T>, t: T, dt: T) -> Result<EtaCurvature<T>> {
    let e = |t: T| xi.eta(SPoint::on_line(t)).map(|v| v.re);
    let e0 = e(t)?;
    let sample = |h: T| -> Result<(T, T)> {
        let (up, dn) = (e(t + h)?, e(t - h)?);
        Ok(((up - dn) / (h + h), (up - e0 - e0 + dn) / (h * h)))
    };
    let (a1, a2) = sample(dt)?;
    let (b1, b2) = sample(dt * lit(0.5))?;
    let four = lit::<T>(4.0);
    let three = lit::<T>(3.0);
    let d1 = (four * b1 - a1) / three;
    let d2 = (four * b2 - a2) / three;
    let scale = e0.abs() + d1.abs() + d2.abs();
    if (d1 - b1).abs() > lit::<T>(1e-4) * scale || (d2 - b2).abs() > lit::<T>(1e-3) * scale {
        return Err(Error::Numerical(format!(
            "Richardson ladder failed for eta derivatives at t = {t}"
        )));
    }
    let delta = lit::<T>(1e-4);
    let l0 = angular_momentum(xi, SPoint::on_line(t), dt)?;
    let l1 = angular_momentum(xi, SPoint::new(delta, t), dt)?;
    Ok(EtaCurvature {
        t,
        eta: e0,
        d1,
        d2,
        quantity: d1 * d1 - e0 * d2,
        via_angular_momentum: (l1 - l0) / delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::enumerate_characters;

    fn q3() -> Xi<f64> {
        Xi::new(&enumerate_characters(3).unwrap()[1], 35.0, 0.0).unwrap()
    }

    #[test]
    fn real_on_line() {
        let s = eta_eval(5.0f64, 0.0, &enumerate_characters(3).unwrap()[1]).unwrap();
        assert!(s.eta.im.abs() < 1e-8 * s.eta.norm());
    }

    #[test]
    fn first_zero_sign_change() {
        let xi = q3();
        let a = xi.eta(SPoint::on_line(7.9)).unwrap().re;
        let b = xi.eta(SPoint::on_line(8.2)).unwrap().re;
        assert!(a * b < 0.0);
        let x4 = Xi::new(&enumerate_characters(4).unwrap()[1], 10.0f64, 0.0).unwrap();
        let a = x4.eta(SPoint::on_line(5.9)).unwrap().re;
        let b = x4.eta(SPoint::on_line(6.2)).unwrap().re;
        assert!(a * b < 0.0);
    }

    #[test]
    fn vanishing_on_line() {
        let xi = q3();
        for t in [3.0, 5.0, 10.0] {
            let l = angular_momentum(&xi, SPoint::on_line(t), 1e-3).unwrap();
            let x2 = xi.xi(SPoint::on_line(t)).unwrap().norm_sqr();
            assert!(l.abs() < 1e-6 * x2 * t.ln(), "t = {t}");
        }
    }

    #[test]
    fn scaling_by_constant() {
        let xi = q3();
        let f = Complex::new(2.0, 1.0);
        let s: Vec<Complex<f64>> = [6.999, 7.0, 7.001]
            .iter()
            .map(|&t| xi.xi(SPoint::new(0.3, t)).unwrap())
            .collect();
        let base = angular_momentum_from_samples(s[0], s[1], s[2], 1e-3);
        let scaled = angular_momentum_from_samples(f * s[0], f * s[1], f * s[2], 1e-3);
        assert!((scaled - 5.0 * base).abs() <= 1e-12 * base.abs());
    }

    #[test]
    fn determinant_is_modulus_times_phase_rate() {
        let xi = Xi::new(&enumerate_characters(5).unwrap()[1], 10.0f64, 0.0).unwrap();
        let s = SPoint::new(0.3, 7.0);
        let l = angular_momentum(&xi, s, 1e-3).unwrap();
        let rhs = xi.xi(s).unwrap().norm_sqr() * xi.phase_derivative(s, 1e-3).unwrap();
        assert!((l - rhs).abs() < 1e-8 * l.abs());
    }

    #[test]
    fn curvature_routes_agree() {
        let r = eta_curvature(&q3(), 5.0, 1e-3).unwrap();
        assert!(r.quantity > 0.0);
        assert!(r.relative_gap() < 1e-4, "{r:?}");
    }

    #[test]
    fn grid_sign_normalised() {
        let xi = q3();
        let g = eta_grid(&xi, &[1.0, 2.0, 3.0], 0.0, 1e-30).unwrap();
        assert!(g[0].eta.re > 0.0);
    }
}
