use num_complex::Complex;

use super::series::LSeries;
use crate::arith::{DirichletCharacter, SPoint};
use crate::error::{domain, Error, Result};
use crate::gammaphase::ln_gamma;
use crate::scalar::{cis, from_u64, lit, Real};

/// Completed `ξ(s, χ) = (q/π)^{(s+α)/2} Γ((s+α)/2) L(s, χ)` for a primitive
/// non-principal `χ`, with the normaliser that makes `η = e^{iθ₀} ξ` real on
/// the critical line.
#[derive(Clone, Debug)]
pub struct Xi<T> {
    chi: DirichletCharacter,
    series: LSeries<T>,
    root_number: Complex<T>,
    theta0: T,
}

/// Accuracy target for `L` inside `ξ`.
pub(crate) fn default_tol<T: Real>() -> T {
    lit::<T>(1e-13).max(T::epsilon() * lit(1e3))
}

impl<T: Real> Xi<T> {
    /// Evaluator valid for `|t| ≤ t_max` and `ε ≥ eps_min`.
    pub fn new(chi: &DirichletCharacter, t_max: T, eps_min: T) -> Result<Self> {
        if chi.is_principal() || !chi.is_primitive() {
            return domain(format!(
                "xi needs a primitive non-principal character; index {} mod {} has conductor {}",
                chi.index(),
                chi.modulus(),
                chi.conductor()
            ));
        }
        let series = LSeries::for_range(chi, t_max.abs() + T::one(), lit::<T>(0.5) + eps_min, default_tol())?;
        let tau = chi.gauss_sum::<T>();
        let i_alpha = if chi.parity() == 1 {
            Complex::new(T::zero(), T::one())
        } else {
            Complex::new(T::one(), T::zero())
        };
        let root_number = i_alpha * from_u64::<T>(chi.modulus()).sqrt() / tau;
        let theta0 = root_number.arg() * lit(0.5);
        Ok(Self {
            chi: chi.clone(),
            series,
            root_number,
            theta0,
        })
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.chi
    }

    /// `i^α q^{1/2} / τ(χ)`, of unit modulus.
    pub fn root_number(&self) -> Complex<T> {
        self.root_number
    }

    /// `θ₀ = ½ ∠[i^α q^{1/2} / τ(χ)]`, principal value.
    pub fn theta0(&self) -> T {
        self.theta0
    }

    /// `ln` of the prefactor `(q/π)^{(s+α)/2} Γ((s+α)/2)`.
    pub fn ln_prefactor(&self, s: SPoint<T>) -> Result<Complex<T>> {
        let z = (s.s() + from_u64::<T>(self.chi.parity() as u64)) * lit::<T>(0.5);
        let lq = (from_u64::<T>(self.chi.modulus()) / T::PI()).ln();
        Ok(z * lq + ln_gamma(z)?)
    }

    pub fn xi(&self, s: SPoint<T>) -> Result<Complex<T>> {
        let l = self.series.eval(s)?;
        Ok(self.ln_prefactor(s)?.exp() * l.value)
    }

    pub fn eta(&self, s: SPoint<T>) -> Result<Complex<T>> {
        Ok(cis(self.theta0) * self.xi(s)?)
    }

    /// `∂ξ/∂t` by central differences with one Richardson step.
    pub fn dxi_dt(&self, s: SPoint<T>, dt: T) -> Result<Complex<T>> {
        let d = |h: T| -> Result<Complex<T>> {
            let up = self.xi(SPoint::new(s.eps, s.t + h))?;
            let dn = self.xi(SPoint::new(s.eps, s.t - h))?;
            Ok((up - dn) / (h + h))
        };
        let d1 = d(dt)?;
        let d2 = d(dt * lit(0.5))?;
        let r = (d2 * lit::<T>(4.0) - d1) / lit::<T>(3.0);
        let scale = r.norm() + self.xi(s)?.norm();
        if (r - d2).norm() > lit::<T>(1e-4) * scale {
            return Err(Error::Numerical(format!(
                "Richardson disagreement in d xi/dt at t = {}",
                s.t
            )));
        }
        Ok(r)
    }

    /// `∂∠ξ/∂t = Im(ξ'/ξ)`.
    pub fn phase_derivative(&self, s: SPoint<T>, dt: T) -> Result<T> {
        Ok((self.dxi_dt(s, dt)? / self.xi(s)?).im)
    }
}

/// `ξ(s, χ)` for a primitive non-principal character.
pub fn xi_eval<T: Real>(s: SPoint<T>, chi: &DirichletCharacter) -> Result<Complex<T>> {
    Xi::new(chi, s.t, s.eps.min(-s.eps))?.xi(s)
}

/// `|ξ(1−s, χ̄) − (i^α q^{1/2}/τ(χ)) ξ(s, χ)| / |ξ(s, χ)|`.
pub fn functional_equation_residual<T: Real>(
    s: SPoint<T>,
    chi: &DirichletCharacter,
    conj: &DirichletCharacter,
) -> Result<T> {
    let eps_min = s.eps.min(-s.eps);
    let a = Xi::new(chi, s.t, eps_min)?;
    let b = Xi::new(conj, s.t, eps_min)?;
    let lhs = b.xi(SPoint::new(-s.eps, -s.t))?;
    let rhs = a.root_number() * a.xi(s)?;
    Ok((lhs - rhs).norm() / rhs.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::enumerate_characters;

    #[test]
    fn functional_equation_q3() {
        let chars = enumerate_characters(3).unwrap();
        let r = functional_equation_residual(SPoint::new(0.2f64, 5.0), &chars[1], &chars[1]).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn conjugate_pairs_mod5() {
        let chars = enumerate_characters(5).unwrap();
        for i in [1, 3] {
            let j = chars[i].conjugate(&chars);
            let r = functional_equation_residual(SPoint::new(-0.25f64, 7.5), &chars[i], &chars[j]).unwrap();
            assert!(r < 1e-10, "{r}");
        }
    }

    #[test]
    fn real_character_reflection() {
        let chi = &enumerate_characters(5).unwrap()[2];
        let xi = Xi::new(chi, 10.0f64, -0.3).unwrap();
        let a = xi.xi(SPoint::new(0.3, 4.0)).unwrap();
        let b = xi.xi(SPoint::new(0.3, -4.0)).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn modulus_preserved_by_reflection() {
        let chars = enumerate_characters(7).unwrap();
        let chi = &chars[1];
        let cj = &chars[chi.conjugate(&chars)];
        let a = Xi::new(chi, 12.0f64, -0.2).unwrap();
        let b = Xi::new(cj, 12.0f64, -0.2).unwrap();
        let s = SPoint::new(0.2, 11.0);
        let x = a.xi(s).unwrap().norm();
        let y = b.xi(SPoint::new(-0.2, -11.0)).unwrap().norm();
        assert!((x - y).abs() < 1e-8 * x);
        assert!((a.root_number().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_imprimitive() {
        let chars = enumerate_characters(9).unwrap();
        let induced = chars.iter().find(|c| c.conductor() == 3).unwrap();
        assert!(Xi::<f64>::new(induced, 5.0, 0.0).is_err());
        assert!(Xi::<f64>::new(&chars[0], 5.0, 0.0).is_err());
    }

    #[test]
    fn gamma_phase_matches_gw_route() {
        use crate::gammaphase::{prefactor_phase, PrefactorParams};
        let chi = &enumerate_characters(3).unwrap()[1];
        let xi = Xi::new(chi, 20.0f64, 0.0).unwrap();
        let s = SPoint::new(0.1, 6.0);
        let gw = prefactor_phase(s, PrefactorParams::odd(3), 1_000_000).unwrap();
        assert!((xi.ln_prefactor(s).unwrap().im - gw.extrapolated).abs() < 1e-9);
    }
}
