//! `L(s, χ)` anywhere in the strip.
//!
//! The series is split at `n = Nq`: the head is summed directly, and each
//! residue class of the tail is a Hurwitz zeta `q^{−s} ζ(s, N + a/q)`, expanded
//! by Euler–Maclaurin with a rigorous remainder bound.

use num_complex::Complex;

use crate::arith::{DirichletCharacter, SPoint};
use crate::error::{domain, Error, Result};
use crate::gammaphase::bernoulli;
use crate::scalar::{expm1_over_x, from_u64, lit, Real};
use crate::sum::{OrderedComplexSum, OrderedSum};

/// Euler–Maclaurin correction terms kept in the tail.
const EM_TERMS: usize = 12;
const MAX_BLOCKS: u64 = 1 << 22;

/// A value of `L(s, χ)`.
#[derive(Clone, Copy, Debug)]
pub struct LValue<T> {
    pub s: SPoint<T>,
    pub chi_index: usize,
    pub value: Complex<T>,
    /// Rigorous truncation bound plus a rounding allowance.
    pub abs_err_estimate: T,
    pub n_terms_used: u64,
}

/// `L(·, χ)` with a fixed split point, so that nearby evaluations share the
/// same truncation and finite-difference stencils stay smooth.
#[derive(Clone, Debug)]
pub struct LSeries<T> {
    q: u64,
    chi_index: usize,
    values: Vec<Complex<T>>,
    principal: bool,
    blocks: u64,
    em: Vec<T>,
}

fn rising_abs<T: Real>(s: Complex<T>, j: usize) -> T {
    (0..j).fold(T::one(), |acc, i| acc * (s + from_u64::<T>(i as u64)).norm())
}

impl<T: Real> LSeries<T> {
    pub fn new(chi: &DirichletCharacter, blocks: u64) -> Result<Self> {
        if blocks == 0 {
            return domain("L-series needs at least one block");
        }
        let q = chi.modulus();
        let mut fact = T::one();
        let em = (1..=EM_TERMS)
            .map(|k| {
                let kk = 2 * k as u64;
                fact = fact * from_u64::<T>(kk - 1) * from_u64::<T>(kk);
                let b = bernoulli(k);
                lit::<T>(*b.numer() as f64) / lit::<T>(*b.denom() as f64) / fact
            })
            .collect();
        Ok(Self {
            q,
            chi_index: chi.index(),
            values: (0..q).map(|a| chi.value(a)).collect(),
            principal: chi.is_principal(),
            blocks,
            em,
        })
    }

    /// Chooses the smallest power-of-two block count whose tail bound is below
    /// `tol` at `σ_min + i·t_max` (the bound grows with `|t|` and shrinks with `σ`).
    pub fn for_range(chi: &DirichletCharacter, t_max: T, sigma_min: T, tol: T) -> Result<Self> {
        let mut blocks = ((t_max.abs() + lit(2.0 * EM_TERMS as f64)) / T::TAU())
            .ceil()
            .to_u64()
            .unwrap_or(1)
            .max(1);
        let probe = SPoint::new(sigma_min - lit(0.5), t_max.abs());
        loop {
            let series = Self::new(chi, blocks)?;
            if series.tail_bound(probe) <= tol {
                return Ok(series);
            }
            blocks *= 2;
            if blocks > MAX_BLOCKS {
                return Err(Error::Resource(format!(
                    "L-series tolerance {tol:e} needs more than {MAX_BLOCKS} blocks"
                )));
            }
        }
    }

    pub fn blocks(&self) -> u64 {
        self.blocks
    }

    /// Bound on the Euler–Maclaurin remainder summed over residue classes:
    /// `q^{−σ} φ(q) · 2ζ(3)/(2π)^{2M+1} · |(s)_{2M+1}| w^{−σ−2M}/(σ+2M)`, `w = N + 1/q`.
    pub fn tail_bound(&self, s: SPoint<T>) -> T {
        let sigma = s.sigma();
        let m2 = from_u64::<T>(2 * EM_TERMS as u64);
        let w = from_u64::<T>(self.blocks) + T::one() / from_u64::<T>(self.q);
        let zeta3 = lit::<T>(1.202_056_903_159_594_3);
        let per = lit::<T>(2.0) * zeta3 / T::TAU().powf(m2 + T::one())
            * rising_abs(s.s(), 2 * EM_TERMS + 1)
            * w.powf(-sigma - m2)
            / (sigma + m2);
        let units = self.values.iter().filter(|v| v.norm() > T::zero()).count() as u64;
        per * from_u64::<T>(units) * from_u64::<T>(self.q).powf(-sigma)
    }

    pub fn eval(&self, s: SPoint<T>) -> Result<LValue<T>> {
        let sigma = s.sigma();
        if self.principal && !(sigma > T::one()) {
            return domain(format!(
                "principal character needs eps > 1/2 (pole region), got eps = {}",
                s.eps
            ));
        }
        if !(s.eps > lit(-0.5)) {
            return domain(format!("L evaluation needs eps > -1/2, got {}", s.eps));
        }
        let sc = s.s();
        let q = self.q;
        let nq = self.blocks * q;

        let mut head = OrderedComplexSum::default();
        let mut head_abs = OrderedSum::new();
        for n in 1..=nq {
            let c = self.values[(n % q) as usize];
            if c.re == T::zero() && c.im == T::zero() {
                continue;
            }
            let ln = from_u64::<T>(n).ln();
            let term = c * (-sc * ln).exp();
            head_abs.add(term.norm());
            head.add(term);
        }

        let one = Complex::new(T::one(), T::zero());
        let mut tail = OrderedComplexSum::default();
        for a in 1..=q {
            let c = self.values[(a % q) as usize];
            if c.re == T::zero() && c.im == T::zero() {
                continue;
            }
            let w = from_u64::<T>(self.blocks) + from_u64::<T>(a) / from_u64::<T>(q);
            let lw = w.ln();
            let w_s = (-sc * lw).exp();
            let pole = if self.principal || q == 1 {
                (one - sc).scale(lw).exp() / (sc - one)
            } else {
                // the constant −1/(1−s) cancels over a full set of residues
                -expm1_over_x((one - sc).scale(lw)).scale(lw)
            };
            let mut h = pole + w_s.scale(lit(0.5));
            // B_{2k}/(2k)! · (s)_{2k−1} · w^{−s−2k+1}
            let mut rising = sc;
            let mut wpow = w_s / w;
            let winv2 = T::one() / (w * w);
            for (k, &coef) in self.em.iter().enumerate() {
                h = h + rising * wpow.scale(coef);
                let kk = from_u64::<T>(2 * k as u64 + 2);
                rising = rising * (sc + kk - T::one()) * (sc + kk);
                wpow = wpow.scale(winv2);
            }
            tail.add(c * h);
        }
        let qs = (-sc * from_u64::<T>(q).ln()).exp();
        let value = head.value() + tail.value() * qs;
        let rounding = T::epsilon() * lit(64.0) * (head_abs.value() + value.norm());
        Ok(LValue {
            s,
            chi_index: self.chi_index,
            value,
            abs_err_estimate: self.tail_bound(s) + rounding,
            n_terms_used: nq,
        })
    }
}

/// `L(s, χ)` to absolute accuracy `tol`.
pub fn l_eval<T: Real>(s: SPoint<T>, chi: &DirichletCharacter, tol: T) -> Result<LValue<T>> {
    let series = LSeries::for_range(chi, s.t, s.sigma(), tol)?;
    series.eval(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::enumerate_characters;

    #[test]
    fn catalan() {
        let chi = &enumerate_characters(4).unwrap()[1];
        let v = l_eval(SPoint::new(1.5f64, 0.0), chi, 1e-13).unwrap();
        assert!((v.value.re - 0.915_965_594_177_219).abs() < 1e-12);
        assert!(v.value.im.abs() < 1e-14);
        assert!(v.abs_err_estimate <= 1e-13);
    }

    #[test]
    fn at_s_equal_one() {
        let chi = &enumerate_characters(3).unwrap()[1];
        let v = l_eval(SPoint::new(0.5f64, 0.0), chi, 1e-13).unwrap();
        let want = std::f64::consts::PI / (3.0 * 3f64.sqrt());
        assert!((v.value.re - want).abs() < 1e-12);
    }

    #[test]
    fn principal_pole_region_rejected() {
        let chi = &enumerate_characters(2).unwrap()[0];
        assert!(l_eval(SPoint::new(0.3f64, 1.0), chi, 1e-10).is_err());
        let v = l_eval(SPoint::new(1.5f64, 0.0), chi, 1e-13).unwrap();
        assert!((v.value.re - std::f64::consts::PI.powi(2) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn frozen_critical_line_value() {
        // mpmath: dirichlet(0.5 + 10j, [0, 1, -1])
        let chi = &enumerate_characters(3).unwrap()[1];
        let v = l_eval(SPoint::new(0.0f64, 10.0), chi, 1e-13).unwrap().value;
        assert!(
            (v - Complex::new(1.259_970_690_437_129_4, -0.088_079_634_510_148_06)).norm() < 1e-11,
            "{v}"
        );
    }

    #[test]
    fn split_point_does_not_matter() {
        let chi = &enumerate_characters(7).unwrap()[2];
        let s = SPoint::new(0.1f64, 13.0);
        let a = LSeries::new(chi, 16).unwrap().eval(s).unwrap();
        let b = LSeries::new(chi, 64).unwrap().eval(s).unwrap();
        assert!(a.abs_err_estimate < 1e-9);
        assert!((a.value - b.value).norm() <= a.abs_err_estimate + b.abs_err_estimate);
    }
}
