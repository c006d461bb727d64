use num_complex::Complex;

use super::series::l_eval;
use crate::arith::{enumerate_characters, factorize, SPoint};
use crate::error::{domain, Result};
use crate::scalar::{from_u64, lit, Real};

/// Residual of the principal or imprimitive reduction identity for one character.
#[derive(Clone, Copy, Debug)]
pub struct ReductionEntry<T> {
    pub chi_index: usize,
    pub conductor: u64,
    pub principal: bool,
    pub lhs: Complex<T>,
    pub rhs: Complex<T>,
    pub residual: T,
}

#[derive(Clone, Debug)]
pub struct ReductionReport<T> {
    pub q: u64,
    pub s: SPoint<T>,
    pub entries: Vec<ReductionEntry<T>>,
}

impl<T: Real> ReductionReport<T> {
    pub fn max_residual(&self) -> T {
        self.entries.iter().map(|e| e.residual).fold(T::zero(), T::max)
    }
}

/// Checks `L(s,χ₀) = ζ(s) Π_{p|q}(1 − p^{−s})` and
/// `L(s,χ) = L(s,ψ) Π_{p|q}(1 − ψ(p) p^{−s})` for every character mod `q`.
pub fn reduction_identities<T: Real>(s: SPoint<T>, q: u64) -> Result<ReductionReport<T>> {
    if !(s.eps > lit(0.5)) {
        return domain(format!("reduction identities need eps > 1/2, got {}", s.eps));
    }
    let tol = lit::<T>(1e-13).max(T::epsilon() * lit(1e3));
    let sc = s.s();
    let chars = enumerate_characters(q)?;
    let primes: Vec<u64> = factorize(q).iter().map(|&(p, _)| p).collect();
    let one = Complex::new(T::one(), T::zero());
    let mut entries = Vec::with_capacity(chars.len());
    for chi in &chars {
        let lhs = l_eval(s, chi, tol)?.value;
        let psi = chi.primitive_inducer();
        let base = l_eval(s, &psi, tol)?.value;
        let factor = primes.iter().fold(one, |acc, &p| {
            acc * (one - psi.value::<T>(p) * (-sc * from_u64::<T>(p).ln()).exp())
        });
        let rhs = base * factor;
        entries.push(ReductionEntry {
            chi_index: chi.index(),
            conductor: chi.conductor(),
            principal: chi.is_principal(),
            lhs,
            rhs,
            residual: (lhs - rhs).norm(),
        });
    }
    Ok(ReductionReport { q, s, entries })
}
