use crate::arith::{DirichletCharacter, PrimeTable, SPoint};
use crate::error::{domain, Error, Result};
use crate::scalar::{from_u64, lit, Real};
use crate::sum::OrderedSum;

/// Primes coprime to `q` with everything the phase sums need per term,
/// ascending in `p`.
#[derive(Clone, Debug)]
pub struct EulerTerms<T> {
    q: u64,
    chi_index: usize,
    p_max: u64,
    primes: Vec<u64>,
    ln_p: Vec<T>,
    cos_phi: Vec<T>,
    sin_phi: Vec<T>,
    class_slot: Vec<u32>,
    /// `(h, ∠χ(h))` for each reduced class, in ascending `h`.
    classes: Vec<(u64, T)>,
}

impl<T: Real> EulerTerms<T> {
    pub fn new(chi: &DirichletCharacter, table: &PrimeTable) -> Result<Self> {
        if table.modulus() != chi.modulus() {
            return domain(format!(
                "prime table partitioned mod {} but character is mod {}",
                table.modulus(),
                chi.modulus()
            ));
        }
        let q = chi.modulus();
        let classes: Vec<(u64, T)> = table
            .classes()
            .iter()
            .map(|(h, _)| (*h, chi.angle::<T>(*h).expect("reduced class")))
            .collect();
        let mut slot_of = vec![u32::MAX; q as usize];
        for (i, (h, _)) in classes.iter().enumerate() {
            slot_of[*h as usize] = i as u32;
        }
        let primes: Vec<u64> = table.coprime_primes().collect();
        debug_assert!(primes.windows(2).all(|w| w[0] < w[1]), "primes must ascend");
        let mut cos_phi = Vec::with_capacity(primes.len());
        let mut sin_phi = Vec::with_capacity(primes.len());
        let mut class_slot = Vec::with_capacity(primes.len());
        for &p in &primes {
            let (c, s) = chi.cos_sin::<T>(p).expect("coprime prime");
            cos_phi.push(c);
            sin_phi.push(s);
            class_slot.push(slot_of[(p % q) as usize]);
        }
        let ln_p = primes.iter().map(|&p| from_u64::<T>(p).ln()).collect();
        Ok(Self {
            q,
            chi_index: chi.index(),
            p_max: table.p_max(),
            primes,
            ln_p,
            cos_phi,
            sin_phi,
            class_slot,
            classes,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn chi_index(&self) -> usize {
        self.chi_index
    }

    pub fn p_max(&self) -> u64 {
        self.p_max
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn ln_p(&self, i: usize) -> T {
        self.ln_p[i]
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_slot[i] as usize
    }

    pub fn classes(&self) -> &[(u64, T)] {
        &self.classes
    }

    /// Prefix of the table with `p ≤ p`.
    pub fn truncated(&self, p: u64) -> Self {
        let n = self.primes.partition_point(|&x| x <= p);
        Self {
            q: self.q,
            chi_index: self.chi_index,
            p_max: p.min(self.p_max),
            primes: self.primes[..n].to_vec(),
            ln_p: self.ln_p[..n].to_vec(),
            cos_phi: self.cos_phi[..n].to_vec(),
            sin_phi: self.sin_phi[..n].to_vec(),
            class_slot: self.class_slot[..n].to_vec(),
            classes: self.classes.clone(),
        }
    }

    /// `(sin a, cos a)` with `a = t ln p − ∠χ(p)`, by the addition formula.
    #[inline]
    pub fn angle(&self, i: usize, t: T) -> (T, T) {
        let (st, ct) = (t * self.ln_p[i]).sin_cos();
        let (c, s) = (self.cos_phi[i], self.sin_phi[i]);
        (st * c - ct * s, ct * c + st * s)
    }

    /// `p^{1/2+ε}`.
    #[inline]
    pub fn weight(&self, i: usize, eps: T) -> T {
        ((lit::<T>(0.5) + eps) * self.ln_p[i]).exp()
    }

    /// `atan(sin a / (p^{1/2+ε} − cos a))`.
    #[inline]
    pub fn arctan_term(&self, i: usize, t: T, eps: T) -> Result<T> {
        let (s, c) = self.angle(i, t);
        let den = self.weight(i, eps) - c;
        if den.abs() < lit(1e-14) {
            return Err(Error::DegenerateArctan {
                p: self.primes[i],
                denominator: den.to_f64().unwrap_or(0.0),
            });
        }
        Ok((s / den).atan())
    }
}

pub(crate) fn check_eps<T: Real>(eps: T) -> Result<()> {
    if !(eps > lit(-0.5)) {
        return domain(format!("Euler-product sums need eps > -1/2, got {eps}"));
    }
    Ok(())
}

/// `−Σ_{p ≤ p_max} atan(sin a / (p^{1/2+ε} − cos a))` in ascending `p`.
pub fn euler_phase<T: Real>(s: SPoint<T>, terms: &EulerTerms<T>) -> Result<T> {
    check_eps(s.eps)?;
    let mut acc = OrderedSum::new();
    for i in 0..terms.len() {
        acc.add(-terms.arctan_term(i, s.t, s.eps)?);
    }
    Ok(acc.value())
}

/// Euler phase with each term tagged by residue class.
#[derive(Clone, Debug)]
pub struct ClassPhase<T> {
    pub total: T,
    /// `(h, ∠χ(h), partial sum over p ≡ h)`.
    pub by_class: Vec<(u64, T, T)>,
}

pub fn euler_phase_by_class<T: Real>(s: SPoint<T>, terms: &EulerTerms<T>) -> Result<ClassPhase<T>> {
    check_eps(s.eps)?;
    let mut total = OrderedSum::new();
    let mut parts = vec![OrderedSum::new(); terms.classes().len()];
    for i in 0..terms.len() {
        let v = -terms.arctan_term(i, s.t, s.eps)?;
        total.add(v);
        parts[terms.class_of(i)].add(v);
    }
    Ok(ClassPhase {
        total: total.value(),
        by_class: terms
            .classes()
            .iter()
            .zip(parts)
            .map(|(&(h, phi), acc)| (h, phi, acc.value()))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{enumerate_characters, sieve_primes};
    use num_complex::Complex;

    fn terms(q: u64, idx: usize, p_max: u64) -> EulerTerms<f64> {
        let chi = &enumerate_characters(q).unwrap()[idx];
        EulerTerms::new(chi, &sieve_primes(p_max, q).unwrap()).unwrap()
    }

    #[test]
    fn real_character_at_t0() {
        let t = terms(5, 2, 10_000);
        assert_eq!(euler_phase(SPoint::new(0.0, 0.0), &t).unwrap(), 0.0);
    }

    #[test]
    fn complex_log_oracle() {
        // −Im Σ Log(1 − χ(p) p^{−s}) at ε = 2
        let chi = &enumerate_characters(3).unwrap()[1];
        let table = sieve_primes(100_000, 3).unwrap();
        let t = EulerTerms::new(chi, &table).unwrap();
        let s = Complex::new(2.5, 1.0);
        let oracle: f64 = -table
            .coprime_primes()
            .map(|p| {
                (Complex::new(1.0, 0.0) - chi.value::<f64>(p) * (-s * (p as f64).ln()).exp())
                    .ln()
                    .im
            })
            .sum::<f64>();
        let got = euler_phase(SPoint::new(2.0, 1.0), &t).unwrap();
        assert!((got - oracle).abs() < 1e-10, "{got} vs {oracle}");
    }

    #[test]
    fn tail_decay_at_half() {
        let t = terms(3, 1, 200_000);
        let a = euler_phase(SPoint::new(0.5, 7.0), &t.truncated(100_000)).unwrap();
        let b = euler_phase(SPoint::new(0.5, 7.0), &t).unwrap();
        assert!((a - b).abs() < 10.0 / (1e5f64).sqrt());
    }

    #[test]
    fn class_tags_sum_to_total() {
        let t = terms(7, 1, 50_000);
        let r = euler_phase_by_class(SPoint::new(0.0, 9.0), &t).unwrap();
        let parts: f64 = r.by_class.iter().map(|c| c.2).sum();
        assert!((parts - r.total).abs() < 1e-10);
        assert_eq!(r.total, euler_phase(SPoint::new(0.0, 9.0), &t).unwrap());
    }

    #[test]
    fn degenerate_denominator() {
        let t = terms(3, 1, 10);
        assert!(euler_phase(SPoint::new(-0.5, 0.0), &t).is_err());
        // principal χ, t = 0: cos a = 1 and p^{1/2+ε} rounds to 1 at p = 2
        let chi = &enumerate_characters(5).unwrap()[0];
        let u = EulerTerms::<f64>::new(chi, &sieve_primes(10, 5).unwrap()).unwrap();
        let e = euler_phase(SPoint::new(-0.5 + 1e-16, 0.0), &u).unwrap_err();
        assert!(matches!(e, Error::DegenerateArctan { p: 2, .. }));
    }

    #[test]
    fn mismatched_modulus() {
        let chi = &enumerate_characters(5).unwrap()[1];
        assert!(EulerTerms::<f64>::new(chi, &sieve_primes(100, 3).unwrap()).is_err());
    }
}
