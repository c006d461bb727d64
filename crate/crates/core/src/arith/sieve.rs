use rayon::prelude::*;

use super::coprime;
use crate::error::{domain, Error, Result};

/// Largest `p_max` accepted by [`sieve_primes`] (memory budget).
pub const SIEVE_LIMIT: u64 = 4_000_000_000;

const SEGMENT: u64 = 1 << 18;

/// Primes up to `p_max`, with a class partition modulo `q`.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    p_max: u64,
    q: u64,
    primes: Vec<u64>,
    classes: Vec<(u64, Vec<u64>)>,
}

impl PrimeTable {
    pub fn p_max(&self) -> u64 {
        self.p_max
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// All primes `≤ p_max`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes coprime to `q`, ascending.
    pub fn coprime_primes(&self) -> impl Iterator<Item = u64> + '_ {
        let q = self.q;
        self.primes.iter().copied().filter(move |&p| coprime(p, q))
    }

    /// Reduced residue classes `h` with their ascending prime lists.
    pub fn classes(&self) -> &[(u64, Vec<u64>)] {
        &self.classes
    }

    pub fn class(&self, h: u64) -> Option<&[u64]> {
        let h = h % self.q;
        self.classes.iter().find(|(k, _)| *k == h).map(|(_, v)| v.as_slice())
    }

    /// `π(x)`.
    pub fn count_below(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    /// A table restricted to primes `≤ p`.
    pub fn truncated(&self, p: u64) -> PrimeTable {
        let n = self.count_below(p);
        let primes = self.primes[..n].to_vec();
        build(p.min(self.p_max), self.q, primes)
    }
}

fn simple_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut is = vec![true; n + 1];
    is[0] = false;
    if n >= 1 {
        is[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if is[i] {
            (i * i..=n).step_by(i).for_each(|j| is[j] = false);
        }
        i += 1;
    }
    (0..=n as u64).filter(|&k| is[k as usize]).collect()
}

fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    // [lo, hi)
    let len = (hi - lo) as usize;
    let mut is = vec![true; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut m = start;
        while m < hi {
            is[(m - lo) as usize] = false;
            m += p;
        }
    }
    (0..len)
        .filter(|&i| is[i] && lo + i as u64 >= 2)
        .map(|i| lo + i as u64)
        .collect()
}

fn build(p_max: u64, q: u64, primes: Vec<u64>) -> PrimeTable {
    let mut classes: Vec<(u64, Vec<u64>)> = (0..q).filter(|&h| coprime(h, q)).map(|h| (h, Vec::new())).collect();
    let mut slot = vec![usize::MAX; q as usize];
    for (i, (h, _)) in classes.iter().enumerate() {
        slot[*h as usize] = i;
    }
    for &p in &primes {
        let s = slot[(p % q) as usize];
        if s != usize::MAX {
            classes[s].1.push(p);
        }
    }
    PrimeTable {
        p_max,
        q,
        primes,
        classes,
    }
}

/// Segmented Eratosthenes up to `p_max` inclusive; segments run in parallel and
/// are concatenated in ascending order.
pub fn sieve_primes(p_max: u64, q: u64) -> Result<PrimeTable> {
    if p_max < 2 {
        return domain("p_max must be at least 2");
    }
    if q == 0 {
        return domain("modulus q must be at least 1");
    }
    if p_max > SIEVE_LIMIT {
        return Err(Error::Resource(format!(
            "p_max = {p_max} exceeds sieve budget {SIEVE_LIMIT}"
        )));
    }
    let root = (p_max as f64).sqrt() as u64 + 2;
    let base = simple_sieve(root);
    let end = p_max + 1;
    let nseg = end.div_ceil(SEGMENT);
    let pieces: Vec<Vec<u64>> = (0..nseg)
        .into_par_iter()
        .map(|k| sieve_segment(k * SEGMENT, ((k + 1) * SEGMENT).min(end), &base))
        .collect();
    let primes: Vec<u64> = pieces.concat();
    Ok(build(p_max, q, primes))
}
