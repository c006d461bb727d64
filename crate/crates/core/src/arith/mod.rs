//! Characters, primes by residue class, and prime-counting utilities.

mod character;
mod li;
mod sieve;

pub use character::{enumerate_characters, DirichletCharacter};
pub use li::{li, pnt_class_ratio};
pub use sieve::{sieve_primes, PrimeTable, SIEVE_LIMIT};

use num_integer::Integer;

/// Prime factorisation by trial division, ascending primes with exponents.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn totient(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=n)
        .take_while(|k| k * k <= n)
        .filter(|k| n.is_multiple_of(*k))
        .collect();
    let upper: Vec<u64> = d.iter().rev().map(|k| n / k).filter(|&m| m * m != n).collect();
    d.extend(upper);
    d
}

pub fn coprime(a: u64, b: u64) -> bool {
    a.gcd(&b) == 1
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}


/// Point `s = 1/2 + ε + it`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SPoint<T> {
    pub eps: T,
    pub t: T,
}

impl<T: crate::scalar::Real> SPoint<T> {
    pub fn new(eps: T, t: T) -> Self {
        Self { eps, t }
    }

    pub fn on_line(t: T) -> Self {
        Self { eps: T::zero(), t }
    }

    pub fn sigma(&self) -> T {
        crate::scalar::lit::<T>(0.5) + self.eps
    }

    pub fn s(&self) -> num_complex::Complex<T> {
        num_complex::Complex::new(self.sigma(), self.t)
    }

    /// `1 − s̄`, which has the same `t` and `ε → −ε`.
    pub fn reflected(&self) -> Self {
        Self {
            eps: -self.eps,
            t: self.t,
        }
    }
}
