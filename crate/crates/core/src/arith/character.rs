use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Zero};

use super::{coprime, divisors, factorize, totient};
use crate::error::{domain, Result};
use crate::scalar::{cis, from_u64, Real};
use crate::sum::OrderedComplexSum;

type Turn = Ratio<u64>;

/// Reduces a fraction of a turn into `[0, 1)`.
fn wrap(r: Turn) -> Turn {
    let whole = r.to_integer();
    r - Turn::from_integer(whole)
}

/// A Dirichlet character mod `q` with exact phases.
///
/// `phase(n)` is `Some(r)` with `χ(n) = exp(2πi r)`, `r ∈ [0, 1)`, for units and
/// `None` when `gcd(n, q) > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    q: u64,
    index: usize,
    exponents: Vec<u64>,
    phases: Vec<Option<Turn>>,
    conductor: u64,
    alpha: u8,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Position in the deterministic enumeration of [`enumerate_characters`].
    pub fn index(&self) -> usize {
        self.index
    }

    /// Exponent tuple on the generators of the unit group.
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn phase(&self, n: u64) -> Option<Turn> {
        self.phases[(n % self.q) as usize]
    }

    pub fn is_zero_at(&self, n: u64) -> bool {
        self.phase(n).is_none()
    }

    /// `∠χ(n)` in radians, in `[0, 2π)`.
    pub fn angle<T: Real>(&self, n: u64) -> Option<T> {
        self.phase(n).map(|r| turn_to_radians(r))
    }

    pub fn value<T: Real>(&self, n: u64) -> Complex<T> {
        match self.phase(n) {
            Some(r) => cis(turn_to_radians::<T>(r)),
            None => Complex::zero(),
        }
    }

    /// Exact `(cos ∠χ(n), sin ∠χ(n))` with quarter turns mapped to exact values.
    pub fn cos_sin<T: Real>(&self, n: u64) -> Option<(T, T)> {
        self.phase(n).map(exact_cos_sin)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.q
    }

    pub fn is_principal(&self) -> bool {
        self.phases.iter().flatten().all(|r| r.is_zero())
    }

    /// Parity `α`: 0 when `χ(−1) = 1`, 1 when `χ(−1) = −1`.
    pub fn parity(&self) -> u8 {
        self.alpha
    }

    /// True when every value is ±1 (or 0).
    pub fn is_real(&self) -> bool {
        self.phases.iter().flatten().all(|r| *r.denom() <= 2)
    }

    /// Index of the conjugate character in the same enumeration.
    pub fn conjugate(&self, all: &[DirichletCharacter]) -> usize {
        let target: Vec<Option<Turn>> = self.phases.iter().map(|p| p.map(|r| wrap(Turn::one() - r))).collect();
        all.iter()
            .position(|c| c.phases == target)
            .expect("conjugate belongs to the group")
    }

    /// `τ(χ) = Σ_{m=1}^{q} χ(m) e^{2πim/q}`, each term's phase combined exactly.
    pub fn gauss_sum<T: Real>(&self) -> Complex<T> {
        let mut acc = OrderedComplexSum::default();
        for m in 1..=self.q {
            if let Some(r) = self.phase(m) {
                let total = wrap(r + Turn::new(m % self.q, self.q));
                acc.add(cis(turn_to_radians::<T>(total)));
            }
        }
        acc.value()
    }

    /// `Σ_{h<q, gcd(h,q)=1} χ(h)`.
    pub fn phase_sum_reduced<T: Real>(&self) -> Complex<T> {
        let mut acc = OrderedComplexSum::default();
        for r in self.phases.iter().flatten() {
            acc.add(cis(turn_to_radians::<T>(*r)));
        }
        acc.value()
    }

    /// Conductor and primitivity flag.
    pub fn conductor_and_primitivity(&self) -> (u64, bool) {
        (self.conductor, self.is_primitive())
    }

    /// The primitive character mod the conductor that induces this one.
    pub fn primitive_inducer(&self) -> DirichletCharacter {
        let d = self.conductor;
        let cands = enumerate_characters(d).expect("conductor >= 1");
        cands
            .into_iter()
            .find(|psi| {
                (1..self.q)
                    .filter(|&n| coprime(n, self.q))
                    .all(|n| psi.phase(n) == self.phase(n))
            })
            .expect("every character is induced by one mod its conductor")
    }
}

pub(crate) fn turn_to_radians<T: Real>(r: Turn) -> T {
    from_u64::<T>(*r.numer()) / from_u64::<T>(*r.denom()) * T::TAU()
}

fn exact_cos_sin<T: Real>(r: Turn) -> (T, T) {
    let (n, d) = (*r.numer(), *r.denom());
    match (n, d) {
        (0, _) => (T::one(), T::zero()),
        (1, 4) => (T::zero(), T::one()),
        (1, 2) => (-T::one(), T::zero()),
        (3, 4) => (T::zero(), -T::one()),
        _ => {
            let (s, c) = turn_to_radians::<T>(r).sin_cos();
            (c, s)
        }
    }
}

/// Cyclic factor of `(Z/qZ)^*`: generator order and discrete-log table on
/// residues mod `m`.
struct Cyclic {
    m: u64,
    order: u64,
    log: Vec<Option<u64>>,
}

fn cyclic_from_generator(m: u64, g: u64, order: u64) -> Cyclic {
    let mut log = vec![None; m as usize];
    let mut x = 1 % m;
    for k in 0..order {
        log[x as usize] = Some(k);
        x = x * g % m;
    }
    Cyclic { m, order, log }
}

fn primitive_root(p: u64, pe: u64) -> u64 {
    let phi = totient(pe);
    let fs = factorize(phi);
    (2..pe)
        .find(|&g| coprime(g, p) && fs.iter().all(|&(f, _)| pow_mod(g, phi / f, pe) != 1))
        .expect("odd prime powers have primitive roots")
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Generator decomposition: for each cyclic factor, the modulus it lives on
/// and the log of every residue. For `2^k`, `k ≥ 3` there are two factors on the
/// same modulus, generated by `−1` and `5`.
fn decompose(q: u64) -> Vec<Cyclic> {
    let mut out = Vec::new();
    for (p, e) in factorize(q) {
        let pe = p.pow(e);
        if p == 2 {
            match e {
                1 => {}
                2 => out.push(cyclic_from_generator(4, 3, 2)),
                _ => {
                    let ord5 = pe / 4;
                    let mut sign = vec![None; pe as usize];
                    let mut five = vec![None; pe as usize];
                    for a in 0..2u64 {
                        let mut x = if a == 0 { 1 } else { pe - 1 };
                        for b in 0..ord5 {
                            sign[x as usize] = Some(a);
                            five[x as usize] = Some(b);
                            x = x * 5 % pe;
                        }
                    }
                    out.push(Cyclic {
                        m: pe,
                        order: 2,
                        log: sign,
                    });
                    out.push(Cyclic {
                        m: pe,
                        order: ord5,
                        log: five,
                    });
                }
            }
        } else {
            let g = primitive_root(p, pe);
            out.push(cyclic_from_generator(pe, g, totient(pe)));
        }
    }
    out
}

/// All `φ(q)` characters mod `q`, ordered lexicographically by exponent tuple.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    if q == 0 {
        return domain("modulus q must be at least 1");
    }
    let factors = decompose(q);
    let logs: Vec<Option<Vec<u64>>> = (0..q)
        .map(|n| {
            if !coprime(n, q) {
                return None;
            }
            Some(
                factors
                    .iter()
                    .map(|c| c.log[(n % c.m) as usize].expect("unit has a log"))
                    .collect(),
            )
        })
        .collect();

    let orders: Vec<u64> = factors.iter().map(|c| c.order).collect();
    let count: u64 = orders.iter().product();
    debug_assert_eq!(count, totient(q));
    let divs = divisors(q);

    let mut out = Vec::with_capacity(count as usize);
    for index in 0..count {
        // mixed-radix digits, most significant first
        let mut exps = vec![0u64; orders.len()];
        let mut rest = index;
        for (slot, &ord) in exps.iter_mut().zip(&orders).rev() {
            *slot = rest % ord;
            rest /= ord;
        }
        let phases: Vec<Option<Turn>> = logs
            .iter()
            .map(|l| {
                l.as_ref().map(|l| {
                    let s = l
                        .iter()
                        .zip(&exps)
                        .zip(&orders)
                        .fold(Turn::zero(), |acc, ((&lg, &j), &ord)| {
                            acc + Turn::new(lg * j % ord, ord)
                        });
                    wrap(s)
                })
            })
            .collect();
        let conductor = *divs
            .iter()
            .find(|&&d| {
                (1..q)
                    .filter(|&n| n % d == 1 % d && coprime(n, q))
                    .all(|n| phases[n as usize].is_some_and(|r| r.is_zero()))
            })
            .expect("q itself always qualifies");
        let alpha = match phases[((q - 1) % q) as usize] {
            Some(r) if r.is_zero() => 0,
            Some(_) => 1,
            None => 0,
        };
        out.push(DirichletCharacter {
            q,
            index: index as usize,
            exponents: exps,
            phases,
            conductor,
            alpha,
        });
    }
    Ok(out)
}
