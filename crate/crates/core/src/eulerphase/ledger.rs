use super::terms::{check_eps, EulerTerms};
use super::window::WindowParams;
use crate::arith::DirichletCharacter;
use crate::error::{domain, Error, Result};
use crate::quad::integrate;
use crate::scalar::{from_u64, lit, Real};
use crate::sum::OrderedSum;

fn x0_of<T: Real>(k: i64, phi: T, t: T) -> T {
    ((T::TAU() * lit::<T>(k as f64) - T::FRAC_PI_2() + phi) / t).exp()
}

fn x1_of<T: Real>(k: i64, phi: T, t: T) -> T {
    ((T::TAU() * lit::<T>(k as f64) + T::FRAC_PI_2() + phi) / t).exp()
}

/// `x₀(k,h) = e^{(2πk − π/2 + ∠χ(h))/t}` and `x₀′(k,h) = e^{(2πk + π/2 + ∠χ(h))/t}`:
/// the upward and downward zero crossings of `cos(t ln x − ∠χ(h))`.
pub fn oscillation_boundaries<T: Real>(k: i64, h: u64, t: T, chi: &DirichletCharacter) -> Result<(T, T)> {
    if !(t > T::zero()) {
        return domain(format!("oscillation boundaries need t > 0, got {t}"));
    }
    let Some(phi) = chi.angle::<T>(h) else {
        return domain(format!("h = {h} is not a unit mod {}", chi.modulus()));
    };
    Ok((x0_of(k, phi, t), x1_of(k, phi, t)))
}

fn k_min<T: Real>(phi: T, t: T) -> i64 {
    ((t * lit::<T>(2.0).ln() + T::FRAC_PI_2() - phi) / T::TAU())
        .ceil()
        .to_i64()
        .unwrap_or(0)
}

fn k_last<T: Real>(phi: T, t: T, bound: T) -> i64 {
    // largest k with x₀(k+1, h) ≤ bound
    ((t * bound.ln() + T::FRAC_PI_2() - phi) / T::TAU())
        .floor()
        .to_i64()
        .unwrap_or(0)
        - 1
}

/// Largest `k` for which every class keeps `x₀(k+1, h) ≤ bound`.
pub fn largest_valid_k<T: Real>(t: T, terms: &EulerTerms<T>, bound: T) -> i64 {
    terms
        .classes()
        .iter()
        .map(|&(_, phi)| k_last(phi, t, bound))
        .min()
        .unwrap_or(0)
}

/// One `(k, h)` oscillation: `(x₀, x₀′)` where the cosine is positive, then
/// `(x₀′, x₀(k+1))` where it is negative.
#[derive(Clone, Copy, Debug)]
pub struct LedgerCell<T> {
    pub k: i64,
    pub h: u64,
    pub phi: T,
    pub x0: T,
    pub x1: T,
    pub x0_next: T,
    /// `(ln p*/2π) Σ cos a sin(π ln p/ln p*)/p^{1/2+ε}` over primes in each half.
    pub sum_first: T,
    pub sum_second: T,
    /// Same integrand against `dLi/φ(q)` over each half.
    pub li_first: T,
    pub li_second: T,
    pub primes_first: usize,
    pub primes_second: usize,
}

impl<T: Real> LedgerCell<T> {
    pub fn o_plus_sum(&self) -> T {
        self.sum_first.abs()
    }

    pub fn o_minus_sum(&self) -> T {
        self.sum_second.abs()
    }

    /// The integral labels run the other way: `O⁻` on the first half.
    pub fn o_minus_li(&self) -> T {
        self.li_first.abs()
    }

    pub fn o_plus_li(&self) -> T {
        self.li_second.abs()
    }
}

#[derive(Clone, Debug)]
pub struct OscillationLedger<T> {
    pub t: T,
    pub eps: T,
    pub q: u64,
    pub chi_index: usize,
    pub p_star: T,
    pub k_max: i64,
    /// Ordered by class, then `k`.
    pub cells: Vec<LedgerCell<T>>,
}

impl<T: Real> OscillationLedger<T> {
    fn total(&self, f: impl Fn(&LedgerCell<T>) -> T) -> T {
        let mut acc = OrderedSum::new();
        self.cells.iter().for_each(|c| acc.add(f(c)));
        acc.value()
    }

    pub fn plus_total(&self) -> T {
        self.total(|c| c.o_plus_li() + c.o_plus_sum())
    }

    pub fn minus_total(&self) -> T {
        self.total(|c| c.o_minus_sum() + c.o_minus_li())
    }

    /// `−2 Σ` of the signed prime-sum halves: the cosine estimator restricted
    /// to the covered primes (the ledger's scale is `ln p*/2π`, the estimator's
    /// `ln p*/π`).
    pub fn reconstruct_approx(&self) -> T {
        -lit::<T>(2.0) * self.total(|c| c.sum_first + c.sum_second)
    }

    /// Upper end of the covered range for every class.
    pub fn covered_range(&self, h: u64) -> Option<(T, T)> {
        let mut it = self.cells.iter().filter(|c| c.h == h);
        let first = it.next()?;
        let last = self.cells.iter().filter(|c| c.h == h).last()?;
        Some((first.x0, last.x0_next))
    }
}

/// Cell of prime `i` by its angle: `(k, first half?)`.
fn locate<T: Real>(theta: T) -> (i64, bool) {
    let shifted = theta + T::FRAC_PI_2();
    let k = (shifted / T::TAU()).floor();
    let within = shifted - k * T::TAU();
    (k.to_i64().unwrap_or(i64::MIN), within < T::PI())
}

/// The cosine estimator over exactly the primes a ledger covers, summed in
/// ascending prime order (no grouping).
pub fn covered_approx<T: Real>(ledger: &OscillationLedger<T>, terms: &EulerTerms<T>) -> T {
    let lp = ledger.p_star.ln();
    let mut acc = OrderedSum::new();
    for i in 0..terms.len() {
        let phi = terms.classes()[terms.class_of(i)].1;
        let (k, _) = locate(ledger.t * terms.ln_p(i) - phi);
        if k < k_min(phi, ledger.t) || k > ledger.k_max {
            continue;
        }
        let (_, c) = terms.angle(i, ledger.t);
        acc.add(c * (T::PI() * terms.ln_p(i) / lp).sin() / terms.weight(i, ledger.eps));
    }
    -lp / T::PI() * acc.value()
}

fn li_mass<T: Real>(a: T, b: T, t: T, phi: T, eps: T, lp: T) -> Result<T> {
    let exponent = lit::<T>(0.5) - eps;
    let f = |u: T| (u * t - phi).cos() * (T::PI() * u / lp).sin() * (exponent * u).exp() / u;
    Ok(integrate(f, a.ln(), b.ln(), lit(1e-14), lit(1e-10))?.value)
}

/// Tags every prime `≤ p_max` with its `(k, h)` half-oscillation in one
/// ascending pass and integrates the `dLi` counterpart of each half.
pub fn build_oscillation_ledger<T: Real>(
    t: T,
    eps: T,
    terms: &EulerTerms<T>,
    window: &WindowParams<T>,
    k_max: i64,
) -> Result<OscillationLedger<T>> {
    check_eps(eps)?;
    if !(t > T::zero()) {
        return domain(format!("oscillation ledger needs t > 0, got {t}"));
    }
    let valid = largest_valid_k(t, terms, from_u64::<T>(terms.p_max()));
    if k_max > valid {
        return Err(Error::Truncation {
            p_max: terms.p_max(),
            largest_valid_k: valid,
        });
    }
    let lp = window.ln_p_star();
    let phi_count = from_u64::<T>(terms.classes().len() as u64);
    let scale = lp / T::TAU();

    // cell index: per class a contiguous run of k values
    let starts: Vec<i64> = terms.classes().iter().map(|&(_, phi)| k_min(phi, t)).collect();
    let mut offsets = Vec::with_capacity(starts.len());
    let mut cells = Vec::new();
    for (slot, &(h, phi)) in terms.classes().iter().enumerate() {
        offsets.push(cells.len());
        for k in starts[slot]..=k_max {
            cells.push(LedgerCell {
                k,
                h,
                phi,
                x0: x0_of(k, phi, t),
                x1: x1_of(k, phi, t),
                x0_next: x0_of(k + 1, phi, t),
                sum_first: T::zero(),
                sum_second: T::zero(),
                li_first: T::zero(),
                li_second: T::zero(),
                primes_first: 0,
                primes_second: 0,
            });
        }
    }
    let mut first = vec![OrderedSum::new(); cells.len()];
    let mut second = vec![OrderedSum::new(); cells.len()];
    for i in 0..terms.len() {
        let slot = terms.class_of(i);
        let phi = terms.classes()[slot].1;
        let (k, is_first) = locate(t * terms.ln_p(i) - phi);
        if k < starts[slot] || k > k_max {
            continue;
        }
        let idx = offsets[slot] + (k - starts[slot]) as usize;
        let (_, c) = terms.angle(i, t);
        let v = c * (T::PI() * terms.ln_p(i) / lp).sin() / terms.weight(i, eps);
        if is_first {
            first[idx].add(v);
            cells[idx].primes_first += 1;
        } else {
            second[idx].add(v);
            cells[idx].primes_second += 1;
        }
    }
    for (idx, cell) in cells.iter_mut().enumerate() {
        cell.sum_first = scale * first[idx].value();
        cell.sum_second = scale * second[idx].value();
        cell.li_first = scale / phi_count * li_mass(cell.x0, cell.x1, t, cell.phi, eps, lp)?;
        cell.li_second = scale / phi_count * li_mass(cell.x1, cell.x0_next, t, cell.phi, eps, lp)?;
    }
    Ok(OscillationLedger {
        t,
        eps,
        q: terms.modulus(),
        chi_index: terms.chi_index(),
        p_star: window.p_star(),
        k_max,
        cells,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhoRatios<T> {
    pub rho: T,
    pub rho_plus: T,
    pub rho_minus: T,
}

/// `ρ = Σ(O⁺_Li + O⁺_Σ)(ε″) / Σ(O⁻_Σ + O⁻_Li)(ε′)`, with `ρ⁺` and `ρ⁻` the
/// same-label ratios between the two ledgers.
pub fn rho_ratios<T: Real>(at_eps2: &OscillationLedger<T>, at_eps1: &OscillationLedger<T>) -> Result<RhoRatios<T>> {
    let same = at_eps2.t == at_eps1.t
        && at_eps2.q == at_eps1.q
        && at_eps2.chi_index == at_eps1.chi_index
        && at_eps2.p_star == at_eps1.p_star
        && at_eps2.k_max == at_eps1.k_max
        && at_eps2.cells.len() == at_eps1.cells.len();
    if !same {
        return domain("ledgers differ in t, character, window or k range");
    }
    let (p2, m2) = (at_eps2.plus_total(), at_eps2.minus_total());
    let (p1, m1) = (at_eps1.plus_total(), at_eps1.minus_total());
    if p1 == T::zero() || m1 == T::zero() {
        return Err(Error::Degenerate("all oscillation masses vanish".into()));
    }
    Ok(RhoRatios {
        rho: p2 / m1,
        rho_plus: p2 / p1,
        rho_minus: m2 / m1,
    })
}

/// `(ln p*/π) Σ_h φ(q)^{−1} ∫_2^{p_max} cos(t ln y − ∠χ(h)) sin(π ln y/ln p*) y^{−1/2−ε} dLi(y)`.
#[derive(Clone, Debug)]
pub struct HDepIntegral<T> {
    pub total: T,
    pub per_class: Vec<(u64, T)>,
}

pub fn hdep_integral<T: Real>(
    t: T,
    eps: T,
    chi: &DirichletCharacter,
    window: &WindowParams<T>,
) -> Result<HDepIntegral<T>> {
    let q = chi.modulus();
    let lp = window.ln_p_star();
    let top = window.p_max();
    if !top.is_finite() {
        return domain("the dLi combination needs a finite p_max");
    }
    let units: Vec<u64> = (1..=q).filter(|&h| crate::arith::coprime(h, q)).collect();
    let phi_q = from_u64::<T>(units.len() as u64);
    let mut per_class = Vec::with_capacity(units.len());
    let mut acc = OrderedSum::new();
    for h in units {
        let phi = chi.angle::<T>(h).expect("unit");
        let v = lp / T::PI() / phi_q * li_mass(lit(2.0), top, t, phi, eps, lp)?;
        acc.add(v);
        per_class.push((h % q, v));
    }
    Ok(HDepIntegral {
        total: acc.value(),
        per_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{enumerate_characters, sieve_primes};
    use crate::eulerphase::windowed_ratio_approx;

    fn setup(q: u64, idx: usize, p_max: u64) -> (DirichletCharacter, EulerTerms<f64>, WindowParams<f64>) {
        let chi = enumerate_characters(q).unwrap()[idx].clone();
        let terms = EulerTerms::new(&chi, &sieve_primes(p_max, q).unwrap()).unwrap();
        (chi, terms, WindowParams::at_cutoff(p_max).unwrap())
    }

    #[test]
    fn boundary_example() {
        let chi = &enumerate_characters(3).unwrap()[0];
        let (x0, x1) = oscillation_boundaries(1, 1, std::f64::consts::PI, chi).unwrap();
        assert!((x0 - 1.5f64.exp()).abs() < 1e-12);
        // cos(π ln x) crosses upward at x0: bisection oracle
        let f = |x: f64| (std::f64::consts::PI * x.ln()).cos();
        let (mut a, mut b) = (4.0, 5.0);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if f(m) < 0.0 {
                a = m
            } else {
                b = m
            }
        }
        assert!((a - x0).abs() < 1e-10);
        assert!(f(x0 - 1e-3) < 0.0 && f(x0 + 1e-3) > 0.0);
        assert!(f(x1 - 1e-3) > 0.0 && f(x1 + 1e-3) < 0.0);
        assert!(oscillation_boundaries(1, 1, 0.0, chi).is_err());
    }

    #[test]
    fn widths_and_abutment() {
        let chi = &enumerate_characters(5).unwrap()[1];
        let t = 12.0f64;
        for k in 30..40 {
            let (x0, x1) = oscillation_boundaries(k, 2, t, chi).unwrap();
            let (n0, _) = oscillation_boundaries(k + 1, 2, t, chi).unwrap();
            assert!(x0 < x1 && x1 < n0);
            let rel = |a: f64, b: f64| (a - b).abs() / b;
            // Δx ≈ (π/t) x₀ up to the e^{π/t} − 1 curvature
            assert!(rel(x1 - x0, std::f64::consts::PI / t * x0) < 0.15);
            assert!(rel(n0 - x1, std::f64::consts::PI / t * x1) < 0.15);
        }
    }

    #[test]
    fn ledger_structure() {
        let (_, terms, w) = setup(3, 1, 100_000);
        let k = largest_valid_k(10.0, &terms, 1e5);
        let l = build_oscillation_ledger(10.0, 0.0, &terms, &w, k).unwrap();
        for h in [1u64, 2] {
            let cells: Vec<_> = l.cells.iter().filter(|c| c.h == h).collect();
            for pair in cells.windows(2) {
                assert_eq!(pair[0].x0_next, pair[1].x0);
                assert!(pair[0].x0 < pair[1].x0);
            }
            assert!(cells[0].x0 >= 2.0);
        }
        // sign structure: every prime in a half has the same cosine sign
        for c in &l.cells {
            assert!(c.sum_first >= 0.0 && c.sum_second <= 0.0, "{c:?}");
            assert!(c.li_first >= 0.0 && c.li_second <= 0.0);
        }
        let err = build_oscillation_ledger(10.0, 0.0, &terms, &w, k + 5).unwrap_err();
        assert_eq!(
            err,
            Error::Truncation {
                p_max: 100_000,
                largest_valid_k: k
            }
        );
    }

    #[test]
    fn reconstruction_is_regrouping() {
        let (_, terms, w) = setup(3, 1, 200_000);
        let k = largest_valid_k(10.0, &terms, 2e5);
        let l = build_oscillation_ledger(10.0, 0.0, &terms, &w, k).unwrap();
        assert!((l.reconstruct_approx() - covered_approx(&l, &terms)).abs() < 1e-9);
        // and it is a sizeable part of the full estimator
        let full = windowed_ratio_approx(10.0, 0.0, &terms, &w).unwrap();
        assert!(full.is_finite());
    }

    #[test]
    fn masses_shrink_with_eps() {
        let (_, terms, w) = setup(3, 1, 100_000);
        let k = largest_valid_k(10.0, &terms, 1e5);
        let a = build_oscillation_ledger(10.0, 0.0, &terms, &w, k).unwrap();
        let b = build_oscillation_ledger(10.0, 0.2, &terms, &w, k).unwrap();
        for (x, y) in a.cells.iter().zip(&b.cells) {
            assert!(y.o_plus_sum() <= x.o_plus_sum() && y.o_minus_sum() <= x.o_minus_sum());
            assert!(y.o_plus_li() < x.o_plus_li() && y.o_minus_li() < x.o_minus_li());
        }
        let same = rho_ratios(&a, &a).unwrap();
        assert_eq!((same.rho_plus, same.rho_minus), (1.0, 1.0));
        let r = rho_ratios(&b, &a).unwrap();
        assert!(r.rho_plus < 1.0 && r.rho_minus < 1.0);
    }

    #[test]
    fn li_tracks_prime_sum_for_large_k() {
        let (_, terms, w) = setup(3, 1, 1_000_000);
        let k = largest_valid_k(10.0, &terms, 1e6);
        let l = build_oscillation_ledger(10.0, 0.0, &terms, &w, k).unwrap();
        for c in l.cells.iter().filter(|c| c.x0 > 1e4) {
            let r1 = c.o_plus_sum() / c.o_minus_li();
            let r2 = c.o_minus_sum() / c.o_plus_li();
            assert!((0.8..=1.25).contains(&r1) && (0.8..=1.25).contains(&r2), "{c:?}");
        }
    }

    #[test]
    fn hdep_combination_cancels() {
        for q in [3u64, 5] {
            let chi = enumerate_characters(q)
                .unwrap()
                .into_iter()
                .find(|c| c.is_primitive() && c.parity() == 1)
                .unwrap();
            let w = WindowParams::at_cutoff(1_000_000).unwrap();
            for t in [5.0f64, 10.0] {
                let r = hdep_integral(t, 0.0, &chi, &w).unwrap();
                let biggest = r.per_class.iter().map(|c| c.1.abs()).fold(0.0, f64::max);
                assert!(r.total.abs() < 0.05);
                assert!(r.total.abs() < 1e-8 * biggest, "{r:?}");
            }
        }
    }
}
