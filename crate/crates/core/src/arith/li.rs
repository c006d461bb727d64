use std::collections::BTreeMap;

use super::{sieve_primes, totient};
use crate::error::{domain, Result};
use crate::quad::integrate;
use crate::scalar::{lit, Real};

/// `Li(x) = ∫_2^x dy / ln y`, integrated in `u = ln y`.
pub fn li<T: Real>(x: T) -> Result<T> {
    let two = lit::<T>(2.0);
    if !(x >= two) {
        return domain(format!("Li requires x >= 2, got {x}"));
    }
    if x == two {
        return Ok(T::zero());
    }
    let q = integrate(
        |u: T| u.exp() / u,
        two.ln(),
        x.ln(),
        T::epsilon() * lit(64.0),
        lit(1e-12),
    )?;
    Ok(q.value)
}

/// `π(x; q, h)·φ(q) / Li(x)` for every reduced class `h`.
pub fn pnt_class_ratio(x: f64, q: u64) -> Result<BTreeMap<u64, f64>> {
    if !(x >= 10.0) {
        return domain(format!("PNT ratio requires x >= 10, got {x}"));
    }
    if q == 0 {
        return domain("modulus q must be at least 1");
    }
    let table = sieve_primes(x.floor() as u64, q)?;
    let per_class = li(x)? / totient(q) as f64;
    Ok(table
        .classes()
        .iter()
        .map(|(h, ps)| (*h, ps.len() as f64 / per_class))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn li_endpoints() {
        assert_eq!(li(2.0f64).unwrap(), 0.0);
        assert!(li(1.5f64).is_err());
        assert!(li(1e5f64).unwrap() < li(1e6f64).unwrap());
    }

    #[test]
    fn li_f32_matches_f64() {
        let a = li(1000.0f32).unwrap() as f64;
        let b = li(1000.0f64).unwrap();
        assert!((a - b).abs() / b < 1e-5);
    }

    #[test]
    fn pnt_small_x() {
        let r = pnt_class_ratio(100.0, 3).unwrap();
        assert_eq!(r.len(), 2);
        for v in r.values() {
            assert!((0.7..=1.3).contains(v), "{v}");
        }
        assert!(pnt_class_ratio(5.0, 3).is_err());
    }
}
