use crate::error::{domain, Error, Result};
use crate::scalar::{from_u64, lit, Real};
use crate::sum::OrderedSum;

use super::stirling::{stirling_dphase_dt, StirlingConfig};
use super::PrefactorParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Stirling,
    Gw,
}

/// Central difference in `ε` of the GW `t`-derivative, summed termwise.
///
/// `∂_t ∠Γ` carries `ε` only through `g(d) = −d/(d²+t²)`, `d = 2n + c`. Each
/// quotient `(g(a) − g(b))/(a − b)` at the rounded stencil points `a = d+h`,
/// `b = d−h` is formed as `(ab−t²)/((a²+t²)(b²+t²))`.
fn gw_central<T: Real>(t: T, alpha: u8, h: T, n_terms: u64) -> T {
    let c0 = lit::<T>(0.5) + from_u64(alpha as u64);
    let t2 = t * t;
    let two = lit::<T>(2.0);
    let mut acc = OrderedSum::new();
    for n in 0..=n_terms {
        let d = two * from_u64::<T>(n) + c0;
        let (a, b) = (d + h, d - h);
        acc.add((a * b - t2) / ((a * a + t2) * (b * b + t2)));
    }
    acc.value()
}

fn stirling_central<T: Real>(t: T, alpha: u8, h: T, cfg: &StirlingConfig) -> Result<T> {
    let params = if alpha == 2 {
        PrefactorParams::zeta()
    } else {
        PrefactorParams::for_parity(1, alpha)
    };
    let up = stirling_dphase_dt(t, h, params, cfg)?;
    let dn = stirling_dphase_dt(t, -h, params, cfg)?;
    Ok((up - dn) / (two::<T>() * h))
}

fn two<T: Real>() -> T {
    lit(2.0)
}

/// `∂²∠Γ((s+α)/2)/∂ε∂t` at `ε = 0` by central differences in `ε` with a
/// three-step Richardson ladder `h, h/2, h/4`, `h = max(1e−5, 1e−4·t)`.
pub fn mixed_second_derivative<T: Real>(t: T, alpha: u8, route: Route, n_terms: u64) -> Result<T> {
    if !(t > T::zero()) {
        return domain(format!("mixed derivative requires t > 0, got {t}"));
    }
    if alpha > 2 {
        return domain(format!("alpha must be 0, 1 or 2, got {alpha}"));
    }
    let h = lit::<T>(1e-5).max(lit::<T>(1e-4) * t);
    let hs = [h, h / lit(2.0), h / lit(4.0)];
    let d: Vec<T> = match route {
        Route::Gw => {
            if n_terms < 100_000 {
                return domain(format!("GW route needs N >= 1e5, got {n_terms}"));
            }
            hs.iter().map(|&h| gw_central(t, alpha, h, n_terms)).collect()
        }
        Route::Stirling => {
            let cfg = StirlingConfig::default();
            hs.iter()
                .map(|&h| stirling_central(t, alpha, h, &cfg))
                .collect::<Result<_>>()?
        }
    };
    let four = lit::<T>(4.0);
    let three = lit::<T>(3.0);
    let r12 = (four * d[1] - d[0]) / three;
    let r23 = (four * d[2] - d[1]) / three;
    if (r12 - r23).abs() > lit::<T>(1e-6) * r23.abs() + lit(1e-12) {
        return Err(Error::Numerical(format!(
            "Richardson ladder disagrees at t = {t}: {r12:e} vs {r23:e}"
        )));
    }
    Ok(r23)
}

#[cfg(test)]
mod tests {
    use super::*;

    // ¼ Re ψ'((1/2 + α + it)/2), from mpmath
    const T10: [(u8, f64); 3] = [
        (0, -0.002_519_158_685_773),
        (1, 0.002_519_158_685_773),
        (2, 0.007_406_152_723_982),
    ];

    #[test]
    fn three_cases_at_t10() {
        for (alpha, want) in T10 {
            let g = mixed_second_derivative(10.0f64, alpha, Route::Gw, 1_000_000).unwrap();
            let s = mixed_second_derivative(10.0f64, alpha, Route::Stirling, 0).unwrap();
            // the GW tail beyond N contributes about 1/(4N)
            assert!((g - want).abs() < 3e-7, "gw alpha {alpha}: {g}");
            assert!((s - want).abs() < 1e-6, "stirling alpha {alpha}: {s}");
        }
    }

    #[test]
    fn gw_needs_many_terms() {
        assert!(mixed_second_derivative(1.0f64, 0, Route::Gw, 1000).is_err());
        assert!(mixed_second_derivative(0.0f64, 0, Route::Gw, 1_000_000).is_err());
    }

    #[test]
    fn scaling_to_quarter_over_t2() {
        for (t, tol) in [(20.0f64, 0.05), (50.0, 0.01)] {
            let m = mixed_second_derivative(t, 1, Route::Gw, 1_000_000).unwrap();
            assert!((m * 4.0 * t * t - 1.0).abs() < tol);
        }
    }
}
