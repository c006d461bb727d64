//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = (b - a) * lit(0.5);
    let center = (a + b) * lit(0.5);
    let fc = f(center);
    let mut kronrod = fc * lit(WGK[7]);
    let mut gauss = fc * lit(WG[3]);
    for j in 0..7 {
        let dx = half * lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * lit(WG[j / 2]);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` by recursive bisection until the summed
/// Kronrod–Gauss discrepancy is below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, abs_tol: T, rel_tol: T) -> Result<Quadrature<T>> {
    if a == b {
        return Ok(Quadrature {
            value: T::zero(),
            error: T::zero(),
            evaluations: 0,
        });
    }
    const MAX_INTERVALS: usize = 20_000;
    let (v0, e0) = gk15(&f, a, b);
    // (lo, hi, value, error)
    let mut pieces = vec![(a, b, v0, e0)];
    let mut evaluations = 15;
    loop {
        let total: T = pieces.iter().map(|p| p.2).sum();
        let err: T = pieces.iter().map(|p| p.3).sum();
        let target = abs_tol.max(rel_tol * total.abs());
        if err <= target {
            return Ok(Quadrature {
                value: total,
                error: err,
                evaluations,
            });
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::Numerical(format!(
                "quadrature did not converge: error {:e} > target {:e}",
                err, target
            )));
        }
        // bisect the worst interval
        let (worst, _) =
            pieces.iter().enumerate().fold(
                (0, T::neg_infinity()),
                |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc },
            );
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = (lo + hi) * lit(0.5);
        if mid <= lo || mid >= hi {
            return Err(Error::Numerical("quadrature interval underflow".into()));
        }
        let (vl, el) = gk15(&f, lo, mid);
        let (vr, er) = gk15(&f, mid, hi);
        evaluations += 30;
        pieces.push((lo, mid, vl, el));
        pieces.push((mid, hi, vr, er));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x: f64| x.powi(5) - 2.0 * x, 0.0, 2.0, 1e-14, 1e-14).unwrap();
        assert!((q.value - (64.0 / 6.0 - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integrand() {
        let q = integrate(|x: f64| (20.0 * x).cos(), 0.0, 3.0, 1e-13, 1e-13).unwrap();
        assert!((q.value - (60.0f64).sin() / 20.0).abs() < 1e-12);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(|x: f64| x, 1.0, 1.0, 1e-9, 1e-9).unwrap().value, 0.0);
    }
}
