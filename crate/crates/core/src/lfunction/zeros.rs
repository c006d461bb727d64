use super::xi::Xi;
use crate::arith::{DirichletCharacter, SPoint};
use crate::error::{domain, Result};
use crate::scalar::{from_u64, lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroKind {
    /// Sign change between adjacent grid points.
    Simple,
    /// Two sign changes inside one cell, found through the curvature test.
    Split,
    /// `|η|` dips below the floor without a sign change.
    SuspectedMultiple,
}

#[derive(Clone, Copy, Debug)]
pub struct ZeroRecord<T> {
    pub t_zero: T,
    pub chi_index: usize,
    pub bracket: (T, T),
    pub tolerance: T,
    /// Signs of `Re η` at the bracket ends.
    pub signs: (i8, i8),
    pub kind: ZeroKind,
}

const REFINE_TOL: f64 = 1e-8;
const MULTIPLE_FLOOR: f64 = 1e-10;

fn sign<T: Real>(x: T) -> i8 {
    if x < T::zero() {
        -1
    } else {
        1
    }
}

fn bisect<T: Real, F: Fn(T) -> Result<T>>(f: &F, mut lo: T, mut hi: T, f_lo: T) -> Result<(T, T)> {
    let tol = lit::<T>(REFINE_TOL);
    let s_lo = sign(f_lo);
    while hi - lo > tol {
        let mid = (lo + hi) * lit(0.5);
        if sign(f(mid)?) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Golden-section minimiser of `|f|` on `[a, b]`, returning `(t, f(t))`.
fn min_abs<T: Real, F: Fn(T) -> Result<T>>(f: &F, mut a: T, mut b: T) -> Result<(T, T)> {
    let g = lit::<T>(0.618_033_988_749_894_9);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..60 {
        if fc.abs() < fd.abs() {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc.abs() < fd.abs() { (c, fc) } else { (d, fd) })
}

/// Sign changes of `Re η(1/2 + it)` on a grid over `[t_lo, t_hi]`, refined by
/// bisection. Negative `t` is accepted (symmetry scans).
pub fn find_zeros_on_line<T: Real>(
    chi: &DirichletCharacter,
    t_lo: T,
    t_hi: T,
    grid_step: T,
) -> Result<Vec<ZeroRecord<T>>> {
    if !(t_hi > t_lo) || !(grid_step > T::zero()) {
        return domain(format!(
            "need t_hi > t_lo and a positive step, got [{t_lo}, {t_hi}] step {grid_step}"
        ));
    }
    let xi = Xi::new(chi, t_lo.abs().max(t_hi.abs()), T::zero())?;
    let f = |t: T| xi.eta(SPoint::on_line(t)).map(|v| v.re);
    let n = ((t_hi - t_lo) / grid_step).ceil().to_u64().unwrap_or(0);
    let grid: Vec<T> = (0..=n)
        .map(|i| (t_lo + from_u64::<T>(i) * grid_step).min(t_hi))
        .collect();
    let vals: Vec<T> = grid.iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let record = |lo: T, hi: T, f_lo: T, f_hi: T, kind| -> Result<ZeroRecord<T>> {
        let (a, b) = bisect(&f, lo, hi, f_lo)?;
        Ok(ZeroRecord {
            t_zero: (a + b) * lit(0.5),
            chi_index: chi.index(),
            bracket: (a, b),
            tolerance: lit(REFINE_TOL),
            signs: (sign(f_lo), sign(f_hi)),
            kind,
        })
    };

    let mut out = Vec::new();
    for i in 1..grid.len() {
        let (a, b) = (grid[i - 1], grid[i]);
        let (fa, fb) = (vals[i - 1], vals[i]);
        if sign(fa) != sign(fb) {
            out.push(record(a, b, fa, fb, ZeroKind::Simple)?);
            continue;
        }
        // curvature test: |η| at a local minimum inside this cell or the next
        let dips = i + 1 < grid.len() && vals[i].abs() < vals[i - 1].abs() && vals[i].abs() < vals[i + 1].abs();
        let local = i + 1 < grid.len() && sign(vals[i + 1]) == sign(fb);
        if dips && local {
            let (tm, fm) = min_abs(&f, a, grid[i + 1])?;
            if sign(fm) != sign(fb) {
                out.push(record(a, tm, fa, fm, ZeroKind::Split)?);
                out.push(record(tm, grid[i + 1], fm, vals[i + 1], ZeroKind::Split)?);
            } else if fm.abs() < lit(MULTIPLE_FLOOR) {
                out.push(ZeroRecord {
                    t_zero: tm,
                    chi_index: chi.index(),
                    bracket: (a, grid[i + 1]),
                    tolerance: lit(REFINE_TOL),
                    signs: (sign(fa), sign(vals[i + 1])),
                    kind: ZeroKind::SuspectedMultiple,
                });
            }
        }
    }
    out.sort_by(|x, y| x.t_zero.partial_cmp(&y.t_zero).expect("finite zeros"));
    out.dedup_by(|x, y| (x.t_zero - y.t_zero).abs() < lit(1e-6));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::enumerate_characters;

    #[test]
    fn q3_first_zero() {
        let z = find_zeros_on_line(&enumerate_characters(3).unwrap()[1], 0.0f64, 12.0, 0.1).unwrap();
        // the second zero on this range sits at 11.2492
        assert_eq!(z.len(), 2, "{z:?}");
        assert!(z[0].t_zero > 8.0 && z[0].t_zero < 8.1);
        assert!((z[0].t_zero - 8.039_737_155_681).abs() < 1e-7);
        assert!((z[1].t_zero - 11.249_206_207_773).abs() < 1e-6);
        assert_eq!(z[0].kind, ZeroKind::Simple);
    }

    #[test]
    fn q4_first_zero() {
        let z = find_zeros_on_line(&enumerate_characters(4).unwrap()[1], 0.0f64, 10.0, 0.1).unwrap();
        assert!(z[0].t_zero > 6.0 && z[0].t_zero < 6.1);
    }

    #[test]
    fn q5_odd_none_below_four() {
        let chars = enumerate_characters(5).unwrap();
        for c in chars.iter().filter(|c| c.parity() == 1) {
            let z = find_zeros_on_line(c, 0.0f64, 10.0, 0.05).unwrap();
            assert!(!z.is_empty());
            assert!(z.iter().all(|r| r.t_zero > 4.0));
        }
    }

    #[test]
    fn real_character_symmetric() {
        let chi = &enumerate_characters(5).unwrap()[2];
        let z = find_zeros_on_line(chi, -15.0f64, 15.0, 0.05).unwrap();
        let pos: Vec<f64> = z.iter().filter(|r| r.t_zero > 0.0).map(|r| r.t_zero).collect();
        let neg: Vec<f64> = z.iter().filter(|r| r.t_zero < 0.0).map(|r| -r.t_zero).rev().collect();
        assert_eq!(pos.len(), neg.len());
        for (a, b) in pos.iter().zip(&neg) {
            assert!((a - b).abs() < 1e-7);
        }
    }
}
