use rayon::prelude::*;

use crate::arith::SPoint;
use crate::error::Result;
use crate::scalar::{from_u64, lit, Real};

use super::gw::prefactor_dphase_dt;
use super::mixed::{mixed_second_derivative, Route};
use super::PrefactorParams;

/// Outcome of a sign-change search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Crossing<T> {
    /// Root refined by bisection, with the final bracket.
    At {
        t: T,
        lo: T,
        hi: T,
    },
    AlwaysPositive,
    AlwaysNegative,
    /// Mixed signs on the grid without a clean first bracket.
    Indeterminate,
}

impl<T: Real> Crossing<T> {
    pub fn t(&self) -> Option<T> {
        match self {
            Crossing::At { t, .. } => Some(*t),
            _ => None,
        }
    }
}

fn first_sign_change<T: Real, F>(f: &F, grid: &[T], tol: T) -> Result<Crossing<T>>
where
    F: Fn(T) -> Result<T> + Sync,
{
    // parallel chunks, stopping at the first chunk with a sign change
    let mut vals: Vec<T> = Vec::with_capacity(grid.len());
    let mut found = None;
    for chunk in grid.chunks(64) {
        let part: Vec<T> = chunk.par_iter().map(|&t| f(t)).collect::<Result<_>>()?;
        vals.extend(part);
        found = (1..vals.len()).find(|&i| (vals[i - 1] < T::zero()) != (vals[i] < T::zero()));
        if found.is_some() {
            break;
        }
    }
    let Some(i) = found else {
        return Ok(if vals.iter().all(|&v| v > T::zero()) {
            Crossing::AlwaysPositive
        } else if vals.iter().all(|&v| v < T::zero()) {
            Crossing::AlwaysNegative
        } else {
            Crossing::Indeterminate
        });
    };
    let (mut lo, mut hi) = (grid[i - 1], grid[i]);
    let neg_lo = vals[i - 1] < T::zero();
    while hi - lo > tol {
        let mid = (lo + hi) * lit(0.5);
        if (f(mid)? < T::zero()) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Crossing::At {
        t: (lo + hi) * lit(0.5),
        lo,
        hi,
    })
}

fn crossing_grid<T: Real>() -> Vec<T> {
    // fine near the origin where the thresholds live, coarser out to 100
    let fine = (1..=500u64).map(|i| from_u64::<T>(i) * lit(0.01));
    let coarse = (1..=380u64).map(|i| lit::<T>(5.0) + from_u64::<T>(i) * lit(0.25));
    fine.chain(coarse).collect()
}

/// First root in `(0, 100]` of `½ln(q/π) + ∂∠Γ/∂t` at `ε = 0`, to `1e−4`.
pub fn find_t_cross<T: Real>(params: PrefactorParams, n_terms: u64) -> Result<Crossing<T>> {
    let f = |t: T| prefactor_dphase_dt(SPoint::on_line(t), params, n_terms).map(|v| v.extrapolated);
    first_sign_change(&f, &crossing_grid(), lit(1e-4))
}

/// First sign change of the mixed derivative on `[t_lo, t_hi]` (grid `step`),
/// refined to `1e−7`.
pub fn find_mixed_crossing<T: Real>(
    alpha: u8,
    route: Route,
    n_terms: u64,
    t_lo: T,
    t_hi: T,
    step: T,
) -> Result<Crossing<T>> {
    let n = ((t_hi - t_lo) / step).floor().to_u64().unwrap_or(0);
    let grid: Vec<T> = (0..=n).map(|i| t_lo + from_u64::<T>(i) * step).collect();
    let f = |t: T| mixed_second_derivative(t, alpha, route, n_terms);
    first_sign_change(&f, &grid, lit(1e-7))
}
