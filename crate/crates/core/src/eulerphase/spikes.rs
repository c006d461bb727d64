use crate::scalar::{lit, Real};

/// A run of flagged grid points, located at its largest `|v|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spike<T> {
    pub t: T,
    pub value: T,
    pub index: usize,
    /// Exclusion strip `t ± Δt`.
    pub strip: (T, T),
}

fn median<T: Real>(mut xs: Vec<T>) -> T {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) * lit(0.5)
    }
}

/// Flags points with `|v| > median(|v|) + 6·MAD(|v|)`; contiguous flags form
/// one spike. `delta_t` sets the exclusion half-width.
pub fn flag_spikes<T: Real>(t_grid: &[T], values: &[T], delta_t: T) -> Vec<Spike<T>> {
    assert_eq!(t_grid.len(), values.len(), "grid and values differ in length");
    if values.is_empty() {
        return Vec::new();
    }
    let mags: Vec<T> = values.iter().map(|v| v.abs()).collect();
    let med = median(mags.clone());
    let mad = median(mags.iter().map(|m| (*m - med).abs()).collect());
    let threshold = med + lit::<T>(6.0) * mad;
    let mut out = Vec::new();
    let mut i = 0;
    while i < mags.len() {
        if mags[i] > threshold {
            let mut best = i;
            while i < mags.len() && mags[i] > threshold {
                if mags[i] > mags[best] {
                    best = i;
                }
                i += 1;
            }
            let t = t_grid[best];
            out.push(Spike {
                t,
                value: values[best],
                index: best,
                strip: (t - delta_t, t + delta_t),
            });
        } else {
            i += 1;
        }
    }
    out
}
