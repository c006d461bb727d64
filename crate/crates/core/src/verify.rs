//! The desk-scale acceptance checks, each with its runtime budget.
//!
//! Every check runs in `f64`. A criterion passes only if its numeric condition
//! holds and it finishes inside its budget.

use std::time::{Duration, Instant};

use num_rational::Ratio;

use crate::arith::{enumerate_characters, pnt_class_ratio, sieve_primes, DirichletCharacter, SPoint};
use crate::error::Result;
use crate::eulerphase::{
    build_oscillation_ledger, estimator_residual, flag_spikes, largest_valid_k, phase_scan, rho_ratios,
    windowed_ratio_exact, Estimator, EulerTerms, WindowParams,
};
use crate::gammaphase::{
    find_mixed_crossing, find_t_cross, mixed_second_derivative, prefactor_phase, stirling_phase, Crossing,
    PrefactorParams, Route, StirlingConfig, DEFAULT_GW_TERMS,
};
use crate::lfunction::{angular_momentum, eta_curvature, find_zeros_on_line, reduction_identities, Xi};

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] criterion {:2} {}: {} ({:.2}s of {}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

type Check = fn() -> Result<(bool, String)>;

const CRITERIA: [(u8, &str, u64, Check); 16] = [
    (1, "Gauss-sum law", 1, c01),
    (2, "characters mod 5", 1, c02),
    (3, "three-case mixed derivative", 10, c03),
    (4, "alpha=0 mixed crossing bracket", 30, c04),
    (5, "t_cross thresholds", 30, c05),
    (6, "Stirling vs GW phase", 60, c06),
    (7, "eta realness and vanishing L", 120, c07),
    (8, "two-route [eta']^2 - eta eta''", 60, c08),
    (9, "positivity of [eta']^2 - eta eta''", 300, c09),
    (10, "first zeros", 120, c10),
    (11, "windowed ratio level", 120, c11),
    (12, "estimator residual stability", 60, c12),
    (13, "rho ratios", 180, c13),
    (14, "primes in progressions", 10, c14),
    (15, "reduction identities", 10, c15),
    (16, "real-character symmetry", 180, c16),
];

/// Ids `1..=16`.
pub fn criterion_ids() -> impl Iterator<Item = u8> {
    CRITERIA.iter().map(|c| c.0)
}

/// Runs one criterion; `None` for an unknown id.
pub fn run_criterion(id: u8) -> Option<CriterionResult> {
    let &(id, name, secs, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let budget = Duration::from_secs(secs);
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = elapsed <= budget;
    let detail = if in_time {
        detail
    } else {
        format!("{detail}; over budget")
    };
    Some(CriterionResult {
        id,
        name,
        passed: ok && in_time,
        detail,
        elapsed,
        budget,
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    criterion_ids().filter_map(run_criterion).collect()
}

fn chars(q: u64) -> Result<Vec<DirichletCharacter>> {
    enumerate_characters(q)
}

fn odd_primitive(q: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(chars(q)?
        .into_iter()
        .filter(|c| c.is_primitive() && !c.is_principal() && c.parity() == 1)
        .collect())
}

fn grid(lo: f64, step: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

/// Deterministic points in `[lo, hi)`, golden-ratio sequence.
fn spread(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let g = 0.618_033_988_749_894_9;
    (1..=n).map(|i| lo + (hi - lo) * (i as f64 * g).fract()).collect()
}

fn c01() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for q in 1..=50 {
        for chi in chars(q)?.iter().filter(|c| c.is_primitive()) {
            let tau = chi.gauss_sum::<f64>();
            worst = worst.max((tau.norm_sqr() - q as f64).abs());
            count += 1;
        }
    }
    Ok((
        worst < 1e-9,
        format!("{count} primitive characters, max ||tau|^2 - q| = {worst:.3e}"),
    ))
}

fn c02() -> Result<(bool, String)> {
    let t = |n, d| Some(Ratio::new(n, d));
    let table = [
        [t(0, 1), t(0, 1), t(0, 1), t(0, 1)],
        [t(0, 1), t(1, 4), t(3, 4), t(1, 2)],
        [t(0, 1), t(1, 2), t(1, 2), t(0, 1)],
        [t(0, 1), t(3, 4), t(1, 4), t(1, 2)],
    ];
    let ours: Vec<Vec<_>> = chars(5)?.iter().map(|c| (1..5).map(|n| c.phase(n)).collect()).collect();
    let zero_at_0 = chars(5)?.iter().all(|c| c.phase(0).is_none());
    let matched = table
        .iter()
        .all(|row| ours.iter().any(|r| r.as_slice() == row.as_slice()));
    let identical = table.iter().zip(&ours).all(|(a, b)| a.as_slice() == b.as_slice());
    Ok((
        ours.len() == 4 && matched && zero_at_0,
        format!("all rows matched: {matched}, same order: {identical}"),
    ))
}

fn c03() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [10.0f64, 20.0, 50.0] {
        let tol = if t >= 50.0 { 0.005 } else { 0.02 };
        for (alpha, k) in [(2u8, 3.0), (1, 1.0), (0, -1.0)] {
            let target = k / (4.0 * t * t);
            let v = mixed_second_derivative(t, alpha, Route::Gw, DEFAULT_GW_TERMS)?;
            let rel = (v / target - 1.0).abs();
            ok &= rel < tol;
            parts.push(format!("t={t} a={alpha}: {rel:.2e}"));
        }
    }
    Ok((ok, format!("relative errors {}", parts.join(", "))))
}

fn c04() -> Result<(bool, String)> {
    let c = find_mixed_crossing(0, Route::Gw, DEFAULT_GW_TERMS, 0.4f64, 0.8, 0.01)?;
    match c {
        Crossing::At { t, .. } => Ok((
            t > 0.585 && t < 0.588,
            format!("crossing at t = {t:.7}, bracket (0.585, 0.588)"),
        )),
        other => Ok((false, format!("no crossing: {other:?}"))),
    }
}

fn c05() -> Result<(bool, String)> {
    let expected = [(3u64, 2.0f64), (4, 1.5), (5, 1.25), (7, 0.75), (8, 0.5), (9, 0.25)];
    let mut ok = true;
    let mut prev = f64::INFINITY;
    let mut parts = Vec::new();
    for (q, want) in expected {
        match find_t_cross::<f64>(PrefactorParams::odd(q), DEFAULT_GW_TERMS)? {
            Crossing::At { t, .. } => {
                ok &= (t - want).abs() <= 0.05 && t < prev;
                prev = t;
                parts.push(format!("{q}->{t:.4}"));
            }
            other => {
                ok = false;
                parts.push(format!("{q}->{other:?}"));
            }
        }
    }
    Ok((ok, parts.join(", ")))
}

fn c06() -> Result<(bool, String)> {
    let cfg = StirlingConfig::default();
    let ts = grid(2.0, 4.9, 20);
    let mut worst = f64::NEG_INFINITY;
    for eps in [-0.2f64, 0.0, 0.2] {
        for alpha in [0u8, 1, 2] {
            let params = if alpha == 2 {
                PrefactorParams::zeta()
            } else {
                PrefactorParams::for_parity(1, alpha)
            };
            for &t in &ts {
                let st = stirling_phase(t, eps, params, &cfg)?;
                let gw = prefactor_phase(SPoint::new(eps, t), params, DEFAULT_GW_TERMS)?;
                let allowed = st.error_bound + 10.0 * gw.tail_estimate;
                worst = worst.max((st.value - gw.value).abs() / allowed);
            }
        }
    }
    Ok((worst <= 1.0, format!("189 samples, max |diff|/allowance = {worst:.3}")))
}

fn c07() -> Result<(bool, String)> {
    let ts = grid(0.5, 0.1, 195);
    let (mut real, mut lmom) = (0.0f64, 0.0f64);
    let mut count = 0;
    for q in [3u64, 4, 5, 7] {
        for chi in odd_primitive(q)? {
            let xi = Xi::<f64>::new(&chi, 20.0, 0.0)?;
            for &t in &ts {
                let s = SPoint::on_line(t);
                let eta = xi.eta(s)?;
                real = real.max(eta.im.abs() / eta.norm().max(1e-12));
                let l = angular_momentum(&xi, s, 1e-3)?;
                lmom = lmom.max(l.abs() / (1e-6 * eta.norm_sqr() * (1.0 + t.ln())));
                count += 1;
            }
        }
    }
    Ok((
        real < 1e-7 && lmom < 1.0,
        format!("{count} points, max |Im eta|/|eta| = {real:.2e}, max |L| / allowance = {lmom:.2e}"),
    ))
}

fn c08() -> Result<(bool, String)> {
    let chi = &odd_primitive(3)?[0];
    let xi = Xi::<f64>::new(chi, 31.0, 0.0)?;
    let mut worst = 0.0f64;
    let mut used = 0;
    for t in spread(1.0, 30.0, 50) {
        let r = eta_curvature(&xi, t, 1e-3)?;
        if r.eta.abs() > 1e-9 {
            worst = worst.max(r.relative_gap());
            used += 1;
        }
    }
    Ok((worst < 1e-4, format!("{used} points, max relative gap = {worst:.2e}")))
}

fn c09() -> Result<(bool, String)> {
    let ts = grid(0.5, 0.05, 590);
    let mut min = f64::INFINITY;
    let mut at = (0u64, 0usize, 0.0f64);
    let mut count = 0;
    for q in [3u64, 4, 5, 7, 8, 9] {
        for chi in odd_primitive(q)? {
            let xi = Xi::<f64>::new(&chi, 31.0, 0.0)?;
            for &t in &ts {
                let r = eta_curvature(&xi, t, 1e-3)?;
                if r.quantity < min {
                    min = r.quantity;
                    at = (q, chi.index(), t);
                }
                count += 1;
            }
        }
    }
    Ok((
        min > 0.0,
        format!("{count} points, min {min:.3e} at q={} chi={} t={:.2}", at.0, at.1, at.2),
    ))
}

fn first_zero(chi: &DirichletCharacter, hi: f64) -> Result<Option<f64>> {
    Ok(find_zeros_on_line(chi, 0.05f64, hi, 0.05)?.first().map(|z| z.t_zero))
}

fn c10() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (q, lo, hi) in [(3u64, 8.0, 8.2), (4, 6.0, 6.2)] {
        for chi in odd_primitive(q)? {
            let z = first_zero(&chi, 9.0)?;
            ok &= z.is_some_and(|z| z > lo && z < hi);
            parts.push(format!("q={q}: {z:?}"));
        }
    }
    for (q, below) in [(5u64, 4.0), (7, 2.0)] {
        for chi in odd_primitive(q)? {
            let z = first_zero(&chi, below)?;
            ok &= z.is_none();
            parts.push(format!(
                "q={q} chi={}: none below {below}: {}",
                chi.index(),
                z.is_none()
            ));
        }
    }
    Ok((ok, parts.join(", ")))
}

fn c11() -> Result<(bool, String)> {
    let chi = &odd_primitive(3)?[0];
    let terms = EulerTerms::new(chi, &sieve_primes(1_000_000, 3)?)?;
    let w = WindowParams::at_cutoff(1_000_000)?;
    let r0: f64 = windowed_ratio_exact(20.0, 0.0, &terms, &w)?;
    let r2: f64 = windowed_ratio_exact(20.0, 0.2, &terms, &w)?;
    let target = -(20.0f64 * 3.0 / std::f64::consts::TAU).sqrt().ln();
    Ok((
        (-1.28..=-0.98).contains(&r0) && r2.abs() < r0.abs(),
        format!("ratio(eps=0) = {r0:.4} (target {target:.4}, band [-1.28, -0.98]), ratio(eps=0.2) = {r2:.4}"),
    ))
}

fn c12() -> Result<(bool, String)> {
    let chi = &odd_primitive(3)?[0];
    let big = EulerTerms::new(chi, &sieve_primes(200_000, 3)?)?;
    let small = big.truncated(100_000);
    let w = WindowParams::new(1e5, 100_000)?;
    let mut ok = true;
    let mut parts = Vec::new();
    // on the spike at the first zero, and between spikes
    for t in [8.04f64, 10.0] {
        let a = estimator_residual(t, 0.25, &small, &w)?.residual;
        let b = estimator_residual(t, 0.25, &big, &w)?.residual;
        let change = (b - a).abs() / a.abs();
        ok &= change < 0.01;
        parts.push(format!("t={t}: {a:.6e} -> {b:.6e} ({:.3}%)", 100.0 * change));
    }
    Ok((ok, parts.join(", ")))
}

fn c13() -> Result<(bool, String)> {
    // at the first zero mod 3
    let chi = &odd_primitive(3)?[0];
    let t = 8.039_737_155_681f64;
    let terms = EulerTerms::new(chi, &sieve_primes(1_000_000, 3)?)?;
    let w = WindowParams::at_cutoff(1_000_000)?;
    let mut gaps = Vec::new();
    let mut last = None;
    for bound in [1e5f64, 1e6] {
        let k = largest_valid_k(t, &terms, bound);
        let hi = build_oscillation_ledger(t, 0.1, &terms, &w, k)?;
        let lo = build_oscillation_ledger(t, 0.0, &terms, &w, k)?;
        let r = rho_ratios(&hi, &lo)?;
        gaps.push((r.rho_plus - r.rho_minus).abs());
        last = Some(r);
    }
    let r = last.expect("two boundaries");
    Ok((
        r.rho_plus < 1.0 && r.rho_minus < 1.0 && gaps[1] < gaps[0],
        format!(
            "rho+ = {:.4}, rho- = {:.4}, |rho+ - rho-| at 1e5: {:.3e}, at 1e6: {:.3e}",
            r.rho_plus, r.rho_minus, gaps[0], gaps[1]
        ),
    ))
}

fn c14() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for q in [3u64, 4, 5] {
        for (h, r) in pnt_class_ratio(1e6, q)? {
            ok &= (0.99..=1.01).contains(&r);
            parts.push(format!("{h} mod {q}: {r:.5}"));
        }
    }
    Ok((ok, parts.join(", ")))
}

fn c15() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for q in [2u64, 5, 9] {
        for s in [2.0f64, 3.0] {
            worst = worst.max(reduction_identities(SPoint::new(s - 0.5, 0.0), q)?.max_residual());
        }
    }
    Ok((worst < 1e-8, format!("max residual {worst:.2e}")))
}

fn c16() -> Result<(bool, String)> {
    let chi = chars(5)?
        .into_iter()
        .find(|c| c.is_real() && !c.is_principal())
        .expect("quadratic character mod 5");
    let terms = EulerTerms::new(&chi, &sieve_primes(100_000, 5)?)?;
    let w = WindowParams::at_cutoff(100_000)?;
    let ts: Vec<f64> = (0..=300).map(|i| (i as f64 - 150.0) * 0.1).collect();
    let scan = phase_scan(&terms, 0.0, &ts, Estimator::ExactArctan, &w)?;
    let n = scan.values.len();
    let worst = (0..n)
        .map(|i| (scan.values[i] - scan.values[n - 1 - i]).abs())
        .fold(0.0, f64::max);
    let spikes = flag_spikes(&scan.t_grid, &scan.values, w.delta_t());
    let paired = spikes.iter().all(|s| spikes.iter().any(|o| (o.t + s.t).abs() < 1e-9));
    Ok((
        worst < 1e-9,
        format!(
            "chi={}, 301 points, max |v(t) - v(-t)| = {worst:.2e}, spikes paired: {paired}",
            chi.index()
        ),
    ))
}
