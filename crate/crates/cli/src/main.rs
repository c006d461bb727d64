//! `lphase`: figures, tables and scans as CSV, plus the acceptance suite.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 verification failure.

// `!(x > 0)` style guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use num_rational::Ratio;
use rayon::prelude::*;

use lphase::eulerphase::{
    build_oscillation_ledger, largest_valid_k, level_check, phase_scan, windowed_ratio_approx, Estimator, EulerTerms,
    WindowParams,
};
use lphase::gammaphase::{find_t_cross, mixed_second_derivative, Crossing, PrefactorParams, Route};
use lphase::lfunction::{eta_grid, find_zeros_on_line, Xi};
use lphase::{enumerate_characters, sieve_primes, verify, DirichletCharacter};

const P_MAX_CAP: u64 = 100_000_000;

#[derive(Parser, Debug)]
#[command(name = "lphase", version, about = "Phase numerics for Dirichlet L-functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Character phases mod q, as fractions of π
    Characters,
    /// Gauss sums of every character mod q
    Gauss,
    /// Mixed derivative of the Γ phase for α = 0, 1, 2
    FigureMixed,
    /// Windowed Euler-phase ratio and η for the odd character mod 3
    FigureQ3,
    /// Windowed Euler-phase ratio and η for a character mod 5
    FigureQ5,
    /// Windowed ratio of a real character over a symmetric t range
    FigureSymmetries,
    /// t_cross and first zero for odd primitive characters
    TableOdd,
    /// Zeros of η on the critical line
    ScanZeros,
    /// Windowed ratio plus level against ∂∠ξ/∂t
    LevelCheck,
    /// Oscillation ledger cells
    Ledger,
    /// Run the acceptance suite
    Verify,
}

#[derive(clap::Args, Debug, Clone)]
struct Opts {
    #[arg(long, global = true)]
    q: Option<u64>,
    #[arg(long, global = true)]
    chi_index: Option<usize>,
    /// Select the character with a given phase, `n=a/b` meaning ∠χ(n) = (a/b)π
    #[arg(long, global = true)]
    match_phase: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    t_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long, global = true)]
    t_step: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    p_star: Option<f64>,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    p_max: u64,
    #[arg(long, global = true)]
    allow_large: bool,
    #[arg(long, global = true, default_value_t = lphase::gammaphase::DEFAULT_GW_TERMS)]
    gw_terms: u64,
    /// Last oscillation index in the ledger (default: largest valid)
    #[arg(long, global = true, allow_negative_numbers = true)]
    k_max: Option<i64>,
    /// Output file (default stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self::with_rows(header, Vec::new())
    }

    fn with_rows(header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn pi_fraction(turn: Ratio<u64>) -> String {
    let r = turn * 2;
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Resolved grid and window settings, recorded in the provenance line.
struct Resolved {
    params: Vec<(String, String)>,
}

impl Resolved {
    fn new() -> Self {
        Self { params: Vec::new() }
    }

    fn set(&mut self, k: &str, v: impl ToString) {
        self.params.push((k.to_string(), v.to_string()));
    }
}

fn grid(lo: f64, hi: f64, step: f64) -> anyhow::Result<Vec<f64>> {
    if !(step > 0.0) {
        bail!("--t-step must be positive, got {step}");
    }
    if !(hi >= lo) {
        bail!("--t-max ({hi}) must not be below --t-min ({lo})");
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

impl Opts {
    fn q_or(&self, default: u64) -> anyhow::Result<u64> {
        let q = self.q.unwrap_or(default);
        if q == 0 {
            bail!("--q must be at least 1");
        }
        Ok(q)
    }

    fn grid(&self, res: &mut Resolved, lo: f64, hi: f64, step: f64) -> anyhow::Result<Vec<f64>> {
        let (lo, hi, step) = (
            self.t_min.unwrap_or(lo),
            self.t_max.unwrap_or(hi),
            self.t_step.unwrap_or(step),
        );
        res.set("t_min", lo);
        res.set("t_max", hi);
        res.set("t_step", step);
        grid(lo, hi, step)
    }

    fn eps(&self, res: &mut Resolved, default: f64) -> f64 {
        let e = self.eps.unwrap_or(default);
        res.set("eps", e);
        e
    }

    fn character(&self, res: &mut Resolved, q: u64, default: Option<usize>) -> anyhow::Result<DirichletCharacter> {
        let chars = enumerate_characters(q).map_err(|e| anyhow!("--q: {e}"))?;
        let chi = if let Some(spec) = &self.match_phase {
            let (n, phase) = spec
                .split_once('=')
                .ok_or_else(|| anyhow!("--match-phase expects n=a/b, got {spec}"))?;
            let n: u64 = n
                .trim()
                .parse()
                .map_err(|_| anyhow!("--match-phase: bad n in {spec}"))?;
            let phase: Ratio<u64> = phase
                .trim()
                .parse()
                .map_err(|_| anyhow!("--match-phase: bad phase in {spec}"))?;
            let turn = phase / 2;
            let turn = Ratio::new(*turn.numer() % *turn.denom(), *turn.denom());
            let hits: Vec<_> = chars.iter().filter(|c| c.phase(n) == Some(turn)).collect();
            match hits.as_slice() {
                [one] => (*one).clone(),
                [] => bail!("--match-phase: no character mod {q} has phase {phase}π at {n}"),
                _ => bail!(
                    "--match-phase: {} characters mod {q} match; add --chi-index",
                    hits.len()
                ),
            }
        } else {
            let idx = self
                .chi_index
                .or(default)
                .ok_or_else(|| anyhow!("--chi-index is required"))?;
            chars
                .get(idx)
                .cloned()
                .ok_or_else(|| anyhow!("--chi-index {idx} out of range: {} characters mod {q}", chars.len()))?
        };
        res.set("q", q);
        res.set("chi_index", chi.index());
        Ok(chi)
    }

    fn window(&self, res: &mut Resolved) -> anyhow::Result<WindowParams<f64>> {
        if self.p_max > P_MAX_CAP && !self.allow_large {
            bail!(
                "--p-max {} exceeds {P_MAX_CAP}; pass --allow-large to proceed",
                self.p_max
            );
        }
        let p_star = self.p_star.unwrap_or(self.p_max as f64);
        if p_star > self.p_max as f64 {
            bail!("--p-star ({p_star}) must not exceed --p-max ({})", self.p_max);
        }
        res.set("p_star", p_star);
        res.set("p_max", self.p_max);
        WindowParams::new(p_star, self.p_max).map_err(|e| anyhow!("--p-star: {e}"))
    }

    fn terms(&self, chi: &DirichletCharacter) -> anyhow::Result<EulerTerms<f64>> {
        let table = sieve_primes(self.p_max, chi.modulus()).map_err(|e| anyhow!("--p-max: {e}"))?;
        Ok(EulerTerms::new(chi, &table)?)
    }
}

fn odd_primitive(q: u64) -> anyhow::Result<Vec<DirichletCharacter>> {
    Ok(enumerate_characters(q)?
        .into_iter()
        .filter(|c| c.is_primitive() && !c.is_principal() && c.parity() == 1)
        .collect())
}

fn characters(o: &Opts, res: &mut Resolved) -> anyhow::Result<Table> {
    let q = o.q_or(5)?;
    res.set("q", q);
    let chars = enumerate_characters(q)?;
    let mut t = Table::new(&["index", "conductor", "parity", "primitive"]);
    t.header.extend((0..q).map(|n| format!("phase_n{n}")));
    for c in &chars {
        let mut row = vec![
            c.index().to_string(),
            c.conductor().to_string(),
            c.parity().to_string(),
            c.is_primitive().to_string(),
        ];
        row.extend((0..q).map(|n| c.phase(n).map_or_else(|| "undefined".to_string(), pi_fraction)));
        t.rows.push(row);
    }
    Ok(t)
}

fn gauss(o: &Opts, res: &mut Resolved) -> anyhow::Result<Table> {
    let q = o.q_or(5)?;
    res.set("q", q);
    let mut t = Table::new(&["index", "primitive", "tau_re", "tau_im", "abs2", "abs2_minus_q"]);
    for c in enumerate_characters(q)? {
        let tau = c.gauss_sum::<f64>();
        t.rows.push(vec![
            c.index().to_string(),
            c.is_primitive().to_string(),
            num(tau.re),
            num(tau.im),
            num(tau.norm_sqr()),
            num(tau.norm_sqr() - q as f64),
        ]);
    }
    Ok(t)
}

fn figure_mixed(o: &Opts, res: &mut Resolved) -> anyhow::Result<Table> {
    let ts = o.grid(res, 0.05, 5.0, 0.05)?;
    res.set("gw_terms", o.gw_terms);
    let rows =
        ts.par_iter()
            .map(|&t| {
                let mut row = vec![num(t)];
                for alpha in 0..=2u8 {
                    row.push(num(mixed_second_derivative(t, alpha, Route::Gw, o.gw_terms)
                        .map_err(|e| anyhow!("--gw-terms: {e}"))?));
                }
                Ok(row)
            })
            .collect::<anyhow::Result<_>>()?;
    Ok(Table::with_rows(&["t", "alpha0", "alpha1", "alpha2"], rows))
}

/// Windowed ratios, the level `−ln√(tq/2π)` and `η` on one grid.
fn figure_q(o: &Opts, res: &mut Resolved, q: u64, default_idx: Option<usize>) -> anyhow::Result<Table> {
    let chi = o.character(res, q, default_idx)?;
    let eps = o.eps(res, 0.0);
    let ts = o.grid(res, 0.5, 30.0, 0.05)?;
    let w = o.window(res)?;
    let terms = o.terms(&chi)?;
    let exact = phase_scan(&terms, eps, &ts, Estimator::ExactArctan, &w)?;
    let approx = phase_scan(&terms, eps, &ts, Estimator::CosineApprox, &w)?;
    let eta = if chi.is_primitive() && !chi.is_principal() {
        let t_abs = ts.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        let xi = Xi::new(&chi, t_abs, eps.min(0.0))?;
        Some(eta_grid(&xi, &ts, eps, 1e-12)?)
    } else {
        None
    };
    let mut t = Table::new(&["t", "ratio_exact", "ratio_approx", "level", "eta_re", "eta_im"]);
    for (i, &x) in ts.iter().enumerate() {
        let level = -(x.abs() * q as f64 / std::f64::consts::TAU).sqrt().ln();
        let (re, im) = eta
            .as_ref()
            .map_or((String::new(), String::new()), |e| (num(e[i].eta.re), num(e[i].eta.im)));
        t.rows.push(vec![
            num(x),
            num(exact.values[i]),
            num(approx.values[i]),
            num(level),
            re,
            im,
        ]);
    }
    Ok(t)
}

fn figure_symmetries(o: &Opts, res: &mut Resolved) -> anyhow::Result<Table> {
    let q = o.q_or(5)?;
    let real = enumerate_characters(q)?
        .into_iter()
        .find(|c| c.is_real() && !c.is_principal())
        .map(|c| c.index());
    let chi = o.character(res, q, real)?;
    let eps = o.eps(res, 0.0);
    let ts = o.grid(res, -15.0, 15.0, 0.1)?;
    let w = o.window(res)?;
    let terms = o.terms(&chi)?;
    let exact = phase_scan(&terms, eps, &ts, Estimator::ExactArctan, &w)?;
    let mut t = Table::new(&["t", "ratio_exact", "ratio_approx"]);
    let approx: Vec<f64> = ts
        .par_iter()
        .map(|&x| windowed_ratio_approx(x, eps, &terms, &w))
        .collect::<lphase::Result<_>>()?;
    for (i, &x) in ts.iter().enumerate() {
        t.rows.push(vec![num(x), num(exact.values[i]), num(approx[i])]);
    }
    Ok(t)
}

fn table_odd(o: &Opts, res: &mut Resolved) -> anyhow::Result<Table> {
    let t_max = o.t_max.unwrap_or(30.0);
    let step = o.t_step.unwrap_or(0.05);
    res.set("t_max", t_max);
    res.set("t_step", step);
    res.set("gw_terms", o.gw_terms);
    let qs: Vec<u64> = match o.q {
        Some(q) => vec![q],
        None => vec![3, 4, 5, 7, 8, 9, 11],
    };
    let mut t = Table::new(&["q", "chi_index", "t_cross", "first_zero"]);
    for q in qs {
        let cross = match find_t_cross::<f64>(PrefactorParams::odd(q), o.gw_terms)? {
            Crossing::At { t, .. } => num(t),
            Crossing::AlwaysPositive => "always_positive".into(),
            Crossing::AlwaysNegative => "always_negative".into(),
            Crossing::Indeterminate => "indeterminate".into(),
        };
        for chi in odd_primitive(q)? {
            let z = find_zeros_on_line(&chi, step, t_max, step)?;
            let first = z.first().map_or_else(|| "none".to_string(), |z| num(z.t_zero));
            t.rows
                .push(vec![q.to_string(), chi.index().to_string(), cross.clone(), first]);
        }
    }
    Ok(t)
}

fn scan_zeros(o: &Opts, res: &mut Resolved) -> anyhow::Result<Table> {
    let q = o.q_or(3)?;
    let chi = o.character(res, q, None)?;
    let (lo, hi, step) = (
        o.t_min.unwrap_or(0.05),
        o.t_max.unwrap_or(30.0),
        o.t_step.unwrap_or(0.05),
    );
    res.set("t_min", lo);
    res.set("t_max", hi);
    res.set("t_step", step);
    if !(step > 0.0) {
        bail!("--t-step must be positive, got {step}");
    }
    let zeros = find_zeros_on_line(&chi, lo, hi, step).map_err(|e| anyhow!("--chi-index/--t-min/--t-max: {e}"))?;
    let mut t = Table::new(&["t_zero", "bracket_lo", "bracket_hi", "kind"]);
    for z in zeros {
        t.rows.push(vec![
            num(z.t_zero),
            num(z.bracket.0),
            num(z.bracket.1),
            format!("{:?}", z.kind),
        ]);
    }
    Ok(t)
}

fn level(o: &Opts, res: &mut Resolved) -> anyhow::Result<Table> {
    let q = o.q_or(3)?;
    let chi = o.character(res, q, None)?;
    let eps = o.eps(res, 0.0);
    let ts = o.grid(res, 5.0, 30.0, 0.5)?;
    if ts.iter().any(|&t| t <= 0.0) {
        bail!("--t-min must be positive for the level check");
    }
    let w = o.window(res)?;
    let terms = o.terms(&chi)?;
    let xi = Xi::new(&chi, ts.last().copied().unwrap_or(1.0) + 1.0, eps.min(0.0))?;
    let rows = ts
        .par_iter()
        .map(|&t| {
            let r = level_check(t, eps, &terms, &w, &xi, &[])?;
            Ok(vec![
                num(t),
                num(r.ratio),
                num(r.target),
                num(r.lhs),
                num(r.phase_derivative),
                num(r.defect),
                num(r.windowed_defect),
            ])
        })
        .collect::<lphase::Result<_>>()?;
    Ok(Table::with_rows(
        &[
            "t",
            "ratio",
            "target",
            "lhs",
            "phase_derivative",
            "defect",
            "windowed_defect",
        ],
        rows,
    ))
}

fn ledger(o: &Opts, res: &mut Resolved) -> anyhow::Result<Table> {
    let q = o.q_or(3)?;
    let chi = o.character(res, q, None)?;
    let eps = o.eps(res, 0.0);
    let t = o.t.ok_or_else(|| anyhow!("--t is required"))?;
    res.set("t", t);
    let w = o.window(res)?;
    let terms = o.terms(&chi)?;
    let k_max = o.k_max.unwrap_or_else(|| largest_valid_k(t, &terms, o.p_max as f64));
    res.set("k_max", k_max);
    let l = build_oscillation_ledger(t, eps, &terms, &w, k_max).map_err(|e| anyhow!("--k-max/--t: {e}"))?;
    let mut out = Table::new(&[
        "h",
        "k",
        "x0",
        "x1",
        "x0_next",
        "o_plus_sum",
        "o_minus_sum",
        "o_minus_li",
        "o_plus_li",
        "primes_first",
        "primes_second",
    ]);
    for c in &l.cells {
        out.rows.push(vec![
            c.h.to_string(),
            c.k.to_string(),
            num(c.x0),
            num(c.x1),
            num(c.x0_next),
            num(c.o_plus_sum()),
            num(c.o_minus_sum()),
            num(c.o_minus_li()),
            num(c.o_plus_li()),
            c.primes_first.to_string(),
            c.primes_second.to_string(),
        ]);
    }
    Ok(out)
}

fn run_verify(o: &Opts) -> anyhow::Result<ExitCode> {
    let mut t = Table::new(&["criterion", "name", "passed", "seconds", "detail"]);
    let mut all = true;
    for id in verify::criterion_ids() {
        let r = verify::run_criterion(id).expect("known id");
        eprintln!("{r}");
        all &= r.passed;
        t.rows.push(vec![
            id.to_string(),
            r.name.to_string(),
            r.passed.to_string(),
            format!("{:.3}", r.elapsed.as_secs_f64()),
            format!("\"{}\"", r.detail.replace('"', "'")),
        ]);
    }
    let mut res = Resolved::new();
    res.set("criteria", 16);
    write_table(o, Command::Verify, &res, &t)?;
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Characters => "characters",
        Command::Gauss => "gauss",
        Command::FigureMixed => "figure-mixed",
        Command::FigureQ3 => "figure-q3",
        Command::FigureQ5 => "figure-q5",
        Command::FigureSymmetries => "figure-symmetries",
        Command::TableOdd => "table-odd",
        Command::ScanZeros => "scan-zeros",
        Command::LevelCheck => "level-check",
        Command::Ledger => "ledger",
        Command::Verify => "verify",
    }
}

fn write_table(o: &Opts, cmd: Command, res: &Resolved, t: &Table) -> anyhow::Result<()> {
    let mut s = String::new();
    write!(
        s,
        "# lphase {} command={}",
        env!("CARGO_PKG_VERSION"),
        command_name(cmd)
    )?;
    for (k, v) in &res.params {
        write!(s, " {k}={v}")?;
    }
    s.push('\n');
    s.push_str(&t.header.join(","));
    s.push('\n');
    for row in &t.rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    match &o.out {
        Some(path) => std::fs::write(path, s).with_context(|| format!("--out: cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(s.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let o = &cli.opts;
    let mut res = Resolved::new();
    let table = match cli.command {
        Command::Verify => return run_verify(o),
        Command::Characters => characters(o, &mut res)?,
        Command::Gauss => gauss(o, &mut res)?,
        Command::FigureMixed => figure_mixed(o, &mut res)?,
        Command::FigureQ3 => {
            let idx = odd_primitive(3)?.first().map(|c| c.index());
            figure_q(o, &mut res, 3, idx)?
        }
        Command::FigureQ5 => figure_q(o, &mut res, 5, Some(1))?,
        Command::FigureSymmetries => figure_symmetries(o, &mut res)?,
        Command::TableOdd => table_odd(o, &mut res)?,
        Command::ScanZeros => scan_zeros(o, &mut res)?,
        Command::LevelCheck => level(o, &mut res)?,
        Command::Ledger => ledger(o, &mut res)?,
    };
    write_table(o, cli.command, &res, &table)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
