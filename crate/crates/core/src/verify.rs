//! One deterministic report over every identity the crate can check.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::hankel::{hankel_det, hankel_det_mod3, verify_structure};
use crate::kernel::{kernel_closure, Dfao2D, KernelExpr};
use crate::pade::{verify_functional_equation, verify_pade_error};
use crate::recurrence::{closed_form_p0, closed_form_p1, Engine, FORMULAS};
use crate::residue::Residue3;
use crate::sequences::Kind;
use crate::series::{assemble_from_recurrence, series_delta, series_gamma, PeriodicSeries};

/// Largest Hankel order used by the block-structure checks.
pub const STRUCTURE_ORDER_MAX: u64 = 12;
/// Closed forms are checked for `n` up to this bound.
pub const CLOSED_FORM_N: u64 = 2000;
/// Padé orders checked.
pub const PADE_ORDER_MAX: usize = 12;
/// Degree for the functional equation.
pub const FEQ_DEGREE: usize = 3000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    /// Compare the engine with explicit determinants on the whole window.
    pub oracle: bool,
    pub n_max: u64,
    pub p_max: u64,
    pub kernel_cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub checked: u64,
    pub failures: u64,
    pub first_counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn to_text(&self) -> String {
        let o = &self.options;
        let mut out = format!("verify oracle={} n_max={} p_max={}\n", o.oracle, o.n_max, o.p_max);
        for c in &self.checks {
            let _ = write!(out, "{:<20} checked {:>8}  failures {}", c.name, c.checked, c.failures);
            if let Some(cx) = &c.first_counterexample {
                let _ = write!(out, "  first: {cx}");
            }
            out.push('\n');
        }
        out.push_str(if self.passed() { "result PASS\n" } else { "result FAIL\n" });
        out
    }
}

/// Tallies `(label, ok)` outcomes that are already in a fixed order.
fn tally(name: &'static str, outcomes: Vec<(String, bool)>) -> CheckResult {
    let failures = outcomes.iter().filter(|(_, ok)| !ok).count() as u64;
    let first_counterexample = outcomes.iter().find(|(_, ok)| !ok).map(|(l, _)| l.clone());
    CheckResult { name, checked: outcomes.len() as u64, failures, first_counterexample }
}

/// Exact value with the boundary conventions `|Γ_0^0| = 2`, `|Δ_{−1}^p| = [p = 0]`.
fn exact_cell(kind: Kind, n: i64, p: u64) -> BigInt {
    match (kind, n) {
        (Kind::Gamma, 0) if p == 0 => BigInt::from(2),
        (Kind::Delta, -1) => BigInt::from((p == 0) as u8),
        (_, n) => hankel_det(kind, p, n as usize),
    }
}

fn mod3_cell(kind: Kind, n: i64, p: u64) -> Residue3 {
    match (kind, n) {
        (Kind::Gamma, 0) if p == 0 => Residue3::TWO,
        (Kind::Delta, -1) => Residue3::new((p == 0) as i64),
        (_, n) => hankel_det_mod3(kind, p, n as usize),
    }
}

fn check_structure(o: &VerifyOptions) -> CheckResult {
    let cells: Vec<(u64, u64)> =
        (2..=o.n_max.min(STRUCTURE_ORDER_MAX)).flat_map(|n| (0..=o.p_max).map(move |p| (n, p))).collect();
    let outcomes = cells
        .par_iter()
        .map(|&(n, p)| match verify_structure(p, n as usize) {
            Ok(_) => (format!("n={n} p={p}"), true),
            Err(e) => (format!("n={n} p={p}: {e}"), false),
        })
        .collect();
    tally("structure", outcomes)
}

/// Recurrence instances whose target lies in the window.
fn instances(o: &VerifyOptions, exact: bool) -> Vec<(usize, i64, u64)> {
    let mut out = Vec::new();
    for (i, f) in FORMULAS.iter().enumerate().filter(|(_, f)| !exact || f.exact) {
        let m_min = if exact { 2 } else { 0 };
        for m in m_min..=(o.n_max as i64) {
            for q in 0..=o.p_max {
                let (_, n, p) = f.target(m, q);
                if n <= o.n_max as i64 && p <= o.p_max {
                    out.push((i, m, q));
                }
            }
        }
    }
    out
}

fn check_recurrences_exact(o: &VerifyOptions) -> CheckResult {
    let outcomes = instances(o, true)
        .par_iter()
        .map(|&(i, m, q)| {
            let f = &FORMULAS[i];
            let (kind, n, p) = f.target(m, q);
            let lhs = exact_cell(kind, n, p);
            let rhs = f.evaluate(m, q, BigInt::one(), exact_cell);
            (format!("formula ({}) m={m} q={q}: {lhs} != {rhs}", f.number), lhs == rhs)
        })
        .collect();
    tally("recurrences-exact", outcomes)
}

fn check_recurrences_mod3(o: &VerifyOptions) -> CheckResult {
    let outcomes = instances(o, false)
        .par_iter()
        .map(|&(i, m, q)| {
            let f = &FORMULAS[i];
            let (kind, n, p) = f.target(m, q);
            let lhs = mod3_cell(kind, n, p);
            let rhs = f.evaluate(m, q, Residue3::ONE, mod3_cell);
            (format!("formula ({}) m={m} q={q}: {lhs} != {rhs}", f.number), lhs == rhs)
        })
        .collect();
    tally("recurrences-mod3", outcomes)
}

fn check_oracle(engine: &Engine, o: &VerifyOptions) -> CheckResult {
    let cells: Vec<(Kind, u64, u64)> = [Kind::Gamma, Kind::Delta]
        .into_iter()
        .flat_map(|k| (1..=o.n_max).flat_map(move |n| (0..=o.p_max).map(move |p| (k, n, p))))
        .collect();
    let outcomes = cells
        .par_iter()
        .map(|&(kind, n, p)| {
            let got = engine.value(kind, n as i64, p);
            let want = hankel_det_mod3(kind, p, n as usize);
            (format!("{kind} n={n} p={p}: engine {got}, determinant {want}"), got == want)
        })
        .collect();
    tally("oracle", outcomes)
}

fn check_closed_forms(engine: &Engine) -> CheckResult {
    let mut outcomes = Vec::new();
    for n in 1..=CLOSED_FORM_N {
        let (g, d) = closed_form_p0(n);
        outcomes.push((format!("p=0 n={n}"), engine.gamma(n, 0) == g && engine.delta(n as i64, 0) == d));
        let v = closed_form_p1(n);
        outcomes.push((format!("p=1 n={n}"), engine.gamma(n, 1) == v && engine.delta(n as i64, 1) == v));
    }
    tally("closed-forms", outcomes)
}

fn check_periods(engine: &Engine, o: &VerifyOptions) -> CheckResult {
    let outcomes = (0..=o.p_max)
        .map(|p| match engine.column_period(p) {
            Ok(c) => (format!("p={p} period {}", c.period), true),
            Err(e) => (format!("p={p}: {e}"), false),
        })
        .collect();
    tally("periods", outcomes)
}

fn check_series(engine: &Engine, o: &VerifyOptions) -> CheckResult {
    let mut outcomes = Vec::new();
    let known = [
        (Kind::Gamma, 0, [2, 1, 1, 2]),
        (Kind::Delta, 0, [1, 2, 2, 1]),
        (Kind::Gamma, 1, [1, 0, 2, 0]),
        (Kind::Delta, 1, [1, 0, 2, 0]),
    ];
    for (kind, p, numerator) in known {
        let want = PeriodicSeries::from_rational(&numerator, 4).ok();
        let got = column(engine, kind, p).ok();
        outcomes.push((format!("{kind} p={p} fraction"), got.is_some() && got == want));
    }
    for p in 0..=o.p_max {
        for kind in [Kind::Gamma, Kind::Delta] {
            let direct = column(engine, kind, p);
            let assembled = assemble_from_recurrence(kind, p, |k, q| column(engine, k, q));
            let ok = matches!((&direct, &assembled), (Ok(a), Ok(b)) if a == b);
            outcomes.push((format!("{kind} p={p} assembly"), ok));
        }
    }
    tally("series", outcomes)
}

fn column(engine: &Engine, kind: Kind, p: u64) -> Result<PeriodicSeries, crate::series::SeriesError> {
    match kind {
        Kind::Gamma => series_gamma(engine, p),
        Kind::Delta => series_delta(engine, p),
    }
}

fn check_kernel(engine: &Engine, o: &VerifyOptions) -> CheckResult {
    let mut outcomes = Vec::new();
    for kind in [Kind::Gamma, Kind::Delta] {
        let closure = match kernel_closure(&KernelExpr::base(kind), o.kernel_cap) {
            Ok(c) => c,
            Err(e) => {
                outcomes.push((format!("{kind} closure: {e}"), false));
                continue;
            }
        };
        for (i, state) in closure.states.iter().enumerate() {
            let word = &closure.words[i];
            let scale = 3u64.pow(word.len() as u32);
            let r: u64 = word.iter().rev().fold(0, |acc, &(a, _)| 3 * acc + a as u64);
            let s: u64 = word.iter().rev().fold(0, |acc, &(_, b)| 3 * acc + b as u64);
            let ok = (0..=2u64).all(|n| {
                (0..=2u64).all(|p| {
                    state.evaluate(engine, n, p).ok() == Some(engine.value(kind, (scale * n + r) as i64, scale * p + s))
                })
            });
            outcomes.push((format!("{kind} state {i} = {state}"), ok));
        }
        let dfao = Dfao2D::for_kind(engine, kind, o.kernel_cap).expect("closure already succeeded");
        for n in 1..=o.n_max {
            for p in 0..=o.p_max {
                let ok = dfao.evaluate_u64(n, p) == engine.value(kind, n as i64, p);
                outcomes.push((format!("{kind} automaton at n={n} p={p}"), ok));
            }
        }
    }
    tally("kernel", outcomes)
}

fn check_pade() -> CheckResult {
    let outcomes = (1..=PADE_ORDER_MAX)
        .map(|n| match verify_pade_error(n) {
            Ok(r) => (format!("order {n}: coefficient {} expected {}", r.coefficient, r.expected), r.holds),
            Err(e) => (format!("order {n}: {e}"), false),
        })
        .collect();
    tally("pade-error", outcomes)
}

fn check_functional_equation() -> CheckResult {
    let report = verify_functional_equation(FEQ_DEGREE).expect("positive degree");
    let label = format!("degree {:?}", report.first_mismatch);
    tally("functional-equation", vec![(label, report.holds)])
}

pub fn verify(engine: &Engine, options: &VerifyOptions) -> VerifyReport {
    let mut checks = vec![check_structure(options), check_recurrences_exact(options), check_recurrences_mod3(options)];
    if options.oracle {
        checks.push(check_oracle(engine, options));
    }
    checks.push(check_closed_forms(engine));
    checks.push(check_periods(engine, options));
    checks.push(check_series(engine, options));
    checks.push(check_kernel(engine, options));
    checks.push(check_pade());
    checks.push(check_functional_equation());
    VerifyReport { options: options.clone(), checks }
}
