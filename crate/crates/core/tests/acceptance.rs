//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines come out in order; exits nonzero if any fail.

use std::process::{Command, ExitCode};
use std::time::Instant;

use cantor_hankel::hankel::{hankel_det, hankel_det_mod3};
use cantor_hankel::kernel::{kernel_closure, Dfao2D, KernelExpr, DEFAULT_STATE_CAP};
use cantor_hankel::pade::{eta_identity_check, irrationality_estimates, pade, verify_functional_equation, verify_pade_error};
use cantor_hankel::recurrence::{Engine, FORMULAS};
use cantor_hankel::series::{series_delta, series_gamma, PeriodicSeries};
use cantor_hankel::{Kind, Residue3};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

const BOTH: [Kind; 2] = [Kind::Gamma, Kind::Delta];

fn exact_cell(kind: Kind, n: i64, p: u64) -> BigInt {
    match (kind, n) {
        (Kind::Gamma, 0) if p == 0 => BigInt::from(2),
        (Kind::Delta, -1) => BigInt::from((p == 0) as u8),
        (_, n) if n >= 0 => hankel_det(kind, p, n as usize),
        _ => panic!("no cell {kind} {n}"),
    }
}

fn oracle_equivalence(engine: &Engine) -> Outcome {
    let cells: Vec<(Kind, u64, u64)> =
        BOTH.iter().flat_map(|&k| (1..=40u64).flat_map(move |n| (0..=81u64).map(move |p| (k, n, p)))).collect();
    let bad: Vec<_> = cells
        .par_iter()
        .filter(|&&(k, n, p)| engine.value(k, n as i64, p) != hankel_det_mod3(k, p, n as usize))
        .collect();
    let first = bad.first().map(|c| format!(", first {c:?}")).unwrap_or_default();
    outcome(bad.is_empty(), format!("{} cells, {} mismatches{first}", cells.len(), bad.len()))
}

fn exact_recurrences() -> Outcome {
    let cases: Vec<(usize, i64, u64)> =
        (0..FORMULAS.len()).flat_map(|i| (2..=8i64).flat_map(move |m| (0..=27u64).map(move |q| (i, m, q)))).collect();
    let bad: Vec<_> = cases
        .par_iter()
        .filter(|&&(i, m, q)| {
            let f = &FORMULAS[i];
            let (kind, n, p) = f.target(m, q);
            if f.exact {
                exact_cell(kind, n, p) != f.evaluate(m, q, BigInt::one(), exact_cell)
            } else {
                let r = |k, n, p| Residue3::from_bigint(&exact_cell(k, n, p));
                r(kind, n, p) != f.evaluate(m, q, Residue3::ONE, r)
            }
        })
        .map(|&(i, m, q)| (FORMULAS[i].number, m, q))
        .collect();
    let exact = FORMULAS.iter().filter(|f| f.exact).count();
    let first = bad.first().map(|c| format!(", first (formula, m, q) = {c:?}")).unwrap_or_default();
    outcome(
        bad.is_empty(),
        format!("{exact} formulas over Z, {} mod 3, {} instances, {} mismatches{first}", FORMULAS.len() - exact, cases.len(), bad.len()),
    )
}

fn closed_forms(engine: &Engine) -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=2000u64 {
        let (g0, d0) = if matches!(n % 4, 1 | 2) { (1, 2) } else { (2, 1) };
        let p1 = match n % 4 {
            1 | 3 => 0,
            2 => 2,
            _ => 1,
        };
        let want = [(Kind::Gamma, 0, g0), (Kind::Delta, 0, d0), (Kind::Gamma, 1, p1), (Kind::Delta, 1, p1)];
        for (kind, p, v) in want {
            if engine.value(kind, n as i64, p) != Residue3::new(v) {
                bad.push((kind, n, p));
            }
        }
    }
    let first = bad.first().map(|c| format!(", first {c:?}")).unwrap_or_default();
    outcome(bad.is_empty(), format!("n = 1..2000, p in {{0, 1}}, both kinds, {} mismatches{first}", bad.len()))
}

fn fraction(numerator: &[i64], period: usize) -> PeriodicSeries {
    PeriodicSeries::from_rational(numerator, period).unwrap()
}

fn generating_series(engine: &Engine) -> Outcome {
    let f0 = fraction(&[2, 1, 1, 2], 4);
    let g0 = fraction(&[1, 2, 2, 1], 4);
    let f1 = fraction(&[1, 0, 2], 4);
    let g1 = fraction(&[1, 0, 2], 4);
    let f2_want = fraction(&[1, 1, 0, 0, 2, 2, 2, 2, 0, 0, 1, 1], 12);
    let g2_want = fraction(&[1, 1, 1, 0, 0, 0, 2, 2, 2], 12);

    let mut failures = Vec::new();
    for (name, got, want) in [
        ("f0", series_gamma(engine, 0), &f0),
        ("g0", series_delta(engine, 0), &g0),
        ("f1", series_gamma(engine, 1), &f1),
        ("g1", series_delta(engine, 1), &g1),
        ("f2", series_gamma(engine, 2), &f2_want),
        ("g2", series_delta(engine, 2), &g2_want),
    ] {
        if got.as_ref() != Ok(want) {
            failures.push(format!("engine {name}"));
        }
    }

    let (h0, h1) = (PeriodicSeries::h0(), PeriodicSeries::h1());
    let hat = |s: &PeriodicSeries, k| s.shift_hat(k);
    let g1_bar = g1.shift_bar(Residue3::ZERO).unwrap();
    let f2 = PeriodicSeries::interleave3(
        &h0.hadamard(&f1).hadamard(&f1).hadamard(&g0),
        &h0.hadamard(&f1).hadamard(&hat(&f0, 1)).hadamard(&g1).add(&h1.hadamard(&hat(&f0, 1)).hadamard(&hat(&f1, 1)).hadamard(&g1_bar)),
        &h1.hadamard(&hat(&f1, 1)).hadamard(&hat(&f1, 1)).hadamard(&g0),
    );
    let g2 = PeriodicSeries::interleave3(
        &h0.hadamard(&f1).hadamard(&g0).hadamard(&g1).add(&h1.hadamard(&hat(&f1, 1)).hadamard(&g0).hadamard(&g1_bar)),
        &h0.hadamard(&hat(&f0, 1)).hadamard(&g1).hadamard(&g1),
        &h0.hadamard(&hat(&f0, 2)).hadamard(&g1).hadamard(&g1),
    );
    if f2 != f2_want {
        failures.push(format!("assembled f2 = {}", f2.to_rational()));
    }
    if g2 != g2_want {
        failures.push(format!("assembled g2 = {}", g2.to_rational()));
    }
    let f2_text = format!("{}", f2.to_rational());
    let g2_text = format!("{}", g2.to_rational());
    outcome(failures.is_empty(), format!("f2 = {f2_text}, g2 = {g2_text}{}", if failures.is_empty() { String::new() } else { format!("; wrong: {}", failures.join(", ")) }))
}

fn periodicity(engine: &Engine) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut periods = Vec::new();
    for k in 0..=2u32 {
        let lo = 3u64.pow(k) + 1;
        let hi = 3u64.pow(k + 1);
        let bound = 12 * 3u64.pow(k);
        let mut seen = std::collections::BTreeSet::new();
        for p in lo..=hi {
            checked += 1;
            match engine.column_period_with_k(p, k) {
                Ok(c) if c.window as u64 >= 3 * bound && bound % c.period == 0 => {
                    seen.insert(c.period);
                }
                other => bad.push((p, format!("{other:?}"))),
            }
        }
        periods.push(format!("k={k}: {seen:?} | {bound}"));
    }
    let first = bad.first().map(|c| format!(", first {c:?}")).unwrap_or_default();
    outcome(bad.is_empty(), format!("{checked} columns, minimal periods {}{first}", periods.join("; ")))
}

fn kernel_automaton(engine: &Engine) -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for kind in BOTH {
        let closure = match kernel_closure(&KernelExpr::base(kind), DEFAULT_STATE_CAP) {
            Ok(c) => c,
            Err(e) => {
                notes.push(format!("{kind}: {e}"));
                pass = false;
                continue;
            }
        };
        let bad_states: Vec<usize> = (0..closure.states.len())
            .into_par_iter()
            .filter(|&i| {
                let word = &closure.words[i];
                let scale = 3u64.pow(word.len() as u32);
                let r = word.iter().rev().fold(0u64, |acc, &(a, _)| 3 * acc + a as u64);
                let s = word.iter().rev().fold(0u64, |acc, &(_, b)| 3 * acc + b as u64);
                let state = &closure.states[i];
                !(0..=20u64).all(|n| {
                    (0..=20u64).all(|p| {
                        state.evaluate(engine, n, p).ok() == Some(engine.value(kind, (scale * n + r) as i64, scale * p + s))
                    })
                })
            })
            .collect();
        let dfao = Dfao2D::for_kind(engine, kind, DEFAULT_STATE_CAP);
        let grid_bad = match &dfao {
            Ok(d) => (1..=96u64)
                .flat_map(|n| (0..=127u64).map(move |p| (n, p)))
                .filter(|&(n, p)| d.evaluate_u64(n, p) != engine.value(kind, n as i64, p))
                .count(),
            Err(_) => 96 * 128,
        };
        pass &= bad_states.is_empty() && grid_bad == 0;
        notes.push(format!(
            "{kind}: {} states (cap {DEFAULT_STATE_CAP}), {} unsound on 21x21, {grid_bad} of 96x128 cells wrong",
            closure.states.len(),
            bad_states.len()
        ));
    }
    outcome(pass, notes.join("; "))
}

fn pade_error_law() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=12usize {
        let ok = match (pade(n), verify_pade_error(n)) {
            (Ok(a), Ok(report)) => {
                let residual = a.residual(2 * n);
                let q0 = BigRational::from_integer(a.denominator.coeff(0));
                let expected = BigRational::new(hankel_det(Kind::Gamma, 0, n + 1), hankel_det(Kind::Gamma, 0, n));
                residual[..2 * n].iter().all(Zero::is_zero)
                    && BigRational::from_integer(residual[2 * n].clone()) == expected.clone() * q0
                    && report.expected == expected
                    && report.holds
            }
            _ => false,
        };
        if !ok {
            bad.push(n);
        }
    }
    outcome(bad.is_empty(), format!("orders 1..12, failing orders {bad:?}"))
}

fn functional_equation() -> Outcome {
    match verify_functional_equation(3000) {
        Ok(r) => outcome(r.holds, format!("through degree {}, first mismatch {:?}", r.deg, r.first_mismatch)),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn irrationality() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for b in [2u64, 3, 10] {
        let estimates = match irrationality_estimates(b, 12) {
            Ok(e) => e,
            Err(e) => {
                notes.push(format!("b={b}: {e}"));
                pass = false;
                continue;
            }
        };
        let degenerate: Vec<usize> = estimates.iter().filter(|e| e.degenerate).map(|e| e.n).collect();
        // q = 1 leaves the exponent undefined, so only n = 1 may be degenerate.
        let finite = degenerate.iter().all(|&n| n == 1)
            && estimates.iter().filter(|e| !e.degenerate).all(|e| {
                e.mu.is_some() && e.mu_lower.is_some_and(f64::is_finite) && e.mu_upper.is_some_and(f64::is_finite)
            });
        let tail: Vec<(f64, f64)> = estimates[9..].iter().map(|e| (e.mu_lower.unwrap_or(f64::NAN), e.mu_upper.unwrap_or(f64::NAN))).collect();
        let in_band = tail.iter().all(|&(lo, hi)| lo >= 1.8 && hi <= 2.4);
        pass &= finite && in_band;
        let tail_text: Vec<String> = tail.iter().map(|(lo, hi)| format!("[{lo:.4}, {hi:.4}]")).collect();
        notes.push(format!("b={b}: degenerate n {degenerate:?}, last three {}", tail_text.join(" ")));
    }
    for b in [2u64, 3] {
        match eta_identity_check(b, 60) {
            Ok(r) => {
                pass &= r.stated.overlap;
                notes.push(format!(
                    "eta b={b}: lhs {:.12} vs stated rhs {:.12} overlap {} (corrected form overlap {})",
                    r.lhs.midpoint_f64(),
                    r.stated.rhs.midpoint_f64(),
                    r.stated.overlap,
                    r.corrected.overlap
                ));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("eta b={b}: {e}"));
            }
        }
    }
    outcome(pass, notes.join("; "))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_cantor-hankel"))
            .args(["verify", "--oracle"])
            .output()
            .expect("run cantor-hankel")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && a.status.code() == b.status.code();
    let pass = same && a.status.success() && !a.stdout.is_empty();
    let mut lib = Vec::new();
    let mut lib_again = Vec::new();
    let args = ["cantor-hankel", "verify", "--oracle", "--format", "json"];
    let c1 = cantor_hankel::cli::run(args, &mut lib, &mut Vec::new());
    let c2 = cantor_hankel::cli::run(args, &mut lib_again, &mut Vec::new());
    let lib_same = lib == lib_again && c1 == c2;
    outcome(
        pass && lib_same,
        format!(
            "binary text reports {} bytes, identical {same}, exit {:?}; library json reports identical {lib_same}",
            a.stdout.len(),
            a.status.code()
        ),
    )
}

fn main() -> ExitCode {
    let engine = Engine::new();
    let criteria: [(&str, &dyn Fn() -> Outcome); 10] = [
        ("oracle equivalence", &|| oracle_equivalence(&engine)),
        ("exact recurrences", &exact_recurrences),
        ("closed forms", &|| closed_forms(&engine)),
        ("generating series", &|| generating_series(&engine)),
        ("periodicity", &|| periodicity(&engine)),
        ("kernel and automaton", &|| kernel_automaton(&engine)),
        ("pade error law", &pade_error_law),
        ("functional equation", &functional_equation),
        ("irrationality enclosures", &irrationality),
        ("determinism", &determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        failed += !o.pass as usize;
        println!(
            "criterion {:>2} {:<26} {}  {} ({:.1}s)",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
