//! Command-line front end. Every subcommand parses its arguments, calls the
//! library and formats the result.
//!
//! Exit codes: 0 on success, 1 when a checked identity fails, 2 on usage or
//! input errors.

use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::hankel::{hankel_det, hankel_det_mod3};
use crate::kernel::{build_dfao, kernel_closure, DfaoFormat, KernelError, KernelExpr, DEFAULT_STATE_CAP};
use crate::pade::{
    eta_identity_check, irrationality_estimates, pade, verify_functional_equation, verify_pade_error, EtaForm,
    RationalInterval,
};
use crate::recurrence::{CellKey, Engine, Grid};
use crate::residue::Residue3;
use crate::sequences::{cantor_term, diff_term, Kind};
use crate::series::{series_delta, series_gamma};
use crate::verify::{verify, VerifyOptions};

/// Environment variable overriding the default kernel state cap.
pub const KERNEL_CAP_ENV: &str = "CANTOR_KERNEL_CAP";

#[derive(Parser, Debug)]
#[command(name = "cantor-hankel", version, about = "Hankel determinants of the Cantor sequence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SeqKind {
    /// The Cantor sequence.
    C,
    /// dₙ = cₙ + cₙ₊₂.
    D,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Gamma,
    Delta,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Gamma => Kind::Gamma,
            KindArg::Delta => Kind::Delta,
        }
    }
}

#[derive(Clone, Debug)]
struct StartArg {
    label: String,
    expr: KernelExpr,
}

fn parse_start(s: &str) -> Result<StartArg, String> {
    let expr = match s {
        "gamma" => KernelExpr::base(Kind::Gamma),
        "delta" => KernelExpr::base(Kind::Delta),
        _ => s.parse().map_err(|e: KernelError| e.to_string())?,
    };
    Ok(StartArg { label: s.to_string(), expr })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SeqFormat {
    Csv,
    Json,
    Raw,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GridFormat {
    Csv,
    Json,
    Ppm,
    Ascii,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesFormat {
    Rational,
    Coeffs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Dot,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Table,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct CapArg {
    /// Kernel state cap (default: $CANTOR_KERNEL_CAP or 1000000).
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Terms of c or d.
    Seq {
        #[arg(long, value_enum)]
        kind: SeqKind,
        #[arg(long, default_value_t = 0)]
        start: u64,
        #[arg(long, default_value_t = 27)]
        count: u64,
        #[arg(long, value_enum, default_value_t = SeqFormat::Raw)]
        format: SeqFormat,
    },
    /// Determinant of an explicitly built Hankel matrix.
    Det {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(short = 'p')]
        p: u64,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, conflicts_with = "mod3")]
        exact: bool,
        #[arg(long)]
        mod3: bool,
    },
    /// One value of the recurrence engine, mod 3.
    Cell {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(short = 'n', allow_negative_numbers = true)]
        n: i64,
        #[arg(short = 'p')]
        p: u64,
    },
    /// Values for 1 ≤ n ≤ n-max, 0 ≤ p ≤ p-max.
    Grid {
        #[arg(long, value_enum, default_value_t = KindArg::Gamma)]
        kind: KindArg,
        #[arg(long)]
        n_max: u64,
        #[arg(long)]
        p_max: u64,
        #[arg(long, value_enum, default_value_t = GridFormat::Ascii)]
        format: GridFormat,
    },
    /// Minimal period of the column n ↦ |Γ_n^p| mod 3.
    Period {
        #[arg(short = 'p')]
        p: u64,
    },
    /// Generating series of a column as P(x)/(1 − xᵗ) over F₃.
    Series {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(short = 'p')]
        p: u64,
        #[arg(long, value_enum, default_value_t = SeriesFormat::Rational)]
        format: SeriesFormat,
    },
    /// Closure of Γ or Δ under the decimation operators.
    Kernel {
        /// `gamma`, `delta`, or a kernel expression.
        #[arg(long, value_parser = parse_start, default_value = "gamma")]
        start: StartArg,
        #[command(flatten)]
        cap: CapArg,
        /// Print every state.
        #[arg(long)]
        list: bool,
    },
    /// Export the two-dimensional automaton.
    Dfao {
        /// `gamma`, `delta`, or a kernel expression.
        #[arg(long, value_parser = parse_start, default_value = "gamma")]
        start: StartArg,
        #[arg(long, value_enum, default_value_t = ExportFormat::Table)]
        export: ExportFormat,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Run the automaton on (n, p).
    DfaoEval {
        /// `gamma`, `delta`, or a kernel expression.
        #[arg(long, value_parser = parse_start, default_value = "gamma")]
        start: StartArg,
        #[arg(short = 'n')]
        n: BigUint,
        #[arg(short = 'p')]
        p: BigUint,
        #[command(flatten)]
        cap: CapArg,
    },
    /// The [n−1/n] Padé approximant of Σ cₖxᵏ.
    Pade {
        #[arg(short = 'n')]
        n: usize,
        /// Check the x²ⁿ error coefficient.
        #[arg(long)]
        verify: bool,
    },
    /// Check f(x) = (1 + x²)·f(x³) through a degree.
    Feq {
        #[arg(long)]
        deg: usize,
    },
    /// Irrationality exponent estimates for the Cantor number in base b.
    Irr {
        #[arg(short = 'b')]
        b: u64,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
        format: ReportFormat,
    },
    /// Enclose both sides of the reduction of η_{d,b} to ξ_{c,b³}.
    Eta {
        #[arg(short = 'b')]
        b: u64,
        #[arg(long, default_value_t = 60)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
        format: ReportFormat,
    },
    /// Run every identity check.
    Verify {
        /// Also compare the engine with explicit determinants.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 20)]
        n_max: u64,
        #[arg(long, default_value_t = 27)]
        p_max: u64,
        #[arg(long, value_enum, default_value_t = VerifyFormat::Text)]
        format: VerifyFormat,
        #[command(flatten)]
        cap: CapArg,
    },
}

enum Failure {
    Io(io::Error),
    Input(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn kernel_cap(arg: &CapArg) -> Result<usize, Failure> {
    if let Some(c) = arg.cap {
        return Ok(c);
    }
    match std::env::var(KERNEL_CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Input(format!("{KERNEL_CAP_ENV}={v} is not a count"))),
        Err(_) => Ok(DEFAULT_STATE_CAP),
    }
}

fn json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(input)?;
    writeln!(out)?;
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Seq { kind, start, count, format } => seq(out, kind, start, count, format),
        Command::Det { kind, p, n, mod3, .. } => {
            if mod3 {
                writeln!(out, "{}", hankel_det_mod3(kind.into(), p, n))?;
            } else {
                writeln!(out, "{}", hankel_det(kind.into(), p, n))?;
            }
            Ok(0)
        }
        Command::Cell { kind, n, p } => {
            let key = CellKey::new(kind.into(), n, p).map_err(input)?;
            writeln!(out, "{}", Engine::new().cell(key))?;
            Ok(0)
        }
        Command::Grid { kind, n_max, p_max, format } => {
            let grid = Engine::new().grid_for(kind.into(), 1, n_max, 0, p_max).map_err(input)?;
            write_grid(out, &grid, format)?;
            Ok(0)
        }
        Command::Period { p } => {
            let c = Engine::new().column_period(p).map_err(input)?;
            writeln!(out, "p={} k={} bound={} period={} window={}", c.p, c.k, c.bound, c.period, c.window)?;
            Ok(0)
        }
        Command::Series { kind, p, format } => {
            let engine = Engine::new();
            let s = match Kind::from(kind) {
                Kind::Gamma => series_gamma(&engine, p),
                Kind::Delta => series_delta(&engine, p),
            }
            .map_err(input)?;
            match format {
                SeriesFormat::Rational => writeln!(out, "{}", s.to_rational())?,
                SeriesFormat::Coeffs => {
                    let c: Vec<String> = s.coefficients().iter().map(|c| c.to_string()).collect();
                    writeln!(out, "{}", c.join(","))?
                }
            }
            Ok(0)
        }
        Command::Kernel { start, cap, list } => {
            let closure = kernel_closure(&start.expr, kernel_cap(&cap)?).map_err(input)?;
            writeln!(out, "kernel closure of {}: {} states", start.label, closure.states.len())?;
            if list {
                for (i, s) in closure.states.iter().enumerate() {
                    writeln!(out, "{i}: {s}")?;
                }
            }
            Ok(0)
        }
        Command::Dfao { start, export, cap } => {
            let d = build_dfao(&Engine::new(), &start.expr, kernel_cap(&cap)?).map_err(input)?;
            let format = match export {
                ExportFormat::Dot => DfaoFormat::Dot,
                ExportFormat::Table => DfaoFormat::Table,
            };
            out.write_all(d.export(format).as_bytes())?;
            Ok(0)
        }
        Command::DfaoEval { start, n, p, cap } => {
            let d = build_dfao(&Engine::new(), &start.expr, kernel_cap(&cap)?).map_err(input)?;
            writeln!(out, "{}", d.evaluate(&n, &p))?;
            Ok(0)
        }
        Command::Pade { n, verify } => {
            let a = pade(n).map_err(input)?;
            writeln!(out, "P(x) = {}", a.numerator)?;
            writeln!(out, "Q(x) = {}", a.denominator)?;
            if !verify {
                return Ok(0);
            }
            let r = verify_pade_error(n).map_err(input)?;
            writeln!(out, "x^{} coefficient of f - P/Q: {} (expected {})", 2 * n, r.coefficient, r.expected)?;
            if let Some(k) = r.first_nonzero_below {
                writeln!(out, "nonzero coefficient at degree {k}")?;
            }
            writeln!(out, "{}", if r.holds { "holds" } else { "FAILS" })?;
            Ok(if r.holds { 0 } else { 1 })
        }
        Command::Feq { deg } => {
            let r = verify_functional_equation(deg).map_err(input)?;
            match r.first_mismatch {
                None => writeln!(out, "f(x) = (1+x^2) f(x^3) holds through degree {deg}")?,
                Some(k) => writeln!(out, "mismatch at degree {k}")?,
            }
            Ok(if r.holds { 0 } else { 1 })
        }
        Command::Irr { b, n_max, format } => {
            let estimates = irrationality_estimates(b, n_max).map_err(input)?;
            match format {
                ReportFormat::Json => json(out, &estimates)?,
                ReportFormat::Table => {
                    writeln!(out, "n\tq\tmu_lower\tmu_upper")?;
                    for e in &estimates {
                        match (e.mu_lower, e.mu_upper) {
                            (Some(lo), Some(hi)) => writeln!(out, "{}\t{}\t{lo:.6}\t{hi:.6}", e.n, e.q)?,
                            _ => writeln!(out, "{}\t{}\tdegenerate\tdegenerate", e.n, e.q)?,
                        }
                    }
                }
            }
            Ok(0)
        }
        Command::Eta { b, depth, format } => {
            let r = eta_identity_check(b, depth).map_err(input)?;
            match format {
                ReportFormat::Json => json(out, &r)?,
                ReportFormat::Table => {
                    writeln!(out, "eta_(d,{b}) in {}", approx(&r.lhs))?;
                    let line = |name: &str, f: &EtaForm| {
                        format!(
                            "{name}: {}*xi_(c,{b}^3) - {} in {}  overlap={} holds={}",
                            f.factor,
                            f.offset,
                            approx(&f.rhs),
                            f.overlap,
                            f.holds
                        )
                    };
                    writeln!(out, "{}", line("stated", &r.stated))?;
                    writeln!(out, "{}", line("corrected", &r.corrected))?;
                }
            }
            Ok(if r.stated.holds { 0 } else { 1 })
        }
        Command::Verify { oracle, n_max, p_max, format, cap } => {
            let options = VerifyOptions { oracle, n_max, p_max, kernel_cap: kernel_cap(&cap)? };
            let report = verify(&Engine::new(), &options);
            match format {
                VerifyFormat::Text => out.write_all(report.to_text().as_bytes())?,
                VerifyFormat::Json => json(out, &report)?,
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn approx(i: &RationalInterval) -> String {
    let f = |r: &num_rational::BigRational| r.to_f64().unwrap_or(f64::NAN);
    format!("[{:.15}, {:.15}]", f(&i.lower), f(&i.upper))
}

fn seq(out: &mut dyn Write, kind: SeqKind, start: u64, count: u64, format: SeqFormat) -> Result<i32, Failure> {
    let end = start.checked_add(count).ok_or_else(|| Failure::Input("index range overflows".into()))?;
    let term = |n: u64| match kind {
        SeqKind::C => cantor_term(n).value(),
        SeqKind::D => diff_term(n).value(),
    };
    match format {
        SeqFormat::Raw => {
            let s: String = (start..end).map(|n| char::from(b'0' + term(n))).collect();
            writeln!(out, "{s}")?;
        }
        SeqFormat::Csv => {
            writeln!(out, "n,value")?;
            for n in start..end {
                writeln!(out, "{n},{}", term(n))?;
            }
        }
        SeqFormat::Json => {
            #[derive(Serialize)]
            struct Entry {
                n: u64,
                value: u8,
            }
            let v: Vec<Entry> = (start..end).map(|n| Entry { n, value: term(n) }).collect();
            json(out, &v)?;
        }
    }
    Ok(0)
}

/// PPM colour of a residue.
pub fn ppm_color(v: Residue3) -> (u8, u8, u8) {
    match v.value() {
        0 => (0, 0, 255),
        1 => (0, 200, 0),
        _ => (255, 0, 0),
    }
}

fn write_grid(out: &mut dyn Write, grid: &Grid, format: GridFormat) -> io::Result<()> {
    let rows = grid.n_lo..=grid.n_hi;
    match format {
        GridFormat::Csv => {
            let header: Vec<String> = (grid.p_lo..=grid.p_hi).map(|p| format!("p{p}")).collect();
            writeln!(out, "n,{}", header.join(","))?;
            for n in rows {
                let cells: Vec<String> = grid.row(n).iter().map(|v| v.to_string()).collect();
                writeln!(out, "{n},{}", cells.join(","))?;
            }
        }
        GridFormat::Json => {
            let values: Vec<Vec<u8>> = rows.map(|n| grid.row(n).iter().map(|v| v.value()).collect()).collect();
            #[derive(Serialize)]
            struct G {
                n_lo: u64,
                n_hi: u64,
                p_lo: u64,
                p_hi: u64,
                values: Vec<Vec<u8>>,
            }
            let g = G { n_lo: grid.n_lo, n_hi: grid.n_hi, p_lo: grid.p_lo, p_hi: grid.p_hi, values };
            serde_json::to_writer(&mut *out, &g).map_err(io::Error::other)?;
            writeln!(out)?;
        }
        GridFormat::Ppm => {
            writeln!(out, "P3\n{} {}\n255", grid.width(), grid.height())?;
            for n in rows {
                let pixels: Vec<String> = grid
                    .row(n)
                    .iter()
                    .map(|&v| {
                        let (r, g, b) = ppm_color(v);
                        format!("{r} {g} {b}")
                    })
                    .collect();
                writeln!(out, "{}", pixels.join(" "))?;
            }
        }
        GridFormat::Ascii => {
            for n in rows {
                let line: String = grid.row(n).iter().map(|v| char::from(b'0' + v.value())).collect();
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(())
}
