//! Mod-3 Hankel determinants by ternary recurrence.
//!
//! Write `n = 3m + r` and `p = 3q + s`. Each of the eighteen `(kind, r, s)`
//! cases expresses `|Γ_n^p|` or `|Δ_n^p|` as a signed sum of products of
//! determinants at indices `m − 1 ..= m + 2` and `q ..= q + 1`. The Γ cases
//! hold over ℤ; the Δ cases only mod 3. With the boundary values
//!
//! * `|Γ_0^p| = 2` if `p = 0`, else `1`
//! * `|Δ_0^p| = 1`
//! * `|Δ_{−1}^p| = 1` if `p = 0`, else `0`
//! * `|Γ_1^p| = c_p`, `|Δ_1^p| = d_p`
//!
//! the recurrences hold for every `m ≥ 0`, so the only base cases are
//! `n ∈ {−1, 0, 1}`. Note that `|Γ_0^0| = 2` differs from the usual
//! empty-determinant convention used by [`crate::hankel`].

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::RwLock;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::residue::Residue3;
use crate::sequences::{cantor_term, diff_term, Kind};

/// One factor `|X_{m+dn}^{q+dp}|^exp` of a recurrence term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factor {
    pub kind: Kind,
    pub dn: i64,
    pub dp: u64,
    pub exp: u32,
}

/// `(−1)^m · Π factors` when `odd` is false, `(−1)^{m+1} · Π factors` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub odd: bool,
    pub factors: &'static [Factor],
}

/// The recurrence for `|X_{3m+r}^{3q+s}|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Formula {
    /// 1-based label: 1–9 for Γ, 10–18 for Δ.
    pub number: u8,
    pub kind: Kind,
    pub r: u8,
    pub s: u8,
    /// Whether the identity holds over ℤ (true for the Γ cases).
    pub exact: bool,
    pub terms: &'static [Term],
}

const fn g(dn: i64, dp: u64, exp: u32) -> Factor {
    Factor { kind: Kind::Gamma, dn, dp, exp }
}

const fn d(dn: i64, dp: u64, exp: u32) -> Factor {
    Factor { kind: Kind::Delta, dn, dp, exp }
}

const fn plus(factors: &'static [Factor]) -> Term {
    Term { odd: false, factors }
}

const fn minus(factors: &'static [Factor]) -> Term {
    Term { odd: true, factors }
}

const fn formula(number: u8, kind: Kind, r: u8, s: u8, terms: &'static [Term]) -> Formula {
    Formula { number, kind, r, s, exact: matches!(kind, Kind::Gamma), terms }
}

/// All eighteen recurrences, ordered by `(kind, s, r)`.
pub static FORMULAS: [Formula; 18] = [
    formula(1, Kind::Gamma, 0, 0, &[plus(&[g(0, 0, 2), d(0, 0, 1)]), minus(&[g(0, 0, 1), g(1, 0, 1), d(-1, 0, 1)])]),
    formula(2, Kind::Gamma, 1, 0, &[plus(&[g(0, 0, 1), g(1, 0, 1), d(0, 0, 1)]), minus(&[g(1, 0, 2), d(-1, 0, 1)])]),
    formula(3, Kind::Gamma, 2, 0, &[plus(&[g(1, 0, 2), d(0, 0, 1)])]),
    formula(4, Kind::Gamma, 0, 1, &[plus(&[g(0, 0, 1), g(0, 1, 1), d(0, 0, 1)]), minus(&[g(0, 1, 1), g(1, 0, 1), d(-1, 0, 1)])]),
    formula(5, Kind::Gamma, 1, 1, &[minus(&[g(1, 0, 2), d(-1, 1, 1)])]),
    formula(6, Kind::Gamma, 2, 1, &[minus(&[g(1, 0, 2), d(0, 1, 1)])]),
    formula(7, Kind::Gamma, 0, 2, &[plus(&[g(0, 1, 2), d(0, 0, 1)])]),
    formula(8, Kind::Gamma, 1, 2, &[plus(&[g(0, 1, 1), g(1, 0, 1), d(0, 1, 1)]), minus(&[g(1, 0, 1), g(1, 1, 1), d(-1, 1, 1)])]),
    formula(9, Kind::Gamma, 2, 2, &[minus(&[g(1, 1, 2), d(0, 0, 1)])]),
    formula(10, Kind::Delta, 0, 0, &[plus(&[g(0, 0, 1), d(0, 0, 2)]), minus(&[g(1, 0, 1), d(-1, 0, 1), d(0, 0, 1)])]),
    formula(11, Kind::Delta, 1, 0, &[minus(&[g(1, 0, 1), d(0, 0, 2)])]),
    formula(12, Kind::Delta, 2, 0, &[plus(&[g(2, 0, 1), d(0, 0, 2)]), minus(&[g(1, 0, 1), d(0, 0, 1), d(1, 0, 1)])]),
    formula(13, Kind::Delta, 0, 1, &[plus(&[g(0, 1, 1), d(0, 0, 2)])]),
    formula(14, Kind::Delta, 1, 1, &[plus(&[g(1, 1, 1), d(0, 0, 2)])]),
    formula(15, Kind::Delta, 2, 1, &[plus(&[g(2, 0, 1), d(0, 0, 1), d(0, 1, 1)]), minus(&[g(1, 0, 1), d(0, 1, 1), d(1, 0, 1)])]),
    formula(16, Kind::Delta, 0, 2, &[plus(&[g(0, 1, 1), d(0, 0, 1), d(0, 1, 1)]), minus(&[g(1, 1, 1), d(0, 0, 1), d(-1, 1, 1)])]),
    formula(17, Kind::Delta, 1, 2, &[plus(&[g(1, 0, 1), d(0, 1, 2)])]),
    formula(18, Kind::Delta, 2, 2, &[plus(&[g(2, 0, 1), d(0, 1, 2)])]),
];

/// The recurrence covering `|X_{3m+r}^{3q+s}|`.
pub fn formula_for(kind: Kind, r: u8, s: u8) -> &'static Formula {
    let offset = match kind {
        Kind::Gamma => 0,
        Kind::Delta => 9,
    };
    &FORMULAS[offset + 3 * s as usize + r as usize]
}

impl Formula {
    /// Evaluates the right-hand side at `(m, q)` in any commutative ring,
    /// looking up determinants through `cell(kind, n, p)`.
    pub fn evaluate<T>(&self, m: i64, q: u64, one: T, mut cell: impl FnMut(Kind, i64, u64) -> T) -> T
    where
        T: Clone + Add<Output = T> + Mul<Output = T> + Neg<Output = T>,
    {
        let mut total: Option<T> = None;
        for term in self.terms {
            let mut product = one.clone();
            for f in term.factors {
                let value = cell(f.kind, m + f.dn, q + f.dp);
                for _ in 0..f.exp {
                    product = product * value.clone();
                }
            }
            if (m % 2 == 1) != term.odd {
                product = -product;
            }
            total = Some(match total {
                Some(t) => t + product,
                None => product,
            });
        }
        total.expect("every formula has at least one term")
    }

    /// The left-hand side `(kind, 3m + r, 3q + s)`.
    pub fn target(&self, m: i64, q: u64) -> (Kind, i64, u64) {
        (self.kind, 3 * m + self.r as i64, 3 * q + self.s as u64)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = |k: Kind| if k == Kind::Gamma { "G" } else { "D" };
        let r = if self.r == 0 { String::new() } else { format!("+{}", self.r) };
        let s = if self.s == 0 { String::new() } else { format!("+{}", self.s) };
        write!(f, "({}) |{}_(3n{r})^(3p{s})| = ", self.number, sym(self.kind))?;
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(if term.odd { "(-1)^(n+1)" } else { "(-1)^n" })?;
            for fac in term.factors {
                let off = |v: i64| match v {
                    0 => String::new(),
                    v if v > 0 => format!("+{v}"),
                    v => format!("{v}"),
                };
                write!(f, "|{}_(n{})^(p{})|", sym(fac.kind), off(fac.dn), off(fac.dp as i64))?;
                if fac.exp > 1 {
                    write!(f, "^{}", fac.exp)?;
                }
            }
        }
        Ok(())
    }
}

/// Key of a memoized determinant. `n = −1` is only meaningful for Δ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellKey {
    pub kind: Kind,
    pub n: i64,
    pub p: u64,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("no determinant is defined for {kind} at n = {n}")]
    InvalidCell { kind: Kind, n: i64 },
    #[error("grid of {cells} cells exceeds the limit of {limit}")]
    GridTooLarge { cells: u128, limit: u128 },
    #[error("empty range: n in {n_lo}..={n_hi}, p in {p_lo}..={p_hi}")]
    EmptyRange { n_lo: u64, n_hi: u64, p_lo: u64, p_hi: u64 },
    #[error("column p = {p}: no period dividing {bound} fits the first {window} terms (minimal period found: {found:?})")]
    NoPeriod { p: u64, bound: u64, window: usize, found: Option<usize> },
}

impl CellKey {
    pub fn new(kind: Kind, n: i64, p: u64) -> Result<Self, EngineError> {
        let min = match kind {
            Kind::Gamma => 0,
            Kind::Delta => -1,
        };
        if n < min {
            return Err(EngineError::InvalidCell { kind, n });
        }
        Ok(CellKey { kind, n, p })
    }
}

/// `(−1)ⁿ` as an element of F₃.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignFactor(Residue3);

impl SignFactor {
    pub fn of(n: i64) -> Self {
        SignFactor(Residue3::sign(n))
    }

    pub fn value(self) -> Residue3 {
        self.0
    }
}

/// Memoizing evaluator of `|Γ_n^p|` and `|Δ_n^p|` mod 3.
///
/// Safe to share between threads; the cache is behind a read-write lock.
pub struct Engine {
    memo: RwLock<HashMap<CellKey, Residue3>>,
    cache_cap: Option<usize>,
    max_depth: AtomicUsize,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine { memo: RwLock::new(HashMap::new()), cache_cap: None, max_depth: AtomicUsize::new(0) }
    }

    /// Stops inserting into the cache once it holds `cap` entries.
    pub fn with_cache_cap(cap: usize) -> Self {
        Engine { cache_cap: Some(cap), ..Engine::new() }
    }

    /// `|Γ_n^p| mod 3`.
    ///
    /// # Panics
    /// If `n > i64::MAX`.
    pub fn gamma(&self, n: u64, p: u64) -> Residue3 {
        let n = i64::try_from(n).unwrap_or_else(|_| panic!("index n = {n} exceeds i64::MAX"));
        self.eval(Kind::Gamma, n, p, 0)
    }

    /// `|Δ_n^p| mod 3` for `n ≥ −1`.
    ///
    /// # Panics
    /// If `n < −1`.
    pub fn delta(&self, n: i64, p: u64) -> Residue3 {
        assert!(n >= -1, "|Δ_n^p| is undefined for n = {n}");
        self.eval(Kind::Delta, n, p, 0)
    }

    pub fn cell(&self, key: CellKey) -> Residue3 {
        self.eval(key.kind, key.n, key.p, 0)
    }

    /// Same as [`Engine::gamma`]/[`Engine::delta`] but keyed by kind.
    pub fn value(&self, kind: Kind, n: i64, p: u64) -> Residue3 {
        match kind {
            Kind::Gamma => {
                assert!(n >= 0, "|Γ_n^p| is undefined for n = {n}");
                self.eval(kind, n, p, 0)
            }
            Kind::Delta => self.delta(n, p),
        }
    }

    /// Deepest recursion seen so far (base cases count as depth 0).
    pub fn max_depth(&self) -> usize {
        self.max_depth.load(Ordering::Relaxed)
    }

    pub fn cache_len(&self) -> usize {
        self.memo.read().expect("engine cache poisoned").len()
    }

    fn base_case(kind: Kind, n: i64, p: u64) -> Option<Residue3> {
        let v = match (kind, n) {
            (Kind::Delta, -1) => Residue3::new((p == 0) as i64),
            (Kind::Gamma, 0) => Residue3::new(if p == 0 { 2 } else { 1 }),
            (Kind::Delta, 0) => Residue3::ONE,
            (Kind::Gamma, 1) => Residue3::new(cantor_term(p).value() as i64),
            (Kind::Delta, 1) => Residue3::new(diff_term(p).value() as i64),
            _ => return None,
        };
        Some(v)
    }

    fn eval(&self, kind: Kind, n: i64, p: u64, depth: usize) -> Residue3 {
        if let Some(v) = Self::base_case(kind, n, p) {
            return v;
        }
        let key = CellKey { kind, n, p };
        if let Some(&v) = self.memo.read().expect("engine cache poisoned").get(&key) {
            return v;
        }
        self.max_depth.fetch_max(depth + 1, Ordering::Relaxed);
        let (m, r) = (n / 3, (n % 3) as u8);
        let (q, s) = (p / 3, (p % 3) as u8);
        let value = formula_for(kind, r, s).evaluate(m, q, Residue3::ONE, |k, nn, pp| self.eval(k, nn, pp, depth + 1));
        let mut memo = self.memo.write().expect("engine cache poisoned");
        if self.cache_cap.is_none_or(|cap| memo.len() < cap) {
            memo.insert(key, value);
        }
        value
    }

    /// Dense table of `|Γ_n^p| mod 3` over an inclusive rectangle.
    pub fn grid(&self, n_lo: u64, n_hi: u64, p_lo: u64, p_hi: u64) -> Result<Grid, EngineError> {
        self.grid_limited(n_lo, n_hi, p_lo, p_hi, DEFAULT_GRID_LIMIT)
    }

    pub fn grid_limited(&self, n_lo: u64, n_hi: u64, p_lo: u64, p_hi: u64, limit: u128) -> Result<Grid, EngineError> {
        self.grid_for_limited(Kind::Gamma, n_lo, n_hi, p_lo, p_hi, limit)
    }

    /// Dense table of either kind.
    pub fn grid_for(&self, kind: Kind, n_lo: u64, n_hi: u64, p_lo: u64, p_hi: u64) -> Result<Grid, EngineError> {
        self.grid_for_limited(kind, n_lo, n_hi, p_lo, p_hi, DEFAULT_GRID_LIMIT)
    }

    pub fn grid_for_limited(
        &self,
        kind: Kind,
        n_lo: u64,
        n_hi: u64,
        p_lo: u64,
        p_hi: u64,
        limit: u128,
    ) -> Result<Grid, EngineError> {
        if n_lo > n_hi || p_lo > p_hi {
            return Err(EngineError::EmptyRange { n_lo, n_hi, p_lo, p_hi });
        }
        let rows = (n_hi - n_lo) as u128 + 1;
        let cols = (p_hi - p_lo) as u128 + 1;
        if rows * cols > limit {
            return Err(EngineError::GridTooLarge { cells: rows * cols, limit });
        }
        let values: Vec<Residue3> = (n_lo..=n_hi)
            .into_par_iter()
            .flat_map_iter(|n| (p_lo..=p_hi).map(move |p| self.value(kind, n as i64, p)))
            .collect();
        Ok(Grid { kind, n_lo, n_hi, p_lo, p_hi, values })
    }

    /// Minimal period of `n ↦ |Γ_n^p| mod 3` (n ≥ 1), checked against the
    /// `12·3ᵏ` bound where `k` is the least integer with `p ≤ 3ᵏ⁺¹`.
    pub fn column_period(&self, p: u64) -> Result<ColumnPeriod, EngineError> {
        self.column_period_with_k(p, period_exponent(p))
    }

    /// As [`Engine::column_period`] but with an explicit exponent `k`.
    pub fn column_period_with_k(&self, p: u64, k: u32) -> Result<ColumnPeriod, EngineError> {
        let bound = 12 * 3u64.pow(k);
        let window = 3 * bound as usize;
        let values: Vec<Residue3> = (1..=window as u64).map(|n| self.gamma(n, p)).collect();
        let found = minimal_period(&values);
        match found {
            Some(t) if bound.is_multiple_of(t as u64) => Ok(ColumnPeriod { p, k, bound, period: t as u64, window }),
            _ => Err(EngineError::NoPeriod { p, bound, window, found }),
        }
    }
}

/// Default cell limit for [`Engine::grid`].
pub const DEFAULT_GRID_LIMIT: u128 = 50_000_000;

/// The least `k ≥ 0` with `p ≤ 3ᵏ⁺¹`.
pub fn period_exponent(p: u64) -> u32 {
    let mut k = 0;
    while (p as u128) > 3u128.pow(k + 1) {
        k += 1;
    }
    k
}

/// The smallest `t` with `v[i] = v[i + t]` throughout the slice, provided the
/// slice covers at least two full periods; `None` otherwise.
pub fn minimal_period<T: PartialEq>(values: &[T]) -> Option<usize> {
    (1..=values.len() / 2).find(|&t| (0..values.len() - t).all(|i| values[i] == values[i + t]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnPeriod {
    pub p: u64,
    pub k: u32,
    /// `12·3ᵏ`.
    pub bound: u64,
    pub period: u64,
    /// Number of terms `n = 1..=window` scanned.
    pub window: usize,
}

/// Values mod 3 on an inclusive rectangle, rows indexed by `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub kind: Kind,
    pub n_lo: u64,
    pub n_hi: u64,
    pub p_lo: u64,
    pub p_hi: u64,
    values: Vec<Residue3>,
}

impl Grid {
    pub fn width(&self) -> usize {
        (self.p_hi - self.p_lo) as usize + 1
    }

    pub fn height(&self) -> usize {
        (self.n_hi - self.n_lo) as usize + 1
    }

    pub fn get(&self, n: u64, p: u64) -> Residue3 {
        assert!((self.n_lo..=self.n_hi).contains(&n) && (self.p_lo..=self.p_hi).contains(&p));
        self.values[(n - self.n_lo) as usize * self.width() + (p - self.p_lo) as usize]
    }

    pub fn row(&self, n: u64) -> &[Residue3] {
        let start = (n - self.n_lo) as usize * self.width();
        &self.values[start..start + self.width()]
    }

    pub fn column(&self, p: u64) -> Vec<Residue3> {
        (self.n_lo..=self.n_hi).map(|n| self.get(n, p)).collect()
    }
}

/// `(|Γ_n^0|, |Δ_n^0|) mod 3` from the period-4 pattern.
pub fn closed_form_p0(n: u64) -> (Residue3, Residue3) {
    assert!(n >= 1, "closed form stated for n ≥ 1");
    match n % 4 {
        1 | 2 => (Residue3::ONE, Residue3::TWO),
        _ => (Residue3::TWO, Residue3::ONE),
    }
}

/// `|Γ_n^1| ≡ |Δ_n^1| mod 3` from the period-4 pattern `0, 2, 0, 1`.
pub fn closed_form_p1(n: u64) -> Residue3 {
    assert!(n >= 1, "closed form stated for n ≥ 1");
    match n % 4 {
        1 | 3 => Residue3::ZERO,
        2 => Residue3::TWO,
        _ => Residue3::ONE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::hankel_det_mod3;

    #[test]
    fn table_is_indexed_consistently() {
        for (i, f) in FORMULAS.iter().enumerate() {
            assert_eq!(f.number as usize, i + 1);
            assert_eq!(formula_for(f.kind, f.r, f.s), f);
        }
    }

    #[test]
    fn engine_examples() {
        let e = Engine::new();
        for p in 0..30 {
            assert_eq!(e.gamma(1, p).value(), cantor_term(p).value());
        }
        assert_eq!(e.gamma(5, 0), Residue3::ONE);
        assert_eq!(e.gamma(7, 2), hankel_det_mod3(Kind::Gamma, 2, 7));
        assert_eq!(e.delta(-1, 0), Residue3::ONE);
        assert_eq!(e.delta(-1, 5), Residue3::ZERO);
        assert_eq!(e.delta(1, 0), Residue3::TWO);
        assert_eq!(e.delta(6, 4), hankel_det_mod3(Kind::Delta, 4, 6));
    }

    #[test]
    fn cell_key_validation() {
        assert!(CellKey::new(Kind::Delta, -1, 3).is_ok());
        assert!(CellKey::new(Kind::Gamma, -1, 3).is_err());
        assert!(CellKey::new(Kind::Delta, -2, 0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_p0(1), (Residue3::ONE, Residue3::TWO));
        assert_eq!(closed_form_p0(4), (Residue3::TWO, Residue3::ONE));
        assert_eq!(closed_form_p0(7), (Residue3::TWO, Residue3::ONE));
        assert_eq!(closed_form_p1(2), Residue3::TWO);
        assert_eq!(closed_form_p1(3), Residue3::ZERO);
        assert_eq!(closed_form_p1(8), Residue3::ONE);
    }

    #[test]
    fn closed_forms_match_engine() {
        let e = Engine::new();
        for n in 1..=2000 {
            let (g0, d0) = closed_form_p0(n);
            assert_eq!(e.gamma(n, 0), g0, "n = {n}");
            assert_eq!(e.delta(n as i64, 0), d0, "n = {n}");
            assert_eq!(e.gamma(n, 1), closed_form_p1(n), "n = {n}");
            assert_eq!(e.delta(n as i64, 1), closed_form_p1(n), "n = {n}");
        }
    }

    #[test]
    fn grid_examples() {
        let e = Engine::new();
        let row = e.grid(1, 1, 0, 8).unwrap();
        let got: Vec<u8> = row.row(1).iter().map(|r| r.value()).collect();
        assert_eq!(got, vec![1, 0, 1, 0, 0, 0, 1, 0, 1]);
        let col = e.grid(1, 4, 0, 0).unwrap();
        let got: Vec<u8> = col.column(0).iter().map(|r| r.value()).collect();
        assert_eq!(got, vec![1, 1, 2, 2]);
        assert!(matches!(e.grid(3, 2, 0, 0), Err(EngineError::EmptyRange { .. })));
        assert!(matches!(e.grid_limited(1, 100, 0, 100, 50), Err(EngineError::GridTooLarge { .. })));
    }

    #[test]
    fn depth_is_logarithmic() {
        let e = Engine::new();
        e.gamma(3u64.pow(12), 3u64.pow(12) + 5);
        let depth = e.max_depth();
        assert!(depth > 0 && depth <= 4 * 13, "depth {depth}");
    }

    #[test]
    fn cache_cap_is_respected() {
        let e = Engine::with_cache_cap(10);
        let fresh = Engine::new();
        for n in 0..50 {
            assert_eq!(e.gamma(n, 7), fresh.gamma(n, 7));
        }
        assert!(e.cache_len() <= 10);
    }

    #[test]
    fn period_examples() {
        let e = Engine::new();
        assert_eq!(e.column_period(0).unwrap().period, 4);
        assert_eq!(e.column_period(1).unwrap().period, 4);
        let p2 = e.column_period(2).unwrap();
        assert_eq!(12 % p2.period, 0);
        assert_eq!(period_exponent(3), 0);
        assert_eq!(period_exponent(4), 1);
        assert_eq!(period_exponent(28), 3);
    }

    #[test]
    fn minimal_period_helper() {
        assert_eq!(minimal_period(&[1, 2, 1, 2, 1, 2]), Some(2));
        assert_eq!(minimal_period(&[1, 1, 1]), Some(1));
        assert_eq!(minimal_period(&[1, 2, 3]), None);
    }

    #[test]
    fn display_formula() {
        assert_eq!(
            FORMULAS[2].to_string(),
            "(3) |G_(3n+2)^(3p)| = (-1)^n|G_(n+1)^(p)|^2|D_(n)^(p)|"
        );
    }
}
