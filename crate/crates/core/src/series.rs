//! Purely periodic power series over F₃.
//!
//! A series `Σ aₙxⁿ` with `aₙ₊ₜ = aₙ` is stored as one period and is always
//! reduced to its minimal period, so structural equality is series equality.
//! Its rational form is `P(x)/(1 − xᵗ)` with `deg P < t`.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::recurrence::{formula_for, minimal_period, period_exponent, Engine};
use crate::residue::Residue3;
use crate::sequences::Kind;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("a periodic series needs at least one coefficient")]
    Empty,
    #[error("prepending {value} to a series whose period ends in {last} is not purely periodic")]
    Preperiodic { value: Residue3, last: Residue3 },
    #[error("numerator degree {degree} is not below the period {period}")]
    NumeratorTooLong { degree: usize, period: usize },
    #[error("{kind} column p = {p} has no period dividing {bound} on its first {window} terms")]
    NoPeriod { kind: Kind, p: u64, bound: u64, window: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PeriodicSeries {
    coeffs: Vec<Residue3>,
}

impl PeriodicSeries {
    /// Builds the series whose period is `period` (any period, not necessarily minimal).
    pub fn new(period: Vec<Residue3>) -> Result<Self, SeriesError> {
        if period.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self::canonical(period))
    }

    pub fn from_values(period: &[i64]) -> Result<Self, SeriesError> {
        Self::new(period.iter().map(|&v| Residue3::new(v)).collect())
    }

    fn canonical(mut coeffs: Vec<Residue3>) -> Self {
        let t = coeffs.len();
        let d = (1..=t)
            .find(|&d| t.is_multiple_of(d) && (d..t).all(|i| coeffs[i] == coeffs[i - d]))
            .expect("t divides itself");
        coeffs.truncate(d);
        PeriodicSeries { coeffs }
    }

    fn from_fn(period: usize, f: impl Fn(usize) -> Residue3) -> Self {
        Self::canonical((0..period).map(f).collect())
    }

    pub fn constant(value: Residue3) -> Self {
        PeriodicSeries { coeffs: vec![value] }
    }

    pub fn zero() -> Self {
        Self::constant(Residue3::ZERO)
    }

    pub fn ones() -> Self {
        Self::constant(Residue3::ONE)
    }

    /// `h₀ = Σ(−1)ⁿxⁿ`.
    pub fn h0() -> Self {
        PeriodicSeries { coeffs: vec![Residue3::ONE, Residue3::MINUS_ONE] }
    }

    /// `h₁ = Σ(−1)ⁿ⁺¹xⁿ`.
    pub fn h1() -> Self {
        PeriodicSeries { coeffs: vec![Residue3::MINUS_ONE, Residue3::ONE] }
    }

    /// `P(x)/(1 − xᵗ)` with the numerator given by its coefficients.
    pub fn from_rational(numerator: &[i64], period: usize) -> Result<Self, SeriesError> {
        if period == 0 {
            return Err(SeriesError::Empty);
        }
        if let Some(degree) = numerator.iter().rposition(|&c| c.rem_euclid(3) != 0) {
            if degree >= period {
                return Err(SeriesError::NumeratorTooLong { degree, period });
            }
        }
        Ok(Self::from_fn(period, |n| Residue3::new(numerator.get(n).copied().unwrap_or(0))))
    }

    /// Minimal period.
    pub fn period(&self) -> usize {
        self.coeffs.len()
    }

    /// One minimal period of coefficients.
    pub fn coefficients(&self) -> &[Residue3] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Residue3 {
        self.coeffs[n % self.coeffs.len()]
    }

    pub fn take(&self, count: usize) -> Vec<Residue3> {
        (0..count).map(|n| self.coeff(n)).collect()
    }

    fn common_period(&self, other: &Self) -> usize {
        self.period().lcm(&other.period())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.common_period(other), |n| self.coeff(n) + other.coeff(n))
    }

    pub fn scale(&self, k: Residue3) -> Self {
        Self::from_fn(self.period(), |n| k * self.coeff(n))
    }

    /// Coefficientwise product `Σ aₙbₙxⁿ`.
    pub fn hadamard(&self, other: &Self) -> Self {
        Self::from_fn(self.common_period(other), |n| self.coeff(n) * other.coeff(n))
    }

    /// Hadamard power; `exp = 0` gives the all-ones series.
    pub fn hadamard_pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::ones(), |acc, _| acc.hadamard(self))
    }

    /// Ordinary (Cauchy) product. Over F₃,
    /// `A/(1−xᴸ) · B/(1−xᴸ) = AB(1−xᴸ)/(1−x³ᴸ)`, so the product is purely
    /// periodic with period dividing `3L`.
    pub fn mul(&self, other: &Self) -> Self {
        let period = 3 * self.common_period(other);
        let a = self.take(period);
        let b = other.take(period);
        Self::from_fn(period, |n| (0..=n).map(|k| a[k] * b[n - k]).sum())
    }

    /// Drops the first `k` coefficients: `Σ aₙ₊ₖxⁿ`.
    pub fn shift_hat(&self, k: usize) -> Self {
        Self::from_fn(self.period(), |n| self.coeff(n + k))
    }

    /// `value + x·a(x)`, i.e. `Σ aₙ₋₁xⁿ` with `a₋₁ = value`. Only purely
    /// periodic when `value` equals the last coefficient of the period.
    pub fn shift_bar(&self, value: Residue3) -> Result<Self, SeriesError> {
        let last = self.coeffs[self.period() - 1];
        if value != last {
            return Err(SeriesError::Preperiodic { value, last });
        }
        let t = self.period();
        Ok(Self::from_fn(t, |n| self.coeff(n + t - 1)))
    }

    /// `a(x)³`, which over F₃ equals `a(x³)`.
    pub fn frobenius_cube(&self) -> Self {
        Self::from_fn(3 * self.period(), |n| if n % 3 == 0 { self.coeff(n / 3) } else { Residue3::ZERO })
    }

    /// `a(x³) + x·b(x³) + x²·c(x³)`.
    pub fn interleave3(a: &Self, b: &Self, c: &Self) -> Self {
        let l = a.common_period(b).lcm(&c.period());
        let parts = [a, b, c];
        Self::from_fn(3 * l, |n| parts[n % 3].coeff(n / 3))
    }

    pub fn to_rational(&self) -> RationalForm {
        let mut numerator = self.coeffs.clone();
        while numerator.last() == Some(&Residue3::ZERO) {
            numerator.pop();
        }
        RationalForm { numerator, period: self.period() }
    }
}

impl fmt::Debug for PeriodicSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodicSeries({})", self.to_rational())
    }
}

impl fmt::Display for PeriodicSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}] period {}", parts.join(","), self.period())
    }
}

/// `P(x)/(1 − xᵗ)` with `deg P < t` and `t` minimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalForm {
    /// Coefficients of `P`, without trailing zeros.
    pub numerator: Vec<Residue3>,
    pub period: usize,
}

impl RationalForm {
    pub fn numerator_values(&self) -> Vec<u8> {
        self.numerator.iter().map(|c| c.value()).collect()
    }
}

fn monomial(coeff: Residue3, exp: usize) -> String {
    let c = if coeff == Residue3::ONE && exp > 0 { String::new() } else { coeff.to_string() };
    match exp {
        0 => c,
        1 => format!("{c}x"),
        e => format!("{c}x^{e}"),
    }
}

impl fmt::Display for RationalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .numerator
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, &c)| monomial(c, e))
            .collect();
        let num = match terms.len() {
            0 => "0".to_string(),
            1 => terms[0].clone(),
            _ => format!("({})", terms.join("+")),
        };
        let den = if self.period == 1 { "(1-x)".to_string() } else { format!("(1-x^{})", self.period) };
        write!(f, "{num}/{den}")
    }
}

fn column_series(engine: &Engine, kind: Kind, p: u64) -> Result<PeriodicSeries, SeriesError> {
    let bound = 12 * 3u64.pow(period_exponent(p));
    let window = 3 * bound as usize;
    let values: Vec<Residue3> = (0..window as i64).map(|n| engine.value(kind, n, p)).collect();
    match minimal_period(&values) {
        Some(t) if bound.is_multiple_of(t as u64) => Ok(PeriodicSeries::canonical(values[..t].to_vec())),
        _ => Err(SeriesError::NoPeriod { kind, p, bound, window }),
    }
}

/// `f⁽ᵖ⁾ = Σ_{n≥0} |Γ_n^p| xⁿ` mod 3.
pub fn series_gamma(engine: &Engine, p: u64) -> Result<PeriodicSeries, SeriesError> {
    column_series(engine, Kind::Gamma, p)
}

/// `g⁽ᵖ⁾ = Σ_{n≥0} |Δ_n^p| xⁿ` mod 3.
pub fn series_delta(engine: &Engine, p: u64) -> Result<PeriodicSeries, SeriesError> {
    column_series(engine, Kind::Delta, p)
}

/// Rebuilds the column series for `(kind, 3q + s)` from the columns `q` and
/// `q + 1` by routing the matching recurrences through Hadamard products,
/// shifts, and [`PeriodicSeries::interleave3`]: branch `r` collects the
/// coefficients at `n = 3m + r`.
pub fn assemble_from_recurrence(
    kind: Kind,
    p: u64,
    column: impl Fn(Kind, u64) -> Result<PeriodicSeries, SeriesError>,
) -> Result<PeriodicSeries, SeriesError> {
    let (q, s) = (p / 3, (p % 3) as u8);
    let mut branches = Vec::with_capacity(3);
    for r in 0..3u8 {
        let formula = formula_for(kind, r, s);
        let mut branch = PeriodicSeries::zero();
        for term in formula.terms {
            let mut product = if term.odd { PeriodicSeries::h1() } else { PeriodicSeries::h0() };
            for factor in term.factors {
                let col = column(factor.kind, q + factor.dp)?;
                let shifted = match factor.dn {
                    -1 => {
                        // |Δ_{−1}^p| = 1 if p = 0 else 0
                        let boundary = Residue3::new((q + factor.dp == 0) as i64);
                        col.shift_bar(boundary)?
                    }
                    dn => col.shift_hat(dn as usize),
                };
                product = product.hadamard(&shifted.hadamard_pow(factor.exp));
            }
            branch = branch.add(&product);
        }
        branches.push(branch);
    }
    Ok(PeriodicSeries::interleave3(&branches[0], &branches[1], &branches[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(values: &[i64]) -> PeriodicSeries {
        PeriodicSeries::from_values(values).unwrap()
    }

    #[test]
    fn canonical_period() {
        assert_eq!(s(&[1, 2, 1, 2]).period(), 2);
        assert_eq!(s(&[1, 1, 1]), PeriodicSeries::ones());
        assert_eq!(PeriodicSeries::new(vec![]), Err(SeriesError::Empty));
    }

    #[test]
    fn hadamard_examples() {
        let a = s(&[2, 1, 1, 2]);
        assert_eq!(a.hadamard(&PeriodicSeries::ones()), a);
        assert_eq!(PeriodicSeries::h0().hadamard(&PeriodicSeries::h0()), PeriodicSeries::ones());
        let b = s(&[1, 0, 2, 0]);
        assert_eq!(4 % a.hadamard(&b).period(), 0);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(s(&[1, 2]).shift_hat(1), s(&[2, 1]));
        let g1 = s(&[1, 0, 2, 0]);
        assert_eq!(g1.shift_bar(Residue3::ZERO).unwrap(), s(&[0, 1, 0, 2]));
        assert!(matches!(g1.shift_bar(Residue3::ONE), Err(SeriesError::Preperiodic { .. })));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(PeriodicSeries::ones().frobenius_cube(), s(&[1, 0, 0]));
        // 0,1,0,1,… → 1 exactly at n ≡ 3 mod 6
        let cubed = s(&[0, 1]).frobenius_cube();
        for n in 0..60 {
            assert_eq!(cubed.coeff(n), Residue3::new((n % 6 == 3) as i64), "n = {n}");
        }
        let h = PeriodicSeries::h0().frobenius_cube();
        assert_eq!(h.period(), 6);
        assert_eq!(h, s(&[1, 0, 0, 2, 0, 0]));
    }

    #[test]
    fn interleave_examples() {
        let a = s(&[2, 1, 1, 2]);
        let z = PeriodicSeries::zero();
        assert_eq!(PeriodicSeries::interleave3(&a, &z, &z), a.frobenius_cube());
        let i = PeriodicSeries::interleave3(&s(&[1]), &s(&[2]), &s(&[0, 1]));
        assert_eq!(i.take(6), s(&[1, 2, 0, 1, 2, 1]).take(6));
    }

    #[test]
    fn rational_forms() {
        assert_eq!(PeriodicSeries::ones().to_rational().to_string(), "1/(1-x)");
        assert_eq!(s(&[1, 0, 2, 0]).to_rational().to_string(), "(1+2x^2)/(1-x^4)");
        assert_eq!(PeriodicSeries::zero().to_rational().to_string(), "0/(1-x)");
        let f0 = PeriodicSeries::from_rational(&[2, 1, 1, 2], 4).unwrap();
        assert_eq!(f0.to_rational().to_string(), "(2+x+x^2+2x^3)/(1-x^4)");
        assert!(PeriodicSeries::from_rational(&[1, 0, 0, 0, 1], 4).is_err());
    }

    #[test]
    fn engine_columns_p0_p1() {
        let e = Engine::new();
        assert_eq!(series_gamma(&e, 0).unwrap().to_rational().to_string(), "(2+x+x^2+2x^3)/(1-x^4)");
        assert_eq!(series_gamma(&e, 1).unwrap().to_rational().to_string(), "(1+2x^2)/(1-x^4)");
        assert_eq!(series_delta(&e, 0).unwrap().to_rational().to_string(), "(1+2x+2x^2+x^3)/(1-x^4)");
        assert_eq!(series_delta(&e, 1).unwrap().to_rational().to_string(), "(1+2x^2)/(1-x^4)");
        let f2 = series_gamma(&e, 2).unwrap().to_rational();
        assert_eq!(f2.period, 12);
        assert_eq!(f2.numerator_values(), vec![1, 1, 0, 0, 2, 2, 2, 2, 0, 0, 1, 1]);
    }

    #[test]
    fn assembly_matches_direct_columns() {
        let e = Engine::new();
        let column = |k: Kind, p: u64| column_series(&e, k, p);
        for p in 0..=81 {
            for kind in [Kind::Gamma, Kind::Delta] {
                let direct = column(kind, p).unwrap();
                let assembled = assemble_from_recurrence(kind, p, column).unwrap();
                assert_eq!(assembled, direct, "{kind} p = {p}");
                for n in 0..3 * direct.period() {
                    assert_eq!(direct.coeff(n), e.value(kind, n as i64, p));
                }
            }
        }
    }

    fn arb_series() -> impl Strategy<Value = PeriodicSeries> {
        proptest::collection::vec(0i64..3, 1..9).prop_map(|v| PeriodicSeries::from_values(&v).unwrap())
    }

    proptest! {
        #[test]
        fn hadamard_commutes_and_associates(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.hadamard(&b), b.hadamard(&a));
            prop_assert_eq!(a.hadamard(&b).hadamard(&c), a.hadamard(&b.hadamard(&c)));
            prop_assert_eq!(a.common_period(&b) % a.hadamard(&b).period(), 0);
        }

        #[test]
        fn frobenius_is_a_ring_homomorphism(a in arb_series(), b in arb_series()) {
            prop_assert_eq!(a.add(&b).frobenius_cube(), a.frobenius_cube().add(&b.frobenius_cube()));
            prop_assert_eq!(a.mul(&b).frobenius_cube(), a.frobenius_cube().mul(&b.frobenius_cube()));
        }

        #[test]
        fn frobenius_equals_cubing(a in arb_series()) {
            prop_assert_eq!(a.mul(&a).mul(&a), a.frobenius_cube());
        }

        #[test]
        fn cauchy_product_against_truncated_convolution(a in arb_series(), b in arb_series()) {
            let prod = a.mul(&b);
            let len = 4 * prod.period();
            let (x, y) = (a.take(len), b.take(len));
            for n in 0..len {
                let direct: Residue3 = (0..=n).map(|k| x[k] * y[n - k]).sum();
                prop_assert_eq!(prod.coeff(n), direct);
            }
        }
    }
}
