//! Padé approximants of `f(x) = Σ cₖxᵏ` and rational experiments on the
//! Cantor numbers `ξ_{c,b} = Σ cₖ b⁻ᵏ`.
//!
//! Everything here is exact: linear algebra over ℚ, and real numbers as
//! rational intervals. Logarithms are enclosed with dyadic endpoints rounded
//! outward.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::hankel::hankel_det;
use crate::sequences::{cantor_term, diff_term, Kind};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PadeError {
    #[error("the order must be at least 1")]
    ZeroOrder,
    #[error("the order-{n} Padé system is singular")]
    Singular { n: usize },
    #[error("the base must be at least 2, got {b}")]
    InvalidBase { b: u64 },
    #[error("the degree must be at least 1")]
    ZeroDegree,
    #[error("could not separate ξ from {p}/{q} with {terms} terms")]
    Unresolved { p: BigInt, q: BigInt, terms: usize },
}

/// Dense integer polynomial without trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `bᵈ·P(1/b)` for `d ≥ deg P`.
    pub fn homogenized_at_inverse(&self, b: &BigInt, d: usize) -> BigInt {
        assert!(self.coeffs.len() <= d + 1, "degree above the homogenizing degree");
        let mut acc = BigInt::zero();
        for i in 0..=d {
            acc = acc * b + self.coeff(i);
        }
        acc
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

/// `[n−1/n]` approximant: `deg P ≤ n − 1`, `deg Q ≤ n`, `(P, Q)` jointly
/// content free with positive leading coefficient of `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadeApproximant {
    pub order: usize,
    pub numerator: IntPolynomial,
    pub denominator: IntPolynomial,
}

fn cantor_coeffs(len: usize) -> Vec<BigInt> {
    (0..len as u64).map(|k| BigInt::from(cantor_term(k).value())).collect()
}

fn rational(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Solves `A·x = rhs` over ℚ; `None` if `A` is singular.
fn solve(mut a: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        let pivot_row = a[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = &a[r][col] / &pivot_row[col];
                for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &factor * p;
                }
                let delta = &factor * &rhs[col];
                rhs[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &a[i][i]).collect())
}

/// The `[n−1/n]` Padé approximant of `f`.
pub fn pade(n: usize) -> Result<PadeApproximant, PadeError> {
    if n == 0 {
        return Err(PadeError::ZeroOrder);
    }
    let c = cantor_coeffs(2 * n);
    // Q = 1 + q₁x + … + qₙxⁿ; the coefficients of xⁿ … x²ⁿ⁻¹ in f·Q vanish.
    let a: Vec<Vec<BigRational>> = (n..2 * n).map(|k| (1..=n).map(|j| rational(c[k - j].clone())).collect()).collect();
    let rhs: Vec<BigRational> = (n..2 * n).map(|k| rational(-c[k].clone())).collect();
    let tail = solve(a, rhs).ok_or(PadeError::Singular { n })?;
    let mut q = vec![BigRational::one()];
    q.extend(tail);
    let p: Vec<BigRational> =
        (0..n).map(|k| (0..=k).map(|j| &q[j] * rational(c[k - j].clone())).sum()).collect();

    let denominators = p.iter().chain(&q).fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scale = |v: &[BigRational]| -> Vec<BigInt> { v.iter().map(|r| (r * rational(denominators.clone())).to_integer()).collect() };
    let (mut pi, mut qi) = (scale(&p), scale(&q));
    let content = pi.iter().chain(&qi).fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let lead_negative = qi.iter().rev().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
    for v in pi.iter_mut().chain(qi.iter_mut()) {
        *v = &*v / &content;
        if lead_negative {
            *v = -&*v;
        }
    }
    Ok(PadeApproximant { order: n, numerator: IntPolynomial::new(pi), denominator: IntPolynomial::new(qi) })
}

impl PadeApproximant {
    /// Power series of `P/Q` through `xᵈᵉᵍ`.
    pub fn expand(&self, deg: usize) -> Vec<BigRational> {
        let q0 = rational(self.denominator.coeff(0));
        let mut out: Vec<BigRational> = Vec::with_capacity(deg + 1);
        for k in 0..=deg {
            let mut acc = rational(self.numerator.coeff(k));
            for j in 1..=k.min(self.denominator.coeffs.len().saturating_sub(1)) {
                acc -= rational(self.denominator.coeff(j)) * &out[k - j];
            }
            out.push(acc / &q0);
        }
        out
    }

    /// Coefficients of `f·Q − P` through `xᵈᵉᵍ`.
    pub fn residual(&self, deg: usize) -> Vec<BigInt> {
        let c = cantor_coeffs(deg + 1);
        (0..=deg)
            .map(|k| {
                let fq: BigInt = (0..=k).map(|j| self.denominator.coeff(j) * &c[k - j]).sum();
                fq - self.numerator.coeff(k)
            })
            .collect()
    }

    /// `(bⁿ·P(1/b), bⁿ·Q(1/b))` reduced to lowest terms with positive denominator.
    pub fn value_at_inverse(&self, b: u64) -> (BigInt, BigInt) {
        let b = BigInt::from(b);
        let p = self.numerator.homogenized_at_inverse(&b, self.order);
        let q = self.denominator.homogenized_at_inverse(&b, self.order);
        let g = p.gcd(&q);
        let (p, q) = (p / &g, q / &g);
        if q.is_negative() {
            (-p, -q)
        } else {
            (p, q)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadeErrorReport {
    pub n: usize,
    /// Coefficient of `x²ⁿ` in `f − P/Q`.
    #[serde(serialize_with = "ser_rational")]
    pub coefficient: BigRational,
    /// `|Γ_{n+1}^0| / |Γ_n^0|`.
    #[serde(serialize_with = "ser_rational")]
    pub expected: BigRational,
    /// First degree below `2n` with a nonzero coefficient, if any.
    pub first_nonzero_below: Option<usize>,
    pub holds: bool,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// Expands `f − P/Q` through `x²ⁿ` and compares the leading coefficient with
/// the ratio of consecutive Hankel determinants.
pub fn verify_pade_error(n: usize) -> Result<PadeErrorReport, PadeError> {
    let approx = pade(n)?;
    let series = approx.expand(2 * n);
    let c = cantor_coeffs(2 * n + 1);
    let diff: Vec<BigRational> = series.iter().zip(&c).map(|(s, ck)| rational(ck.clone()) - s).collect();
    let first_nonzero_below = (0..2 * n).find(|&k| !diff[k].is_zero());
    let expected = BigRational::new(hankel_det(Kind::Gamma, 0, n + 1), hankel_det(Kind::Gamma, 0, n));
    let coefficient = diff[2 * n].clone();
    let holds = first_nonzero_below.is_none() && coefficient == expected;
    Ok(PadeErrorReport { n, coefficient, expected, first_nonzero_below, holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionalEquationReport {
    pub deg: usize,
    pub first_mismatch: Option<usize>,
    pub holds: bool,
}

/// Checks `f(x) = (1 + x²)·f(x³)` coefficientwise through `xᵈᵉᵍ`.
pub fn verify_functional_equation(deg: usize) -> Result<FunctionalEquationReport, PadeError> {
    if deg == 0 {
        return Err(PadeError::ZeroDegree);
    }
    let c = |k: usize| cantor_term(k as u64).value();
    let rhs = |k: usize| {
        let a = if k.is_multiple_of(3) { c(k / 3) } else { 0 };
        let b = if k >= 2 && (k - 2).is_multiple_of(3) { c((k - 2) / 3) } else { 0 };
        a + b
    };
    let first_mismatch = (0..=deg).find(|&k| c(k) != rhs(k));
    Ok(FunctionalEquationReport { deg, first_mismatch, holds: first_mismatch.is_none() })
}

/// A closed interval with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalInterval {
    #[serde(serialize_with = "ser_rational")]
    pub lower: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub upper: BigRational,
}

impl RationalInterval {
    pub fn new(lower: BigRational, upper: BigRational) -> Self {
        assert!(lower <= upper, "empty interval");
        RationalInterval { lower, upper }
    }

    pub fn point(x: BigRational) -> Self {
        Self::new(x.clone(), x)
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self::new(self.lower.clone().min(other.lower.clone()), self.upper.clone().max(other.upper.clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.lower + &other.lower, &self.upper + &other.upper)
    }

    pub fn shift(&self, x: &BigRational) -> Self {
        Self::new(&self.lower + x, &self.upper + x)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_negative() {
            Self::new(&self.upper * k, &self.lower * k)
        } else {
            Self::new(&self.lower * k, &self.upper * k)
        }
    }

    /// `|x|` over the interval, assuming it does not contain 0.
    fn abs_away_from_zero(&self) -> Option<Self> {
        if self.lower.is_positive() {
            Some(self.clone())
        } else if self.upper.is_negative() {
            Some(Self::new(-&self.upper, -&self.lower))
        } else {
            None
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lower + &self.upper) / rational(2)).to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

fn check_base(b: u64) -> Result<(), PadeError> {
    if b < 2 {
        Err(PadeError::InvalidBase { b })
    } else {
        Ok(())
    }
}

/// Partial sum of `Σ wₖ b⁻ᵏ` for `k < terms` plus the tail bound
/// `Σ_{k ≥ terms} bound(k) b⁻ᵏ` for a bound that is periodic mod 3.
fn series_interval(b: u64, terms: usize, weight: impl Fn(u64) -> u8, bound: [u8; 3]) -> RationalInterval {
    let bb = BigInt::from(b);
    let mut num = BigInt::zero();
    for k in 0..terms as u64 {
        num = (num + weight(k)) * &bb;
    }
    let scale = bb.pow(terms as u32);
    let partial = BigRational::new(num, scale.clone());
    let block: BigRational = (0..3).map(|j| BigRational::new(BigInt::from(bound[(terms + j) % 3]), bb.pow(j as u32))).sum();
    let cube = bb.pow(3);
    let tail = block * BigRational::new(cube.clone(), cube - 1) / rational(scale);
    RationalInterval::new(partial.clone(), partial + tail)
}

/// Encloses `ξ_{c,b} = Σ cₖ b⁻ᵏ` using `terms` terms and the tail bound
/// `Σ_{k ≥ terms} b⁻ᵏ`.
pub fn cantor_number(b: u64, terms: usize) -> Result<RationalInterval, PadeError> {
    check_base(b)?;
    let bb = BigInt::from(b);
    let mut num = BigInt::zero();
    for k in 0..terms as u64 {
        num = (num + cantor_term(k).value()) * &bb;
    }
    let scale = bb.pow(terms as u32);
    let partial = BigRational::new(num, scale.clone());
    let tail = BigRational::new(bb.clone(), (bb - 1) * scale);
    Ok(RationalInterval::new(partial.clone(), partial + tail))
}

/// Enclosure of `2·atanh(z)` for `0 ≤ z < 1`, endpoints multiples of `2⁻ᵖʳᵉᶜ`.
fn two_atanh(z: &BigRational, prec: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << prec;
    let floor_scaled = |r: &BigRational| (r * rational(one.clone())).floor().to_integer();
    let ceil_scaled = |r: &BigRational| (r * rational(one.clone())).ceil().to_integer();
    let z2 = z * z;
    let (z2_lo, z2_hi) = (floor_scaled(&z2), ceil_scaled(&z2));
    let (mut pw_lo, mut pw_hi) = (floor_scaled(z), ceil_scaled(z));
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    let mut i: u64 = 0;
    // sum while the current power exceeds one unit, then bound the rest by z^(2i+1) / (1 − z²)
    while pw_hi > BigInt::one() {
        let d = BigInt::from(2 * i + 1);
        lo += pw_lo.div_floor(&d);
        hi += (&pw_hi + &d - 1u32).div_floor(&d);
        i += 1;
        pw_lo = (&pw_lo * &z2_lo) >> prec;
        pw_hi = (&pw_hi * &z2_hi + &one - 1u32) >> prec;
    }
    let denom = &one - &z2_hi;
    hi += (&pw_hi * &one + &denom - 1u32).div_floor(&denom);
    (lo * 2, hi * 2)
}

/// Rigorous enclosure of `ln x` for rational `x > 0`.
pub fn ln_interval(x: &BigRational, prec: u32) -> RationalInterval {
    assert!(x.is_positive(), "logarithm of a non-positive number");
    // x = 2ᵏ·y with 1 ≤ y < 2
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let pow2 = |e: i64| {
        if e >= 0 {
            rational(BigInt::one() << e as u64)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-e) as u64)
        }
    };
    let mut y = x / pow2(k);
    if y < BigRational::one() {
        k -= 1;
        y = x / pow2(k);
    }
    let z = (&y - BigRational::one()) / (&y + BigRational::one());
    let (ly_lo, ly_hi) = two_atanh(&z, prec);
    let (l2_lo, l2_hi) = two_atanh(&BigRational::new(BigInt::one(), BigInt::from(3)), prec);
    let (k_lo, k_hi) = if k >= 0 { (l2_lo * k, l2_hi * k) } else { (l2_hi * k, l2_lo * k) };
    let den = BigInt::one() << prec;
    RationalInterval::new(BigRational::new(k_lo + ly_lo, den.clone()), BigRational::new(k_hi + ly_hi, den))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrrationalityEstimate {
    pub n: usize,
    #[serde(serialize_with = "ser_display")]
    pub p: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub q: BigInt,
    /// Enclosure of `|ξ − p/q|`.
    pub distance: RationalInterval,
    /// Enclosure of `−ln|ξ − p/q| / ln q`; `None` when degenerate.
    pub mu: Option<RationalInterval>,
    pub mu_lower: Option<f64>,
    pub mu_upper: Option<f64>,
    /// `p/q` repeats an earlier approximant, or `q = 1`.
    pub degenerate: bool,
}

fn ser_display<S: serde::Serializer, T: fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

const MAX_TERMS: usize = 1 << 16;

fn distance_interval(b: u64, p: &BigInt, q: &BigInt, start_terms: usize) -> Result<RationalInterval, PadeError> {
    let target = BigRational::new(p.clone(), q.clone());
    let mut terms = start_terms.max(8);
    loop {
        let xi = cantor_number(b, terms)?;
        if let Some(d) = xi.shift(&-target.clone()).abs_away_from_zero() {
            if d.width() * rational(1000) < d.lower {
                return Ok(d);
            }
        }
        if terms >= MAX_TERMS {
            return Err(PadeError::Unresolved { p: p.clone(), q: q.clone(), terms });
        }
        terms *= 2;
    }
}

fn mu_interval(distance: &RationalInterval, q: &BigInt) -> Option<RationalInterval> {
    if q <= &BigInt::one() || distance.upper >= BigRational::one() {
        return None;
    }
    let q = rational(q.clone());
    let mut prec = 64;
    loop {
        let ln_d = ln_interval(&distance.upper, prec).hull(&ln_interval(&distance.lower, prec));
        let ln_q = ln_interval(&q, prec);
        // −ln d and ln q are both positive here
        let (a_lo, a_hi) = (-&ln_d.upper, -&ln_d.lower);
        if ln_q.lower.is_positive() && a_lo.is_positive() {
            let mu = RationalInterval::new(&a_lo / &ln_q.upper, &a_hi / &ln_q.lower);
            if mu.width() < BigRational::new(BigInt::one(), BigInt::from(100)) || prec >= 4096 {
                return Some(mu);
            }
        } else if prec >= 4096 {
            return None;
        }
        prec *= 2;
    }
}

/// Irrationality exponent estimates from the Padé approximants evaluated at `1/b`.
pub fn irrationality_estimates(b: u64, n_max: usize) -> Result<Vec<IrrationalityEstimate>, PadeError> {
    check_base(b)?;
    let mut out: Vec<IrrationalityEstimate> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (p, q) = pade(n)?.value_at_inverse(b);
        let repeated = out.iter().any(|e| e.p == p && e.q == q);
        let distance = distance_interval(b, &p, &q, 8 * n + 16)?;
        let mu = if repeated { None } else { mu_interval(&distance, &q) };
        let to_f64 = |r: &BigRational| r.to_f64();
        out.push(IrrationalityEstimate {
            n,
            mu_lower: mu.as_ref().and_then(|m| to_f64(&m.lower)),
            mu_upper: mu.as_ref().and_then(|m| to_f64(&m.upper)),
            degenerate: mu.is_none(),
            mu,
            p,
            q,
            distance,
        });
    }
    Ok(out)
}

/// One candidate form `η = A·ξ_{c,b³} − B`, enclosed and compared with `η`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaForm {
    #[serde(serialize_with = "ser_rational")]
    pub factor: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub offset: BigRational,
    pub rhs: RationalInterval,
    pub overlap: bool,
    #[serde(serialize_with = "ser_rational")]
    pub hull_width: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaReport {
    pub b: u64,
    pub depth: usize,
    /// Enclosure of `η_{d,b} = Σ dₖ b⁻ᵏ`.
    pub lhs: RationalInterval,
    /// `(2 + b⁻¹ + b⁻²)·ξ_{c,b³} − b⁻¹`; fails numerically.
    pub stated: EtaForm,
    /// `(2 + b² + b⁻²)·ξ_{c,b³} − b²`, from `Σ c_{n+1} b⁻³ⁿ = b³(ξ_{c,b³} − 1)`.
    pub corrected: EtaForm,
    /// `b^(2 − depth)`.
    #[serde(serialize_with = "ser_rational")]
    pub bound: BigRational,
}

/// Encloses `η_{d,b}` with `depth` terms and compares it with both forms of
/// the reduction to `ξ_{c,b³}`.
pub fn eta_identity_check(b: u64, depth: usize) -> Result<EtaReport, PadeError> {
    check_base(b)?;
    // d₃ₙ ≤ 2, d₃ₙ₊₁ ≤ 1, d₃ₙ₊₂ ≤ 1
    let lhs = series_interval(b, depth, |k| diff_term(k).value(), [2, 1, 1]);
    let bb = BigInt::from(b);
    let inv = |e: u32| BigRational::new(BigInt::one(), bb.pow(e));
    let bound = if depth <= 2 { rational(bb.pow((2 - depth) as u32)) } else { inv((depth - 2) as u32) };
    let xi = cantor_number(b * b * b, (depth + 8).div_ceil(3) + 1)?;
    let form = |factor: BigRational, offset: BigRational| {
        let rhs = xi.scale(&factor).shift(&-offset.clone());
        let overlap = lhs.overlaps(&rhs);
        let hull_width = lhs.hull(&rhs).width();
        let holds = overlap && hull_width < bound;
        EtaForm { factor, offset, rhs, overlap, hull_width, holds }
    };
    let stated = form(rational(2) + inv(1) + inv(2), inv(1));
    let corrected = form(rational(2) + rational(bb.pow(2)) + inv(2), rational(bb.pow(2)));
    Ok(EtaReport { b, depth, lhs, stated, corrected, bound })
}
