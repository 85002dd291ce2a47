//! The 3-kernel of `|Γ_n^p|` and `|Δ_n^p|` mod 3 and the automaton it induces.
//!
//! Sequences indexed by `(n, p)` are manipulated through two operator
//! families: shifts `S_a^b u = (u_{n+a}^{p+b})` and decimations
//! `T_α^β u = (u_{3n+α}^{3p+β})`. Every kernel element is a polynomial over
//! F₃ in shifted copies of `Γ`, `Δ` and the sign sequence `F = ((−1)ⁿ)`.
//! Applying a decimation to a polynomial commutes it past the shifts and
//! rewrites `T Γ`, `T Δ` by the ternary recurrences, so the kernel is
//! explored by closing `{Γ}` under the nine decimations.
//!
//! Text syntax: `G`, `D`, `F` for the unshifted generators, `G[a,b]` for
//! `S_a^b Γ` (likewise `D[a,b]`, and `F[1,0]` for the shifted sign), `^` for
//! powers, `*` and `+`, and an optional leading coefficient such as `2*`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::recurrence::{formula_for, Engine};
use crate::residue::Residue3;
use crate::sequences::Kind;

/// Default bound on the number of kernel states explored.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("decimation digits must lie in 0..=2, got ({alpha}, {beta})")]
    InvalidDigit { alpha: u8, beta: u8 },
    #[error("generator shift ({shift_n}, {shift_p}) is outside -1..=2 × 0..=2")]
    InvalidGenerator { shift_n: i64, shift_p: i64 },
    #[error("kernel exploration exceeded the cap of {cap} states")]
    CapExceeded { cap: usize },
    #[error("{generator} is undefined at n = {n}")]
    Undefined { generator: Generator, n: u64 },
    #[error("cannot parse {0:?}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Base {
    Gamma,
    Delta,
    /// `(−1)ⁿ`.
    Sign,
}

/// `S_{shift_n}^{shift_p} J`. Sign generators only depend on the parity of
/// `shift_n`, so they are stored as `F` or `S_1^0 F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Generator {
    pub base: Base,
    pub shift_n: i8,
    pub shift_p: u8,
}

const VAR_SLOTS: usize = 24;
const SIGN_SLOT_EVEN: usize = 24;
const SIGN_SLOT_ODD: usize = 25;
const SLOTS: usize = 26;

impl Generator {
    pub fn new(base: Base, shift_n: i64, shift_p: i64) -> Result<Self, KernelError> {
        if !(-1..=2).contains(&shift_n) || !(0..=2).contains(&shift_p) {
            return Err(KernelError::InvalidGenerator { shift_n, shift_p });
        }
        Ok(match base {
            Base::Sign => Generator { base, shift_n: shift_n.rem_euclid(2) as i8, shift_p: 0 },
            _ => Generator { base, shift_n: shift_n as i8, shift_p: shift_p as u8 },
        })
    }

    pub fn of_kind(kind: Kind, shift_n: i64, shift_p: i64) -> Result<Self, KernelError> {
        let base = match kind {
            Kind::Gamma => Base::Gamma,
            Kind::Delta => Base::Delta,
        };
        Self::new(base, shift_n, shift_p)
    }

    pub fn sign(odd: bool) -> Self {
        Generator { base: Base::Sign, shift_n: odd as i8, shift_p: 0 }
    }

    fn slot(self) -> usize {
        match self.base {
            Base::Sign if self.shift_n == 0 => SIGN_SLOT_EVEN,
            Base::Sign => SIGN_SLOT_ODD,
            base => {
                let k = if base == Base::Gamma { 0 } else { 12 };
                k + (self.shift_n + 1) as usize * 3 + self.shift_p as usize
            }
        }
    }

    fn from_slot(slot: usize) -> Self {
        match slot {
            SIGN_SLOT_EVEN => Self::sign(false),
            SIGN_SLOT_ODD => Self::sign(true),
            s => Generator {
                base: if s < 12 { Base::Gamma } else { Base::Delta },
                shift_n: ((s % 12) / 3) as i8 - 1,
                shift_p: (s % 3) as u8,
            },
        }
    }

    /// Value at `(n, p)`.
    pub fn evaluate(self, engine: &Engine, n: u64, p: u64) -> Result<Residue3, KernelError> {
        let m = n as i64 + self.shift_n as i64;
        let kind = match self.base {
            Base::Sign => return Ok(Residue3::sign(m)),
            Base::Gamma => Kind::Gamma,
            Base::Delta => Kind::Delta,
        };
        if m < 0 && kind == Kind::Gamma {
            return Err(KernelError::Undefined { generator: self, n });
        }
        Ok(engine.value(kind, m, p + self.shift_p as u64))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.base {
            Base::Gamma => "G",
            Base::Delta => "D",
            Base::Sign => "F",
        };
        if self.shift_n == 0 && self.shift_p == 0 {
            f.write_str(letter)
        } else {
            write!(f, "{letter}[{},{}]", self.shift_n, self.shift_p)
        }
    }
}

/// A product of generators: two bits of exponent per Γ/Δ slot (exponents
/// reduced by `x³ = x`) and two bits for the sign part (none, `F`, `S_1^0F`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Monomial(u64);

const SIGN_BITS: u32 = 48;

impl Monomial {
    const ONE: Monomial = Monomial(0);

    fn exponent(self, slot: usize) -> u8 {
        ((self.0 >> (2 * slot)) & 3) as u8
    }

    fn sign(self) -> u8 {
        ((self.0 >> SIGN_BITS) & 3) as u8
    }

    fn with_exponent(self, slot: usize, e: u8) -> Self {
        let cleared = self.0 & !(3u64 << (2 * slot));
        Monomial(cleared | (e as u64) << (2 * slot))
    }

    fn with_sign(self, s: u8) -> Self {
        Monomial((self.0 & !(3u64 << SIGN_BITS)) | (s as u64) << SIGN_BITS)
    }

    fn generator(g: Generator) -> Self {
        match g.slot() {
            SIGN_SLOT_EVEN => Monomial::ONE.with_sign(1),
            SIGN_SLOT_ODD => Monomial::ONE.with_sign(2),
            s => Monomial::ONE.with_exponent(s, 1),
        }
    }

    /// Product, with the scalar it produces: `F·S_1^0F = −1`.
    fn mul(self, other: Self) -> (Self, Residue3) {
        let mut out = Monomial::ONE;
        for slot in 0..VAR_SLOTS {
            let e = self.exponent(slot) + other.exponent(slot);
            out = out.with_exponent(slot, if e >= 3 { e - 2 } else { e });
        }
        let (a, b) = (self.sign(), other.sign());
        let (sign, scalar) = match (a, b) {
            (0, s) | (s, 0) => (s, Residue3::ONE),
            (x, y) if x == y => (0, Residue3::ONE),
            _ => (0, Residue3::MINUS_ONE),
        };
        (out.with_sign(sign), scalar)
    }

    /// `(generator, exponent)` pairs, sign first.
    fn factors(self) -> Vec<(Generator, u8)> {
        let mut out = Vec::new();
        match self.sign() {
            1 => out.push((Generator::sign(false), 1)),
            2 => out.push((Generator::sign(true), 1)),
            _ => {}
        }
        for slot in 0..VAR_SLOTS {
            let e = self.exponent(slot);
            if e > 0 {
                out.push((Generator::from_slot(slot), e));
            }
        }
        out
    }
}

/// A polynomial over F₃ in the generators, in normal form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelExpr {
    terms: BTreeMap<Monomial, Residue3>,
}

impl KernelExpr {
    pub fn zero() -> Self {
        KernelExpr { terms: BTreeMap::new() }
    }

    pub fn constant(c: Residue3) -> Self {
        Self::from_monomial(Monomial::ONE, c)
    }

    fn from_monomial(m: Monomial, c: Residue3) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        KernelExpr { terms }
    }

    pub fn generator(g: Generator) -> Self {
        Self::from_monomial(Monomial::generator(g), Residue3::ONE)
    }

    /// `Γ` or `Δ`.
    pub fn base(kind: Kind) -> Self {
        Self::generator(Generator::of_kind(kind, 0, 0).expect("unshifted generator"))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Monomials as `(coefficient, [(generator, exponent)])`.
    pub fn monomials(&self) -> Vec<(Residue3, Vec<(Generator, u8)>)> {
        self.terms.iter().map(|(m, &c)| (c, m.factors())).collect()
    }

    fn add_term(&mut self, m: Monomial, c: Residue3) {
        let entry = self.terms.entry(m).or_insert(Residue3::ZERO);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn scale(&self, k: Residue3) -> Self {
        let mut out = Self::zero();
        for (&m, &c) in &self.terms {
            out.add_term(m, k * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&a, &ca) in &self.terms {
            for (&b, &cb) in &other.terms {
                let (m, s) = a.mul(b);
                out.add_term(m, ca * cb * s);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::constant(Residue3::ONE), |acc, _| acc.mul(self))
    }

    /// Applies `S_x^y` to every generator. Only used with shifts that keep
    /// the generators in range.
    fn shift(&self, x: i8, y: u8) -> Self {
        let mut out = Self::zero();
        for (&m, &c) in &self.terms {
            let mut shifted = Monomial::ONE;
            for (g, e) in m.factors() {
                let moved = Generator::new(g.base, (g.shift_n + x) as i64, (g.shift_p + y) as i64)
                    .expect("decimation keeps shifts in range");
                let (base, _) = Monomial::generator(moved).mul(Monomial::ONE);
                for _ in 0..e {
                    shifted = shifted.mul(base).0;
                }
            }
            out.add_term(shifted, c);
        }
        out
    }

    /// Value at `(n, p)`.
    pub fn evaluate(&self, engine: &Engine, n: u64, p: u64) -> Result<Residue3, KernelError> {
        let mut total = Residue3::ZERO;
        for (&m, &c) in &self.terms {
            let mut v = c;
            for (g, e) in m.factors() {
                v *= g.evaluate(engine, n, p)?.pow(e as u32);
            }
            total += v;
        }
        Ok(total)
    }
}

/// `e(n, p)` with values from the engine.
pub fn evaluate_expr(engine: &Engine, e: &KernelExpr, n: u64, p: u64) -> Result<Residue3, KernelError> {
    e.evaluate(engine, n, p)
}

impl fmt::Debug for KernelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KernelExpr({self})")
    }
}

impl fmt::Display for KernelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (c, factors) in self.monomials() {
            let mut items: Vec<String> = Vec::new();
            if c != Residue3::ONE || factors.is_empty() {
                items.push(c.to_string());
            }
            for (g, e) in factors {
                items.push(if e == 1 { g.to_string() } else { format!("{g}^{e}") });
            }
            parts.push(items.join("*"));
        }
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for KernelExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_factor(text: &str) -> Result<KernelExpr, KernelError> {
    let err = || KernelError::Parse(text.to_string());
    let (body, exp) = match text.split_once('^') {
        Some((b, e)) => (b, e.parse::<u32>().map_err(|_| err())?),
        None => (text, 1),
    };
    if let Ok(c) = body.parse::<i64>() {
        return Ok(KernelExpr::constant(Residue3::new(c)).pow(exp));
    }
    let mut chars = body.chars();
    let base = match chars.next() {
        Some('G') => Base::Gamma,
        Some('D') => Base::Delta,
        Some('F') => Base::Sign,
        _ => return Err(err()),
    };
    let rest = chars.as_str();
    let (a, b) = if rest.is_empty() {
        (0, 0)
    } else {
        let inner = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(err)?;
        let (a, b) = inner.split_once(',').ok_or_else(err)?;
        (a.parse().map_err(|_| err())?, b.parse().map_err(|_| err())?)
    };
    Ok(KernelExpr::generator(Generator::new(base, a, b)?).pow(exp))
}

impl FromStr for KernelExpr {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(KernelError::Parse(s.to_string()));
        }
        let mut out = KernelExpr::zero();
        for term in compact.split('+') {
            if term.is_empty() {
                return Err(KernelError::Parse(s.to_string()));
            }
            let mut product = KernelExpr::constant(Residue3::ONE);
            for factor in term.split('*') {
                product = product.mul(&parse_factor(factor)?);
            }
            out = out.add(&product);
        }
        Ok(out)
    }
}

/// `T_r^s J` for `J ∈ {Γ, Δ}`, read off the recurrence table: the sign
/// `(−1)^m` becomes `F` and `(−1)^{m+1}` becomes `S_1^0 F`.
pub fn decimation_rule(kind: Kind, r: u8, s: u8) -> KernelExpr {
    let formula = formula_for(kind, r, s);
    let mut out = KernelExpr::zero();
    for term in formula.terms {
        let mut product = KernelExpr::generator(Generator::sign(term.odd));
        for factor in term.factors {
            let g = Generator::of_kind(factor.kind, factor.dn, factor.dp as i64).expect("table shifts are in range");
            product = product.mul(&KernelExpr::generator(g).pow(factor.exp));
        }
        out = out.add(&product);
    }
    out
}

/// `T_α^β S_a^b = S_x^y T_{α'}^{β'}`: returns `(x, y, α', β')`.
pub fn commute_decimation(alpha: u8, beta: u8, a: i8, b: u8) -> (i8, u8, u8, u8) {
    let (x, alpha2) = match alpha as i8 + a {
        -1 => (-1, 2),
        v @ 0..=2 => (0, v as u8),
        v => (1, (v - 3) as u8),
    };
    let (y, beta2) = match beta + b {
        v @ 0..=2 => (0, v),
        v => (1, v - 3),
    };
    (x, y, alpha2, beta2)
}

fn generator_image(alpha: u8, beta: u8, g: Generator) -> KernelExpr {
    if g.base == Base::Sign {
        return KernelExpr::generator(Generator::sign((alpha as i8 + g.shift_n) % 2 == 1));
    }
    let kind = if g.base == Base::Gamma { Kind::Gamma } else { Kind::Delta };
    let (x, y, alpha2, beta2) = commute_decimation(alpha, beta, g.shift_n, g.shift_p);
    decimation_rule(kind, alpha2, beta2).shift(x, y)
}

fn image_table() -> &'static Vec<Vec<KernelExpr>> {
    static TABLE: OnceLock<Vec<Vec<KernelExpr>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..9u8)
            .map(|d| (0..SLOTS).map(|slot| generator_image(d / 3, d % 3, Generator::from_slot(slot))).collect())
            .collect()
    })
}

/// `T_α^β e`.
pub fn apply_t(alpha: u8, beta: u8, e: &KernelExpr) -> Result<KernelExpr, KernelError> {
    if alpha > 2 || beta > 2 {
        return Err(KernelError::InvalidDigit { alpha, beta });
    }
    let images = &image_table()[(3 * alpha + beta) as usize];
    let mut out = KernelExpr::zero();
    for (&m, &c) in &e.terms {
        let mut product = KernelExpr::constant(c);
        for (g, exp) in m.factors() {
            product = product.mul(&images[g.slot()].pow(exp as u32));
        }
        out = out.add(&product);
    }
    Ok(out)
}

/// The closure of a start expression under the nine decimations.
#[derive(Clone, Debug)]
pub struct KernelClosure {
    /// States in discovery order; `states[0]` is the start.
    pub states: Vec<KernelExpr>,
    /// `transitions[i][3α + β]` is the index of `T_α^β states[i]`.
    pub transitions: Vec<[usize; 9]>,
    /// A shortest digit word `(α₀, β₀), …` reaching each state.
    pub words: Vec<Vec<(u8, u8)>>,
}

pub fn kernel_closure(start: &KernelExpr, cap: usize) -> Result<KernelClosure, KernelError> {
    let mut index: HashMap<KernelExpr, usize> = HashMap::new();
    let mut states = vec![start.clone()];
    let mut words = vec![Vec::new()];
    let mut transitions = Vec::new();
    index.insert(start.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    if cap == 0 {
        return Err(KernelError::CapExceeded { cap });
    }
    while let Some(i) = queue.pop_front() {
        let mut row = [0usize; 9];
        for d in 0..9u8 {
            let next = apply_t(d / 3, d % 3, &states[i])?;
            row[d as usize] = match index.get(&next) {
                Some(&j) => j,
                None => {
                    if states.len() >= cap {
                        return Err(KernelError::CapExceeded { cap });
                    }
                    let j = states.len();
                    let mut word = words[i].clone();
                    word.push((d / 3, d % 3));
                    index.insert(next.clone(), j);
                    states.push(next);
                    words.push(word);
                    queue.push_back(j);
                    j
                }
            };
        }
        transitions.push(row);
    }
    // BFS pops states in index order, so rows line up with states.
    Ok(KernelClosure { states, transitions, words })
}

/// A deterministic finite automaton with output reading pairs of base-3
/// digits of `(n, p)`, least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dfao2D {
    pub states: Vec<KernelExpr>,
    pub transitions: Vec<[usize; 9]>,
    pub outputs: Vec<Residue3>,
    pub start: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DfaoFormat {
    Dot,
    Table,
}

impl FromStr for DfaoFormat {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(DfaoFormat::Dot),
            "table" => Ok(DfaoFormat::Table),
            _ => Err(KernelError::Parse(s.to_string())),
        }
    }
}

fn digits_lsd(n: &BigUint) -> Vec<u8> {
    if n == &BigUint::default() {
        Vec::new()
    } else {
        n.to_radix_le(3)
    }
}

/// Builds the automaton of the closure of `start`; outputs are the values
/// of the states at `(0, 0)`.
pub fn build_dfao(engine: &Engine, start: &KernelExpr, cap: usize) -> Result<Dfao2D, KernelError> {
    let closure = kernel_closure(start, cap)?;
    let outputs = closure.states.iter().map(|e| e.evaluate(engine, 0, 0)).collect::<Result<_, _>>()?;
    Ok(Dfao2D { states: closure.states, transitions: closure.transitions, outputs, start: 0 })
}

impl Dfao2D {
    pub fn for_kind(engine: &Engine, kind: Kind, cap: usize) -> Result<Self, KernelError> {
        build_dfao(engine, &KernelExpr::base(kind), cap)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    fn run(&self, mut state: usize, n_digits: &[u8], p_digits: &[u8]) -> usize {
        for i in 0..n_digits.len().max(p_digits.len()) {
            let dn = n_digits.get(i).copied().unwrap_or(0);
            let dp = p_digits.get(i).copied().unwrap_or(0);
            state = self.transitions[state][(3 * dn + dp) as usize];
        }
        state
    }

    pub fn evaluate(&self, n: &BigUint, p: &BigUint) -> Residue3 {
        self.outputs[self.run(self.start, &digits_lsd(n), &digits_lsd(p))]
    }

    pub fn evaluate_u64(&self, n: u64, p: u64) -> Residue3 {
        self.evaluate(&BigUint::from(n), &BigUint::from(p))
    }

    pub fn export(&self, format: DfaoFormat) -> String {
        match format {
            DfaoFormat::Dot => self.to_dot(),
            DfaoFormat::Table => self.to_table(),
        }
    }

    fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfao {\n  rankdir=LR;\n  init [shape=point];\n");
        out.push_str(&format!("  init -> s{};\n", self.start));
        for (i, e) in self.states.iter().enumerate() {
            out.push_str(&format!("  s{i} [label=\"{i}: {e} / {}\"];\n", self.outputs[i]));
        }
        for (i, row) in self.transitions.iter().enumerate() {
            let mut by_target: BTreeMap<usize, Vec<String>> = BTreeMap::new();
            for (d, &j) in row.iter().enumerate() {
                by_target.entry(j).or_default().push(format!("{},{}", d / 3, d % 3));
            }
            for (j, labels) in by_target {
                out.push_str(&format!("  s{i} -> s{j} [label=\"{}\"];\n", labels.join(" ")));
            }
        }
        out.push_str("}\n");
        out
    }

    fn to_table(&self) -> String {
        let mut out = format!("dfao2d states={} start={}\n", self.states.len(), self.start);
        for (i, e) in self.states.iter().enumerate() {
            out.push_str(&format!("state {i} output={} expr={e}\n", self.outputs[i]));
        }
        for (i, row) in self.transitions.iter().enumerate() {
            let targets: Vec<String> = row.iter().map(|j| j.to_string()).collect();
            out.push_str(&format!("delta {i} {}\n", targets.join(" ")));
        }
        out
    }

    /// Inverse of the table export.
    pub fn parse_table(text: &str) -> Result<Self, KernelError> {
        let bad = |line: &str| KernelError::Parse(line.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad(text))?;
        let field = |s: &str, key: &str| -> Result<usize, KernelError> {
            s.split_whitespace()
                .find_map(|w| w.strip_prefix(key))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad(s))
        };
        if !header.starts_with("dfao2d ") {
            return Err(bad(header));
        }
        let count = field(header, "states=")?;
        let start = field(header, "start=")?;
        let mut states = vec![None; count];
        let mut outputs = vec![Residue3::ZERO; count];
        let mut transitions = vec![None; count];
        for line in lines {
            let mut words = line.splitn(3, ' ');
            let (tag, id) = (words.next(), words.next().and_then(|w| w.parse::<usize>().ok()));
            let rest = words.next().ok_or_else(|| bad(line))?;
            let id = id.filter(|&i| i < count).ok_or_else(|| bad(line))?;
            match tag {
                Some("state") => {
                    let (out, expr) = rest.split_once(' ').ok_or_else(|| bad(line))?;
                    let o: i64 = out.strip_prefix("output=").and_then(|v| v.parse().ok()).ok_or_else(|| bad(line))?;
                    let e = expr.strip_prefix("expr=").ok_or_else(|| bad(line))?;
                    outputs[id] = Residue3::new(o);
                    states[id] = Some(e.parse::<KernelExpr>()?);
                }
                Some("delta") => {
                    let targets: Vec<usize> = rest
                        .split_whitespace()
                        .map(|w| w.parse().ok().filter(|&j| j < count))
                        .collect::<Option<_>>()
                        .ok_or_else(|| bad(line))?;
                    transitions[id] = Some(<[usize; 9]>::try_from(targets).map_err(|_| bad(line))?);
                }
                _ => return Err(bad(line)),
            }
        }
        let states = states.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| bad("missing state"))?;
        let transitions = transitions.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| bad("missing delta"))?;
        if start >= count {
            return Err(bad(header));
        }
        Ok(Dfao2D { states, transitions, outputs, start })
    }

    /// The one-dimensional automaton reading the digits of `p` for a fixed
    /// `n`. Its states pair a state of `self` with the number of digits of
    /// `n` consumed so far.
    pub fn fixed_n_slice(&self, n: &BigUint) -> Dfao1D {
        let digits = digits_lsd(n);
        let len = digits.len();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.start, 0usize)];
        index.insert((self.start, 0), 0);
        let mut transitions = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (s, pos) = pairs[i];
            let dn = digits.get(pos).copied().unwrap_or(0);
            let mut row = [0usize; 3];
            for j in 0..3u8 {
                let next = (self.transitions[s][(3 * dn + j) as usize], (pos + 1).min(len));
                row[j as usize] = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
            }
            transitions.push(row);
            i += 1;
        }
        let outputs = pairs.iter().map(|&(s, pos)| self.outputs[self.run(s, &digits[pos..], &[])]).collect();
        Dfao1D { transitions, outputs, start: 0 }
    }
}

/// A one-dimensional automaton with output reading base-3 digits least
/// significant first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dfao1D {
    pub transitions: Vec<[usize; 3]>,
    pub outputs: Vec<Residue3>,
    pub start: usize,
}

impl Dfao1D {
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn evaluate(&self, p: &BigUint) -> Residue3 {
        let state = digits_lsd(p).into_iter().fold(self.start, |s, d| self.transitions[s][d as usize]);
        self.outputs[state]
    }
}
