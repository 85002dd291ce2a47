//! Arithmetic in the field with three elements.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// An element of F₃, stored as its canonical representative in `{0, 1, 2}`.
///
/// `2` doubles as `−1`, so signs such as `(−1)ⁿ` live here too.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub struct Residue3(u8);

impl Residue3 {
    pub const ZERO: Residue3 = Residue3(0);
    pub const ONE: Residue3 = Residue3(1);
    pub const TWO: Residue3 = Residue3(2);
    pub const MINUS_ONE: Residue3 = Residue3(2);

    /// Reduces any integer mod 3.
    pub fn new(value: i64) -> Self {
        Residue3(value.rem_euclid(3) as u8)
    }

    pub fn from_bigint(value: &BigInt) -> Self {
        let r = value.mod_floor(&BigInt::from(3));
        Residue3(r.to_u8().expect("residue mod 3 fits in u8"))
    }

    /// `(−1)ⁿ` as a field element.
    pub fn sign(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Residue3::ONE
        } else {
            Residue3::MINUS_ONE
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse; `None` for zero. Every nonzero element is its own inverse.
    pub fn inverse(self) -> Option<Self> {
        match self.0 {
            0 => None,
            v => Some(Residue3(v)),
        }
    }

    pub fn pow(self, exp: u32) -> Self {
        (0..exp).fold(Residue3::ONE, |acc, _| acc * self)
    }

    /// The three field elements in canonical order.
    pub fn all() -> [Residue3; 3] {
        [Residue3(0), Residue3(1), Residue3(2)]
    }
}

impl fmt::Display for Residue3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<Residue3> for u8 {
    fn from(r: Residue3) -> u8 {
        r.0
    }
}

impl TryFrom<u8> for Residue3 {
    type Error = String;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        if value < 3 {
            Ok(Residue3(value))
        } else {
            Err(format!("{value} is not a canonical residue mod 3"))
        }
    }
}

impl Add for Residue3 {
    type Output = Residue3;
    fn add(self, rhs: Residue3) -> Residue3 {
        Residue3((self.0 + rhs.0) % 3)
    }
}

impl AddAssign for Residue3 {
    fn add_assign(&mut self, rhs: Residue3) {
        *self = *self + rhs;
    }
}

impl Sub for Residue3 {
    type Output = Residue3;
    fn sub(self, rhs: Residue3) -> Residue3 {
        Residue3((self.0 + 3 - rhs.0) % 3)
    }
}

impl Neg for Residue3 {
    type Output = Residue3;
    fn neg(self) -> Residue3 {
        Residue3((3 - self.0) % 3)
    }
}

impl Mul for Residue3 {
    type Output = Residue3;
    fn mul(self, rhs: Residue3) -> Residue3 {
        Residue3((self.0 * rhs.0) % 3)
    }
}

impl MulAssign for Residue3 {
    fn mul_assign(&mut self, rhs: Residue3) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Residue3 {
    fn sum<I: Iterator<Item = Residue3>>(iter: I) -> Self {
        iter.fold(Residue3::ZERO, |a, b| a + b)
    }
}

impl std::iter::Product for Residue3 {
    fn product<I: Iterator<Item = Residue3>>(iter: I) -> Self {
        iter.fold(Residue3::ONE, |a, b| a * b)
    }
}
