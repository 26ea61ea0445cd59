//! Exact heights: arbitrary-precision rationals extended with `+∞`.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::HeightError;

/// A height value on a merge tree.
///
/// Finite heights are exact rationals; the root of every merge tree sits at
/// [`Height::Infinite`]. The derived ordering places every finite value below
/// infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Height {
    Finite(BigRational),
    Infinite,
}

impl Height {
    pub fn zero() -> Self {
        Height::Finite(BigRational::zero())
    }

    pub fn from_int(value: i64) -> Self {
        Height::Finite(BigRational::from_integer(BigInt::from(value)))
    }

    /// `numer / denom`; panics on a zero denominator.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Height::Finite(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Height::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Height::Infinite)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Height::Finite(r) => Some(r),
            Height::Infinite => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Height::Finite(r) => r.is_negative(),
            Height::Infinite => false,
        }
    }

    /// `self - other`. Subtracting infinity is rejected: `∞ − ∞` is undefined
    /// and `c − ∞` would leave the extended range.
    pub fn checked_sub(&self, other: &Height) -> Result<Height, HeightError> {
        match (self, other) {
            (Height::Finite(a), Height::Finite(b)) => Ok(Height::Finite(a - b)),
            (Height::Infinite, Height::Finite(_)) => Ok(Height::Infinite),
            (_, Height::Infinite) => Err(HeightError::InfiniteSubtraction),
        }
    }

    /// Exact half; `∞ / 2 = ∞`.
    pub fn half(&self) -> Height {
        match self {
            Height::Finite(r) => Height::Finite(r / BigRational::from_integer(BigInt::from(2))),
            Height::Infinite => Height::Infinite,
        }
    }

    /// `|self − other|` for finite heights.
    pub fn abs_diff(&self, other: &Height) -> Result<Height, HeightError> {
        match (self, other) {
            (Height::Finite(a), Height::Finite(b)) => Ok(Height::Finite((a - b).abs())),
            _ => Err(HeightError::InfiniteSubtraction),
        }
    }

    /// Lossy conversion, only used for drawing.
    pub fn to_f64_lossy(&self) -> f64 {
        match self {
            Height::Finite(r) => {
                let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
                let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
                n / d
            }
            Height::Infinite => f64::INFINITY,
        }
    }
}

impl Add<&Height> for &Height {
    type Output = Height;

    fn add(self, rhs: &Height) -> Height {
        match (self, rhs) {
            (Height::Finite(a), Height::Finite(b)) => Height::Finite(a + b),
            _ => Height::Infinite,
        }
    }
}

impl Add for Height {
    type Output = Height;

    fn add(self, rhs: Height) -> Height {
        &self + &rhs
    }
}

impl From<i64> for Height {
    fn from(value: i64) -> Self {
        Height::from_int(value)
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(r) => write!(f, "{r}"),
            Height::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Height {
    type Err = HeightError;

    /// Accepts `"inf"`, integers (`"3"`), fractions (`"7/2"`) and plain
    /// decimals (`"2.25"`), all parsed exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let bad = || HeightError::Parse(s.to_string());
        if text.eq_ignore_ascii_case("inf") || text.eq_ignore_ascii_case("+inf") {
            return Ok(Height::Infinite);
        }
        if let Some((n, d)) = text.split_once('/') {
            let numer: BigInt = n.trim().parse().map_err(|_| bad())?;
            let denom: BigInt = d.trim().parse().map_err(|_| bad())?;
            if denom.is_zero() {
                return Err(bad());
            }
            return Ok(Height::Finite(BigRational::new(numer, denom)));
        }
        if let Some((int_part, frac_part)) = text.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int_part.starts_with('-');
            let int_digits = int_part.trim_start_matches(['-', '+']);
            if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac_part);
            let mut numer: BigInt = digits.parse().map_err(|_| bad())?;
            if negative {
                numer = -numer;
            }
            let denom = num_traits::pow(BigInt::from(10), frac_part.len());
            return Ok(Height::Finite(BigRational::new(numer, denom)));
        }
        let value: BigInt = text.parse().map_err(|_| bad())?;
        Ok(Height::Finite(BigRational::from_integer(value)))
    }
}
