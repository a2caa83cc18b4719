//! Exact rationals and their `"num/den"` text form.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serializer};

/// Exact rational used for every Lipschitz constant, bound and ratio.
pub type Rational = Ratio<i64>;

/// Integer as a rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(value)
}

/// `⌊q⌋` as an integer.
pub fn floor(q: &Rational) -> i64 {
    q.floor().to_integer()
}

/// `⌈q⌉` as an integer.
pub fn ceil(q: &Rational) -> i64 {
    q.ceil().to_integer()
}

/// Always `num/den`, even for integers, so reports have one shape.
pub fn to_fraction_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expected an integer or \"p/q\", got {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Accepts `"7"`, `"-3"` or `"3/2"`; the denominator must be positive.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let bad = || ParseRationalError(text.to_string());
    let text = text.trim();
    match text.split_once('/') {
        None => i64::from_str(text).map(int).map_err(|_| bad()),
        Some((num, den)) => {
            let num = i64::from_str(num.trim()).map_err(|_| bad())?;
            let den = i64::from_str(den.trim()).map_err(|_| bad())?;
            if den <= 0 {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Absolute value of a rational.
pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// Serde adapter storing a [`Rational`] as a `"num/den"` string.
pub mod fraction {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_fraction_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
