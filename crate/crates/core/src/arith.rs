//! Exact integer and rational scalars.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(value: i64) -> Int {
    Int::from(value)
}

pub fn rat(value: i64) -> Rat {
    Rat::from_integer(Int::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rat {
    Rat::new(Int::from(numer), Int::from(denom))
}

pub fn rat_from_int(value: &Int) -> Rat {
    Rat::from_integer(value.clone())
}

/// Parses `"p"`, `"-p"` or `"p/q"` with `q != 0`.
pub fn parse_rational(text: &str) -> Option<Rat> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer: Int = numer.parse().ok()?;
    let denom: Int = denom.parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(Rat::new(numer, denom))
}

/// `"p"` for integers, `"p/q"` in lowest terms with `q > 0` otherwise.
pub fn format_rational(value: &Rat) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn floor(value: &Rat) -> Int {
    value.floor().to_integer()
}

pub fn sign(value: &Rat) -> i8 {
    if value.is_zero() {
        0
    } else if value.is_positive() {
        1
    } else {
        -1
    }
}

/// Gcd of a list of integers; zero for the empty list or all-zero input.
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a Int>) -> Int {
    values.into_iter().fold(Int::zero(), |acc, v| acc.gcd(v))
}

pub fn to_i64(value: &Int) -> Option<i64> {
    value.to_i64()
}

pub fn is_one(value: &Int) -> bool {
    value.is_one()
}
