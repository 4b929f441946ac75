//! Exact rationals and their `"p/q"` text form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// `n/d` as a rational. Panics on a zero denominator.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"` or `"p"`; surrounding whitespace is ignored.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::RationalParse(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p/q"` with `q > 1`, or `"p"` for integers.
pub fn format(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Lossy conversion for numeric cross-checks and display only.
pub fn to_f64(value: &Rational) -> f64 {
    let num: f64 = value.numer().to_string().parse().unwrap_or(f64::NAN);
    let den: f64 = value.denom().to_string().parse().unwrap_or(f64::NAN);
    num / den
}

/// Exact square root of a non-negative rational, when it is a perfect square.
pub fn sqrt_exact(value: &Rational) -> Option<Rational> {
    if value.is_negative() {
        return None;
    }
    let num = value.numer().sqrt();
    let den = value.denom().sqrt();
    if &num * &num == *value.numer() && &den * &den == *value.denom() {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

/// Serde adapter storing a [`Rational`] as its canonical string.
pub mod serde_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&super::format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(deserializer)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(values: &[Rational], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&super::format(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(deserializer)?;
        texts
            .iter()
            .map(|t| super::parse(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for square matrices of rationals.
pub mod serde_matrix {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(
        rows: &[Vec<Rational>],
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        let texts: Vec<Vec<String>> = rows
            .iter()
            .map(|row| row.iter().map(super::format).collect())
            .collect();
        texts.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<Vec<Rational>>, D::Error> {
        let texts = Vec::<Vec<String>>::deserialize(deserializer)?;
        texts
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| super::parse(t).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Serde adapter for string-keyed maps of rationals.
pub mod serde_map {
    use std::collections::BTreeMap;

    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(
        values: &BTreeMap<String, Rational>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(values.len()))?;
        for (k, v) in values {
            map.serialize_entry(k, &super::format(v))?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<String, Rational>, D::Error> {
        let texts = BTreeMap::<String, String>::deserialize(deserializer)?;
        texts
            .into_iter()
            .map(|(k, t)| {
                super::parse(&t)
                    .map(|v| (k, v))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_normalize() {
        assert_eq!(parse("6/4").unwrap(), q(3, 2));
        assert_eq!(parse(" -3/1 ").unwrap(), qi(-3));
        assert_eq!(parse("4/-6").unwrap(), q(-2, 3));
        assert_eq!(format(&q(-4, 6)), "-2/3");
        assert_eq!(format(&q(5, 1)), "5");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(sqrt_exact(&q(9, 25)), Some(q(3, 5)));
        assert_eq!(sqrt_exact(&q(2, 1)), None);
        assert_eq!(sqrt_exact(&q(-1, 4)), None);
    }
}
