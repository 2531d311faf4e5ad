//! JSON helpers for exact integers and rationals.
//!
//! Integers that fit in an `i64` are written as JSON numbers, anything
//! larger as a decimal string. Rationals are always `"num/den"` strings
//! (or plain integers when the denominator is 1).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("expected an integer, found {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
        other => Err(Error::Parse(format!("expected an integer, found {other}"))),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        other => Ok(BigRational::from_integer(int_from_json(other)?)),
    }
}

pub fn rational_to_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rational_to_json(x: &BigRational) -> Value {
    if x.denom().is_one() {
        int_to_json(x.numer())
    } else {
        Value::from(rational_to_string(x))
    }
}

/// Serde adapter storing a `BigInt` as a JSON number or decimal string.
pub mod bigint_json {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        super::int_to_json(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let v = Value::deserialize(d)?;
        super::int_from_json(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_values_become_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(int_to_json(&big), Value::from("123456789012345678901234567890"));
        assert_eq!(int_from_json(&int_to_json(&big)).unwrap(), big);
        assert_eq!(int_to_json(&BigInt::from(-23)), Value::from(-23));
    }

    #[test]
    fn rationals() {
        let r = parse_rational("-773/3").unwrap();
        assert_eq!(rational_to_string(&r), "-773/3");
        assert_eq!(rational_from_json(&Value::from("6/4")).unwrap(), parse_rational("3/2").unwrap());
        assert_eq!(rational_from_json(&Value::from(5)).unwrap(), parse_rational("5").unwrap());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
