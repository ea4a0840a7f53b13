//! Exact rational scalars used by the polyhedral layer.
//!
//! Enumeration and facet computations are exact; floating point appears only
//! inside the solver. JSON interchange encodes non-integer rationals as
//! `"n/d"` strings and integers as plain JSON numbers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Encode a rational as a JSON value: integer when the denominator is one,
/// otherwise the reduced string `"n/d"`.
pub fn rat_to_json(r: &Rat) -> Value {
    if r.denom().is_one() {
        match r.numer().to_i64() {
            Some(n) => Value::from(n),
            None => Value::from(r.to_string()),
        }
    } else {
        Value::from(format!("{}/{}", r.numer(), r.denom()))
    }
}

/// Parse a JSON number or an `"n/d"` string back into a rational.
pub fn rat_from_json(v: &Value) -> Result<Rat, String> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rat_int(i))
            } else if let Some(f) = n.as_f64() {
                BigRational::from_float(f).ok_or_else(|| format!("non-finite number {n}"))
            } else {
                Err(format!("unsupported number {n}"))
            }
        }
        Value::String(s) => {
            let parts: Vec<&str> = s.split('/').collect();
            match parts.as_slice() {
                [n] => {
                    let num: BigInt = n.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
                    Ok(Rat::from_integer(num))
                }
                [n, d] => {
                    let num: BigInt = n.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
                    let den: BigInt = d.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
                    if den.is_zero() {
                        return Err("zero denominator".to_string());
                    }
                    Ok(Rat::new(num, den))
                }
                _ => Err(format!("malformed rational {s:?}")),
            }
        }
        other => Err(format!("expected number or \"n/d\" string, got {other}")),
    }
}

/// Scale a rational vector to a primitive integer vector with the same
/// direction: clear denominators and divide by the gcd of the numerators.
pub fn primitive_direction(v: &[Rat]) -> Vec<Rat> {
    let mut lcm = BigInt::one();
    for r in v {
        lcm = num::integer::lcm(lcm, r.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = num::integer::gcd(g, i.abs());
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|i| Rat::from_integer(i / &g)).collect()
}
