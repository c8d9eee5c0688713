//! JSON encoding of scalars.
//!
//! Emitted forms are `{"rat":[p,q]}`, `{"quad":{"c0":[p,q],"c1":[p,q],"d":d}}`
//! and `{"alg":{"minpoly":[..],"coeffs":[[p,q],..],"interval":[[p,q],[p,q]]}}`.
//! Input additionally accepts `{"cos":m}` for `2cos(π/m)`, bare integers and
//! strings such as `"-3/4"`. Integers that do not fit in `i64` are strings.

use super::{chebyshev_value, NumberField, Scalar, ScalarError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use std::sync::Arc;

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn rat_json(r: &BigRational) -> Value {
    json!([int_json(r.numer()), int_json(r.denom())])
}

fn bad(msg: impl Into<String>) -> ScalarError {
    ScalarError::Parse(msg.into())
}

fn int_from(v: &Value) -> Result<BigInt, ScalarError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| bad(format!("{n} is not an integer"))),
        Value::String(s) => s.trim().parse().map_err(|_| bad(format!("{s:?} is not an integer"))),
        other => Err(bad(format!("expected an integer, found {other}"))),
    }
}

fn rat_from(v: &Value) -> Result<BigRational, ScalarError> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            let p = int_from(&pair[0])?;
            let q = int_from(&pair[1])?;
            if q.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(BigRational::new(p, q))
        }
        Value::String(s) => parse_rational(s),
        Value::Number(_) => Ok(BigRational::from_integer(int_from(v)?)),
        other => Err(bad(format!("expected a rational [p,q], found {other}"))),
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad(format!("{s:?} is not a rational")))?;
    let q: BigInt = q.parse().map_err(|_| bad(format!("{s:?} is not a rational")))?;
    if q.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(p, q))
}

impl Scalar {
    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Rational(r) => json!({ "rat": rat_json(r) }),
            Scalar::Quadratic(q) => json!({
                "quad": { "c0": rat_json(&q.c0), "c1": rat_json(&q.c1), "d": q.d }
            }),
            Scalar::Algebraic(a) => {
                let (lo, hi) = a.field.interval();
                json!({
                    "alg": {
                        "minpoly": a.field.minpoly().iter().map(int_json).collect::<Vec<_>>(),
                        "coeffs": a.coeffs.iter().map(rat_json).collect::<Vec<_>>(),
                        "interval": [rat_json(lo), rat_json(hi)],
                    }
                })
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Scalar, ScalarError> {
        match v {
            Value::Number(_) | Value::String(_) => return rat_from(v).map(Scalar::Rational),
            Value::Object(map) if map.len() == 1 => {}
            other => return Err(bad(format!("unrecognized scalar {other}"))),
        }
        let (tag, body) = v.as_object().and_then(|m| m.iter().next()).expect("one key");
        match tag.as_str() {
            "rat" => rat_from(body).map(Scalar::Rational),
            "quad" => {
                let c0 = rat_from(body.get("c0").ok_or_else(|| bad("quad needs c0"))?)?;
                let c1 = rat_from(body.get("c1").ok_or_else(|| bad("quad needs c1"))?)?;
                let d = body.get("d").and_then(Value::as_u64).ok_or_else(|| bad("quad needs a positive d"))?;
                if d == 0 {
                    return Err(bad("quad needs a positive d"));
                }
                Ok(Scalar::quadratic(c0, c1, d))
            }
            "cos" => {
                let m = body.as_u64().filter(|m| (2..=u64::from(u32::MAX)).contains(m));
                let m = m.ok_or_else(|| bad("cos needs an integer m >= 2"))?;
                Ok(chebyshev_value(m as u32))
            }
            "alg" => {
                let minpoly = body
                    .get("minpoly")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("alg needs minpoly"))?
                    .iter()
                    .map(int_from)
                    .collect::<Result<Vec<_>, _>>()?;
                let coeffs = body
                    .get("coeffs")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("alg needs coeffs"))?
                    .iter()
                    .map(rat_from)
                    .collect::<Result<Vec<_>, _>>()?;
                let iv = body
                    .get("interval")
                    .and_then(Value::as_array)
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| bad("alg needs a two-point interval"))?;
                let field = NumberField::new(minpoly, rat_from(&iv[0])?, rat_from(&iv[1])?)?;
                Ok(Scalar::algebraic(Arc::new(field), &coeffs))
            }
            other => Err(bad(format!("unknown scalar tag {other:?}"))),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Scalar::from_json(&v).map_err(D::Error::custom)
    }
}
