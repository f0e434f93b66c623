//! Canonical JSON: object keys sorted (serde_json's default map), integers
//! rendered exactly at any size.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Number, Value};

use crate::error::{Error, Result};

pub fn big_to_json(b: &BigInt) -> Value {
    Value::Number(Number::from_str(&b.to_string()).expect("integer literal"))
}

pub fn json_to_big(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(num) => BigInt::from_str(&num.to_string())
            .map_err(|_| Error::domain(format!("not an integer: {num}"))),
        Value::String(s) => BigInt::from_str(s).map_err(|_| Error::domain(format!("not an integer: {s}"))),
        other => Err(Error::domain(format!("not an integer: {other}"))),
    }
}

pub fn rational_to_json(r: &BigRational) -> Value {
    Value::Array(vec![big_to_json(r.numer()), big_to_json(r.denom())])
}

/// Compact canonical rendering used for stdout and cache keys.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}
