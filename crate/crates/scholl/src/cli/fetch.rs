//! Newform traces from the LMFDB API, listed beside genus-2 Frobenius traces.

use serde_json::{json, Value};

use crate::arith::is_prime;
use crate::curves::{cb_is_good, genus2_lpoly};
use crate::error::{Error, Result};

const API: &str = "https://www.lmfdb.org/api/mf_newforms/";

fn traces(label: &str) -> Result<Vec<Value>> {
    let url = format!("{API}?label={label}&_format=json&_fields=label,traces");
    let text = reqwest::blocking::get(&url)
        .and_then(|r| r.error_for_status())
        .and_then(|r| r.text())
        .map_err(|e| Error::Unavailable(format!("fetching {label}: {e}")))?;
    let body: Value = serde_json::from_str(&text).map_err(|e| Error::domain(format!("response for {label}: {e}")))?;
    let rows = body["data"].as_array().ok_or_else(|| Error::domain(format!("unexpected response for {label}")))?;
    let row = rows.first().ok_or_else(|| Error::domain(format!("no newform labelled {label}")))?;
    row["traces"].as_array().cloned().ok_or_else(|| Error::domain(format!("{label} has no traces")))
}

pub fn side_by_side(label: &str, b: i64, primes_up_to: u64) -> Result<Value> {
    let a = traces(label)?;
    let mut rows = Vec::new();
    for p in (3..=primes_up_to).filter(|&p| is_prime(p)) {
        let newform = a.get(p as usize - 1).cloned().unwrap_or(Value::Null);
        let curve = if cb_is_good(b, p) {
            let l = genus2_lpoly(&[1, 0, 0, b, 0, 0, 1], p)?;
            json!(-l.a1)
        } else {
            Value::Null
        };
        rows.push(json!({"p": p, "a_p": newform, "curve_trace": curve}));
    }
    Ok(json!({"label": label, "b": b, "rows": rows}))
}
