//! The character sums S(n, i, 𝔭) = Σ_{x,y ∈ k_𝔭} ξ^i(f_n(x, y)) with
//! f_n = (xy)^{n-1}(1-x)(1-y)(1-xy)^{n-1}, and the identities they satisfy.

pub mod brute;
pub mod greene;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use serde_json::{json, Value};

use crate::arith::units_mod;
use crate::cyclotomic::{cyc_reduce_i64, CycInt};
use crate::error::{Error, Result};
use crate::finite_fields::{FieldCtx, FqElem};
use crate::json::big_to_json;
use crate::places::Place;

pub use greene::Dft;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Brute,
    Greene,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Greene => "greene",
        }
    }

    /// Brute force for small fields, the Gauss-sum pipeline above.
    pub fn auto(np: u64) -> Method {
        if np <= BRUTE_AUTO_LIMIT {
            Method::Brute
        } else {
            Method::Greene
        }
    }
}

/// Field size up to which [`Method::auto`] picks brute force.
pub const BRUTE_AUTO_LIMIT: u64 = 1024;

#[derive(Clone, Debug)]
pub struct CharSumResult {
    pub n: u64,
    pub i: u64,
    pub place: Place,
    pub value: CycInt,
    pub method: Method,
    pub elapsed: Duration,
    /// Worst rounding distance observed (Gauss-sum path only).
    pub margin: Option<f64>,
}

impl CharSumResult {
    /// JSON form; `ms` is included only on request so that default output is
    /// byte-reproducible.
    pub fn to_json(&self, with_timing: bool) -> Value {
        let mut v = json!({
            "n": self.n,
            "i": self.i,
            "place": self.place.to_json(),
            "value": self.value.to_json(),
            "method": self.method.name(),
        });
        if with_timing {
            v["ms"] = json!(self.elapsed.as_secs_f64() * 1e3);
        }
        v
    }
}

fn check_index(n: u64, i: u64) -> Result<()> {
    if i == 0 || i >= n {
        return Err(Error::domain(format!("index i = {i} outside 1..{}", n - 1)));
    }
    Ok(())
}

/// S_i from a histogram of symbol exponents.
pub fn sum_from_histogram(n: u64, counts: &[u64], i: u64) -> CycInt {
    let mut raw = vec![0i64; n as usize];
    for (k, &c) in counts.iter().enumerate() {
        raw[(k as u64 * i % n) as usize] += c as i64;
    }
    cyc_reduce_i64(n, &raw)
}

/// All S_i, 1 <= i < n, from one pass (index 0 holds the trivial-extended
/// i = n term, i.e. the number of (x, y) with f_n ≠ 0).
pub fn all_sums(pl: &Place, method: Method) -> Result<Vec<CycInt>> {
    let n = pl.n();
    match method {
        Method::Brute => {
            let counts = brute::histogram(pl)?;
            let mut out = vec![CycInt::from_int(n, counts.iter().sum::<u64>())];
            out.extend((1..n).map(|i| sum_from_histogram(n, &counts, i)));
            Ok(out)
        }
        Method::Greene => {
            let (mut sums, _) = greene::all_sums(pl, Dft::Fft)?;
            sums[0] = CycInt::from_int(n, nonvanishing_count(pl.np()));
            Ok(sums)
        }
    }
}

/// #{(x, y) : f_n(x, y) ≠ 0}: x ∉ {0, 1}, then y ∉ {0, 1, 1/x}.
pub fn nonvanishing_count(q: u64) -> u64 {
    (q - 2) * (q - 3)
}

pub fn trace_sum(pl: &Place, i: u64) -> Result<CharSumResult> {
    check_index(pl.n(), i)?;
    let start = Instant::now();
    let counts = brute::histogram(pl)?;
    let value = sum_from_histogram(pl.n(), &counts, i);
    Ok(CharSumResult {
        n: pl.n(),
        i,
        place: pl.clone(),
        value,
        method: Method::Brute,
        elapsed: start.elapsed(),
        margin: None,
    })
}

pub fn trace_sum_greene(pl: &Place, i: u64) -> Result<CharSumResult> {
    trace_sum_greene_with(pl, i, Dft::Fft)
}

pub fn trace_sum_greene_with(pl: &Place, i: u64, dft: Dft) -> Result<CharSumResult> {
    check_index(pl.n(), i)?;
    let start = Instant::now();
    let (sums, margin) = greene::all_sums(pl, dft)?;
    Ok(CharSumResult {
        n: pl.n(),
        i,
        place: pl.clone(),
        value: sums[i as usize].clone(),
        method: Method::Greene,
        elapsed: start.elapsed(),
        margin: Some(margin),
    })
}

pub fn trace_sum_with(pl: &Place, i: u64, method: Method) -> Result<CharSumResult> {
    match method {
        Method::Brute => trace_sum(pl, i),
        Method::Greene => trace_sum_greene(pl, i),
    }
}

/// f_n(x, y) evaluated directly in the field.
pub fn f_n(ctx: &FieldCtx, n: u64, x: &FqElem, y: &FqElem) -> FqElem {
    let one = ctx.one();
    let xy = ctx.mul(x, y);
    let a = ctx.pow(&xy, n - 1);
    let b = ctx.mul(&ctx.sub(&one, x), &ctx.sub(&one, y));
    let c = ctx.pow(&ctx.sub(&one, &xy), n - 1);
    ctx.mul(&ctx.mul(&a, &b), &c)
}

/// Direct double loop through `Place::residue_symbol`; the reference every
/// faster path is tested against.
pub fn trace_sum_naive(pl: &Place, i: u64) -> Result<CycInt> {
    check_index(pl.n(), i)?;
    let ctx = pl.ctx();
    let mut acc = CycInt::zero(pl.n());
    for x in ctx.elements() {
        for y in ctx.elements() {
            let v = f_n(ctx, pl.n(), &x, &y);
            acc = &acc + &pl.residue_symbol(&v).pow(i as u32);
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct TwistReport {
    pub n: u64,
    pub i: u64,
    pub lhs: CycInt,
    pub rhs: CycInt,
    pub symbol: CycInt,
    pub ok: bool,
}

impl TwistReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "i": self.i, "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json(),
            "symbol": self.symbol.to_json(), "ok": self.ok,
        })
    }
}

/// S_i = (-1/𝔭)_n^i · S_{n-i}, given all sums of the place.
pub fn twist_from_sums(pl: &Place, sums: &[CycInt], i: u64) -> Result<TwistReport> {
    let n = pl.n();
    check_index(n, i)?;
    let symbol = pl.minus_one_symbol();
    let lhs = sums[i as usize].clone();
    let rhs = &symbol.pow(i as u32) * &sums[(n - i) as usize];
    Ok(TwistReport { n, i, ok: lhs == rhs, lhs, rhs, symbol })
}

pub fn twist_check(pl: &Place, i: u64, method: Method) -> Result<TwistReport> {
    check_index(pl.n(), i)?;
    twist_from_sums(pl, &all_sums(pl, method)?, i)
}

#[derive(Clone, Debug)]
pub struct WeilReport {
    pub max_abs: f64,
    pub bound: f64,
    pub ok: bool,
}

impl WeilReport {
    pub fn to_json(&self) -> Value {
        json!({"approx": {"max_abs": self.max_abs}, "bound": self.bound, "ok": self.ok})
    }
}

/// max_j |σ_j(value)| <= 2·Np + tol.
pub fn weil_check_value(value: &CycInt, np: u64, tol: f64) -> WeilReport {
    let max_abs = value.max_abs();
    let bound = 2.0 * np as f64;
    WeilReport { max_abs, bound, ok: max_abs <= bound + tol }
}

pub fn weil_check(result: &CharSumResult) -> WeilReport {
    weil_check_value(&result.value, result.place.np(), 1e-6)
}

#[derive(Clone, Debug)]
pub struct GcdReport {
    pub n: u64,
    pub i: u64,
    pub d: u64,
    pub high: CycInt,
    pub low_embedded: CycInt,
    pub ok: bool,
}

impl GcdReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "i": self.i, "d": self.d, "high": self.high.to_json(),
            "low": self.low_embedded.to_json(), "ok": self.ok,
        })
    }
}

/// Checks the compatibility of `pl_nd` (level n/d, same residue field size,
/// factor vanishing at ω^d) with `pl_n`.
fn check_compatible(pl_n: &Place, pl_nd: &Place, d: u64) -> Result<()> {
    let n = pl_n.n();
    if pl_nd.n() * d != n || pl_nd.p() != pl_n.p() || pl_nd.np() != pl_n.np() {
        return Err(Error::domain(format!(
            "place for level {} over field of size {} is not below level {n} over size {}",
            pl_nd.n(),
            pl_nd.np(),
            pl_n.np()
        )));
    }
    let ctx = pl_n.ctx();
    let target = ctx.pow(pl_n.omega(), d);
    let val = pl_nd
        .factor()
        .iter()
        .rev()
        .fold(ctx.zero(), |acc, &c| ctx.add(&ctx.mul(&acc, &target), &ctx.from_u64(c)));
    if !val.is_zero() {
        return Err(Error::domain("ω^d is not a root of the lower place's factor"));
    }
    Ok(())
}

/// S(n, i, 𝔭) against S(n/d, i/d, 𝔭') for d = gcd(i, n), pushed into Z[ζ_n].
pub fn gcd_reduction_check(pl_n: &Place, i: u64, pl_nd: &Place, method: Method) -> Result<GcdReport> {
    check_index(pl_n.n(), i)?;
    gcd_reduction_check_by(pl_n, i, i.gcd(&pl_n.n()), pl_nd, method)
}

/// As [`gcd_reduction_check`] for any d > 1 dividing gcd(i, n).
pub fn gcd_reduction_check_by(pl_n: &Place, i: u64, d: u64, pl_nd: &Place, method: Method) -> Result<GcdReport> {
    check_index(pl_n.n(), i)?;
    let high = all_sums(pl_n, method)?;
    let low = if d > 1 && pl_n.n() % d == 0 { all_sums(pl_nd, method)? } else { Vec::new() };
    gcd_reduction_from_sums(pl_n, &high, i, d, pl_nd, &low)
}

/// The reduction check from precomputed sums of both places.
pub fn gcd_reduction_from_sums(
    pl_n: &Place,
    high: &[CycInt],
    i: u64,
    d: u64,
    pl_nd: &Place,
    low: &[CycInt],
) -> Result<GcdReport> {
    let n = pl_n.n();
    check_index(n, i)?;
    if d <= 1 || i % d != 0 || n % d != 0 {
        return Err(Error::domain(format!("d = {d} is not a nontrivial divisor of gcd({i}, {n})")));
    }
    check_compatible(pl_n, pl_nd, d)?;
    let high = high[i as usize].clone();
    let low = low[(i / d) as usize].embed_into(n)?;
    Ok(GcdReport { n, i, d, ok: high == low, high, low_embedded: low })
}

/// Σ_{(i,n)=1} S_i, asserted to be a rational integer.
pub fn new_part_from_sums(n: u64, sums: &[CycInt]) -> Result<BigInt> {
    let total = units_mod(n)
        .into_iter()
        .fold(CycInt::zero(n), |acc, i| &acc + &sums[i as usize]);
    total
        .as_integer()
        .ok_or_else(|| Error::consistency(format!("new-part trace {total} is not rational")))
}

pub fn new_part_trace(pl: &Place, method: Method) -> Result<CycInt> {
    let v = new_part_from_sums(pl.n(), &all_sums(pl, method)?)?;
    Ok(CycInt::from_int(pl.n(), v))
}

#[derive(Clone, Debug)]
pub struct CountReport {
    pub lhs: BigInt,
    pub rhs: CycInt,
    pub ok: bool,
}

impl CountReport {
    pub fn to_json(&self) -> Value {
        json!({"lhs": big_to_json(&self.lhs), "rhs": self.rhs.to_json(), "ok": self.ok})
    }
}

/// #{(x, y, s) : s ≠ 0, s^n = f_n(x, y)} by direct enumeration against
/// Σ_{i=1}^{n} S_i with the i = n term the trivial character extended by 0.
pub fn solution_count_identity(pl: &Place) -> Result<CountReport> {
    let ctx = pl.ctx();
    let n = pl.n();
    let mut nth_power_count = vec![0u64; ctx.q() as usize];
    for s in ctx.elements().skip(1) {
        nth_power_count[ctx.encode(&ctx.pow(&s, n)) as usize] += 1;
    }
    let mut lhs = 0u64;
    for x in ctx.elements() {
        for y in ctx.elements() {
            let v = f_n(ctx, n, &x, &y);
            lhs += nth_power_count[ctx.encode(&v) as usize];
        }
    }
    let sums = all_sums(pl, Method::Brute)?;
    let rhs = sums.iter().fold(CycInt::zero(n), |acc, s| &acc + s);
    let lhs = BigInt::from(lhs);
    let ok = rhs.as_integer().as_ref() == Some(&lhs);
    Ok(CountReport { lhs, rhs, ok })
}

#[cfg(test)]
mod tests;
