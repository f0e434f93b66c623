//! Atkin–Swinnerton-Dyer congruences for the weight-4 basis f₁, f₂ and
//! recovery of the degree-4 Frobenius polynomials from them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::cyclotomic::{induce_to_integers, CycInt, IntPoly, QuadraticFactor};
use crate::error::{Error, Result};
use crate::json::big_to_json;
use crate::qseries::{weight4_basis, FracSeries, IntegersMod, Rationals};

pub const PURITY_TOL: f64 = 1e-6;

/// T⁴ + A3 T³ + A2 T² + A1 T + A0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASDQuartic {
    pub p: u64,
    pub a3: BigInt,
    pub a2: BigInt,
    pub a1: BigInt,
    pub a0: BigInt,
}

impl ASDQuartic {
    /// With A1 = p³A3 and A0 = p⁶.
    pub fn self_dual(p: u64, a3: impl Into<BigInt>, a2: impl Into<BigInt>) -> Self {
        let a3 = a3.into();
        let p3 = BigInt::from(p).pow(3);
        ASDQuartic { p, a1: &p3 * &a3, a0: &p3 * &p3, a3, a2: a2.into() }
    }

    pub fn from_coeffs(p: u64, a: [i64; 4]) -> Self {
        ASDQuartic { p, a3: a[0].into(), a2: a[1].into(), a1: a[2].into(), a0: a[3].into() }
    }

    pub fn coefficients(&self) -> [&BigInt; 4] {
        [&self.a3, &self.a2, &self.a1, &self.a0]
    }

    pub fn is_self_dual(&self) -> bool {
        let p3 = BigInt::from(self.p).pow(3);
        self.a1 == &p3 * &self.a3 && self.a0 == &p3 * &p3
    }

    /// Constant term first.
    pub fn as_int_poly(&self) -> IntPoly {
        IntPoly(vec![self.a0.clone(), self.a1.clone(), self.a2.clone(), self.a3.clone(), BigInt::one()])
    }

    /// Exact test that every root has absolute value p^{3/2}, for the
    /// self-dual shape: T⁴ + A3T³ + A2T² + p³A3T + p⁶ = T²·g(T + p³/T) with
    /// g(u) = u² + A3u + A2 - 2p³, whose roots must be real in [-2p^{3/2}, 2p^{3/2}].
    pub fn is_pure_exact(&self) -> bool {
        if !self.is_self_dual() {
            return false;
        }
        let p3 = BigInt::from(self.p).pow(3);
        let two = BigInt::from(2);
        let disc = &self.a3 * &self.a3 - BigInt::from(4) * (&self.a2 - &two * &p3);
        if disc.is_negative() {
            return false;
        }
        // g(±2p^{3/2}) >= 0 ⇔ X >= |Y|·p^{3/2} with X = 2p³ + A2, Y = 2A3.
        let x = &two * &p3 + &self.a2;
        let y = &two * &self.a3;
        if x.is_negative() || &x * &x < &y * &y * &p3 {
            return false;
        }
        // Vertex -A3/2 inside the interval.
        &self.a3 * &self.a3 <= BigInt::from(16) * &p3
    }

    /// Largest relative deviation of a root's absolute value from p^{3/2}.
    pub fn purity_deviation(&self) -> f64 {
        use num_complex::Complex64;
        let p3 = (self.p as f64).powi(3);
        let a3 = self.a3.to_f64().unwrap_or(f64::NAN);
        let a2 = self.a2.to_f64().unwrap_or(f64::NAN);
        let disc = Complex64::new(a3 * a3 - 4.0 * (a2 - 2.0 * p3), 0.0).sqrt();
        let target = p3.sqrt();
        let mut dev: f64 = 0.0;
        for u in [(-a3 + disc) / 2.0, (-a3 - disc) / 2.0] {
            let d = (u * u - 4.0 * p3).sqrt();
            for t in [(u + d) / 2.0, (u - d) / 2.0] {
                dev = dev.max((t.norm() - target).abs() / target);
            }
        }
        if self.is_self_dual() {
            dev
        } else {
            f64::INFINITY
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"p": self.p, "A": self.coefficients().iter().map(|a| big_to_json(a)).collect::<Vec<_>>()})
    }
}

impl fmt::Display for ASDQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_int_poly())
    }
}

/// Residues of a_i(m), the coefficient of q^{m/3}.
pub trait CoeffSource {
    fn residue(&self, m: u64, modulus: &BigInt) -> Result<BigInt>;
}

fn lookup<R: crate::qseries::CoeffRing>(f: &FracSeries<R>, m: u64) -> Result<R::Elem> {
    f.coeff_at(m as i64, 3).map_err(|_| {
        Error::capacity(format!(
            "coefficient a({m}) is needed but only {} terms are known",
            f.prec()
        ))
    })
}

impl CoeffSource for FracSeries<Rationals> {
    fn residue(&self, m: u64, modulus: &BigInt) -> Result<BigInt> {
        let c: BigRational = lookup(self, m)?;
        let den = c.denom().mod_floor(modulus);
        let inv = mod_inverse(&den, modulus)
            .ok_or_else(|| Error::domain(format!("denominator of a({m}) is not invertible mod {modulus}")))?;
        Ok((c.numer() * inv).mod_floor(modulus))
    }
}

impl CoeffSource for FracSeries<IntegersMod> {
    fn residue(&self, m: u64, modulus: &BigInt) -> Result<BigInt> {
        let known = BigInt::from(self.ring().modulus());
        if !(&known % modulus).is_zero() {
            return Err(Error::capacity(format!("series known only mod {known}, not mod {modulus}")));
        }
        Ok(BigInt::from(lookup(self, m)?).mod_floor(modulus))
    }
}

/// Coefficients given by a function m ↦ a(m).
pub struct FnSource<F: Fn(u64) -> Option<BigInt>>(pub F);

impl<F: Fn(u64) -> Option<BigInt>> CoeffSource for FnSource<F> {
    fn residue(&self, m: u64, modulus: &BigInt) -> Result<BigInt> {
        (self.0)(m)
            .map(|v| v.mod_floor(modulus))
            .ok_or_else(|| Error::capacity(format!("coefficient a({m}) is not available")))
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Which modulus the five-term combination is tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Congruence {
    /// p^{3+r}, r >= -1, as printed with the table.
    Printed,
    /// p^{3(r+1)}, the weight-4 modulus p^{(k-1)(r+1)}.
    Scholl,
}

impl Congruence {
    pub fn exponent(self, r: i64) -> u32 {
        match self {
            Congruence::Printed => (3 + r).max(0) as u32,
            Congruence::Scholl => (3 * (r + 1)).max(0) as u32,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Congruence::Printed => "printed",
            Congruence::Scholl => "scholl",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyRow {
    pub r: i64,
    pub seed: u64,
    pub exponent: u32,
    pub residue: BigInt,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct AsdVerifyReport {
    pub p: u64,
    pub form: Congruence,
    pub rows: Vec<VerifyRow>,
    pub ok: bool,
}

impl AsdVerifyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "form": self.form.name(),
            "rows": self.rows.iter().map(|r| json!({
                "r": r.r, "seed": r.seed, "modulus": format!("{}^{}", self.p, r.exponent),
                "residue": big_to_json(&r.residue), "ok": r.ok,
            })).collect::<Vec<_>>(),
            "ok": self.ok,
        })
    }

    /// Rows that failed, as (r, seed).
    pub fn failures(&self) -> Vec<(i64, u64)> {
        self.rows.iter().filter(|r| !r.ok).map(|r| (r.r, r.seed)).collect()
    }
}

/// a(n p^{r+2}) + A3 a(n p^{r+1}) + A2 a(n p^r) + A1 a(n p^{r-1}) + A0 a(n p^{r-2})
/// reduced mod p^e, with a(n p^k) = 0 for k < 0.
fn five_term(a: &dyn CoeffSource, p: u64, quartic: &ASDQuartic, r: i64, seed: u64, e: u32) -> Result<BigInt> {
    let modulus = BigInt::from(p).pow(e);
    if e == 0 {
        return Ok(BigInt::zero());
    }
    let coeff = |k: i64| -> Result<BigInt> {
        if k < 0 {
            Ok(BigInt::zero())
        } else {
            a.residue(seed * p.pow(k as u32), &modulus)
        }
    };
    let terms = [
        (BigInt::one(), r + 2),
        (quartic.a3.clone(), r + 1),
        (quartic.a2.clone(), r),
        (quartic.a1.clone(), r - 1),
        (quartic.a0.clone(), r - 2),
    ];
    let mut acc = BigInt::zero();
    for (c, k) in terms {
        acc += c * coeff(k)?;
    }
    Ok(acc.mod_floor(&modulus))
}

/// The congruence for each r in r_min..=r_max and each seed index.
pub fn asd_verify(
    a: &dyn CoeffSource,
    quartic: &ASDQuartic,
    r_min: i64,
    r_max: i64,
    form: Congruence,
    seeds: &[u64],
) -> Result<AsdVerifyReport> {
    let p = quartic.p;
    let mut rows = Vec::new();
    for r in r_min..=r_max {
        for &seed in seeds {
            let e = form.exponent(r);
            let residue = five_term(a, p, quartic, r, seed, e)?;
            rows.push(VerifyRow { r, seed, exponent: e, ok: residue.is_zero(), residue });
        }
    }
    let ok = rows.iter().all(|r| r.ok);
    Ok(AsdVerifyReport { p, form, rows, ok })
}

/// Seed indices used when solving: a(p^k) and a(2p^k).
pub const SOLVE_SEEDS: [u64; 2] = [1, 2];

#[derive(Clone, Debug)]
pub struct AsdSolution {
    pub quartic: ASDQuartic,
    /// Largest r whose congruences were needed for uniqueness.
    pub r_used: i64,
    /// Surviving candidates after each r, then after the shape filter if it ran.
    pub survivors: Vec<usize>,
    pub structure_filtered: bool,
}

impl AsdSolution {
    pub fn to_json(&self) -> Value {
        let mut v = self.quartic.to_json();
        v["r_used"] = json!(self.r_used);
        v["survivors"] = json!(self.survivors);
        v["structure_filtered"] = json!(self.structure_filtered);
        v
    }
}

/// Recovers the self-dual quartic from the congruences of f₁ and f₂.
///
/// Candidates are A3 with |A3| <= 4p^{3/2} and the lifts of A2 mod p³ (fixed
/// by f₁ at r = 0) with |A2| <= 6p³. Each must satisfy every congruence for
/// both forms at both seeds and be exactly pure. r grows from 0 to r_cap
/// until one candidate is left.
pub fn asd_solve(f1: &dyn CoeffSource, f2: &dyn CoeffSource, p: u64, r_cap: i64) -> Result<AsdSolution> {
    if p < 5 || !crate::arith::is_prime(p) {
        return Err(Error::domain(format!("p = {p} must be a prime >= 5")));
    }
    let pb = BigInt::from(p);
    let p3 = pb.pow(3);
    let a3_box = (4.0 * (p as f64).powf(1.5)).floor() as i64;
    let a2_box = BigInt::from(6) * &p3;
    let lead = f1.residue(1, &p3)?;
    let lead_inv = mod_inverse(&lead, &p3).ok_or_else(|| Error::domain("a₁(1) is not a unit mod p"))?;
    let (c1, c2) = (f1.residue(p, &p3)?, f1.residue(p * p, &p3)?);

    let mut candidates = Vec::new();
    for a3 in -a3_box..=a3_box {
        let a3b = BigInt::from(a3);
        let base = (-(&c2 + &a3b * &c1) * &lead_inv).mod_floor(&p3);
        // Smallest lift >= -6p³.
        let mut a2 = &base - &p3 * ((&base + &a2_box) / &p3);
        while a2 <= a2_box {
            let q = ASDQuartic::self_dual(p, a3b.clone(), a2.clone());
            if q.is_pure_exact() {
                candidates.push(q);
            }
            a2 += &p3;
        }
    }
    let mut survivors = Vec::new();
    let mut structure_filtered = false;
    for r in 0..=r_cap {
        let mut kept = Vec::new();
        for q in candidates {
            let mut ok = true;
            'check: for f in [f1, f2] {
                for &seed in &SOLVE_SEEDS {
                    let e = Congruence::Scholl.exponent(r);
                    if !five_term(f, p, &q, r, seed, e)?.is_zero() {
                        ok = false;
                        break 'check;
                    }
                }
            }
            if ok {
                kept.push(q);
            }
        }
        survivors.push(kept.len());
        if kept.len() > 1 && r == r_cap {
            // Congruences cannot separate quartics sharing the factor that
            // governs both forms; keep only the Z[ζ₃]-induced shapes.
            let norms = norm_elements(p)?;
            kept.retain(|q| has_induced_shape(q, &norms));
            structure_filtered = true;
            survivors.push(kept.len());
        }
        match kept.len() {
            0 => {
                return Err(Error::Inconsistency(format!(
                    "no quartic in the Weil box satisfies the congruences at p = {p}, r = {r}"
                )))
            }
            1 => {
                return Ok(AsdSolution { quartic: kept.pop().unwrap(), r_used: r, survivors, structure_filtered })
            }
            _ if r == r_cap => {
                let list: Vec<String> = kept.iter().map(|q| format!("({}, {})", q.a3, q.a2)).collect();
                return Err(Error::Ambiguity(format!(
                    "{} candidates (A3, A2) remain at p = {p} with r <= {r_cap}: {}",
                    kept.len(),
                    list.join(", ")
                )));
            }
            _ => candidates = kept,
        }
    }
    unreachable!()
}

/// Elements x + yζ₃ of Z[ζ₃] with norm x² - xy + y² = p⁶.
fn norm_elements(p: u64) -> Result<Vec<(i128, i128)>> {
    if p > 1 << 16 {
        return Err(Error::capacity(format!("p = {p} too large for the shape filter")));
    }
    let p6 = (p as i128).pow(6);
    let mut out = Vec::new();
    let ymax = isqrt_i128(4 * p6 / 3);
    for y in -ymax..=ymax {
        let disc = 4 * p6 - 3 * y * y;
        if disc < 0 {
            continue;
        }
        let s = isqrt_i128(disc);
        if s * s != disc {
            continue;
        }
        for num in [y + s, y - s] {
            if num % 2 == 0 && (s != 0 || num == y + s) {
                out.push((num / 2, y));
            }
        }
    }
    Ok(out)
}

fn isqrt_i128(v: i128) -> i128 {
    if v < 0 {
        return -1;
    }
    let mut r = (v as f64).sqrt() as i128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Whether the quartic is g·ḡ for a monic quadratic g over Z[ζ₃] (p ≡ 1 mod 3)
/// or has A3 = 0 (p ≡ 2 mod 3, where Frobenius swaps the two halves).
pub fn has_induced_shape(q: &ASDQuartic, norms: &[(i128, i128)]) -> bool {
    if q.p % 3 == 2 {
        return q.a3.is_zero() && q.a1.is_zero();
    }
    let (Some(a3), Some(a2), Some(a1)) = (q.a3.to_i128(), q.a2.to_i128(), q.a1.to_i128()) else {
        return false;
    };
    if q.a0 != BigInt::from(q.p).pow(6) {
        return false;
    }
    // g = x² + Bx + C: A3 = Tr B, A2 = Tr C + N B, A1 = Tr(B C̄), A0 = N C.
    let tr = |(x, y): (i128, i128)| 2 * x - y;
    let mul = |(a, b): (i128, i128), (c, d): (i128, i128)| (a * c - b * d, a * d + b * c - b * d);
    let conj = |(x, y): (i128, i128)| (x - y, -y);
    norms.iter().any(|&c| {
        let m = a2 - tr(c);
        // B = b0 + b1ζ with 2b0 - b1 = A3 and 3b0² - 3A3 b0 + A3² = m.
        let disc = 12 * m - 3 * a3 * a3;
        let s = isqrt_i128(disc);
        if s < 0 || s * s != disc {
            return false;
        }
        [3 * a3 + s, 3 * a3 - s].into_iter().any(|num| {
            if num % 6 != 0 {
                return false;
            }
            let b0 = num / 6;
            tr(mul((b0, 2 * b0 - a3), conj(c))) == a1
        })
    })
}

/// Largest a(m) index and modulus the congruences up to r_max consume.
pub fn requirements(p: u64, r_max: i64) -> (u64, u64) {
    let top = 2 * p.pow((r_max + 2) as u32);
    let e = Congruence::Scholl.exponent(r_max).max(Congruence::Printed.exponent(r_max));
    (top, p.pow(e))
}

/// f₁, f₂ over Z/p^K with every coefficient the congruences up to r_max use.
pub fn modular_basis(p: u64, r_max: i64) -> Result<(FracSeries<IntegersMod>, FracSeries<IntegersMod>)> {
    let (top, modulus) = requirements(p, r_max);
    weight4_basis(IntegersMod::new(modulus)?, top)
}

/// Solve from self-computed eta-quotient expansions.
pub fn solve_from_eta(p: u64, r_cap: i64) -> Result<AsdSolution> {
    let (f1, f2) = modular_basis(p, r_cap)?;
    asd_solve(&f1, &f2, p, r_cap)
}

#[derive(Clone, Debug)]
pub struct FactorReport {
    pub product: Option<IntPoly>,
    pub expected: IntPoly,
    pub ok: bool,
}

impl FactorReport {
    pub fn to_json(&self) -> Value {
        json!({
            "product": self.product.as_ref().map(|p| p.to_json()),
            "expected": self.expected.to_json(),
            "ok": self.ok,
        })
    }
}

/// Whether the pair multiplies out exactly to the quartic.
pub fn factor_check(quartic: &ASDQuartic, pair: &[QuadraticFactor; 2]) -> FactorReport {
    let expected = quartic.as_int_poly();
    let product = induce_to_integers(pair).ok();
    FactorReport { ok: product.as_ref() == Some(&expected), product, expected }
}

pub mod golden {
    //! The published weight-4 table and a reader for its LaTeX polynomials.

    use super::*;

    pub const TABLE_JSON: &str = include_str!("../data/weight4_table.json");

    #[derive(Clone, Debug)]
    pub struct Row {
        pub p: u64,
        pub charpoly: String,
        pub factorization: String,
        pub a: [i64; 4],
    }

    pub fn rows() -> Result<Vec<Row>> {
        let v: Value = serde_json::from_str(TABLE_JSON).map_err(|e| Error::domain(e.to_string()))?;
        let bad = || Error::domain("malformed table row");
        v["rows"]
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|r| {
                let a: Vec<i64> = r["A"].as_array().ok_or_else(bad)?.iter().filter_map(Value::as_i64).collect();
                Ok(Row {
                    p: r["p"].as_u64().ok_or_else(bad)?,
                    charpoly: r["charpoly"].as_str().ok_or_else(bad)?.to_string(),
                    factorization: r["factorization"].as_str().ok_or_else(bad)?.to_string(),
                    a: a.try_into().map_err(|_| bad())?,
                })
            })
            .collect()
    }

    /// Polynomial over Z[ζ₃], constant term first.
    pub type CycPoly = Vec<CycInt>;

    fn poly_mul(a: &CycPoly, b: &CycPoly) -> CycPoly {
        let mut out = vec![CycInt::zero(3); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        out
    }

    struct Lexer<'a> {
        s: &'a [u8],
        i: usize,
    }

    impl Lexer<'_> {
        fn skip_ws(&mut self) {
            while self.i < self.s.len() && (self.s[self.i] as char).is_whitespace() {
                self.i += 1;
            }
        }
        fn peek(&self) -> Option<u8> {
            self.s.get(self.i).copied()
        }
        fn eat(&mut self, t: &str) -> bool {
            if self.s[self.i..].starts_with(t.as_bytes()) {
                self.i += t.len();
                true
            } else {
                false
            }
        }
        fn int(&mut self) -> Option<u64> {
            let st = self.i;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.i += 1;
            }
            std::str::from_utf8(&self.s[st..self.i]).ok()?.parse().ok()
        }
        fn exponent(&mut self) -> Result<u32> {
            if self.eat("^") {
                let e = self.int().ok_or_else(|| self.err("exponent"))?;
                Ok(e as u32)
            } else {
                Ok(1)
            }
        }
        fn err(&self, what: &str) -> Error {
            Error::domain(format!("expected {what} at offset {} of the table entry", self.i))
        }

        /// One signed term: coefficient factors then an optional x power.
        fn term(&mut self, first: bool) -> Result<Option<(CycInt, usize)>> {
            self.skip_ws();
            let sign = match self.peek() {
                Some(b'+') => 1,
                Some(b'-') => -1,
                Some(b')') | None => return Ok(None),
                _ if first => 1,
                _ => return Err(self.err("+ or -")),
            };
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.i += 1;
            }
            let mut coeff = CycInt::from_int(3, sign);
            let mut deg = 0usize;
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(c) if c.is_ascii_digit() => {
                        let b = self.int().unwrap();
                        let e = self.exponent()?;
                        coeff = &coeff * &CycInt::from_int(3, BigInt::from(b).pow(e));
                    }
                    Some(b'\\') => {
                        if !self.eat("\\zeta_3") {
                            return Err(self.err("\\zeta_3"));
                        }
                        let e = self.exponent()?;
                        coeff = &coeff * &CycInt::zeta_pow(3, e as i64);
                    }
                    Some(b'x') => {
                        self.i += 1;
                        deg = self.exponent()? as usize;
                    }
                    _ => break,
                }
            }
            Ok(Some((coeff, deg)))
        }

        fn poly(&mut self) -> Result<CycPoly> {
            let mut out: CycPoly = vec![CycInt::zero(3)];
            let mut first = true;
            while let Some((c, d)) = self.term(first)? {
                first = false;
                if out.len() <= d {
                    out.resize(d + 1, CycInt::zero(3));
                }
                out[d] = &out[d] + &c;
            }
            Ok(out)
        }
    }

    /// Factors of a product like "(x^2+...)(x^2-...)" or "(...)^2", or the
    /// single polynomial when there are no parentheses.
    pub fn parse_factors(s: &str) -> Result<Vec<CycPoly>> {
        let mut lx = Lexer { s: s.as_bytes(), i: 0 };
        let mut out = Vec::new();
        lx.skip_ws();
        if lx.peek() != Some(b'(') {
            out.push(lx.poly()?);
        } else {
            while {
                lx.skip_ws();
                lx.peek() == Some(b'(')
            } {
                lx.i += 1;
                let f = lx.poly()?;
                if !lx.eat(")") {
                    return Err(lx.err(")"));
                }
                for _ in 0..lx.exponent()? {
                    out.push(f.clone());
                }
            }
        }
        lx.skip_ws();
        if lx.i != s.len() {
            return Err(lx.err("end of entry"));
        }
        Ok(out)
    }

    pub fn expand(factors: &[CycPoly]) -> CycPoly {
        factors.iter().fold(vec![CycInt::one(3)], |acc, f| poly_mul(&acc, f))
    }

    /// The printed characteristic polynomial as a quartic.
    pub fn parse_charpoly(p: u64, s: &str) -> Result<ASDQuartic> {
        let poly = expand(&parse_factors(s)?);
        if poly.len() != 5 || poly[4] != CycInt::one(3) {
            return Err(Error::domain("not a monic quartic"));
        }
        let int = |c: &CycInt| c.as_integer().ok_or_else(|| Error::domain("charpoly coefficient is not rational"));
        Ok(ASDQuartic { p, a3: int(&poly[3])?, a2: int(&poly[2])?, a1: int(&poly[1])?, a0: int(&poly[0])? })
    }

    /// The printed factor pair as quadratics X² - T X + D.
    pub fn parse_pair(s: &str) -> Result<[QuadraticFactor; 2]> {
        let f = parse_factors(s)?;
        let quad = |q: &CycPoly| -> Result<QuadraticFactor> {
            if q.len() != 3 || q[2] != CycInt::one(3) {
                return Err(Error::domain("factor is not a monic quadratic"));
            }
            QuadraticFactor::new(-&q[1], q[0].clone())
        };
        match f.as_slice() {
            [a, b] => Ok([quad(a)?, quad(b)?]),
            _ => Err(Error::domain("expected two quadratic factors")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational_basis(top: u64) -> (FracSeries<Rationals>, FracSeries<Rationals>) {
        weight4_basis(Rationals, top).unwrap()
    }

    #[test]
    fn verify_examples() {
        let (f1, f2) = rational_basis(2 * 7u64.pow(3));
        let q5 = ASDQuartic::from_coeffs(5, [0, -74, 0, 15625]);
        for f in [&f1, &f2] {
            let r = asd_verify(f, &q5, 0, 1, Congruence::Printed, &[1]).unwrap();
            assert!(r.ok, "{:?}", r.failures());
            assert!(asd_verify(f, &q5, 0, 1, Congruence::Scholl, &[1, 2]).unwrap().ok);
        }
        let q7 = ASDQuartic::from_coeffs(7, [8, -279, 2744, 117649]);
        assert!(asd_verify(&f2, &q7, 0, 1, Congruence::Printed, &[1]).unwrap().ok);
        assert!(asd_verify(&f1, &q7, 0, 1, Congruence::Scholl, &[1, 2]).unwrap().ok);
        let bad = ASDQuartic::from_coeffs(5, [1, -74, 0, 15625]);
        let r = asd_verify(&f1, &bad, -1, -1, Congruence::Printed, &[1]).unwrap();
        assert!(!r.ok);
        // Needs a(5³·2) which is beyond 2·7³.
        assert!(matches!(asd_verify(&f1, &q5, 0, 2, Congruence::Scholl, &[2]), Err(Error::Capacity(_))));
    }

    #[test]
    fn printed_form_fails_at_r_minus_one() {
        // a₁(7) ≡ 8ζ₃ (7-adically), not -A3 = -8, so a₁(7) + 8a₁(1) ≢ 0 mod 7.
        let (f1, _) = rational_basis(50);
        let q7 = ASDQuartic::from_coeffs(7, [8, -279, 2744, 117649]);
        let r = asd_verify(&f1, &q7, -1, -1, Congruence::Printed, &[1]).unwrap();
        assert!(!r.ok);
        assert!(!(&r.rows[0].residue % BigInt::from(7)).is_zero());
    }

    #[test]
    fn solve_small_rows() {
        for (p, a) in [(5u64, [0i64, -74, 0, 15625]), (7, [8, -279, 2744, 117649]), (13, [-10, -2097, -21970, 4826809])] {
            let s = solve_from_eta(p, 1).unwrap();
            assert_eq!(s.quartic, ASDQuartic::from_coeffs(p, a), "p={p}");
            assert!(s.quartic.purity_deviation() < PURITY_TOL);
        }
    }

    #[test]
    fn shape_filter_examples() {
        for row in golden::rows().unwrap() {
            let norms = norm_elements(row.p).unwrap();
            assert!(has_induced_shape(&ASDQuartic::from_coeffs(row.p, row.a), &norms), "p={}", row.p);
        }
        // (x²+16x+31³)(x²+cx+31³) is a norm only for c = 16.
        let norms = norm_elements(31).unwrap();
        assert_eq!(norms.len(), 42);
        let hits: Vec<i64> = (-330..=330)
            .filter(|&c| has_induced_shape(&ASDQuartic::self_dual(31, 16 + c, 2 * 29791 + 16 * c), &norms))
            .collect();
        assert_eq!(hits, vec![16]);
        assert!(!has_induced_shape(&ASDQuartic::self_dual(5, 2, -70), &norm_elements(5).unwrap()));
    }

    #[test]
    fn rational_and_modular_sources_agree() {
        let (f1, f2) = rational_basis(2 * 125);
        let (g1, g2) = modular_basis(5, 1).unwrap();
        let m = BigInt::from(5u64.pow(6));
        for k in 1..=250 {
            assert_eq!(f1.residue(k, &m).unwrap(), g1.residue(k, &m).unwrap());
            assert_eq!(f2.residue(k, &m).unwrap(), g2.residue(k, &m).unwrap());
        }
    }

    #[test]
    fn exact_purity_agrees_with_roots() {
        for (p, a3, a2) in [(5u64, 0i64, -74i64), (7, 8, -279), (7, 8, 700), (5, 44, 0), (13, -10, -2097), (5, 0, 251)] {
            let q = ASDQuartic::self_dual(p, a3, a2);
            assert_eq!(q.is_pure_exact(), q.purity_deviation() < 1e-9, "p={p} a3={a3} a2={a2}");
        }
    }

    #[test]
    fn golden_table_parses_consistently() {
        for row in golden::rows().unwrap() {
            let q = golden::parse_charpoly(row.p, &row.charpoly).unwrap();
            assert_eq!(q, ASDQuartic::from_coeffs(row.p, row.a), "p={}", row.p);
            assert!(q.is_self_dual() && q.is_pure_exact());
            let pair = golden::parse_pair(&row.factorization).unwrap();
            assert!(factor_check(&q, &pair).ok, "p={}", row.p);
        }
    }

    #[test]
    fn factor_check_examples() {
        let rows = golden::rows().unwrap();
        let p7 = &rows[1];
        let q = ASDQuartic::from_coeffs(7, p7.a);
        let pair = golden::parse_pair(&p7.factorization).unwrap();
        assert_eq!(factor_check(&q, &pair).product.unwrap().to_string(), "x^4 + 8x^3 - 279x^2 + 2744x + 117649");
        let flipped = golden::parse_pair("(x^2+8\\zeta_3x+\\zeta_3^2 7^3)(x^2-8\\zeta_3^2x+\\zeta_3 7^3)").unwrap();
        assert!(!factor_check(&q, &flipped).ok);
        let p5 = golden::parse_pair("(x^2+18 x+5^3) (x^2-18 x+5^3)").unwrap();
        assert!(factor_check(&ASDQuartic::from_coeffs(5, [0, -74, 0, 15625]), &p5).ok);
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(golden::parse_factors("(x^2+1").is_err());
        assert!(golden::parse_factors("x^2 y").is_err());
        assert!(golden::parse_factors("\\zeta_5 x").is_err());
    }
}
