//! Exact arithmetic in Z[ζ_n] in the power basis 1, ζ, …, ζ^{φ(n)-1}.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{divisors, euler_phi, mobius, units_mod};
use crate::error::{Error, Result};
use crate::json::big_to_json;

struct CycTables {
    phi: usize,
    /// Coefficients of Φ_n, constant term first.
    poly: Vec<i64>,
    /// `pow[k]` is ζ^k reduced, for 0 <= k < n.
    pow: Vec<Vec<i64>>,
}

fn tables(n: u64) -> Arc<CycTables> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycTables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return t.clone();
    }
    let t = Arc::new(build_tables(n));
    cache.lock().unwrap().insert(n, t.clone());
    t
}

fn build_tables(n: u64) -> CycTables {
    assert!(n >= 1, "conductor must be positive");
    let poly = phi_poly(n);
    let phi = poly.len() - 1;
    let mut pow = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        pow.push(cur.clone());
        // Multiply by ζ: shift up, then eliminate ζ^φ using the monic Φ_n.
        let top = cur[phi - 1];
        for k in (1..phi).rev() {
            cur[k] = cur[k - 1];
        }
        cur[0] = 0;
        for (k, c) in cur.iter_mut().enumerate() {
            *c -= top * poly[k];
        }
    }
    CycTables { phi, poly, pow }
}

/// Φ_n over Z via the Möbius product of X^d - 1.
fn phi_poly(n: u64) -> Vec<i64> {
    let mut num = vec![1i128];
    let mut den = vec![1i128];
    for d in divisors(n) {
        let mut xd = vec![0i128; d as usize + 1];
        xd[0] = -1;
        xd[d as usize] = 1;
        match mobius(n / d) {
            1 => num = poly_mul_i128(&num, &xd),
            -1 => den = poly_mul_i128(&den, &xd),
            _ => {}
        }
    }
    // Exact division of monic integer polynomials.
    let mut rem = num;
    let dd = den.len() - 1;
    let mut quo = vec![0i128; rem.len() - dd];
    for k in (0..quo.len()).rev() {
        let c = rem[k + dd];
        quo[k] = c;
        for (t, &dt) in den.iter().enumerate() {
            rem[k + t] -= c * dt;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "Möbius product must divide exactly");
    quo.into_iter().map(|c| i64::try_from(c).expect("cyclotomic coefficient fits i64")).collect()
}

fn poly_mul_i128(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Φ_n with integer coefficients, constant term first.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    tables(n).poly.clone()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    n: u64,
    coeffs: Vec<BigInt>,
}

/// Reduces Σ raw[k] ζ_n^k (any length; indices taken mod n).
pub fn cyc_reduce(n: u64, raw: &[BigInt]) -> CycInt {
    let t = tables(n);
    let mut coeffs = vec![BigInt::zero(); t.phi];
    for (k, c) in raw.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (slot, &w) in coeffs.iter_mut().zip(&t.pow[k % n as usize]) {
            if w != 0 {
                *slot += c * w;
            }
        }
    }
    CycInt { n, coeffs }
}

/// As [`cyc_reduce`] for machine-integer input, e.g. a histogram of exponents.
pub fn cyc_reduce_i64(n: u64, raw: &[i64]) -> CycInt {
    let t = tables(n);
    let mut acc = vec![0i128; t.phi];
    for (k, &c) in raw.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (slot, &w) in acc.iter_mut().zip(&t.pow[k % n as usize]) {
            *slot += c as i128 * w as i128;
        }
    }
    CycInt { n, coeffs: acc.into_iter().map(BigInt::from).collect() }
}

impl CycInt {
    pub fn zero(n: u64) -> Self {
        CycInt { n, coeffs: vec![BigInt::zero(); tables(n).phi] }
    }

    pub fn from_int(n: u64, v: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = v.into();
        z
    }

    pub fn one(n: u64) -> Self {
        Self::from_int(n, 1)
    }

    /// ζ_n^k for any integer k.
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        let t = tables(n);
        let idx = k.rem_euclid(n as i64) as usize;
        CycInt { n, coeffs: t.pow[idx].iter().map(|&c| BigInt::from(c)).collect() }
    }

    /// Builds from power-basis coefficients; the length must be φ(n).
    pub fn from_coeffs(n: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != euler_phi(n) as usize {
            return Err(Error::domain(format!(
                "Z[ζ_{n}] needs {} coefficients, got {}",
                euler_phi(n),
                coeffs.len()
            )));
        }
        Ok(CycInt { n, coeffs })
    }

    pub fn from_i64s(n: u64, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(n, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer value, if the element lies in Z.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check_same(&self, other: &CycInt) {
        assert_eq!(self.n, other.n, "mixed conductors {} and {}", self.n, other.n);
    }

    pub fn scale(&self, c: &BigInt) -> CycInt {
        CycInt { n: self.n, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Exact division by a rational integer, if every coefficient divides.
    pub fn div_exact(&self, d: &BigInt) -> Option<CycInt> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(CycInt { n: self.n, coeffs: out })
    }

    pub fn pow(&self, e: u32) -> CycInt {
        let mut acc = CycInt::one(self.n);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// Image under ζ ↦ ζ^j.
    pub fn galois_conjugate(&self, j: i64) -> Result<CycInt> {
        let n = self.n as i64;
        let jr = j.rem_euclid(n.max(1));
        if jr.gcd(&n) != 1 {
            return Err(Error::domain(format!("{j} is not a unit mod {n}")));
        }
        let mut raw = vec![BigInt::zero(); self.n as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[(k as i64 * jr % n) as usize] += c;
        }
        Ok(cyc_reduce(self.n, &raw))
    }

    /// Σ c_k e^{2πi jk/n} in double precision.
    pub fn complex_embed(&self, j: i64) -> Complex64 {
        let n = self.n as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let ang = 2.0 * PI * ((j * k as i64).rem_euclid(self.n as i64) as f64) / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), ang)
            })
            .sum()
    }

    /// All embeddings, indexed by the units j of Z/n in ascending order.
    pub fn embeddings(&self) -> Vec<Complex64> {
        units_mod(self.n).into_iter().map(|j| self.complex_embed(j as i64)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.embeddings().into_iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Image in Z[ζ_m] under ζ_n ↦ ζ_m^{m/n}; requires n | m.
    pub fn embed_into(&self, m: u64) -> Result<CycInt> {
        if m % self.n != 0 {
            return Err(Error::domain(format!("{} does not divide {m}", self.n)));
        }
        let step = (m / self.n) as usize;
        let mut raw = vec![BigInt::zero(); m as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[k * step] += c;
        }
        Ok(cyc_reduce(m, &raw))
    }

    /// Norm to Q: product of all Galois conjugates.
    pub fn norm(&self) -> BigInt {
        let prod = units_mod(self.n)
            .into_iter()
            .map(|j| self.galois_conjugate(j as i64).expect("unit"))
            .fold(CycInt::one(self.n), |acc, z| &acc * &z);
        prod.as_integer().expect("norm is rational")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "coeffs": self.coeffs.iter().map(big_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<CycInt> {
        let n = v["n"].as_u64().ok_or_else(|| Error::domain("CycInt needs integer \"n\""))?;
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(|| Error::domain("CycInt needs array \"coeffs\""))?
            .iter()
            .map(crate::json::json_to_big)
            .collect::<Result<Vec<_>>>()?;
        CycInt::from_coeffs(n, coeffs)
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, &BigInt)> =
            self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in terms.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if *k == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            write!(f, "{mono}")?;
        }
        write!(f, " (n={})", self.n)
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, o: &CycInt) -> CycInt {
        self.check_same(o);
        CycInt { n: self.n, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, o: &CycInt) -> CycInt {
        self.check_same(o);
        CycInt { n: self.n, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { n: self.n, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, o: &CycInt) -> CycInt {
        self.check_same(o);
        let len = self.coeffs.len();
        let mut raw = vec![BigInt::zero(); 2 * len - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        cyc_reduce(self.n, &raw)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycInt {
            type Output = CycInt;
            fn $m(self, o: CycInt) -> CycInt {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

/// X² - T X + D over Z[ζ_n].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFactor {
    pub t: CycInt,
    pub d: CycInt,
}

impl QuadraticFactor {
    pub fn new(t: CycInt, d: CycInt) -> Result<Self> {
        if t.n() != d.n() {
            return Err(Error::domain("trace and determinant live in different rings"));
        }
        Ok(QuadraticFactor { t, d })
    }

    pub fn galois_conjugate(&self, j: i64) -> Result<Self> {
        Ok(QuadraticFactor { t: self.t.galois_conjugate(j)?, d: self.d.galois_conjugate(j)? })
    }

    pub fn to_json(&self) -> Value {
        json!({"T": self.t.to_json(), "D": self.d.to_json()})
    }
}

/// Integer polynomial, constant term first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn from_i64s(c: &[i64]) -> Self {
        IntPoly(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly(out)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(big_to_json).collect())
    }

    /// Whether the roots are closed under α ↦ w/α, tested exactly as
    /// c_k·w^k = c_0·c_{deg-k} for every k.
    pub fn is_palindromic_scaled(&self, w: &BigInt) -> bool {
        let deg = self.degree();
        let c0 = &self.0[0];
        let mut wk = BigInt::one();
        for k in 0..=deg {
            if &self.0[k] * &wk != c0 * &self.0[deg - k] {
                return false;
            }
            wk *= w;
        }
        true
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPoly {
    /// Descending powers in `x`, e.g. `x^2 + 6x + 25`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            if k == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact product of the quadratics X² - T_j X + D_j over Z[ζ_n]; every
/// coefficient of the result must be a rational integer.
pub fn induce_to_integers(factors: &[QuadraticFactor]) -> Result<IntPoly> {
    let Some(first) = factors.first() else {
        return Err(Error::domain("no factors given"));
    };
    let n = first.t.n();
    if factors.iter().any(|q| q.t.n() != n || q.d.n() != n) {
        return Err(Error::domain("factors over different rings"));
    }
    if factors.len() as u64 != euler_phi(n) {
        return Err(Error::domain(format!(
            "expected {} factors (one per unit mod {n}), got {}",
            euler_phi(n),
            factors.len()
        )));
    }
    let mut prod: Vec<CycInt> = vec![CycInt::one(n)];
    for q in factors {
        let quad = [q.d.clone(), -&q.t, CycInt::one(n)];
        let mut next = vec![CycInt::zero(n); prod.len() + 2];
        for (i, a) in prod.iter().enumerate() {
            for (j, b) in quad.iter().enumerate() {
                next[i + j] = &next[i + j] + &(a * b);
            }
        }
        prod = next;
    }
    let coeffs = prod
        .iter()
        .enumerate()
        .map(|(k, c)| {
            c.as_integer().ok_or_else(|| {
                Error::consistency(format!("coefficient of x^{k} is not rational: {c}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPoly(coeffs))
}
