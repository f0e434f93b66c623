//! Finite fields F_{p^f} = F_p[X]/(m) with a fixed generator and, below the
//! table cap, exponent/logarithm tables.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{checked_pow, factorize, is_prime, mult_order, smallest_factor};
use crate::cyclotomic::cyclotomic_poly;
use crate::error::{Error, Result};
use crate::fp_poly::{self, Poly};

/// Largest field for which exp/log tables are materialized.
pub const TABLE_CAP: u64 = 1 << 24;
/// Largest field the system will construct at all.
pub const FIELD_CAP: u64 = 1 << 32;

const MAX_DEGREE: usize = 32;

/// Coefficient vector of length f, constant term first, entries in [0, p).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(Vec<u64>);

impl FqElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

struct Tables {
    /// `exp[j]` is the code of g^j for 0 <= j < q-1.
    exp: Vec<u32>,
    /// `log[code]` for nonzero codes; `log[0]` is unused.
    log: Vec<u32>,
}

pub struct FieldCtx {
    p: u64,
    f: usize,
    q: u64,
    modulus: Poly,
    generator: FqElem,
    tables: Option<Tables>,
    /// Tr(X^k) in F_p for k < f.
    trace_basis: Vec<u64>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("f", &self.f)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .field("tables", &self.tables.is_some())
            .finish()
    }
}

pub fn build_prime_field(p: u64) -> Result<FieldCtx> {
    check_prime(p)?;
    FieldCtx::new(p, vec![0, 1], TABLE_CAP)
}

pub fn build_extension(p: u64, modulus: &[u64]) -> Result<FieldCtx> {
    build_extension_with_cap(p, modulus, TABLE_CAP)
}

/// As [`build_extension`] with an explicit table cap; fields above the cap
/// are built without tables.
pub fn build_extension_with_cap(p: u64, modulus: &[u64], table_cap: u64) -> Result<FieldCtx> {
    check_prime(p)?;
    let mut m: Poly = modulus.iter().map(|&c| c % p).collect();
    fp_poly::trim(&mut m);
    match fp_poly::degree(&m) {
        None | Some(0) => return Err(Error::domain("modulus must have degree >= 1")),
        Some(d) if m[d] != 1 => return Err(Error::domain("modulus must be monic")),
        _ => {}
    }
    if let Err(factor) = fp_poly::irreducibility_witness(&m, p) {
        return Err(Error::Reducible { p, factor });
    }
    FieldCtx::new(p, m, table_cap)
}

/// F_q for a prime power q, built on a deterministic irreducible modulus.
pub fn field_of_order(q: u64) -> Result<FieldCtx> {
    let fac = factorize(q);
    match fac.as_slice() {
        [(p, 1)] => build_prime_field(*p),
        [(p, d)] => build_extension(*p, &find_irreducible(*p, *d as usize, 0)),
        _ => Err(Error::domain(format!("{q} is not a prime power"))),
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p, smallest_factor(p).unwrap_or(p)))
    }
}

/// The monic irreducible factors of Φ_n mod p, each of degree ord_n(p),
/// sorted by the lexicographic order of their negated coefficient vectors
/// (for linear factors X - r: ascending r).
pub fn factor_cyclotomic(n: u64, p: u64) -> Result<Vec<Poly>> {
    check_prime(p)?;
    if n < 2 {
        return Err(Error::domain("n must be at least 2"));
    }
    if n % p == 0 {
        return Err(Error::domain(format!("p = {p} divides n = {n}")));
    }
    let phi: Poly = cyclotomic_poly(n)
        .iter()
        .map(|&c| c.rem_euclid(p as i64) as u64)
        .collect();
    let f = mult_order(p % n, n) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(n.wrapping_mul(0x9e37_79b9).wrapping_add(p));
    let mut factors = fp_poly::equal_degree_split(&phi, f, p, &mut rng);
    factors.sort_by_key(|m| m.iter().map(|&c| (p - c) % p).collect::<Vec<_>>());
    let product = factors.iter().fold(vec![1u64], |acc, m| fp_poly::mul(&acc, m, p));
    if product != phi {
        return Err(Error::consistency("factor product differs from the cyclotomic polynomial"));
    }
    Ok(factors)
}

/// Deterministic search for a monic irreducible polynomial of degree d.
pub fn find_irreducible(p: u64, d: usize, seed: u64) -> Poly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 8) ^ d as u64);
    loop {
        let mut m: Poly = (0..d).map(|_| rng.random_range(0..p)).collect();
        m.push(1);
        if m[0] != 0 && fp_poly::irreducibility_witness(&m, p).is_ok() {
            return m;
        }
    }
}

impl FieldCtx {
    fn new(p: u64, modulus: Poly, table_cap: u64) -> Result<Self> {
        let f = modulus.len() - 1;
        let q = match checked_pow(p, f as u32) {
            Some(q) if q <= FIELD_CAP && f <= MAX_DEGREE => q,
            _ => {
                return Err(Error::capacity(format!(
                    "field of size {p}^{f} exceeds the 2^32 limit"
                )))
            }
        };
        let mut ctx = FieldCtx {
            p,
            f,
            q,
            modulus,
            generator: FqElem(vec![0; f]),
            tables: None,
            trace_basis: Vec::new(),
        };
        ctx.generator = ctx.find_generator();
        ctx.trace_basis = (0..f)
            .map(|k| {
                let mut xk = vec![0; f];
                xk[k] = 1;
                ctx.trace(&FqElem(xk))
            })
            .collect();
        if q <= table_cap {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    fn find_generator(&self) -> FqElem {
        let primes: Vec<u64> = factorize(self.q - 1).into_iter().map(|(r, _)| r).collect();
        let is_gen = |g: &FqElem| {
            !g.is_zero() && primes.iter().all(|&r| self.pow(g, (self.q - 1) / r) != self.one())
        };
        if self.f == 1 {
            return (1..self.p).map(|c| self.from_u64(c)).find(|g| is_gen(g)).expect("F_p^* is cyclic");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.modulus.iter().fold(self.p, |h, &c| {
            h.wrapping_mul(1_000_003).wrapping_add(c)
        }));
        loop {
            let cand = FqElem((0..self.f).map(|_| rng.random_range(0..self.p)).collect());
            if is_gen(&cand) {
                return cand;
            }
        }
    }

    fn build_tables(&self) -> Tables {
        let m = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(m);
        let mut log = vec![u32::MAX; self.q as usize];
        let f = self.f;
        let mut cur = [0u64; MAX_DEGREE];
        let mut next = [0u64; MAX_DEGREE];
        cur[0] = 1;
        for j in 0..m {
            let code = cur[..f].iter().rev().fold(0, |acc, &c| acc * self.p + c) as u32;
            exp.push(code);
            log[code as usize] = j as u32;
            self.mul_into(&cur[..f], &self.generator.0, &mut next[..f]);
            std::mem::swap(&mut cur, &mut next);
        }
        debug_assert!(cur[0] == 1 && cur[1..f].iter().all(|&c| c == 0));
        Tables { exp, log }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> &FqElem {
        &self.generator
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn zero(&self) -> FqElem {
        FqElem(vec![0; self.f])
    }

    pub fn one(&self) -> FqElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> FqElem {
        let mut v = vec![0; self.f];
        v[0] = c % self.p;
        FqElem(v)
    }

    pub fn from_i64(&self, c: i64) -> FqElem {
        self.from_u64(c.rem_euclid(self.p as i64) as u64)
    }

    /// Reduces an arbitrary coefficient vector into the field.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FqElem {
        let raw: Poly = coeffs.iter().map(|&c| c % self.p).collect();
        let r = fp_poly::rem(&raw, &self.modulus, self.p);
        let mut v = vec![0; self.f];
        v[..r.len()].copy_from_slice(&r);
        FqElem(v)
    }

    /// The residue class of X.
    pub fn x(&self) -> FqElem {
        self.from_coeffs(&[0, 1])
    }

    pub fn encode(&self, a: &FqElem) -> u64 {
        a.0.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn decode(&self, mut code: u64) -> FqElem {
        let mut v = vec![0; self.f];
        for c in v.iter_mut() {
            *c = code % self.p;
            code /= self.p;
        }
        FqElem(v)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(|c| self.decode(c))
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % self.p).collect())
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + self.p - y) % self.p).collect())
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut out = vec![0; self.f];
        self.mul_into(&a.0, &b.0, &mut out);
        FqElem(out)
    }

    fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let (p, f) = (self.p as u128, self.f);
        if f == 1 {
            out[0] = (a[0] as u128 * b[0] as u128 % p) as u64;
            return;
        }
        if self.p < 1 << 28 {
            return self.mul_into_small(a, b, out);
        }
        let mut acc = [0u128; 2 * MAX_DEGREE];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x as u128 * y as u128) % p;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = acc[k];
            if c == 0 {
                continue;
            }
            acc[k] = 0;
            for (t, &mt) in self.modulus[..f].iter().enumerate() {
                acc[k - f + t] = (acc[k - f + t] + (p - c) * mt as u128) % p;
            }
        }
        for (o, &v) in out.iter_mut().zip(&acc[..f]) {
            *o = v as u64;
        }
    }

    /// p < 2^28: products and up to 2f of them summed stay below 2^64, so
    /// reduction happens once per coefficient.
    fn mul_into_small(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let (p, f) = (self.p, self.f);
        let mut acc = [0u64; 2 * MAX_DEGREE];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += x * y;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = acc[k] % p;
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for (t, &mt) in self.modulus[..f].iter().enumerate() {
                acc[k - f + t] += neg * mt;
            }
        }
        for (o, &v) in out.iter_mut().zip(&acc[..f]) {
            *o = v % p;
        }
    }

    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.q - 2))
        }
    }

    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        self.pow(a, self.p)
    }

    /// Absolute trace to F_p.
    pub fn trace(&self, a: &FqElem) -> u64 {
        if self.trace_basis.len() == self.f {
            return a
                .0
                .iter()
                .zip(&self.trace_basis)
                .fold(0u128, |s, (&c, &t)| (s + c as u128 * t as u128) % self.p as u128)
                as u64;
        }
        let mut t = a.clone();
        let mut acc = a.clone();
        for _ in 1..self.f {
            t = self.frobenius(&t);
            acc = self.add(&acc, &t);
        }
        debug_assert!(acc.0[1..].iter().all(|&c| c == 0));
        acc.0[0]
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &FqElem) -> u64 {
        assert!(!a.is_zero());
        let mut ord = self.q - 1;
        for (r, _) in factorize(self.q - 1) {
            while ord % r == 0 && self.pow(a, ord / r) == self.one() {
                ord /= r;
            }
        }
        ord
    }

    /// g^j.
    pub fn exp(&self, j: u64) -> FqElem {
        match &self.tables {
            Some(t) => self.decode(t.exp[(j % (self.q - 1)) as usize] as u64),
            None => self.pow(&self.generator, j % (self.q - 1)),
        }
    }

    pub fn dlog(&self, a: &FqElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::domain("dlog of zero"));
        }
        match &self.tables {
            Some(t) => Ok(t.log[self.encode(a) as usize] as u64),
            None => Err(Error::capacity(format!(
                "no log table for a field of size {}",
                self.q
            ))),
        }
    }

    /// Code of g^j; requires tables.
    pub fn exp_code(&self, j: usize) -> u32 {
        self.tables.as_ref().expect("tables").exp[j]
    }

    /// Exponent of the element with the given nonzero code; requires tables.
    pub fn log_code(&self, code: u64) -> u32 {
        self.tables.as_ref().expect("tables").log[code as usize]
    }

    /// Zech logarithms: `z[a] = dlog(1 - g^a)` for 0 < a < q-1; `z[0]` is
    /// `u32::MAX` (1 - 1 = 0). Requires tables.
    pub fn zech_table(&self) -> Vec<u32> {
        let t = self.tables.as_ref().expect("tables");
        let m = (self.q - 1) as usize;
        // 1 - g^a = -(g^a - 1); subtracting 1 only touches the constant digit.
        let minus_one = if self.p == 2 { 0 } else { m / 2 };
        let p = self.p as u32;
        let mut z = vec![u32::MAX; m];
        for (a, slot) in z.iter_mut().enumerate().skip(1) {
            let code = t.exp[a];
            let shifted = if code % p == 0 { code + p - 1 } else { code - 1 };
            *slot = ((t.log[shifted as usize] as usize + minus_one) % m) as u32;
        }
        z
    }

    /// Additive character values Tr(g^j) in F_p for 0 <= j < q-1.
    pub fn trace_of_powers(&self) -> Vec<u32> {
        let m = (self.q - 1) as usize;
        let p = self.p;
        if let (Some(t), true) = (&self.tables, self.trace_basis.len() == self.f) {
            // Tr is F_p-linear: read the digits of each code against Tr(X^k).
            return t.exp[..m]
                .iter()
                .map(|&code| {
                    let mut c = code as u64;
                    let mut s = 0u64;
                    for &tb in &self.trace_basis {
                        s += (c % p) * tb;
                        c /= p;
                    }
                    (s % p) as u32
                })
                .collect();
        }
        let mut out = Vec::with_capacity(m);
        let mut cur = self.one();
        for _ in 0..m {
            out.push(self.trace(&cur) as u32);
            cur = self.mul(&cur, &self.generator);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zech_and_trace_tables_match_direct_arithmetic() {
        for q in [2u64, 3, 4, 8, 9, 13, 25, 27, 32, 49, 121, 343, 625, 1024] {
            let ctx = field_of_order(q).unwrap();
            let z = ctx.zech_table();
            let tr = ctx.trace_of_powers();
            let one = ctx.one();
            for a in 0..(q - 1) {
                let ga = ctx.exp(a);
                let d = ctx.sub(&one, &ga);
                let expect = if d.is_zero() { u32::MAX } else { ctx.dlog(&d).unwrap() as u32 };
                assert_eq!(z[a as usize], expect, "q={q} a={a}");
                assert_eq!(tr[a as usize] as u64, ctx.trace(&ga), "q={q} a={a}");
            }
        }
    }

    #[test]
    fn prime_field_examples() {
        let f5 = build_prime_field(5).unwrap();
        assert_eq!(f5.q(), 5);
        assert_eq!(f5.generator(), &f5.from_u64(2));
        assert_eq!(f5.dlog(&f5.from_u64(4)).unwrap(), 2);
        let f2 = build_prime_field(2).unwrap();
        assert_eq!(f2.generator(), &f2.one());
        assert_eq!(f2.dlog(&f2.one()).unwrap(), 0);
        assert!(matches!(build_prime_field(9), Err(Error::NotPrime(9, 3))));
        assert!(matches!(build_prime_field(1), Err(Error::NotPrime(..))));
    }

    #[test]
    fn extension_examples() {
        let f49 = build_extension(7, &[1, 0, 1]).unwrap();
        assert_eq!(f49.q(), 49);
        let f16 = build_extension(2, &[1, 1, 0, 0, 1]).unwrap();
        assert_eq!(f16.q(), 16);
        match build_extension(5, &[4, 0, 1]) {
            Err(Error::Reducible { factor, .. }) => assert!(factor == vec![4, 1] || factor == vec![1, 1]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(build_extension(5, &[1, 0, 2]), Err(Error::Domain(_))));
    }

    #[test]
    fn capacity_limits() {
        // 2^33 elements: refused outright.
        let m = find_irreducible(2, 33, 1);
        assert!(matches!(build_extension(2, &m), Err(Error::Capacity(_))));
        // Above the table cap: built, but dlog is unavailable.
        let m = find_irreducible(2, 5, 1);
        let ctx = build_extension_with_cap(2, &m, 16).unwrap();
        assert!(!ctx.has_tables());
        assert!(matches!(ctx.dlog(&ctx.one()), Err(Error::Capacity(_))));
        assert_eq!(ctx.order(ctx.generator()), 31);
    }

    #[test]
    fn cyclotomic_factor_examples() {
        let roots = |n, p| -> Vec<u64> {
            factor_cyclotomic(n, p).unwrap().iter().map(|m| (p - m[0]) % p).collect()
        };
        assert_eq!(roots(5, 11), vec![3, 4, 5, 9]);
        assert_eq!(roots(3, 7), vec![2, 4]);
        assert_eq!(factor_cyclotomic(4, 7).unwrap(), vec![vec![1, 0, 1]]);
        assert!(matches!(factor_cyclotomic(6, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn dlog_examples() {
        for ctx in [build_prime_field(13).unwrap(), build_extension(3, &[2, 2, 0, 1]).unwrap()] {
            assert_eq!(ctx.dlog(&ctx.one()).unwrap(), 0);
            assert_eq!(ctx.dlog(ctx.generator()).unwrap(), 1);
            assert!(ctx.dlog(&ctx.zero()).is_err());
            assert_eq!(ctx.order(ctx.generator()), ctx.q() - 1);
        }
    }

    #[test]
    fn factor_structure_and_omega_order() {
        for n in 2..=15u64 {
            for p in [2u64, 3, 5, 7, 11, 13, 29, 31] {
                if n % p == 0 {
                    continue;
                }
                let fs = factor_cyclotomic(n, p).unwrap();
                let f = mult_order(p % n, n) as usize;
                assert!(fs.iter().all(|m| m.len() == f + 1));
                assert_eq!(fs.len() * f, crate::arith::euler_phi(n) as usize);
                for m in &fs {
                    // Order of X checked in F_p[X]/(m) directly, so fields
                    // beyond the size limit are covered too.
                    assert_eq!(fp_poly::powmod(&[0, 1], n, m, p), vec![1]);
                    for (l, _) in factorize(n) {
                        assert_ne!(fp_poly::powmod(&[0, 1], n / l, m, p), vec![1]);
                    }
                    if p.pow(f as u32) <= TABLE_CAP {
                        let ctx = build_extension(p, m).unwrap();
                        assert_eq!(ctx.order(&ctx.x()), n);
                    }
                }
            }
        }
    }

    #[test]
    fn zech_matches_direct() {
        let ctx = build_extension(3, &[1, 2, 0, 1]).unwrap();
        let z = ctx.zech_table();
        for a in 1..(ctx.q() - 1) {
            let lhs = ctx.exp(z[a as usize] as u64);
            let rhs = ctx.sub(&ctx.one(), &ctx.exp(a));
            assert_eq!(lhs, rhs);
        }
    }
}
