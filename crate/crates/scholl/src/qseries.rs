//! Power series in fractional powers of q over an exact coefficient ring.
//!
//! A [`FracSeries`] stores coefficients c_j of q^{(start + step·j)/den}.
//! Every stored coefficient is known; nothing beyond the stored length is.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::big_to_json;

pub trait CoeffRing: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// a/k, if k is invertible in the ring.
    fn div_small(&self, a: &Self::Elem, k: i64) -> Option<Self::Elem>;
    fn elem_json(&self, a: &Self::Elem) -> Value;
    fn describe(&self) -> Value;

    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }

    /// Σ a[i]·b[len-1-i] over slices of equal length.
    fn dot_rev(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Self::Elem {
        a.iter()
            .zip(b.iter().rev())
            .fold(self.zero(), |acc, (x, y)| self.add(&acc, &self.mul(x, y)))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl CoeffRing for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn div_small(&self, a: &BigRational, k: i64) -> Option<BigRational> {
        (k != 0).then(|| a / BigRational::from_integer(k.into()))
    }
    fn elem_json(&self, a: &BigRational) -> Value {
        json!([big_to_json(a.numer()), big_to_json(a.denom())])
    }
    fn describe(&self) -> Value {
        json!("Q")
    }
}

/// Z/m with m < 2^50, so that sums of 2^28 products fit in a u128.
#[derive(Clone, Copy, Debug)]
pub struct IntegersMod {
    m: u64,
}

impl IntegersMod {
    pub const MAX_MODULUS: u64 = 1 << 50;

    pub fn new(m: u64) -> Result<Self> {
        if m < 2 || m >= Self::MAX_MODULUS {
            return Err(Error::capacity(format!("modulus {m} outside 2..2^50")));
        }
        Ok(IntegersMod { m })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// Image of a rational whose denominator is prime to m.
    pub fn reduce(&self, r: &BigRational) -> Option<u64> {
        let m = BigInt::from(self.m);
        let num = r.numer().mod_floor(&m).to_u64()?;
        let den = r.denom().mod_floor(&m).to_u64()?;
        Some(crate::arith::mul_mod(num, crate::arith::inv_mod(den, self.m)?, self.m))
    }
}

impl CoeffRing for IntegersMod {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.m as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (*a as u128 * *b as u128 % self.m as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn div_small(&self, a: &u64, k: i64) -> Option<u64> {
        let inv = crate::arith::inv_mod(self.from_i64(k), self.m)?;
        Some(self.mul(a, &inv))
    }
    fn elem_json(&self, a: &u64) -> Value {
        json!(a)
    }
    fn describe(&self) -> Value {
        json!({"modulus": self.m})
    }
    fn dot_rev(&self, a: &[u64], b: &[u64]) -> u64 {
        let acc: u128 = a.iter().zip(b.iter().rev()).map(|(&x, &y)| x as u128 * y as u128).sum();
        (acc % self.m as u128) as u64
    }
}

#[derive(Clone, Debug)]
pub struct FracSeries<R: CoeffRing> {
    ring: R,
    den: u64,
    start: i64,
    step: u64,
    coeffs: Vec<R::Elem>,
}

fn gcd_i(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

impl<R: CoeffRing> FracSeries<R> {
    /// Series Σ coeffs[j] q^{(start + step·j)/den}, normalized.
    pub fn new(ring: R, den: u64, start: i64, step: u64, coeffs: Vec<R::Elem>) -> Self {
        assert!(den > 0 && step > 0);
        let mut s = FracSeries { ring, den, start, step, coeffs };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !self.ring.is_zero(c));
        if let Some(k) = lead {
            if k > 0 {
                self.coeffs.drain(..k);
                self.start += (k as u64 * self.step) as i64;
            }
        }
        let g = gcd_i(gcd_i(self.den as i64, self.step as i64), self.start) as u64;
        if g > 1 {
            self.den /= g;
            self.step /= g;
            self.start /= g as i64;
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn den(&self) -> u64 {
        self.den
    }
    pub fn start(&self) -> i64 {
        self.start
    }
    pub fn step(&self) -> u64 {
        self.step
    }
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }
    /// Number of known terms.
    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    /// Exclusive bound, in units of 1/den, below which every coefficient is known.
    pub fn known_below(&self) -> i64 {
        self.start + (self.step * self.coeffs.len() as u64) as i64
    }

    pub fn is_zero_to_prec(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn leading(&self) -> Option<(i64, u64, &R::Elem)> {
        self.coeffs.first().map(|c| (self.start, self.den, c))
    }

    /// Coefficient of q^{num/den}.
    pub fn coeff_at(&self, num: i64, den: u64) -> Result<R::Elem> {
        let x = num as i128 * self.den as i128;
        let bound = self.known_below() as i128 * den as i128;
        if x >= bound {
            return Err(Error::Precision(format!(
                "coefficient of q^({num}/{den}) is beyond the {} known terms",
                self.prec()
            )));
        }
        if x % den as i128 != 0 {
            return Ok(self.ring.zero());
        }
        let e = (x / den as i128) as i64;
        if e < self.start || (e - self.start) as u64 % self.step != 0 {
            return Ok(self.ring.zero());
        }
        Ok(self.coeffs[((e - self.start) as u64 / self.step) as usize].clone())
    }

    fn embed(&self, den: u64, start: i64, step: u64) -> Vec<R::Elem> {
        let scale = den / self.den;
        let (s, t) = (self.start * scale as i64, self.step * scale);
        let bound = s + (t * self.coeffs.len() as u64) as i64;
        let len = ((bound - start) / step as i64).max(0) as usize;
        let mut out = vec![self.ring.zero(); len];
        for (j, c) in self.coeffs.iter().enumerate() {
            let pos = (s + (t * j as u64) as i64 - start) / step as i64;
            out[pos as usize] = c.clone();
        }
        out
    }

    fn lattice(&self, o: &Self) -> (u64, i64, i64, u64, u64) {
        let den = self.den.lcm(&o.den);
        let (sa, sb) = (self.start * (den / self.den) as i64, o.start * (den / o.den) as i64);
        let (ta, tb) = (self.step * (den / self.den), o.step * (den / o.den));
        (den, sa, sb, ta, tb)
    }

    fn combine(&self, o: &Self, f: impl Fn(&R::Elem, &R::Elem) -> R::Elem) -> Self {
        let (den, sa, sb, ta, tb) = self.lattice(o);
        let step = gcd_i(gcd_i(ta as i64, tb as i64), sa - sb) as u64;
        let start = sa.min(sb);
        let (va, vb) = (self.embed(den, start, step), o.embed(den, start, step));
        let len = va.len().min(vb.len());
        let coeffs = va[..len].iter().zip(&vb[..len]).map(|(a, b)| f(a, b)).collect();
        FracSeries::new(self.ring.clone(), den, start, step, coeffs)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, |a, b| self.ring.sub(a, b))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect();
        FracSeries::new(self.ring.clone(), self.den, self.start, self.step, coeffs)
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&self.ring.from_i64(c))
    }

    /// Product, known to the smaller relative precision of the factors.
    pub fn mul(&self, o: &Self) -> Self {
        let (den, sa, sb, ta, tb) = self.lattice(o);
        let step = gcd_i(ta as i64, tb as i64) as u64;
        let (va, vb) = (self.embed(den, sa, step), o.embed(den, sb, step));
        let len = va.len().min(vb.len());
        let coeffs = (0..len).map(|k| self.ring.dot_rev(&va[..=k], &vb[..=k])).collect();
        FracSeries::new(self.ring.clone(), den, sa + sb, step, coeffs)
    }

    /// q ↦ q^k.
    pub fn substitute(&self, k: u64) -> Self {
        FracSeries::new(self.ring.clone(), self.den, self.start * k as i64, self.step * k, self.coeffs.clone())
    }

    /// Keeps the first `len` terms.
    pub fn truncate(&self, len: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(len);
        s
    }

    /// The series r with r^k = self and leading coefficient 1.
    ///
    /// With r_0 = 1 and [r^l]_n = l·r_n + Σ_{i=2..l} c_i, where
    /// c_i = Σ_{0<j<n} r_j [r^{i-1}]_{n-j}, only division by k is needed.
    pub fn nth_root(&self, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::domain("root index must be at least 2"));
        }
        let ring = &self.ring;
        match self.coeffs.first() {
            Some(c) if *c == ring.one() => {}
            _ => return Err(Error::domain("leading coefficient must be 1")),
        }
        let k = k as usize;
        let len = self.coeffs.len();
        // pw[l] holds r^{l+1}, for 0 <= l < k-1.
        let mut pw: Vec<Vec<R::Elem>> = vec![Vec::with_capacity(len); k - 1];
        for p in pw.iter_mut() {
            p.push(ring.one());
        }
        let mut c = vec![ring.zero(); k + 1];
        for n in 1..len {
            for l in 2..=k {
                c[l] = ring.dot_rev(&pw[0][1..n], &pw[l - 2][1..n]);
            }
            let rest = c[2..=k].iter().fold(ring.zero(), |a, x| ring.add(&a, x));
            let rn = ring
                .div_small(&ring.sub(&self.coeffs[n], &rest), k as i64)
                .ok_or_else(|| Error::domain(format!("{k} is not invertible in the coefficient ring")))?;
            let mut partial = ring.zero();
            for l in 1..k {
                if l >= 2 {
                    partial = ring.add(&partial, &c[l]);
                }
                let v = ring.add(&ring.mul(&ring.from_i64(l as i64), &rn), &partial);
                pw[l - 1].push(v);
            }
        }
        let coeffs = pw.swap_remove(0);
        Ok(FracSeries::new(self.ring.clone(), self.den * k as u64, self.start, self.step * k as u64, coeffs))
    }

    /// Coefficients on the step-1 lattice (zeros filled in), for output.
    pub fn dense(&self) -> Vec<R::Elem> {
        self.embed(self.den, self.start, 1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "N": self.den,
            "start": self.start,
            "ring": self.ring.describe(),
            "coeffs": self.dense().iter().map(|c| self.ring.elem_json(c)).collect::<Vec<_>>(),
        })
    }

    pub fn map_ring<S: CoeffRing>(&self, ring: S, f: impl Fn(&R::Elem) -> Option<S::Elem>) -> Result<FracSeries<S>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| f(c).ok_or_else(|| Error::domain("coefficient has no image in the target ring")))
            .collect::<Result<Vec<_>>>()?;
        Ok(FracSeries::new(ring, self.den, self.start, self.step, coeffs))
    }
}

impl FracSeries<Rationals> {
    pub fn from_integers(den: u64, start: i64, step: u64, coeffs: &[i64]) -> Self {
        FracSeries::new(Rationals, den, start, step, coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// Coefficients as CSV rows `exponent_num,exponent_den,num,den`.
    pub fn to_csv(&self, count: usize) -> String {
        let mut out = String::from("exponent_num,exponent_den,num,den\n");
        for (j, c) in self.coeffs.iter().take(count).enumerate() {
            let e = self.start + (self.step * j as u64) as i64;
            let g = gcd_i(e, self.den as i64).max(1);
            out.push_str(&format!("{},{},{},{}\n", e / g, self.den as i64 / g, c.numer(), c.denom()));
        }
        out
    }
}

/// Π_{n>=1} (1 - x^n) as a sparse ±1 list (pentagonal numbers), for x = q^m,
/// exponents in q below `len`.
fn euler_sparse(m: usize, len: usize) -> Vec<(usize, bool)> {
    let mut out = vec![(0, true)];
    let mut k = 1usize;
    loop {
        let a = m * (k * (3 * k - 1) / 2);
        let b = m * (k * (3 * k + 1) / 2);
        if a >= len {
            break;
        }
        let plus = k % 2 == 0;
        out.push((a, plus));
        if b < len {
            out.push((b, plus));
        }
        k += 1;
    }
    out
}

/// Π_m η(m z)^{e_m} to `prec` terms. When every m shares a factor g the
/// product is a series in q^g and `prec` counts terms in q^g.
pub fn eta_quotient<R: CoeffRing>(ring: R, spec: &[(u64, i64)], prec: usize) -> FracSeries<R> {
    let g = spec.iter().fold(0u64, |g, &(m, _)| g.gcd(&m)).max(1);
    let mut a = vec![ring.zero(); prec];
    if prec > 0 {
        a[0] = ring.one();
    }
    for &(m, e) in spec {
        let sp = euler_sparse((m / g) as usize, prec);
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                for n in (0..prec).rev() {
                    let mut acc = a[n].clone();
                    for &(i, plus) in &sp[1..] {
                        if i > n {
                            break;
                        }
                        acc = if plus { ring.add(&acc, &a[n - i]) } else { ring.sub(&acc, &a[n - i]) };
                    }
                    a[n] = acc;
                }
            } else {
                for n in 0..prec {
                    let mut acc = a[n].clone();
                    for &(i, plus) in &sp[1..] {
                        if i > n {
                            break;
                        }
                        acc = if plus { ring.sub(&acc, &a[n - i]) } else { ring.add(&acc, &a[n - i]) };
                    }
                    a[n] = acc;
                }
            }
        }
    }
    let start: i64 = spec.iter().map(|&(m, e)| m as i64 * e).sum();
    FracSeries::new(ring, 24, start, 24 * g, a)
}

pub fn series_nth_root<R: CoeffRing>(s: &FracSeries<R>, k: u32) -> Result<FracSeries<R>> {
    s.nth_root(k)
}

/// E₂ = 1 - 24 Σ σ₁(n) qⁿ.
pub fn e2_series<R: CoeffRing>(ring: R, prec: usize) -> FracSeries<R> {
    let mut sigma = vec![0i64; prec];
    for d in 1..prec {
        for m in (d..prec).step_by(d) {
            sigma[m] += d as i64;
        }
    }
    let coeffs = (0..prec)
        .map(|n| if n == 0 { ring.one() } else { ring.from_i64(-24 * sigma[n]) })
        .collect();
    FracSeries::new(ring, 1, 0, 1, coeffs)
}

pub const F1_SPEC: [(u64, i64); 3] = [(1, -8), (2, 48), (4, -16)];
pub const F2_SPEC: [(u64, i64); 3] = [(1, -16), (2, 48), (4, -8)];

/// f₁ and f₂ with every a_i(m), m <= max_index, known (a_i(m) is the
/// coefficient of q^{m/3}).
pub fn weight4_basis<R: CoeffRing>(ring: R, max_index: u64) -> Result<(FracSeries<R>, FracSeries<R>)> {
    let terms = |lead: u64| (max_index.saturating_sub(lead) / 3 + 1) as usize;
    let f1 = eta_quotient(ring.clone(), &F1_SPEC, terms(1)).nth_root(3)?;
    let f2 = eta_quotient(ring, &F2_SPEC, terms(2)).nth_root(3)?;
    Ok((f1, f2))
}

/// a_i(m) for the weight-4 basis: the coefficient of q^{m/3}.
pub fn basis_coeff<R: CoeffRing>(f: &FracSeries<R>, m: u64) -> Result<R::Elem> {
    f.coeff_at(m as i64, 3)
}

/// g_±(6z) as q-series: g_± = g₁ ± 18g₅ + 3(g₁(3z) ± 18g₅(3z)) with
/// g₁ = η⁴(z)(3E₂(3z) - E₂(z))/2 and g₅ = η(z)²η(3z)⁶. In z these have
/// exponents in (1/6)Z; z ↦ 6z makes them integral with leading term q.
pub fn eigenforms_g(prec: usize) -> Result<(FracSeries<Rationals>, FracSeries<Rationals>)> {
    let g1 = g1_series(prec);
    let g5 = eta_quotient(Rationals, &[(1, 2), (3, 6)], prec);
    let eighteen = g5.scale_int(18);
    let plus = g1.add(&eighteen);
    let minus = g1.sub(&eighteen);
    let combine = |h: &FracSeries<Rationals>| h.add(&h.substitute(3).scale_int(3)).substitute(6);
    let (gp, gm) = (combine(&plus), combine(&minus));
    // Report on a common precision in q.
    let len = gp.prec().min(gm.prec()).min(prec);
    Ok((gp.truncate(len), gm.truncate(len)))
}

/// η⁴(z)·(3E₂(3z) - E₂(z))/2.
pub fn g1_series(prec: usize) -> FracSeries<Rationals> {
    let e2 = e2_series(Rationals, prec);
    let combo = e2.substitute(3).scale_int(3).sub(&e2);
    let half = combo.scale(&BigRational::new(1.into(), 2.into()));
    eta_quotient(Rationals, &[(1, 4)], prec).mul(&half)
}

#[derive(Clone, Debug)]
pub struct HeckeShadow {
    pub p: u64,
    pub a_p: BigInt,
    pub a_p2: BigInt,
    pub predicted: BigInt,
    pub holds: bool,
}

impl HeckeShadow {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p, "a_p": big_to_json(&self.a_p), "a_p2": big_to_json(&self.a_p2),
            "predicted": big_to_json(&self.predicted), "holds": self.holds,
        })
    }
}

/// a(p²) against a(p)² - p³·a(1) for an integral N = 1 series (χ(p) = 1).
pub fn hecke_shadow(g: &FracSeries<Rationals>, p: u64) -> Result<HeckeShadow> {
    let int = |e: u64| -> Result<BigInt> {
        let c = g.coeff_at(e as i64, 1)?;
        c.is_integer()
            .then(|| c.to_integer())
            .ok_or_else(|| Error::consistency(format!("coefficient of q^{e} is not an integer")))
    };
    let (a1, ap, ap2) = (int(1)?, int(p)?, int(p * p)?);
    let predicted = &ap * &ap - BigInt::from(p).pow(3) * &a1;
    Ok(HeckeShadow { p, holds: predicted == ap2, a_p: ap, a_p2: ap2, predicted })
}

/// Whether every denominator is a power of 3.
pub fn denominators_are_powers_of_three(f: &FracSeries<Rationals>) -> bool {
    f.coeffs().iter().all(|c| {
        let mut d = c.denom().clone();
        let three = BigInt::from(3);
        while (&d % &three).is_zero() {
            d /= &three;
        }
        d.is_one()
    })
}

/// Largest |numerator| among the known coefficients, for reporting.
pub fn max_numerator_bits(f: &FracSeries<Rationals>) -> u64 {
    f.coeffs().iter().map(|c| c.numer().abs().bits()).max().unwrap_or(0)
}
