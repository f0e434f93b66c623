//! Point counts and point-map checks for the weight-2 curves and for the
//! surface s^n = f_n(x, y).

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::arith::{is_prime, units_mod};
use crate::charsums::f_n;
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::finite_fields::{build_extension, build_prime_field, field_of_order, find_irreducible, FieldCtx, FqElem};
use crate::fp_poly;

pub const PURITY_TOL: f64 = 1e-6;

fn eval(ctx: &FieldCtx, f: &[FqElem], x: &FqElem) -> FqElem {
    f.iter().rev().fold(ctx.zero(), |acc, c| ctx.add(&ctx.mul(&acc, x), c))
}

/// Integer coefficients (constant first) reduced into F_q.
pub fn poly_from_ints(ctx: &FieldCtx, f: &[i64]) -> Vec<FqElem> {
    f.iter().map(|&c| ctx.from_i64(c)).collect()
}

/// Quadratic character: 0, 1 or -1.
fn legendre(ctx: &FieldCtx, u: &FqElem) -> i64 {
    if u.is_zero() {
        return 0;
    }
    let square = match ctx.dlog(u) {
        Ok(e) => e % 2 == 0,
        Err(_) => ctx.pow(u, (ctx.q() - 1) / 2) == ctx.one(),
    };
    if square {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug)]
pub struct SuperellipticCount {
    pub n: u64,
    pub q: u64,
    pub affine_count: u64,
    /// Entry i-1 is Σ_x χ^i(f(x)) for i = 1..=N; the last uses χ^N(0) = 1.
    pub char_decomposition: Vec<CycInt>,
}

impl SuperellipticCount {
    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "q": self.q,
            "affine_count": self.affine_count,
            "char_decomposition": self.char_decomposition.iter().map(CycInt::to_json).collect::<Vec<_>>(),
        })
    }
}

/// #{(x, y) ∈ F_q² : y^N = f(x)} through the character with χ(g) = ζ_N.
pub fn superelliptic_count(n: u64, f: &[FqElem], ctx: &FieldCtx) -> Result<SuperellipticCount> {
    let q = ctx.q();
    if n == 0 || (q - 1) % n != 0 {
        return Err(Error::domain(format!("N = {n} does not divide q - 1 = {}", q - 1)));
    }
    if f.iter().skip(1).all(FqElem::is_zero) {
        return Err(Error::domain("f must be nonconstant"));
    }
    // hist[k] = #{x : f(x) ≠ 0, dlog f(x) ≡ k mod N}
    let mut hist = vec![0u64; n as usize];
    let mut zeros = 0u64;
    for x in ctx.elements() {
        let v = eval(ctx, f, &x);
        if v.is_zero() {
            zeros += 1;
        } else {
            hist[(ctx.dlog(&v)? % n) as usize] += 1;
        }
    }
    let mut decomposition = Vec::with_capacity(n as usize);
    for i in 1..n {
        let mut raw = vec![0i64; n as usize];
        for (k, &c) in hist.iter().enumerate() {
            raw[(i as usize * k) % n as usize] += c as i64;
        }
        decomposition.push(crate::cyclotomic::cyc_reduce_i64(n, &raw));
    }
    decomposition.push(CycInt::from_int(n, q as i64));
    let total = decomposition
        .iter()
        .fold(CycInt::zero(n), |acc, v| &acc + v)
        .as_integer()
        .ok_or_else(|| Error::consistency("character decomposition is not rational"))?;
    let affine_count = u64::try_from(total).map_err(|_| Error::consistency("negative point count"))?;
    debug_assert!(zeros <= affine_count);
    Ok(SuperellipticCount { n, q, affine_count, char_decomposition: decomposition })
}

/// L(T) = 1 + a1 T + a2 T² + p a1 T³ + p² T⁴ of a genus-2 curve y² = f(x).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusTwoL {
    pub p: u64,
    pub a1: i64,
    pub a2: i64,
}

impl GenusTwoL {
    pub fn coefficients(&self) -> [i64; 5] {
        let p = self.p as i64;
        [1, self.a1, self.a2, p * self.a1, p * p]
    }

    /// Reciprocal roots α (roots of x⁴ + a1 x³ + a2 x² + p a1 x + p²), found
    /// through u = α + p/α.
    pub fn reciprocal_roots(&self) -> [Complex64; 4] {
        let p = self.p as f64;
        let (a1, a2) = (self.a1 as f64, self.a2 as f64);
        let disc = Complex64::new(a1 * a1 - 4.0 * (a2 - 2.0 * p), 0.0).sqrt();
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (k, u) in [(-a1 + disc) / 2.0, (-a1 - disc) / 2.0].into_iter().enumerate() {
            let d = (u * u - 4.0 * p).sqrt();
            out[2 * k] = (u + d) / 2.0;
            out[2 * k + 1] = (u - d) / 2.0;
        }
        out
    }

    /// Largest relative deviation of |α| from √p.
    pub fn purity_deviation(&self) -> f64 {
        let sp = (self.p as f64).sqrt();
        self.reciprocal_roots()
            .iter()
            .map(|z| (z.norm() - sp).abs() / sp)
            .fold(0.0, f64::max)
    }

    pub fn is_pure(&self) -> bool {
        self.purity_deviation() <= PURITY_TOL && (self.a1 as f64).abs() <= 4.0 * (self.p as f64).sqrt() + PURITY_TOL
    }

    pub fn to_json(&self) -> Value {
        json!({"p": self.p, "a1": self.a1, "a2": self.a2, "L": self.coefficients().to_vec()})
    }
}

fn check_sextic(f: &[i64], p: u64) -> Result<Vec<u64>> {
    if p == 2 || !is_prime(p) {
        return Err(Error::domain(format!("p = {p} must be an odd prime")));
    }
    if f.len() != 7 || f[6] != 1 {
        return Err(Error::domain("f must be a monic sextic"));
    }
    let fp: Vec<u64> = f.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
    let g = fp_poly::gcd(&fp, &fp_poly::derivative(&fp, p), p);
    if fp_poly::degree(&g) != Some(0) {
        return Err(Error::domain(format!("disc(f) ≡ 0 mod {p}: the reduction is singular")));
    }
    Ok(fp)
}

/// Affine count plus the two points at infinity.
fn hyperelliptic_count(ctx: &FieldCtx, f: &[FqElem]) -> i64 {
    let affine: i64 = ctx.elements().map(|x| 1 + legendre(ctx, &eval(ctx, f, &x))).sum();
    affine + 2
}

pub fn genus2_lpoly(f: &[i64], p: u64) -> Result<GenusTwoL> {
    check_sextic(f, p)?;
    let base = build_prime_field(p)?;
    let quad = build_extension(p, &find_irreducible(p, 2, 0))?;
    let n1 = hyperelliptic_count(&base, &poly_from_ints(&base, f));
    let n2 = hyperelliptic_count(&quad, &poly_from_ints(&quad, f));
    let pi = p as i64;
    let s1 = pi + 1 - n1;
    let s2 = pi * pi + 1 - n2;
    if (s1 * s1 - s2) % 2 != 0 {
        return Err(Error::consistency(format!("s1² - s2 = {} is odd", s1 * s1 - s2)));
    }
    let l = GenusTwoL { p, a1: -s1, a2: (s1 * s1 - s2) / 2 };
    if !l.is_pure() {
        return Err(Error::consistency(format!(
            "L-polynomial {:?} violates the Weil bound (deviation {:.3e})",
            l.coefficients(),
            l.purity_deviation()
        )));
    }
    Ok(l)
}

fn isqrt(v: i64) -> Option<i64> {
    if v < 0 {
        return None;
    }
    let r = (v as f64).sqrt().round() as i64;
    (r.saturating_sub(1)..=r + 1).find(|&s| s >= 0 && s * s == v)
}

/// Square root 1 + cT ± pT² of the L-quartic, if it is an exact square.
pub fn square_root_quartic(l: &GenusTwoL) -> Option<(i64, i64)> {
    let [_, a1, a2, a3, a4] = l.coefficients();
    if a1 % 2 != 0 {
        return None;
    }
    let c = a1 / 2;
    if (a2 - c * c) % 2 != 0 {
        return None;
    }
    let e = (a2 - c * c) / 2;
    (2 * c * e == a3 && e * e == a4).then_some((c, e))
}

#[derive(Clone, Debug)]
pub struct CbReport {
    pub b: i64,
    pub p: u64,
    pub lpoly: Option<GenusTwoL>,
    /// For p ≡ 2 mod 3: a with L = (1 + aT + pT²)(1 - aT + pT²).
    pub paired: Option<i64>,
    /// For p ≡ 1 mod 3: (c, e) with L = (1 + cT + eT²)².
    pub square: Option<(i64, i64)>,
    pub ok: bool,
    pub reason: Option<String>,
}

impl CbReport {
    pub fn to_json(&self) -> Value {
        json!({
            "b": self.b,
            "p": self.p,
            "L": self.lpoly.as_ref().map(GenusTwoL::to_json),
            "paired": self.paired,
            "square": self.square.map(|(c, e)| vec![1, c, e]),
            "ok": self.ok,
            "reason": self.reason,
        })
    }
}

/// Trace-zero (p ≡ 2 mod 3) and square (p ≡ 1 mod 3) structure of
/// y² = x⁶ + b x³ + 1.
pub fn cb_structure_check(b: i64, p: u64) -> CbReport {
    let mut report = CbReport { b, p, lpoly: None, paired: None, square: None, ok: false, reason: None };
    if p == 3 {
        report.reason = Some("p = 3 is excluded".into());
        return report;
    }
    let l = match genus2_lpoly(&[1, 0, 0, b, 0, 0, 1], p) {
        Ok(l) => l,
        Err(e) => {
            report.reason = Some(e.to_string());
            return report;
        }
    };
    if p % 3 == 2 {
        report.paired = if l.a1 == 0 { isqrt(2 * p as i64 - l.a2) } else { None };
        report.ok = report.paired.is_some();
    } else {
        report.square = square_root_quartic(&l);
        report.ok = report.square.is_some();
    }
    report.lpoly = Some(l);
    report
}

/// Whether y² = x⁶ + b x³ + 1 has good reduction at p (p ∤ 6·disc).
pub fn cb_is_good(b: i64, p: u64) -> bool {
    p > 3 && check_sextic(&[1, 0, 0, b, 0, 0, 1], p).is_ok()
}

#[derive(Clone, Debug)]
pub struct InvolutionReport {
    pub a: i64,
    pub q: u64,
    pub nonsingular: bool,
    pub points: usize,
    pub on_curve: bool,
    pub orders: bool,
    pub commutator: bool,
    pub ok: bool,
}

impl InvolutionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a, "q": self.q, "nonsingular": self.nonsingular, "points": self.points,
            "on_curve": self.on_curve, "orders": self.orders, "commutator": self.commutator, "ok": self.ok,
        })
    }
}

/// τ₁(x, y) = (-x, y) and τ₂(x, y) = (1/x, y/x³) on y² = x⁶ + a x⁴ + a x² + 1.
pub fn involution_check(a: i64, q: u64) -> Result<InvolutionReport> {
    let ctx = field_of_order(q)?;
    if ctx.p() == 2 {
        return Err(Error::domain("q must be odd"));
    }
    let f = [1, 0, a, 0, a, 0, 1];
    let fp: Vec<u64> = f.iter().map(|&c| c.rem_euclid(ctx.p() as i64) as u64).collect();
    let nonsingular = fp_poly::degree(&fp_poly::gcd(&fp, &fp_poly::derivative(&fp, ctx.p()), ctx.p())) == Some(0);
    let fq = poly_from_ints(&ctx, &f);
    let on = |(x, y): &(FqElem, FqElem)| ctx.mul(y, y) == eval(&ctx, &fq, x);
    let tau1 = |(x, y): &(FqElem, FqElem)| (ctx.neg(x), y.clone());
    let tau2 = |(x, y): &(FqElem, FqElem)| {
        let xi = ctx.inv(x).expect("x ≠ 0");
        (xi.clone(), ctx.mul(y, &ctx.pow(&xi, 3)))
    };
    let mut rep = InvolutionReport { a, q, nonsingular, points: 0, on_curve: true, orders: true, commutator: true, ok: true };
    for x in ctx.elements().filter(|x| !x.is_zero()) {
        for y in ctx.elements() {
            let pt = (x.clone(), y);
            if !on(&pt) {
                continue;
            }
            rep.points += 1;
            let (t1, t2) = (tau1(&pt), tau2(&pt));
            rep.on_curve &= on(&t1) && on(&t2);
            rep.orders &= tau1(&t1) == pt && tau2(&t2) == pt;
            let c = tau2(&tau1(&tau2(&tau1(&pt))));
            rep.commutator &= c == (pt.0.clone(), ctx.neg(&pt.1));
        }
    }
    rep.ok = rep.on_curve && rep.orders && rep.commutator;
    Ok(rep)
}

type Point = (FqElem, FqElem, FqElem);

/// Points of s^n = f_n(x, y) with s ≠ 0; needs n | q - 1 and log tables.
pub fn en_points(ctx: &FieldCtx, n: u64) -> Result<Vec<Point>> {
    let m = ctx.q() - 1;
    if m % n != 0 {
        return Err(Error::domain(format!("n = {n} does not divide q - 1 = {m}")));
    }
    let mut out = Vec::new();
    for x in ctx.elements() {
        for y in ctx.elements() {
            let v = f_n(ctx, n, &x, &y);
            if v.is_zero() {
                continue;
            }
            let e = ctx.dlog(&v)?;
            if e % n != 0 {
                continue;
            }
            for k in 0..n {
                out.push((x.clone(), y.clone(), ctx.exp(e / n + k * (m / n))));
            }
        }
    }
    Ok(out)
}

/// F_q* in exponent form g^e, with zero as [`ZERO`]; every operation is a
/// table lookup or an addition mod q - 1.
struct LogField {
    m: u64,
    p: u64,
    /// z[e] = log(1 - g^e).
    zech: Vec<u32>,
}

const ZERO: u64 = u64::MAX;

/// (x, y, s) as exponents.
type LogPoint = [u64; 3];

impl LogField {
    fn new(ctx: &FieldCtx) -> Result<Self> {
        if !ctx.has_tables() {
            return Err(Error::capacity(format!("field of size {} has no log tables", ctx.q())));
        }
        Ok(LogField { m: ctx.q() - 1, p: ctx.p(), zech: ctx.zech_table() })
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == ZERO || b == ZERO {
            ZERO
        } else {
            (a + b) % self.m
        }
    }

    fn pow(&self, a: u64, e: u64) -> u64 {
        if a == ZERO {
            if e == 0 { 0 } else { ZERO }
        } else {
            ((a as u128 * e as u128) % self.m as u128) as u64
        }
    }

    fn inv(&self, a: u64) -> Option<u64> {
        (a != ZERO).then(|| (self.m - a % self.m) % self.m)
    }

    fn one_minus(&self, a: u64) -> u64 {
        if a == ZERO {
            0
        } else {
            match self.zech[a as usize] {
                u32::MAX => ZERO,
                z => z as u64,
            }
        }
    }

    fn elements(&self) -> impl Iterator<Item = u64> {
        std::iter::once(ZERO).chain(0..self.m)
    }

    fn f_n(&self, n: u64, x: u64, y: u64) -> u64 {
        let xy = self.mul(x, y);
        let parts = [self.pow(xy, n - 1), self.one_minus(x), self.one_minus(y), self.pow(self.one_minus(xy), n - 1)];
        parts.into_iter().fold(0, |acc, v| self.mul(acc, v))
    }

    /// Points of s^n = f_n(x, y) with s ≠ 0.
    fn en_points(&self, n: u64) -> Vec<LogPoint> {
        let step = self.m / n;
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.elements() {
                let v = self.f_n(n, x, y);
                if v == ZERO || v % n != 0 {
                    continue;
                }
                out.extend((0..n).map(|k| [x, y, v / n + k * step]));
            }
        }
        out
    }

    fn on_en(&self, n: u64, [x, y, s]: LogPoint) -> bool {
        s != ZERO && self.pow(s, n) == self.f_n(n, x, y)
    }

    /// A with ω₂ = g^w.
    fn map_a(&self, w: u64, [x, y, s]: LogPoint) -> Option<LogPoint> {
        let xy = self.mul(x, y);
        let inv_d = self.inv(self.one_minus(xy))?;
        let inv_s = self.inv(s)?;
        let one_x = self.one_minus(x);
        let num = [one_x, self.one_minus(y), self.pow(x, 2), y, inv_s, inv_d, w]
            .into_iter()
            .fold(0, |acc, v| self.mul(acc, v));
        Some([one_x, inv_d, num])
    }

    /// ζ^k: s ↦ ω^{-k} s with ω = g^o.
    fn zeta_pow(&self, o: u64, n: u64, k: i64, [x, y, s]: LogPoint) -> LogPoint {
        let e = (-k).rem_euclid(n as i64) as u64;
        [x, y, self.mul(self.pow(o, e), s)]
    }

    fn frob(&self, pt: LogPoint) -> LogPoint {
        pt.map(|c| self.pow(c, self.p))
    }
}

/// Exponents of every primitive 2n-th root ω₂ in F_q.
fn primitive_roots_2n(m: u64, n: u64) -> Vec<u64> {
    let step = m / (2 * n);
    units_mod(2 * n).into_iter().map(|j| j * step).collect()
}

#[derive(Clone, Debug)]
pub struct EnSymmetryReport {
    pub n: u64,
    pub q: u64,
    pub roots_tested: usize,
    pub points: usize,
    pub maps_into: bool,
    pub relation: bool,
    pub ok: bool,
}

impl EnSymmetryReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "q": self.q, "roots_tested": self.roots_tested, "points": self.points,
            "maps_into": self.maps_into, "relation": self.relation, "ok": self.ok,
        })
    }
}

/// A maps the s ≠ 0 points into the surface and ζ∘A∘ζ = A, for every
/// primitive 2n-th root ω₂ and ω = ω₂².
pub fn en_symmetry_check(n: u64, q: u64) -> Result<EnSymmetryReport> {
    if n < 2 {
        return Err(Error::domain("n must be at least 2"));
    }
    let ctx = field_of_order(q)?;
    if (q - 1) % (2 * n) != 0 {
        return Err(Error::domain(format!("no primitive {}-th root of unity in F_{q}", 2 * n)));
    }
    let lf = LogField::new(&ctx)?;
    let points = lf.en_points(n);
    let roots = primitive_roots_2n(lf.m, n);
    let mut rep = EnSymmetryReport { n, q, roots_tested: roots.len(), points: points.len(), maps_into: true, relation: true, ok: false };
    for &w in &roots {
        let omega = lf.pow(w, 2);
        for &pt in &points {
            let Some(image) = lf.map_a(w, pt) else {
                rep.maps_into = false;
                continue;
            };
            rep.maps_into &= lf.on_en(n, image);
            let twisted = lf.map_a(w, lf.zeta_pow(omega, n, 1, pt)).map(|v| lf.zeta_pow(omega, n, 1, v));
            rep.relation &= twisted == Some(image);
        }
    }
    rep.ok = rep.maps_into && rep.relation;
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct FrobCommReport {
    pub n: u64,
    pub p: u64,
    pub k: usize,
    pub points: usize,
    pub frob_a: bool,
    pub frob_zeta: bool,
    pub ok: bool,
}

impl FrobCommReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "p": self.p, "k": self.k, "points": self.points,
            "frob_a": self.frob_a, "frob_zeta": self.frob_zeta, "ok": self.ok,
        })
    }
}

/// Frob∘A = ζ^{(1-p)/2}∘A∘Frob and Frob∘ζ = ζ^p∘Frob on the s ≠ 0 points
/// over F_{p^k}, Frob the coordinatewise p-th power.
pub fn frobenius_commutation_check(n: u64, p: u64, k: usize) -> Result<FrobCommReport> {
    if p == 2 || !is_prime(p) {
        return Err(Error::domain(format!("p = {p} must be an odd prime")));
    }
    if n < 2 || (p % n != 1 % n && p % n != n - 1) {
        return Err(Error::domain(format!("p = {p} is not ±1 mod {n}")));
    }
    let q = crate::arith::checked_pow(p, k as u32).ok_or_else(|| Error::capacity("p^k overflows"))?;
    let ctx = field_of_order(q)?;
    if (q - 1) % (2 * n) != 0 {
        return Err(Error::domain(format!("no primitive {}-th root of unity in F_{q}", 2 * n)));
    }
    let lf = LogField::new(&ctx)?;
    let points = lf.en_points(n);
    let w = lf.m / (2 * n);
    let omega = lf.pow(w, 2);
    let shift = (1 - p as i64) / 2;
    let mut rep = FrobCommReport { n, p, k, points: points.len(), frob_a: true, frob_zeta: true, ok: false };
    for &pt in &points {
        let lhs = lf.map_a(w, pt).map(|v| lf.frob(v));
        let rhs = lf.map_a(w, lf.frob(pt)).map(|v| lf.zeta_pow(omega, n, shift, v));
        rep.frob_a &= lhs.is_some() && lhs == rhs;
        let lhs = lf.frob(lf.zeta_pow(omega, n, 1, pt));
        let rhs = lf.zeta_pow(omega, n, p as i64, lf.frob(pt));
        rep.frob_zeta &= lhs == rhs;
    }
    rep.ok = rep.frob_a && rep.frob_zeta;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn on_en(ctx: &FieldCtx, n: u64, (x, y, s): &Point) -> bool {
        ctx.pow(s, n) == f_n(ctx, n, x, y)
    }

    /// A(x, y, s) = (1 - x, 1/(1 - xy), ω₂(1 - x)(1 - y)x²y / (s(1 - xy))).
    fn map_a(ctx: &FieldCtx, omega2: &FqElem, (x, y, s): &Point) -> Option<Point> {
        let one = ctx.one();
        let xy = ctx.mul(x, y);
        let d = ctx.sub(&one, &xy);
        let inv_d = ctx.inv(&d)?;
        let inv_s = ctx.inv(s)?;
        let num = [ctx.sub(&one, x), ctx.sub(&one, y), ctx.mul(x, x), y.clone(), inv_s, inv_d.clone(), omega2.clone()]
            .iter()
            .fold(one.clone(), |acc, v| ctx.mul(&acc, v));
        Some((ctx.sub(&one, x), inv_d, num))
    }

    /// ζ^k(x, y, s) = (x, y, ω^{-k} s).
    fn zeta_pow(ctx: &FieldCtx, omega: &FqElem, n: u64, k: i64, (x, y, s): &Point) -> Point {
        let e = (-k).rem_euclid(n as i64) as u64;
        (x.clone(), y.clone(), ctx.mul(&ctx.pow(omega, e), s))
    }

    fn frob_point(ctx: &FieldCtx, (x, y, s): &Point) -> Point {
        (ctx.frobenius(x), ctx.frobenius(y), ctx.frobenius(s))
    }

    fn direct_superelliptic(n: u64, f: &[FqElem], ctx: &FieldCtx) -> u64 {
        let mut count = 0;
        for x in ctx.elements() {
            let v = eval(ctx, f, &x);
            count += ctx.elements().filter(|y| ctx.pow(y, n) == v).count() as u64;
        }
        count
    }

    #[test]
    fn superelliptic_examples() {
        let f5 = build_prime_field(5).unwrap();
        let r = superelliptic_count(2, &poly_from_ints(&f5, &[1, 0, 0, 1, 0, 0, 1]), &f5).unwrap();
        assert_eq!(r.affine_count, 4);
        let r = superelliptic_count(2, &poly_from_ints(&f5, &[0, 0, 1]), &f5).unwrap();
        assert_eq!(r.affine_count, 9);
        let f7 = build_prime_field(7).unwrap();
        // x⁴(1-x)³(1-2x) expanded.
        let g = [vec![0, 0, 0, 0, 1], vec![1, -3, 3, -1], vec![1, -2]]
            .iter()
            .fold(vec![1i64], |acc, h| {
                let mut out = vec![0i64; acc.len() + h.len() - 1];
                for (i, a) in acc.iter().enumerate() {
                    for (j, b) in h.iter().enumerate() {
                        out[i + j] += a * b;
                    }
                }
                out
            });
        let f = poly_from_ints(&f7, &g);
        let r = superelliptic_count(6, &f, &f7).unwrap();
        assert_eq!(r.affine_count, direct_superelliptic(6, &f, &f7));
        assert_eq!(r.char_decomposition.len(), 6);
        assert!(superelliptic_count(4, &f, &f7).is_err());
        let f9 = field_of_order(9).unwrap();
        for n in [2, 4, 8] {
            let f = poly_from_ints(&f9, &[1, 2, 0, 1]);
            assert_eq!(superelliptic_count(n, &f, &f9).unwrap().affine_count, direct_superelliptic(n, &f, &f9));
        }
    }

    #[test]
    fn genus2_examples() {
        let cb1 = [1, 0, 0, 1, 0, 0, 1];
        let l = genus2_lpoly(&cb1, 5).unwrap();
        assert_eq!(l.a1, 0);
        assert!(square_root_quartic(&genus2_lpoly(&cb1, 7).unwrap()).is_some());
        assert_eq!(genus2_lpoly(&cb1, 11).unwrap().a1, 0);
        assert!(matches!(genus2_lpoly(&[1, 0, 0, 2, 0, 0, 1], 5), Err(Error::Domain(_))));
        assert!(genus2_lpoly(&cb1, 3).is_err());
    }

    #[test]
    fn genus2_matches_direct_count_over_cubic_extension() {
        // #C(F_{p³}) = p³ + 1 - s3 with s3 from Newton's identities.
        for (f, p) in [([1i64, 0, 0, 1, 0, 0, 1], 5u64), ([1, 2, 0, 3, 0, 1, 1], 7), ([1, 0, 0, 3, 0, 0, 1], 11)] {
            let l = genus2_lpoly(&f, p).unwrap();
            let (e1, e2, e3) = (-l.a1, l.a2, -(p as i64) * l.a1);
            let s1 = e1;
            let s2 = e1 * s1 - 2 * e2;
            let s3 = e1 * s2 - e2 * s1 + 3 * e3;
            let ctx = build_extension(p, &find_irreducible(p, 3, 1)).unwrap();
            let n3 = hyperelliptic_count(&ctx, &poly_from_ints(&ctx, &f));
            assert_eq!(n3, (p as i64).pow(3) + 1 - s3, "f={f:?} p={p}");
        }
    }

    #[test]
    fn cb_examples() {
        let r = cb_structure_check(1, 5);
        assert!(r.ok && r.lpoly.as_ref().unwrap().a1 == 0);
        let r = cb_structure_check(1, 7);
        assert!(r.ok && r.square.is_some());
        let r = cb_structure_check(3, 11);
        assert!(r.ok && r.lpoly.unwrap().a1 == 0);
        assert!(!cb_structure_check(3, 5).ok);
        assert!(!cb_is_good(5, 7));
    }

    #[test]
    fn involution_examples() {
        assert!(involution_check(1, 5).unwrap().ok);
        assert!(involution_check(0, 7).unwrap().ok);
        assert!(involution_check(2, 25).unwrap().ok);
        assert!(involution_check(1, 4).is_err());
    }

    #[test]
    fn en_symmetry_examples() {
        for (n, q) in [(2, 5), (3, 13), (4, 17), (3, 7), (2, 9)] {
            let r = en_symmetry_check(n, q).unwrap();
            assert!(r.ok, "n={n} q={q}");
            // Over F_5 no (x, y) makes f_2 a nonzero square.
            assert_eq!(r.points == 0, q == 5);
        }
        assert!(matches!(en_symmetry_check(3, 11), Err(Error::Domain(_))));
    }

    #[test]
    fn a_fails_with_a_non_primitive_square_root() {
        // For odd n, -ω₂ squares to ω as well but has order n; A then leaves the surface.
        let ctx = field_of_order(13).unwrap();
        let n = 3;
        let points = en_points(&ctx, n).unwrap();
        let omega2 = ctx.exp(12 / 6);
        let wrong = ctx.neg(&omega2);
        assert_eq!(ctx.mul(&wrong, &wrong), ctx.mul(&omega2, &omega2));
        assert!(points.iter().all(|pt| on_en(&ctx, n, &map_a(&ctx, &omega2, pt).unwrap())));
        assert!(points.iter().any(|pt| !on_en(&ctx, n, &map_a(&ctx, &wrong, pt).unwrap())));
    }

    #[test]
    fn frobenius_commutation_examples() {
        for (n, p) in [(2, 5), (3, 7), (4, 5), (6, 7)] {
            assert!(frobenius_commutation_check(n, p, 2).unwrap().ok, "n={n} p={p}");
        }
        assert!(frobenius_commutation_check(3, 5, 2).unwrap().ok);
        assert!(frobenius_commutation_check(5, 7, 2).is_err());
    }

    #[test]
    fn log_arithmetic_matches_field_arithmetic() {
        for (q, n) in [(13u64, 3u64), (25, 4), (27, 2), (49, 8)] {
            let ctx = field_of_order(q).unwrap();
            let lf = LogField::new(&ctx).unwrap();
            let to = |e: u64| if e == ZERO { ctx.zero() } else { ctx.exp(e) };
            let w = lf.m / (2 * n);
            let mut pts = lf.en_points(n);
            let mut direct: Vec<Point> = en_points(&ctx, n).unwrap();
            assert_eq!(pts.len(), direct.len());
            let key = |p: &Point| (ctx.encode(&p.0), ctx.encode(&p.1), ctx.encode(&p.2));
            let mut a: Vec<_> = pts.iter().map(|&[x, y, s]| key(&(to(x), to(y), to(s)))).collect();
            let mut b: Vec<_> = direct.iter().map(key).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
            pts.truncate(200);
            direct = pts.iter().map(|&[x, y, s]| (to(x), to(y), to(s))).collect();
            for (lp, fp) in pts.iter().zip(&direct) {
                let l = lf.map_a(w, *lp).map(|[x, y, s]| (to(x), to(y), to(s)));
                assert_eq!(l, map_a(&ctx, &ctx.exp(w), fp));
                let [x, y, s] = lf.frob(*lp);
                assert_eq!((to(x), to(y), to(s)), frob_point(&ctx, fp));
                let [x, y, s] = lf.zeta_pow(lf.pow(w, 2), n, 1, *lp);
                assert_eq!((to(x), to(y), to(s)), zeta_pow(&ctx, &ctx.exp(2 * w), n, 1, fp));
            }
        }
    }

    #[test]
    fn en_points_match_direct_enumeration() {
        let ctx = field_of_order(13).unwrap();
        let pts = en_points(&ctx, 4).unwrap();
        let mut direct = 0;
        for x in ctx.elements() {
            for y in ctx.elements() {
                let v = f_n(&ctx, 4, &x, &y);
                if !v.is_zero() {
                    direct += ctx.elements().filter(|s| ctx.pow(s, 4) == v).count();
                }
            }
        }
        assert_eq!(pts.len(), direct);
    }
}
