//! O(q log q) evaluation through Gauss and Jacobi sums.
//!
//! Characters of k^× are χ_k(g^j) = e^{2πi jk/(q-1)}. With A = ξ^i = χ_a,
//! expanding Ā(1 - xy) multiplicatively gives
//!
//!   S = 1/(q-1) · Σ_c J(χ_{-c}, χ_{-a}) · J(χ_{c-a}, χ_a)²,
//!
//! J(X, Y) = Σ_{x ≠ 0,1} X(x) Y(1-x). All Gauss sums come from one DFT of the
//! additive character along the powers of g.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::arith::units_mod;
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::finite_fields::FieldCtx;
use crate::places::Place;

/// Largest multiplicative group the pipeline accepts.
pub const GREENE_CAP: u64 = 1 << 24;

/// Largest allowed distance of a recovered coefficient from an integer.
pub const ROUNDING_MARGIN: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dft {
    Fft,
    /// Direct O(m²) transform, for cross-checking.
    Naive,
}

/// g(χ_k) for 0 <= k < q-1.
pub fn gauss_sums(ctx: &FieldCtx, dft: Dft) -> Result<Vec<Complex64>> {
    let m = ctx.q() - 1;
    if m > GREENE_CAP {
        return Err(Error::capacity(format!("DFT length {m} exceeds {GREENE_CAP}")));
    }
    let p = ctx.p() as f64;
    let psi: Vec<Complex64> = ctx
        .trace_of_powers()
        .into_iter()
        .map(|tr| Complex64::from_polar(1.0, 2.0 * PI * tr as f64 / p))
        .collect();
    Ok(match dft {
        Dft::Fft => {
            let mut buf = psi;
            FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
            buf
        }
        Dft::Naive => {
            let m = m as usize;
            (0..m)
                .map(|k| {
                    psi.iter()
                        .enumerate()
                        .map(|(j, x)| x * Complex64::from_polar(1.0, 2.0 * PI * ((j * k) % m) as f64 / m as f64))
                        .sum()
                })
                .collect()
        }
    })
}

/// Jacobi sums J(χ_u, χ_v) from Gauss sums, including the degenerate cases.
pub struct Jacobi<'a> {
    pub g: &'a [Complex64],
    pub q: u64,
}

impl Jacobi<'_> {
    fn m(&self) -> usize {
        self.g.len()
    }

    /// χ_u(-1).
    pub fn sign(&self, u: usize) -> f64 {
        if self.q % 2 == 0 || u % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn j(&self, u: usize, v: usize) -> Complex64 {
        let m = self.m();
        let (u, v) = (u % m, v % m);
        match (u == 0, v == 0) {
            (true, true) => Complex64::new(self.q as f64 - 2.0, 0.0),
            (true, false) | (false, true) => Complex64::new(-1.0, 0.0),
            _ if (u + v) % m == 0 => Complex64::new(-self.sign(u), 0.0),
            _ => self.g[u] * self.g[v] / self.g[(u + v) % m],
        }
    }
}

/// Complex value of S for A = χ_a.
fn hypergeometric_sum(jac: &Jacobi, inv_g: &[Complex64], a: usize) -> Complex64 {
    let g = jac.g;
    let m = g.len();
    let neg = |k: usize| (m - k % m) % m;
    let special = |c: usize| c == 0 || c == a || c == neg(a);
    // Generic terms: J(χ_{-c}, χ_{-a}) J(χ_{c-a}, χ_a)²
    //   = g(-c) g(-a)/g(-c-a) · (g(c-a) g(a)/g(c))².
    let mut total = Complex64::new(0.0, 0.0);
    let mut chunk = Complex64::new(0.0, 0.0);
    for c in 0..m {
        if special(c) {
            continue;
        }
        let ca = (c + m - a) % m;
        let inner = g[ca] * inv_g[c];
        chunk += g[neg(c)] * inv_g[neg(c + a)] * inner * inner;
        if c % 4096 == 4095 {
            total += chunk;
            chunk = Complex64::new(0.0, 0.0);
        }
    }
    total += chunk;
    total *= g[neg(a)] * g[a] * g[a];
    let mut specials: Vec<usize> = vec![0, a, neg(a)];
    specials.sort_unstable();
    specials.dedup();
    for c in specials {
        let j2 = jac.j((c + m - a) % m, a);
        total += jac.j(neg(c), neg(a)) * j2 * j2;
    }
    total / m as f64
}

/// Complex values V[r] of S for the characters ξ^r, 1 <= r < n, where
/// ξ = χ_{t(q-1)/n} is the place's residue symbol.
fn symbol_power_values(pl: &Place, dft: Dft) -> Result<Vec<Complex64>> {
    let ctx = pl.ctx();
    let n = pl.n() as usize;
    let g = gauss_sums(ctx, dft)?;
    let m = g.len();
    let inv_g: Vec<Complex64> = g.iter().map(|z| z.inv()).collect();
    let jac = Jacobi { g: &g, q: ctx.q() };
    let step = m / n;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (r, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = hypergeometric_sum(&jac, &inv_g, r * step);
    }
    Ok(out)
}

/// Pseudo-inverse of the real 2φ × φ system mapping power-basis
/// coefficients to the embeddings j ∈ (Z/n)^× (real parts, then imaginary).
fn embedding_pinv(n: u64) -> Arc<DMatrix<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<DMatrix<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().unwrap().get(&n) {
        return m.clone();
    }
    let units = units_mod(n);
    let phi = units.len();
    let mut a = DMatrix::<f64>::zeros(2 * phi, phi);
    for (r, &j) in units.iter().enumerate() {
        for k in 0..phi {
            let ang = 2.0 * PI * ((j as usize * k) % n as usize) as f64 / n as f64;
            a[(r, k)] = ang.cos();
            a[(phi + r, k)] = ang.sin();
        }
    }
    let pinv = Arc::new(a.pseudo_inverse(1e-12).expect("embedding matrix has full rank"));
    cache.lock().unwrap().insert(n, pinv.clone());
    pinv
}

/// Rounds complex embeddings (ordered as `units_mod(n)`) to the element of
/// Z[ζ_n] they represent; fails if any coordinate or the reconstruction is
/// off by more than the margins.
pub fn round_to_cyclotomic(n: u64, values: &[Complex64], scale: f64) -> Result<(CycInt, f64)> {
    let phi = values.len();
    let pinv = embedding_pinv(n);
    let b = DMatrix::from_iterator(2 * phi, 1, values.iter().map(|z| z.re).chain(values.iter().map(|z| z.im)));
    let coords = pinv.as_ref() * b;
    let mut margin: f64 = 0.0;
    let mut ints = Vec::with_capacity(phi);
    for k in 0..phi {
        let x = coords[(k, 0)];
        if !x.is_finite() || x.abs() > 9.0e15 {
            return Err(Error::Precision(format!("coordinate {x} not representable")));
        }
        margin = margin.max((x - x.round()).abs());
        ints.push(BigInt::from(x.round() as i64));
    }
    if margin >= ROUNDING_MARGIN {
        return Err(Error::Precision(format!("rounding margin {margin:.3e}")));
    }
    let z = CycInt::from_coeffs(n, ints)?;
    let residual = z
        .embeddings()
        .iter()
        .zip(values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if residual >= ROUNDING_MARGIN * scale.max(1.0) {
        return Err(Error::Precision(format!("residual {residual:.3e}")));
    }
    Ok((z, margin))
}

/// S_i for 1 <= i < n (index 0 unused, zero), with the worst rounding margin.
pub fn all_sums(pl: &Place, dft: Dft) -> Result<(Vec<CycInt>, f64)> {
    let n = pl.n();
    let values = symbol_power_values(pl, dft)?;
    let t = pl.generator_index();
    let units = units_mod(n);
    let mut out = vec![CycInt::zero(n)];
    let mut worst: f64 = 0.0;
    for i in 1..n {
        // Embedding j sends ξ to ξ^j, i.e. r = i·j·t.
        let emb: Vec<Complex64> = units.iter().map(|&j| values[((i * j % n) * t % n) as usize]).collect();
        let (z, margin) = round_to_cyclotomic(n, &emb, pl.np() as f64)?;
        worst = worst.max(margin);
        out.push(z);
    }
    Ok((out, worst))
}

/// Σ_{x ≠ 0,1} χ_u(x) χ_v(1-x) directly, for testing the degenerate cases.
pub fn jacobi_direct(ctx: &FieldCtx, u: usize, v: usize) -> Complex64 {
    let m = (ctx.q() - 1) as usize;
    let one = ctx.one();
    let chi = |k: usize, e: u64| Complex64::from_polar(1.0, 2.0 * PI * ((k as u64 * e) % m as u64) as f64 / m as f64);
    ctx.elements()
        .filter(|x| !x.is_zero() && *x != one)
        .map(|x| {
            let ex = ctx.dlog(&x).unwrap();
            let ey = ctx.dlog(&ctx.sub(&one, &x)).unwrap();
            chi(u, ex) * chi(v, ey)
        })
        .sum()
}
