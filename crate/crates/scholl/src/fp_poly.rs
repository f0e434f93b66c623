//! Dense polynomials over F_p as coefficient vectors, constant term first.
//! The zero polynomial is the empty vector.

use crate::arith::{inv_mod, mul_mod};

pub type Poly = Vec<u64>;

pub fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut out: Poly = (0..a.len().max(b.len()))
        .map(|k| (a.get(k).copied().unwrap_or(0) + b.get(k).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut out);
    out
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut out: Poly = (0..a.len().max(b.len()))
        .map(|k| (a.get(k).copied().unwrap_or(0) + p - b.get(k).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut out);
    out
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + x as u128 * y as u128) % p as u128;
        }
    }
    let mut out: Poly = acc.into_iter().map(|c| c as u64).collect();
    trim(&mut out);
    out
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Poly {
    let mut out: Poly = a.iter().map(|&x| mul_mod(x, c, p)).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = inv_mod(b[db], p).expect("leading coefficient invertible");
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quo = vec![0u64; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - db;
        quo[shift] = c;
        for (k, &bk) in b[..=db].iter().enumerate() {
            r[shift + k] = (r[shift + k] + p - mul_mod(c, bk, p)) % p;
        }
        trim(&mut r);
    }
    trim(&mut quo);
    (quo, r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(&a[..=d], inv_mod(a[d], p).expect("unit"), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Poly {
    let mut acc: Poly = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// `X^(p^k) mod m`, by k successive p-th powerings.
pub fn frobenius_power_of_x(k: usize, m: &[u64], p: u64) -> Poly {
    let mut x = rem(&[0, 1], m, p);
    for _ in 0..k {
        x = powmod(&x, p, m, p);
    }
    x
}

/// Irreducibility test by distinct-degree factorization. On failure returns a
/// nontrivial monic factor.
pub fn irreducibility_witness(m: &[u64], p: u64) -> Result<(), Poly> {
    let m = monic(m, p);
    let d = degree(&m).expect("nonzero modulus");
    if d == 0 {
        return Err(m);
    }
    if d == 1 {
        return Ok(());
    }
    let dm = derivative(&m, p);
    if dm.is_empty() {
        // m = h(X)^p with h read off every p-th coefficient.
        let h: Poly = m.iter().step_by(p as usize).copied().collect();
        return Err(monic(&h, p));
    }
    let g = gcd(&m, &dm, p);
    if degree(&g).unwrap_or(0) > 0 {
        return Err(g);
    }
    let x: Poly = vec![0, 1];
    let mut frob = rem(&x, &m, p);
    for k in 1..=d / 2 {
        frob = powmod(&frob, p, &m, p);
        let g = gcd(&m, &sub(&frob, &x, p), p);
        match degree(&g) {
            Some(dg) if dg > 0 && dg < d => return Err(g),
            Some(dg) if dg == d => {
                let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(p);
                return Err(equal_degree_split(&m, k, p, &mut rng).remove(0));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Splits a monic squarefree `m` whose irreducible factors all have degree `k`.
/// Factors come back monic, in no particular order.
pub fn equal_degree_split<R: rand::Rng>(m: &[u64], k: usize, p: u64, rng: &mut R) -> Vec<Poly> {
    let d = degree(m).expect("nonzero");
    if d == k {
        return vec![monic(m, p)];
    }
    loop {
        let r: Poly = {
            let mut r: Poly = (0..d).map(|_| rng.random_range(0..p)).collect();
            trim(&mut r);
            r
        };
        if degree(&r).unwrap_or(0) == 0 {
            continue;
        }
        let probe = if p == 2 {
            // Absolute trace to F_2: 0 or 1 on each residue field.
            let mut t = r.clone();
            let mut acc = r.clone();
            for _ in 1..k {
                t = mulmod(&t, &t, m, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            // r^((p^k-1)/2) = (prod_j r^(p^j))^((p-1)/2).
            let mut t = r.clone();
            let mut norm = r.clone();
            for _ in 1..k {
                t = powmod(&t, p, m, p);
                norm = mulmod(&norm, &t, m, p);
            }
            sub(&powmod(&norm, (p - 1) / 2, m, p), &[1], p)
        };
        let g = gcd(m, &probe, p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < d {
            let (h, _) = divrem(m, &g, p);
            let mut out = equal_degree_split(&g, k, p, rng);
            out.extend(equal_degree_split(&monic(&h, p), k, p, rng));
            return out;
        }
    }
}

pub fn derivative(a: &[u64], p: u64) -> Poly {
    let mut out: Poly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| mul_mod(c, k as u64 % p, p))
        .collect();
    trim(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_round_trip() {
        let p = 7;
        let a = vec![3, 0, 5, 1, 6];
        let b = vec![2, 1, 1];
        let (q, r) = divrem(&a, &b, p);
        assert_eq!(add(&mul(&q, &b, p), &r, p), a);
        assert!(degree(&r).map_or(true, |d| d < 2));
    }

    #[test]
    fn irreducibility_accepts_and_rejects() {
        assert!(irreducibility_witness(&[1, 0, 1], 7).is_ok());
        assert!(irreducibility_witness(&[1, 1, 0, 0, 1], 2).is_ok());
        let f = irreducibility_witness(&[4, 0, 1], 5).unwrap_err();
        assert_eq!(degree(&f), Some(1));
        // (X^2+1)^2 over F_3: squarefree test catches the repeated factor.
        let sq = mul(&[1, 0, 1], &[1, 0, 1], 3);
        let f = irreducibility_witness(&sq, 3).unwrap_err();
        assert_eq!(f, vec![1, 0, 1]);
        // Product of two distinct quadratics over F_3.
        let two = mul(&[1, 0, 1], &[2, 1, 1], 3);
        let f = irreducibility_witness(&two, 3).unwrap_err();
        assert_eq!(degree(&f), Some(2));
    }
}
