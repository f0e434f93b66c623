//! Small-integer number theory on `u64`.

use num_integer::Integer;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is exact for all of `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime factor, or `None` for n < 2.
pub fn smallest_factor(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    if n % 2 == 0 {
        return Some(2);
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return Some(d);
        }
        d += 2;
    }
    Some(n)
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    while let Some(d) = smallest_factor(n) {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        out.push((d, e));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (pr, _)| acc / pr * (pr - 1))
}

pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds: Vec<u64> = (1..=n).take_while(|d| d * d <= n).filter(|d| n % d == 0).collect();
    let big: Vec<u64> = ds.iter().rev().map(|d| n / d).filter(|&e| e * e != n).collect();
    ds.extend(big);
    ds
}

/// Multiplicative order of `a` modulo `n`; requires gcd(a, n) = 1.
pub fn mult_order(a: u64, n: u64) -> u64 {
    assert!(n >= 1 && a.gcd(&n) == 1, "mult_order needs a unit");
    if n == 1 {
        return 1;
    }
    let mut ord = euler_phi(n);
    for (pr, _) in factorize(ord) {
        while ord % pr == 0 && pow_mod(a, ord / pr, n) == 1 {
            ord /= pr;
        }
    }
    ord
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Residues in 1..n coprime to n (for n = 1, just 1).
pub fn units_mod(n: u64) -> Vec<u64> {
    (1..n.max(2)).filter(|j| j.gcd(&n) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_orders() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(3_215_031_751));
        assert_eq!(mult_order(7, 4), 2);
        assert_eq!(mult_order(2, 7), 3);
        assert_eq!(mult_order(3, 7), 6);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(9), vec![1, 3, 9]);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(units_mod(8), vec![1, 3, 5, 7]);
        assert_eq!(units_mod(2), vec![1]);
        assert_eq!(units_mod(1), vec![1]);
    }
}
