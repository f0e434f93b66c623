//! O(q²) evaluation through Zech logarithms.
//!
//! With x = g^a, y = g^b, 1 - g^k = g^{z(k)} and c = a + b mod (q-1),
//! f_n(x, y) = g^{(n-1)(a+b) + z(a) + z(b) + (n-1) z(c)}, and the symbol index
//! is t times that exponent mod n. Splitting per-coordinate terms gives
//! index = u(a) + u(b) + w(c) mod n with u, w precomputed.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::places::Place;

struct Prepared {
    n: usize,
    /// u[k] = t((n-1)k + z(k)) mod n, for 0 < k < q-1.
    u: Vec<u16>,
    /// w[k] = t(n-1) z(k) mod n, for 0 < k < q-1.
    w: Vec<u16>,
}

fn prepare(pl: &Place) -> Result<Prepared> {
    let ctx = pl.ctx();
    if !ctx.has_tables() {
        return Err(Error::capacity(format!(
            "brute force needs log tables; field of size {} is above the cap",
            ctx.q()
        )));
    }
    let n = pl.n();
    if n > u16::MAX as u64 / 3 {
        return Err(Error::capacity(format!("level {n} too large for the histogram kernel")));
    }
    let t = pl.generator_index();
    let z = ctx.zech_table();
    let m = z.len();
    let mut u = vec![0u16; m];
    let mut w = vec![0u16; m];
    for k in 1..m {
        let zk = z[k] as u64;
        u[k] = ((t * (((n - 1) * k as u64 + zk) % n)) % n) as u16;
        w[k] = ((t * ((n - 1) * zk % n)) % n) as u16;
    }
    Ok(Prepared { n: n as usize, u, w })
}

/// Adds the contributions of rows a in `rows` to `acc` (length 3n, unfolded).
fn accumulate(pr: &Prepared, rows: std::ops::Range<usize>, acc: &mut [u64]) {
    let m = pr.u.len();
    for a in rows {
        if a == 0 {
            continue;
        }
        let ua = pr.u[a] as usize;
        // b in 1..m-a: c = a + b in a+1..m.
        for (&ub, &wc) in pr.u[1..m - a].iter().zip(&pr.w[a + 1..m]) {
            acc[ua + ub as usize + wc as usize] += 1;
        }
        // b = m - a gives c = 0 (xy = 1); b in m-a+1..m: c = a + b - m in 1..a.
        for (&ub, &wc) in pr.u[m - a + 1..m].iter().zip(&pr.w[1..a]) {
            acc[ua + ub as usize + wc as usize] += 1;
        }
    }
}

fn fold(n: usize, acc: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for (k, &c) in acc.iter().enumerate() {
        out[k % n] += c;
    }
    out
}

/// `counts[k]` = #{(x, y) : f_n(x, y) ≠ 0, ξ(f_n(x, y)) = ζ_n^k}.
pub fn histogram(pl: &Place) -> Result<Vec<u64>> {
    let pr = prepare(pl)?;
    let mut acc = vec![0u64; 3 * pr.n];
    accumulate(&pr, 0..pr.u.len(), &mut acc);
    Ok(fold(pr.n, &acc))
}

/// The same histogram over an explicit partition of the rows into `chunks`
/// pieces, evaluated in parallel and merged.
pub fn histogram_chunked(pl: &Place, chunks: usize) -> Result<Vec<u64>> {
    let pr = prepare(pl)?;
    let m = pr.u.len();
    let chunks = chunks.clamp(1, m.max(1));
    let bounds: Vec<(usize, usize)> = (0..chunks).map(|c| (c * m / chunks, (c + 1) * m / chunks)).collect();
    let partials: Vec<Vec<u64>> = bounds
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut acc = vec![0u64; 3 * pr.n];
            accumulate(&pr, lo..hi, &mut acc);
            fold(pr.n, &acc)
        })
        .collect();
    Ok(partials.into_iter().fold(vec![0u64; pr.n], |mut tot, part| {
        for (t, p) in tot.iter_mut().zip(part) {
            *t += p;
        }
        tot
    }))
}
