//! Primes of Q(ζ_n) above p ∤ n and their n-th power residue symbols.

use std::sync::Arc;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::arith::units_mod;
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::finite_fields::{build_extension, factor_cyclotomic, find_irreducible, FieldCtx, FqElem};
use crate::fp_poly::Poly;

/// A place 𝔭 of Q(ζ_n) over p, with residue field `ctx` and ω the image of
/// ζ_n. For `ext > 1` the residue field is the degree-`ext` extension of k_𝔭
/// (the unique place above 𝔭 in an unramified extension of that degree).
#[derive(Clone, Debug)]
pub struct Place {
    n: u64,
    p: u64,
    index: usize,
    factor: Poly,
    ext: usize,
    ctx: Arc<FieldCtx>,
    omega: FqElem,
    /// ξ(g) = ζ_n^t for the field generator g.
    t: u64,
}

pub fn enumerate_places(n: u64, p: u64) -> Result<Vec<Place>> {
    factor_cyclotomic(n, p)?
        .into_iter()
        .enumerate()
        .map(|(index, factor)| {
            let ctx = Arc::new(build_extension(p, &factor)?);
            let omega = ctx.x();
            Place::assemble(n, index, factor, 1, ctx, omega)
        })
        .collect()
}

impl Place {
    fn assemble(n: u64, index: usize, factor: Poly, ext: usize, ctx: Arc<FieldCtx>, omega: FqElem) -> Result<Self> {
        let q = ctx.q();
        if (q - 1) % n != 0 {
            return Err(Error::domain(format!("{n} does not divide {q} - 1")));
        }
        let c = ctx.pow(ctx.generator(), (q - 1) / n);
        let t = discrete_log_in(&ctx, &omega, n, &c)
            .ok_or_else(|| Error::consistency("omega does not generate the n-th roots of unity"))?;
        Ok(Place { n, p: ctx.p(), index, factor, ext, ctx, omega, t })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn factor(&self) -> &[u64] {
        &self.factor
    }

    /// Residue degree f of the underlying place of Q(ζ_n).
    pub fn residue_degree(&self) -> usize {
        self.factor.len() - 1
    }

    pub fn ext(&self) -> usize {
        self.ext
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn omega(&self) -> &FqElem {
        &self.omega
    }

    /// Cardinality of this place's residue field.
    pub fn np(&self) -> u64 {
        self.ctx.q()
    }

    /// The exponent t with ξ(g) = ζ_n^t.
    pub fn generator_index(&self) -> u64 {
        self.t
    }

    /// k with ξ(a) = ζ_n^k, or `None` for a = 0.
    pub fn symbol_index(&self, a: &FqElem) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        if self.ctx.has_tables() {
            let e = self.ctx.dlog(a).expect("tables present");
            return Some((self.t as u128 * e as u128 % self.n as u128) as u64);
        }
        let c = self.ctx.pow(a, (self.ctx.q() - 1) / self.n);
        Some(discrete_log_in(&self.ctx, &self.omega, self.n, &c).expect("a^((q-1)/n) is an n-th root of unity"))
    }

    /// (a/𝔭)_n ≡ a^{(N𝔭-1)/n}, as ζ_n^k (0 for a = 0).
    pub fn residue_symbol(&self, a: &FqElem) -> CycInt {
        match self.symbol_index(a) {
            None => CycInt::zero(self.n),
            Some(k) => CycInt::zeta_pow(self.n, k as i64),
        }
    }

    pub fn minus_one_symbol(&self) -> CycInt {
        self.residue_symbol(&self.ctx.from_i64(-1))
    }

    /// The same place seen over the degree-k extension of its residue field.
    /// The extension field is built independently over F_p and ω relocated
    /// as a root of the same factor; any root serves, as every sum formed
    /// from the symbol is invariant under Frobenius.
    pub fn extension(&self, k: usize) -> Result<Place> {
        if k == 1 {
            return Ok(self.clone());
        }
        let deg = self.ctx.degree() * k;
        let modulus = find_irreducible(self.p, deg, 0x5eed ^ (self.index as u64) << 16);
        let big = Arc::new(build_extension(self.p, &modulus)?);
        let q = big.q();
        let c = big.pow(big.generator(), (q - 1) / self.n);
        let omega = units_mod(self.n)
            .into_iter()
            .map(|u| big.pow(&c, u))
            .find(|w| eval_poly(&big, &self.factor, w).is_zero())
            .ok_or_else(|| Error::consistency("factor has no root in the extension field"))?;
        Place::assemble(self.n, self.index, self.factor.clone(), self.ext * k, big, omega)
    }

    /// The place of Q(ζ_m) below this one (m | n), viewed over this place's
    /// residue field: enumerated independently, matched by ω_m = ω^{n/m},
    /// then extended to the same field size.
    pub fn below(&self, m: u64) -> Result<Place> {
        if m < 2 || self.n % m != 0 {
            return Err(Error::domain(format!("{m} is not a proper level below {}", self.n)));
        }
        let target = self.ctx.pow(&self.omega, self.n / m);
        let lower = enumerate_places(m, self.p)?;
        let pl = lower
            .into_iter()
            .find(|pl| eval_poly(&self.ctx, &pl.factor, &target).is_zero())
            .ok_or_else(|| Error::consistency("no place below matches ω^(n/m)"))?;
        let total = self.ctx.degree();
        let have = pl.ctx.degree();
        if total % have != 0 {
            return Err(Error::consistency("residue degrees are not nested"));
        }
        pl.extension(total / have)
    }

    /// Re-pins ζ_n to ω^p (a Frobenius conjugate root of the same factor).
    pub fn rebased_by_frobenius(&self) -> Result<Place> {
        let omega = self.ctx.frobenius(&self.omega);
        Place::assemble(self.n, self.index, self.factor.clone(), self.ext, self.ctx.clone(), omega)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "n": self.n,
            "p": self.p,
            "factor": self.factor,
            "Np": self.np(),
            "index": self.index,
        });
        if self.ext > 1 {
            v["ext"] = json!(self.ext);
        }
        v
    }
}

/// Places of compatible data must agree on (n, p, index, ext).
pub fn same_place(a: &Place, b: &Place) -> bool {
    a.n == b.n && a.p == b.p && a.index == b.index && a.ext == b.ext
}

fn eval_poly(ctx: &FieldCtx, poly: &[u64], x: &FqElem) -> FqElem {
    poly.iter().rev().fold(ctx.zero(), |acc, &c| ctx.add(&ctx.mul(&acc, x), &ctx.from_u64(c)))
}

/// k in [0, n) with ω^k = c, if any.
fn discrete_log_in(ctx: &FieldCtx, omega: &FqElem, n: u64, c: &FqElem) -> Option<u64> {
    let mut cur = ctx.one();
    for k in 0..n {
        if &cur == c {
            return Some(k);
        }
        cur = ctx.mul(&cur, omega);
    }
    None
}

/// Number of places and residue degree for (n, p) without building fields.
pub fn place_shape(n: u64, p: u64) -> (u64, u64) {
    let f = crate::arith::mult_order(p % n, n);
    (crate::arith::euler_phi(n) / f, f)
}

/// Whether p is a good prime for level n.
pub fn is_good(n: u64, p: u64) -> bool {
    n.gcd(&p) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_examples() {
        let pls = enumerate_places(5, 11).unwrap();
        assert_eq!(pls.len(), 4);
        let omegas: Vec<u64> = pls.iter().map(|pl| pl.omega().coeffs()[0]).collect();
        assert_eq!(omegas, vec![3, 4, 5, 9]);
        assert!(pls.iter().all(|pl| pl.np() == 11));
        let pls = enumerate_places(4, 7).unwrap();
        assert_eq!(pls.len(), 1);
        assert_eq!(pls[0].np(), 49);
        let omegas: Vec<u64> =
            enumerate_places(3, 7).unwrap().iter().map(|pl| pl.omega().coeffs()[0]).collect();
        assert_eq!(omegas, vec![2, 4]);
        assert!(matches!(enumerate_places(6, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn symbol_examples() {
        let pl = &enumerate_places(2, 5).unwrap()[0];
        let ctx = pl.ctx();
        assert_eq!(pl.residue_symbol(&ctx.one()), CycInt::one(2));
        assert_eq!(pl.residue_symbol(&ctx.from_u64(4)), CycInt::one(2));
        assert_eq!(pl.residue_symbol(&ctx.from_u64(2)), CycInt::from_int(2, -1));
        assert!(pl.residue_symbol(&ctx.zero()).is_zero());
    }

    #[test]
    fn minus_one_examples() {
        for pl in enumerate_places(3, 7).unwrap() {
            assert_eq!(pl.minus_one_symbol(), CycInt::one(3));
        }
        assert_eq!(enumerate_places(4, 5).unwrap()[0].minus_one_symbol(), CycInt::from_int(4, -1));
        assert_eq!(enumerate_places(2, 13).unwrap()[0].minus_one_symbol(), CycInt::one(2));
    }

    #[test]
    fn symbol_matches_congruence_definition() {
        for (n, p) in [(3u64, 7u64), (4, 3), (5, 2), (6, 5), (8, 3), (12, 5)] {
            for pl in enumerate_places(n, p).unwrap() {
                let ctx = pl.ctx();
                let g = ctx.generator();
                let xi_g = pl.residue_symbol(g);
                assert_eq!(xi_g.pow(n as u32), CycInt::one(n));
                for (l, _) in crate::arith::factorize(n) {
                    assert_ne!(xi_g.pow((n / l) as u32), CycInt::one(n));
                }
                for a in ctx.elements().skip(1) {
                    let k = pl.symbol_index(&a).unwrap();
                    assert_eq!(ctx.pow(pl.omega(), k), ctx.pow(&a, (ctx.q() - 1) / n));
                }
            }
        }
    }

    #[test]
    fn table_free_symbols_agree() {
        // Same field without tables: symbol_index falls back to exponentiation.
        let pl = &enumerate_places(7, 2).unwrap()[0];
        let bare = Arc::new(
            crate::finite_fields::build_extension_with_cap(2, pl.factor(), 1).unwrap(),
        );
        let slow = Place::assemble(7, 0, pl.factor().to_vec(), 1, bare, pl.ctx().x()).unwrap();
        for a in pl.ctx().elements() {
            assert_eq!(pl.symbol_index(&a), slow.symbol_index(&a));
        }
    }

    #[test]
    fn frobenius_rebasing() {
        for (n, p) in [(4u64, 3u64), (5, 2), (7, 2), (8, 5)] {
            for pl in enumerate_places(n, p).unwrap() {
                let rb = pl.rebased_by_frobenius().unwrap();
                let ctx = pl.ctx();
                for a in ctx.elements() {
                    assert_eq!(rb.residue_symbol(&ctx.frobenius(&a)), pl.residue_symbol(&a));
                }
            }
        }
    }

    #[test]
    fn extensions_and_levels_below() {
        let pl = &enumerate_places(3, 7).unwrap()[1];
        let e2 = pl.extension(2).unwrap();
        assert_eq!(e2.np(), 49);
        assert_eq!(e2.ext(), 2);
        assert_eq!(e2.ctx().pow(e2.omega(), 3), e2.ctx().one());
        let top = &enumerate_places(4, 3).unwrap()[0];
        let low = top.below(2).unwrap();
        assert_eq!(low.n(), 2);
        assert_eq!(low.np(), 9);
        assert!(top.below(3).is_err());
    }
}
