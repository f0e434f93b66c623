//! Degree-2 Frobenius data X² - T X + D from sums over k_𝔭 and its
//! quadratic and cubic extensions.

use num_bigint::BigInt;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::arith::units_mod;
use crate::charsums::{all_sums, Method};
use crate::cyclotomic::{induce_to_integers, CycInt, IntPoly, QuadraticFactor};
use crate::error::{Error, Result};
use crate::places::{enumerate_places, Place};

pub const PURITY_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct FrobeniusDatum {
    pub n: u64,
    pub i: u64,
    pub place: Place,
    pub t: CycInt,
    pub s2: CycInt,
    pub d: CycInt,
}

impl FrobeniusDatum {
    /// D = (T² - S2)/2 with exact division and |σ_j(D)| = Np² for every j.
    pub fn assemble(place: &Place, i: u64, t: CycInt, s2: CycInt) -> Result<Self> {
        let n = place.n();
        let d = (&(&t * &t) - &s2)
            .div_exact(&BigInt::from(2))
            .ok_or_else(|| Error::consistency(format!("T² - S2 is odd at n={n} i={i}")))?;
        let np2 = (place.np() as f64).powi(2);
        if let Some(bad) = d.embeddings().into_iter().find(|z| (z.norm() - np2).abs() > PURITY_TOL * np2) {
            return Err(Error::consistency(format!(
                "determinant embedding of absolute value {} != {np2}",
                bad.norm()
            )));
        }
        Ok(FrobeniusDatum { n, i, place: place.clone(), t, s2, d })
    }

    pub fn quadratic(&self) -> QuadraticFactor {
        QuadraticFactor { t: self.t.clone(), d: self.d.clone() }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "i": self.i, "place": self.place.to_json(),
            "T": self.t.to_json(), "S2": self.s2.to_json(), "D": self.d.to_json(),
        })
    }
}

/// Sums S_i over the place's residue field, choosing the method by size.
pub fn sums_auto(pl: &Place) -> Result<Vec<CycInt>> {
    all_sums(pl, Method::auto(pl.np()))
}

pub fn frobenius_datum(pl: &Place, i: u64) -> Result<FrobeniusDatum> {
    let n = pl.n();
    if i == 0 || i >= n || num_integer::gcd(i, n) != 1 {
        return Err(Error::domain(format!("i = {i} is not a unit mod {n}")));
    }
    let t = sums_auto(pl)?[i as usize].clone();
    let s2 = sums_auto(&pl.extension(2)?)?[i as usize].clone();
    FrobeniusDatum::assemble(pl, i, t, s2)
}

/// Data for every unit i from one pass over each field.
pub fn frobenius_data_all(pl: &Place) -> Result<Vec<FrobeniusDatum>> {
    let base = sums_auto(pl)?;
    let ext = sums_auto(&pl.extension(2)?)?;
    units_mod(pl.n())
        .into_iter()
        .map(|i| FrobeniusDatum::assemble(pl, i, base[i as usize].clone(), ext[i as usize].clone()))
        .collect()
}

#[derive(Clone, Debug)]
pub struct NewtonReport {
    pub expected: CycInt,
    pub observed: CycInt,
    pub ok: bool,
}

impl NewtonReport {
    pub fn to_json(&self) -> Value {
        json!({"expected": self.expected.to_json(), "observed": self.observed.to_json(), "ok": self.ok})
    }
}

/// The cubic-extension sum against the power sum T³ - 3TD.
pub fn newton_cubic_check(d: &FrobeniusDatum) -> Result<NewtonReport> {
    let observed = sums_auto(&d.place.extension(3)?)?[d.i as usize].clone();
    Ok(newton_from_observed(d, observed))
}

pub fn newton_from_observed(d: &FrobeniusDatum, observed: CycInt) -> NewtonReport {
    let three = BigInt::from(3);
    let expected = &d.t.pow(3) - &(&d.t * &d.d).scale(&three);
    NewtonReport { ok: expected == observed, expected, observed }
}

#[derive(Clone, Debug)]
pub struct PurityReport {
    pub max_trace: f64,
    pub max_root_deviation: f64,
    pub ok: bool,
}

impl PurityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "approx": {"max_trace": self.max_trace, "max_root_deviation": self.max_root_deviation},
            "ok": self.ok,
        })
    }
}

/// Both roots of X² - σ_j(T) X + σ_j(D) have absolute value Np, for every j.
pub fn weight3_weil_verify(d: &FrobeniusDatum) -> PurityReport {
    weight3_purity(&d.t, &d.d, d.place.np(), PURITY_TOL)
}

pub fn weight3_purity(t: &CycInt, d: &CycInt, np: u64, tol: f64) -> PurityReport {
    let npf = np as f64;
    let mut max_trace: f64 = 0.0;
    let mut dev: f64 = 0.0;
    for (tj, dj) in t.embeddings().into_iter().zip(d.embeddings()) {
        max_trace = max_trace.max(tj.norm());
        let disc = (tj * tj - dj * 4.0).sqrt();
        for r in [(tj + disc) / 2.0, (tj - disc) / 2.0] {
            dev = dev.max((r.norm() - npf).abs() / npf);
        }
        dev = dev.max((dj.norm() - npf * npf).abs() / (npf * npf));
    }
    let ok = max_trace <= 2.0 * npf * (1.0 + tol) && dev <= tol;
    PurityReport { max_trace, max_root_deviation: dev, ok }
}

#[derive(Clone, Debug)]
pub struct InducedCharpoly {
    pub n: u64,
    pub p: u64,
    pub per_place: Vec<(Place, IntPoly)>,
    pub product: IntPoly,
    pub place_independent: bool,
}

impl InducedCharpoly {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "p": self.p,
            "places": self.per_place.iter().map(|(pl, poly)| json!({
                "place": pl.to_json(), "poly": poly.to_json(), "display": poly.to_string(),
            })).collect::<Vec<_>>(),
            "product": self.product.to_json(),
            "place_independent": self.place_independent,
        })
    }
}

/// Galois-orbit product of the quadratics of one place, after checking that
/// the data for each unit i is the conjugate of the data for i = 1.
pub fn induce_place(data: &[FrobeniusDatum]) -> Result<IntPoly> {
    let first = &data[0];
    for dat in data {
        let j = dat.i as i64;
        if dat.t != first.t.galois_conjugate(j)? || dat.d != first.d.galois_conjugate(j)? {
            return Err(Error::consistency(format!(
                "data at i={} is not the conjugate of the data at i=1",
                dat.i
            )));
        }
    }
    induce_to_integers(&data.iter().map(|d| d.quadratic()).collect::<Vec<_>>())
}

pub fn induce_charpoly(n: u64, p: u64) -> Result<InducedCharpoly> {
    let mut per_place = Vec::new();
    for pl in enumerate_places(n, p)? {
        let data = frobenius_data_all(&pl)?;
        let poly = induce_place(&data)?;
        per_place.push((pl, poly));
    }
    let place_independent = per_place.windows(2).all(|w| w[0].1 == w[1].1);
    let product = per_place
        .iter()
        .fold(IntPoly::from_i64s(&[1]), |acc, (_, poly)| acc.mul(poly));
    Ok(InducedCharpoly { n, p, per_place, product, place_independent })
}

/// Roots of a real quadratic as complex numbers (helper for reports).
pub fn quadratic_roots(t: Complex64, d: Complex64) -> [Complex64; 2] {
    let disc = (t * t - d * 4.0).sqrt();
    [(t + disc) / 2.0, (t - disc) / 2.0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn place(n: u64, p: u64, idx: usize) -> Place {
        enumerate_places(n, p).unwrap().remove(idx)
    }

    #[test]
    fn datum_examples() {
        let d = frobenius_datum(&place(2, 5, 0), 1).unwrap();
        assert_eq!(d.t, CycInt::from_int(2, -6));
        assert_eq!(d.s2, CycInt::from_int(2, -14));
        assert_eq!(d.d, CycInt::from_int(2, 25));
        let d = frobenius_datum(&place(2, 3, 0), 1).unwrap();
        assert!(d.t.is_zero());
        assert_eq!(d.d, d.s2.scale(&BigInt::from(-1)).div_exact(&BigInt::from(2)).unwrap());
        assert_eq!(d.d.as_integer().unwrap().magnitude(), &9u32.into());
        for pl in enumerate_places(3, 7).unwrap() {
            let d = frobenius_datum(&pl, 1).unwrap();
            for z in d.d.embeddings() {
                assert!((z.norm() - 49.0).abs() < 1e-9);
            }
        }
        assert!(frobenius_datum(&place(4, 5, 0), 2).is_err());
    }

    #[test]
    fn newton_examples() {
        let d = frobenius_datum(&place(2, 5, 0), 1).unwrap();
        let r = newton_cubic_check(&d).unwrap();
        assert_eq!(r.expected, CycInt::from_int(2, 234));
        assert!(r.ok);
        let d = frobenius_datum(&place(2, 3, 0), 1).unwrap();
        let r = newton_cubic_check(&d).unwrap();
        assert!(r.expected.is_zero() && r.ok);
        for pl in enumerate_places(3, 7).unwrap() {
            assert!(newton_cubic_check(&frobenius_datum(&pl, 1).unwrap()).unwrap().ok);
        }
    }

    #[test]
    fn induce_examples() {
        let r = induce_charpoly(2, 5).unwrap();
        assert_eq!(r.per_place[0].1.to_string(), "x^2 + 6x + 25");
        let r = induce_charpoly(3, 7).unwrap();
        assert!(r.place_independent);
        let poly = &r.per_place[0].1;
        assert_eq!(poly.degree(), 4);
        let norm_d = frobenius_datum(&r.per_place[0].0, 1).unwrap().d.norm();
        assert_eq!(poly.0[0], norm_d);
        assert_eq!(poly.0[0], BigInt::from(49i64.pow(2)));
        assert!(poly.is_palindromic_scaled(&BigInt::from(49)));
        let r = induce_charpoly(4, 5).unwrap();
        let poly = &r.per_place[0].1;
        assert_eq!(poly.degree(), 4);
        // Four roots of absolute value 5 bound the x^{4-k} coefficient by C(4,k) 5^k.
        for (k, c) in poly.0.iter().rev().enumerate() {
            let bound = [1, 4, 6, 4, 1][k] * 5i64.pow(k as u32);
            assert!(c.magnitude() <= BigInt::from(bound).magnitude());
        }
    }

    #[test]
    fn purity_examples() {
        let d = frobenius_datum(&place(2, 5, 0), 1).unwrap();
        assert!(weight3_weil_verify(&d).ok);
        let d = frobenius_datum(&place(2, 3, 0), 1).unwrap();
        assert!(weight3_weil_verify(&d).ok);
        let bad = weight3_purity(&CycInt::zero(2), &CycInt::from_int(2, 5), 5, PURITY_TOL);
        assert!(!bad.ok);
    }
}
