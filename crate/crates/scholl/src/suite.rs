//! The acceptance criteria as reproducible runs. Each returns a report whose
//! JSON is byte-stable; wall-clock figures live only in `note`.

use std::time::Instant;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::arith::{divisors, is_prime, units_mod};
use crate::asd::{self, golden, AsdVerifyReport, Congruence, SOLVE_SEEDS};
use crate::charsums::{all_sums, gcd_reduction_from_sums, solution_count_identity, twist_from_sums, weil_check_value, Method};
use crate::curves::{cb_is_good, cb_structure_check, en_symmetry_check, frobenius_commutation_check, involution_check};
use crate::cyclotomic::{CycInt, IntPoly};
use crate::error::Result;
use crate::finite_fields::TABLE_CAP;
use crate::frobenius::{frobenius_data_all, induce_place, newton_from_observed, sums_auto};
use crate::json::{big_to_json, canonical};
use crate::places::{enumerate_places, place_shape, Place};
use crate::qseries::{eta_quotient, Rationals};

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
    /// Parts of the literal statement that were not established.
    pub gaps: Vec<String>,
    pub detail: Value,
    pub note: Option<String>,
}

impl CriterionReport {
    fn new(id: u32, title: &'static str) -> Self {
        CriterionReport { id, title, checked: 0, failures: Vec::new(), gaps: Vec::new(), detail: Value::Null, note: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.checked += 1;
        self.failures.push(what);
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn complete(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id, "title": self.title, "checked": self.checked, "pass": self.pass(),
            "complete": self.complete(), "failures": self.failures, "gaps": self.gaps, "detail": self.detail,
        })
    }

    /// One-line verdict.
    pub fn line(&self) -> String {
        let verdict = match (self.pass(), self.complete()) {
            (true, true) => "PASS",
            (true, false) => "PASS (partial)",
            (false, _) => "FAIL",
        };
        let mut s = format!("criterion {:>2} {verdict}: {} [{} checks", self.id, self.title, self.checked);
        if !self.failures.is_empty() {
            s += &format!(", {} failed, first: {}", self.failures.len(), self.failures[0]);
        }
        s.push(']');
        if !self.gaps.is_empty() {
            s += &format!(" gaps: {}", self.gaps.len());
        }
        if let Some(note) = &self.note {
            s += &format!(" ({note})");
        }
        s
    }
}

fn primes_upto(limit: u64) -> impl Iterator<Item = u64> {
    (2..=limit).filter(|&p| is_prime(p))
}

fn residue_size(n: u64, p: u64) -> Option<u64> {
    crate::arith::checked_pow(p, place_shape(n, p).1 as u32)
}

fn fits(q: Option<u64>, power: u32) -> bool {
    q.and_then(|q| crate::arith::checked_pow(q, power)).is_some_and(|v| v <= TABLE_CAP)
}

fn size_label(n: u64, p: u64) -> String {
    let f = place_shape(n, p).1;
    format!("(n={n}, p={p}): residue field {p}^{f} above the 2^24 table cap")
}

fn err_text(ctx: &str, e: crate::Error) -> String {
    format!("{ctx}: {e}")
}

/// Table rows solved from computed f₁, f₂ and verified.
pub fn criterion_1() -> CriterionReport {
    let mut rep = CriterionReport::new(1, "weight-4 table recovered from eta quotients");
    let mut rows_out = Vec::new();
    let rows = match golden::rows() {
        Ok(r) => r,
        Err(e) => {
            rep.fail(err_text("table", e));
            return rep;
        }
    };
    for row in rows {
        let p = row.p;
        let r_max = if p <= 7 { 2 } else { 1 };
        let (f1, f2) = match asd::modular_basis(p, r_max) {
            Ok(b) => b,
            Err(e) => {
                rep.fail(err_text(&format!("p={p} basis"), e));
                continue;
            }
        };
        let expected = asd::ASDQuartic::from_coeffs(p, row.a);
        rep.check(expected.is_self_dual(), || format!("p={p}: table row violates A1 = p³A3, A0 = p⁶"));
        match asd::asd_solve(&f1, &f2, p, r_max) {
            Ok(sol) => {
                rep.check(sol.quartic == expected, || format!("p={p}: solved {:?}", sol.quartic.coefficients()));
                rep.check(sol.quartic.purity_deviation() < asd::PURITY_TOL, || format!("p={p}: impure quartic"));
                rows_out.push(sol.to_json());
            }
            Err(e) => rep.fail(err_text(&format!("p={p} solve"), e)),
        }
        let mut printed_low = Vec::new();
        for (name, f) in [("f1", &f1), ("f2", &f2)] {
            let runs: [(i64, Congruence, &[u64]); 3] = [
                (-1, Congruence::Scholl, &SOLVE_SEEDS),
                (0, Congruence::Printed, &[1]),
                (-1, Congruence::Printed, &[1]),
            ];
            for (r_min, form, seeds) in runs {
                let r_hi = if r_min == -1 && form == Congruence::Printed { -1 } else { r_max };
                match asd::asd_verify(f, &expected, r_min, r_hi, form, seeds) {
                    Ok(v) if r_hi == -1 && form == Congruence::Printed => {
                        if !v.ok {
                            printed_low.push(name);
                        }
                    }
                    Ok(v) => rep.check(v.ok, || failure_text(p, name, &v)),
                    Err(e) => rep.fail(err_text(&format!("p={p} {name} verify"), e)),
                }
            }
        }
        for name in printed_low {
            rep.gaps.push(format!("p={p} {name}: printed congruence fails at r=-1 (mod p^2)"));
        }
    }
    rep.detail = json!({"rows": rows_out});
    rep
}

fn failure_text(p: u64, name: &str, v: &AsdVerifyReport) -> String {
    format!("p={p} {name} {} congruence fails at (r, seed) {:?}", v.form.name(), v.failures())
}

/// Printed pairs multiply to printed quartics.
pub fn criterion_2() -> CriterionReport {
    let mut rep = CriterionReport::new(2, "Z[ζ₃] factorizations multiply to the quartics");
    let rows = match golden::rows() {
        Ok(r) => r,
        Err(e) => {
            rep.fail(err_text("table", e));
            return rep;
        }
    };
    let mut products = Vec::new();
    for row in rows {
        let result = golden::parse_charpoly(row.p, &row.charpoly)
            .and_then(|q| Ok((q, golden::parse_pair(&row.factorization)?)));
        match result {
            Ok((q, pair)) => {
                rep.check(q == asd::ASDQuartic::from_coeffs(row.p, row.a), || format!("p={}: charpoly text disagrees with A", row.p));
                let f = asd::factor_check(&q, &pair);
                rep.check(f.ok, || format!("p={}: product {:?}", row.p, f.product.as_ref().map(|p| p.to_string())));
                products.push(json!({"p": row.p, "product": f.product.map(|p| p.to_string())}));
            }
            Err(e) => rep.fail(err_text(&format!("p={}", row.p), e)),
        }
    }
    rep.detail = json!({"rows": products});
    rep
}

/// S(2, 1, p) against the q^p coefficient of η(4z)⁶.
pub fn criterion_3() -> CriterionReport {
    let mut rep = CriterionReport::new(3, "n=2 traces match η(4z)⁶");
    let eta = eta_quotient(Rationals, &[(4, 6)], 30);
    let mut values = Vec::new();
    for p in primes_upto(97).filter(|&p| p > 2) {
        let coeff = match eta.coeff_at(p as i64, 1) {
            Ok(c) => c,
            Err(e) => {
                rep.fail(err_text(&format!("p={p} eta"), e));
                continue;
            }
        };
        let trace = enumerate_places(2, p).and_then(|pls| Ok(all_sums(&pls[0], Method::Brute)?[1].clone()));
        match trace {
            Ok(t) => {
                let t = t.as_integer().expect("n = 2 sums are rational");
                rep.check(coeff.is_integer() && coeff.numer() == &t, || format!("p={p}: trace {t}, coefficient {coeff}"));
                if p % 4 == 3 {
                    rep.check(t.is_zero(), || format!("p={p}: expected a forced zero, got {t}"));
                }
                values.push(json!([p, big_to_json(&t)]));
            }
            Err(e) => rep.fail(err_text(&format!("p={p}"), e)),
        }
    }
    rep.detail = json!({"traces": values});
    rep
}

/// Every place for n in 2..=12, p <= 100, p ∤ n, with all sums S_0..S_{n-1}.
pub struct Sweep {
    pub places: Vec<(Place, Vec<CycInt>)>,
    pub skipped: Vec<(u64, u64)>,
    pub errors: Vec<String>,
}

pub fn twist_sweep() -> Sweep {
    let mut sweep = Sweep { places: Vec::new(), skipped: Vec::new(), errors: Vec::new() };
    for n in 2..=12u64 {
        for p in primes_upto(100).filter(|p| n % p != 0) {
            if !fits(residue_size(n, p), 1) {
                sweep.skipped.push((n, p));
                continue;
            }
            match enumerate_places(n, p) {
                Ok(pls) => {
                    for pl in pls {
                        match all_sums(&pl, Method::auto(pl.np())) {
                            Ok(s) => sweep.places.push((pl, s)),
                            Err(e) => sweep.errors.push(err_text(&format!("(n={n}, p={p})"), e)),
                        }
                    }
                }
                Err(e) => sweep.errors.push(err_text(&format!("(n={n}, p={p})"), e)),
            }
        }
    }
    sweep
}

fn sweep_report(id: u32, title: &'static str, sweep: &Sweep) -> CriterionReport {
    let mut rep = CriterionReport::new(id, title);
    for e in &sweep.errors {
        rep.fail(e.clone());
    }
    rep.gaps = sweep.skipped.iter().map(|&(n, p)| size_label(n, p)).collect();
    rep
}

fn place_label(pl: &Place) -> String {
    format!("(n={}, p={}, place {})", pl.n(), pl.p(), pl.index())
}

/// S_i = (-1/𝔭)_n^i S_{n-i}, and the symbol is trivial for odd n.
pub fn criterion_4(sweep: &Sweep) -> CriterionReport {
    let mut rep = sweep_report(4, "twist identity over n ≤ 12, p ≤ 100", sweep);
    for (pl, sums) in &sweep.places {
        let n = pl.n();
        for i in 1..n {
            match twist_from_sums(pl, sums, i) {
                Ok(t) => rep.check(t.ok, || format!("{} i={i}", place_label(pl))),
                Err(e) => rep.fail(err_text(&place_label(pl), e)),
            }
        }
        if n % 2 == 1 {
            rep.check(pl.minus_one_symbol() == CycInt::one(n), || format!("{}: (-1/𝔭) ≠ 1", place_label(pl)));
        }
    }
    rep.detail = json!({"places": sweep.places.len(), "pairs_skipped": sweep.skipped.len()});
    rep
}

/// S_i = σ_i(S_1) for units i.
pub fn criterion_5(sweep: &Sweep) -> CriterionReport {
    let mut rep = sweep_report(5, "Galois conjugacy of the sums", sweep);
    for (pl, sums) in &sweep.places {
        for i in units_mod(pl.n()) {
            match sums[1].galois_conjugate(i as i64) {
                Ok(c) => rep.check(c == sums[i as usize], || format!("{} i={i}", place_label(pl))),
                Err(e) => rep.fail(err_text(&place_label(pl), e)),
            }
        }
    }
    rep.detail = json!({"places": sweep.places.len()});
    rep
}

/// max_j |σ_j(S_i)| <= 2N𝔭 for units i.
pub fn criterion_6(sweep: &Sweep) -> CriterionReport {
    let mut rep = sweep_report(6, "Weil bound |S| ≤ 2N𝔭", sweep);
    let mut worst: f64 = 0.0;
    for (pl, sums) in &sweep.places {
        for i in units_mod(pl.n()) {
            let w = weil_check_value(&sums[i as usize], pl.np(), 1e-6);
            worst = worst.max(w.max_abs / w.bound);
            rep.check(w.ok, || format!("{} i={i}: {} > {}", place_label(pl), w.max_abs, w.bound));
        }
    }
    rep.detail = json!({"approx": {"max_ratio": format!("{worst:.6}")}});
    rep
}

/// S(n, i) = S(n/d, i/d) for d | gcd(i, n).
pub fn criterion_7() -> CriterionReport {
    let mut rep = CriterionReport::new(7, "gcd reduction for composite n ≤ 12, p ≤ 50");
    let mut compared = 0usize;
    for n in [4u64, 6, 8, 9, 10, 12] {
        for p in primes_upto(50).filter(|p| n % p != 0) {
            if !fits(residue_size(n, p), 1) {
                rep.gaps.push(size_label(n, p));
                continue;
            }
            let pls = match enumerate_places(n, p) {
                Ok(p) => p,
                Err(e) => {
                    rep.fail(err_text(&format!("(n={n}, p={p})"), e));
                    continue;
                }
            };
            for pl in pls {
                let run = || -> Result<Vec<(u64, u64, bool)>> {
                    let high = all_sums(&pl, Method::auto(pl.np()))?;
                    let mut out = Vec::new();
                    for d in divisors(n).into_iter().filter(|&d| d > 1 && d < n) {
                        let below = pl.below(n / d)?;
                        let low = all_sums(&below, Method::auto(below.np()))?;
                        for i in (d..n).step_by(d as usize) {
                            out.push((i, d, gcd_reduction_from_sums(&pl, &high, i, d, &below, &low)?.ok));
                        }
                    }
                    Ok(out)
                };
                match run() {
                    Ok(results) => {
                        for (i, d, ok) in results {
                            compared += 1;
                            rep.check(ok, || format!("{} i={i} d={d}", place_label(&pl)));
                        }
                    }
                    Err(e) => rep.fail(err_text(&place_label(&pl), e)),
                }
            }
        }
    }
    rep.detail = json!({"comparisons": compared});
    rep
}

/// Greene pipeline equals brute force for N𝔭 <= 343; timing at n = 2, p = 10007.
pub fn criterion_8(sweep: &Sweep) -> CriterionReport {
    let mut rep = CriterionReport::new(8, "Greene pipeline equals brute force");
    let mut fields = 0usize;
    for (pl, _) in sweep.places.iter().filter(|(pl, _)| pl.np() <= 343) {
        let b = all_sums(pl, Method::Brute);
        let g = all_sums(pl, Method::Greene);
        match (b, g) {
            (Ok(b), Ok(g)) => {
                fields += 1;
                rep.check(b == g, || place_label(pl));
            }
            (Err(e), _) | (_, Err(e)) => rep.fail(err_text(&place_label(pl), e)),
        }
    }
    rep.detail = json!({"places": fields});
    match speedup(2, 10007) {
        Ok(s) => {
            rep.note = Some(format!("greene {:.1}x faster than brute at n=2, p=10007", s));
            if s < 10.0 {
                rep.gaps.push(format!("speedup {s:.1}x below 10x at n=2, p=10007"));
            }
        }
        Err(e) => rep.fail(err_text("timing", e)),
    }
    rep
}

/// Best-of-three brute time over best-of-three Greene time.
pub fn speedup(n: u64, p: u64) -> Result<f64> {
    let pl = enumerate_places(n, p)?.remove(0);
    let mut best = [f64::INFINITY; 2];
    for _ in 0..3 {
        for (k, m) in [Method::Brute, Method::Greene].into_iter().enumerate() {
            let t = Instant::now();
            all_sums(&pl, m)?;
            best[k] = best[k].min(t.elapsed().as_secs_f64());
        }
    }
    Ok(best[0] / best[1])
}

/// D divides exactly and is pure, Newton's cubic identity, place independence.
pub fn criterion_9() -> CriterionReport {
    let mut rep = CriterionReport::new(9, "Frobenius data coherence for n ≤ 8, p ≤ 50");
    let mut polys = Vec::new();
    for n in 2..=8u64 {
        for p in primes_upto(50).filter(|p| n % p != 0) {
            let q = residue_size(n, p);
            if !fits(q, 2) {
                rep.gaps.push(format!("{} (quadratic extension)", size_label(n, p)));
                continue;
            }
            let newton = fits(q, 3);
            if !newton {
                rep.gaps.push(format!("(n={n}, p={p}): Newton check needs the cubic extension, above the 2^24 cap"));
            }
            let pls = match enumerate_places(n, p) {
                Ok(p) => p,
                Err(e) => {
                    rep.fail(err_text(&format!("(n={n}, p={p})"), e));
                    continue;
                }
            };
            let mut induced: Vec<IntPoly> = Vec::new();
            for pl in &pls {
                let data = match frobenius_data_all(pl) {
                    Ok(d) => d,
                    Err(e) => {
                        rep.fail(err_text(&place_label(pl), e));
                        continue;
                    }
                };
                rep.checked += data.len();
                if newton {
                    match pl.extension(3).and_then(|e| sums_auto(&e)) {
                        Ok(ext) => {
                            for d in &data {
                                let r = newton_from_observed(d, ext[d.i as usize].clone());
                                rep.check(r.ok, || format!("{} i={}: Newton", place_label(pl), d.i));
                            }
                        }
                        Err(e) => rep.fail(err_text(&place_label(pl), e)),
                    }
                }
                match induce_place(&data) {
                    Ok(poly) => induced.push(poly),
                    Err(e) => rep.fail(err_text(&place_label(pl), e)),
                }
            }
            rep.check(induced.windows(2).all(|w| w[0] == w[1]), || format!("(n={n}, p={p}): induced polynomials differ"));
            if let Some(poly) = induced.first() {
                polys.push(json!({"n": n, "p": p, "poly": poly.to_string()}));
            }
        }
    }
    rep.detail = json!({"induced": polys});
    rep
}

/// Direct count of s^n = f_n against Σ S_i for n ≤ 6, N𝔭 ≤ 49.
pub fn criterion_10() -> CriterionReport {
    let mut rep = CriterionReport::new(10, "surface count identity for n ≤ 6, N𝔭 ≤ 49");
    let mut counts = Vec::new();
    for n in 2..=6u64 {
        for p in primes_upto(49).filter(|p| n % p != 0) {
            if residue_size(n, p).is_none_or(|q| q > 49) {
                continue;
            }
            match enumerate_places(n, p) {
                Ok(pls) => {
                    for pl in pls {
                        match solution_count_identity(&pl) {
                            Ok(r) => {
                                rep.check(r.ok, || format!("{}: {} vs {}", place_label(&pl), r.lhs, r.rhs));
                                counts.push(json!([n, p, pl.index(), big_to_json(&r.lhs)]));
                            }
                            Err(e) => rep.fail(err_text(&place_label(&pl), e)),
                        }
                    }
                }
                Err(e) => rep.fail(err_text(&format!("(n={n}, p={p})"), e)),
            }
        }
    }
    rep.detail = json!({"counts": counts});
    rep
}

/// Trace zero, square quartic and purity for y² = x⁶ + b x³ + 1.
pub fn criterion_11() -> CriterionReport {
    let mut rep = CriterionReport::new(11, "genus-2 structure of y² = x⁶ + bx³ + 1");
    let mut rows = Vec::new();
    for b in [1i64, 3, 5] {
        for p in primes_upto(61).filter(|&p| cb_is_good(b, p)) {
            let r = cb_structure_check(b, p);
            rep.check(r.ok, || format!("b={b} p={p}: {}", r.reason.clone().unwrap_or_else(|| "structure".into())));
            let pure = r.lpoly.as_ref().is_some_and(|l| l.is_pure());
            rep.check(pure, || format!("b={b} p={p}: impure"));
            if let Some(l) = &r.lpoly {
                rows.push(json!([b, p, l.a1, l.a2]));
            }
        }
    }
    rep.detail = json!({"lpolys": rows});
    rep
}

fn odd_prime_powers(limit: u64) -> Vec<u64> {
    (3..=limit)
        .filter(|&q| {
            let f = crate::arith::factorize(q);
            f.len() == 1 && f[0].0 != 2
        })
        .collect()
}

/// Involutions, ζAζ = A and the Frobenius commutation, pointwise.
pub fn criterion_12() -> CriterionReport {
    let mut rep = CriterionReport::new(12, "point-map symmetries");
    let mut inv = Vec::new();
    for a in [0i64, 1, 2] {
        for q in odd_prime_powers(49) {
            match involution_check(a, q) {
                Ok(r) => {
                    rep.check(r.ok, || format!("involutions a={a} q={q}"));
                    inv.push(json!([a, q, r.points, r.nonsingular]));
                }
                Err(e) => rep.fail(err_text(&format!("involutions a={a} q={q}"), e)),
            }
        }
    }
    let mut sym = Vec::new();
    for n in 2..=8u64 {
        for q in odd_prime_powers(300).into_iter().filter(|q| (q - 1) % (2 * n) == 0) {
            match en_symmetry_check(n, q) {
                Ok(r) => {
                    rep.check(r.ok, || format!("ζAζ = A n={n} q={q}"));
                    sym.push(json!([n, q, r.points]));
                }
                Err(e) => rep.fail(err_text(&format!("ζAζ = A n={n} q={q}"), e)),
            }
        }
    }
    let mut frob = Vec::new();
    for (n, p) in [(2u64, 5u64), (3, 7), (4, 5), (6, 7)] {
        match frobenius_commutation_check(n, p, 2) {
            Ok(r) => {
                rep.check(r.ok, || format!("Frobenius commutation n={n} p={p}"));
                frob.push(json!([n, p, r.points]));
            }
            Err(e) => rep.fail(err_text(&format!("Frobenius commutation n={n} p={p}"), e)),
        }
    }
    rep.detail = json!({"involution": inv, "en_symmetry": sym, "frobenius": frob});
    rep
}

/// Criteria 1 to 12 in order.
pub fn run_all() -> Vec<CriterionReport> {
    let sweep = twist_sweep();
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(&sweep),
        criterion_5(&sweep),
        criterion_6(&sweep),
        criterion_7(),
        criterion_8(&sweep),
        criterion_9(),
        criterion_10(),
        criterion_11(),
        criterion_12(),
    ]
}

pub fn reports_json(reports: &[CriterionReport]) -> String {
    canonical(&Value::Array(reports.iter().map(CriterionReport::to_json).collect()))
}
