//! Command-line front end. Results go to stdout as canonical JSON (or CSV /
//! text where requested); warnings and verdict lines go to stderr.
//!
//! Exit codes: 0 success, 1 a check failed or a computation was
//! inconsistent, 2 usage or domain error.

pub mod cache;
#[cfg(feature = "fetch")]
mod fetch;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::asd::{self, golden, ASDQuartic, Congruence};
use crate::charsums::{self, all_sums, solution_count_identity, twist_from_sums, weil_check_value, Method};
use crate::curves;
use crate::error::{Error, Result};
use crate::finite_fields::field_of_order;
use crate::frobenius;
use crate::json::{big_to_json, canonical};
use crate::places::{enumerate_places, Place};
use crate::qseries::{self, CoeffRing, FracSeries, IntegersMod, Rationals};
use crate::suite;

use cache::Cache;

#[derive(Parser, Debug)]
#[command(name = "scholl", version, about = "Character sums, point counts and congruences for Scholl representations")]
struct Cli {
    /// Cache results in this directory (also SCHOLL_CACHE).
    #[arg(long, global = true, env = "SCHOLL_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Recompute cached results and fail on any byte difference.
    #[arg(long, global = true)]
    verify_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include wall-clock milliseconds (disables caching).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Brute,
    Greene,
    Both,
}

#[derive(Args, Debug, Clone)]
struct Level {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    p: u64,
    /// Restrict to one place (index in the enumeration order).
    #[arg(long)]
    place: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Places of Q(ζ_n) above p.
    Places {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
    },
    /// The character sum S(n, i, 𝔭) at every place above p.
    Trace {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        i: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Frobenius quadratic X² - TX + D at every place above p.
    Charpoly {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        i: u64,
        /// Also run the cubic-extension Newton check.
        #[arg(long)]
        newton: bool,
    },
    /// Integer polynomial induced from the quadratics of the new part.
    Induce {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
    },
    /// S_i = (-1/𝔭)^i S_{n-i} for every i.
    Twist {
        #[command(flatten)]
        level: Level,
    },
    /// Weil bound for every unit i.
    Weil {
        #[command(flatten)]
        level: Level,
    },
    /// Σ over units i of S_i.
    Newpart {
        #[command(flatten)]
        level: Level,
    },
    /// Direct count of s^n = f_n(x, y) against the sum of all S_i.
    CountIdentity {
        #[command(flatten)]
        level: Level,
    },
    /// Point counts and L-polynomials of curves.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Automorphism and Frobenius checks on point sets.
    #[command(subcommand)]
    Symmetry(SymmetryCmd),
    /// q-expansions of eta quotients and the weight-4 forms.
    #[command(subcommand)]
    Qexp(QexpCmd),
    /// Atkin–Swinnerton-Dyer congruences for f₁, f₂.
    #[command(subcommand)]
    Asd(AsdCmd),
    /// Solve, verify and factor-check every row of the weight-4 table.
    TableCheck,
    /// Run acceptance criteria (all by default) with a pass/fail summary.
    Sweep {
        /// Comma-separated criterion numbers 1..12.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u32>,
    },
    /// Download a newform q-expansion and show it beside genus-2 traces.
    FetchNewform {
        #[arg(long)]
        label: String,
        /// b in y² = x⁶ + bx³ + 1.
        #[arg(long, default_value_t = 1)]
        b: i64,
        #[arg(long, default_value_t = 50)]
        primes_up_to: u64,
    },
}

#[derive(Subcommand, Debug)]
enum CurveCmd {
    /// #{y^N = f(x)} over F_q; f given constant term first.
    Count {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        f: Vec<i64>,
    },
    /// L-polynomial of y² = f(x), f a monic sextic given constant term first.
    Lpoly {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        f: Vec<i64>,
    },
    /// Trace-zero / square structure of y² = x⁶ + bx³ + 1.
    Structure {
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Subcommand, Debug)]
enum SymmetryCmd {
    /// A maps E_n to itself and ζAζ = A over F_q.
    En {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
    },
    /// The two involutions of y² = x⁶ + ax⁴ + ax² + 1 over F_q.
    Involution {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        q: u64,
    },
    /// Frobenius against A and ζ over F_{p^k}.
    Frobcomm {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
enum QexpCmd {
    /// Π η(mz)^e for a spec like "1:-8,2:48,4:-16".
    Eta {
        #[arg(long, allow_hyphen_values = true)]
        spec: String,
        /// Number of terms.
        #[arg(long)]
        prec: usize,
        /// Reduce coefficients mod this integer.
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// 1 - 24 Σ σ₁(n) qⁿ.
    E2 {
        #[arg(long)]
        prec: usize,
    },
    /// f₁, f₂ through the coefficient of q^{max_index/3}.
    Weight4 {
        #[arg(long)]
        max_index: u64,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// The eigenforms g_± in q = e^{2πi·6z}.
    Gpm {
        #[arg(long)]
        prec: usize,
    },
}

#[derive(Subcommand, Debug)]
enum AsdCmd {
    /// The five-term congruences for f₁ and f₂.
    Verify {
        #[arg(long)]
        p: u64,
        /// A3,A2,A1,A0 (defaults to the table row).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<i64>,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        r_min: i64,
        #[arg(long, default_value_t = 1)]
        r_max: i64,
        #[arg(long, value_enum, default_value_t = FormArg::Scholl)]
        form: FormArg,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        seeds: Vec<u64>,
    },
    /// Recover the quartic from computed coefficients.
    Solve {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r_cap: Option<i64>,
        /// Include the escalation record.
        #[arg(long)]
        details: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Printed,
    Scholl,
}

/// What a command produced.
enum Output {
    Json(Value),
    Raw(String),
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let cache = match (&cli.cache_dir, cli.timing) {
        (Some(dir), false) => Cache::open(dir, err),
        _ => None,
    };
    let op = op_name(&cli.cmd);
    let inputs = json!({"args": format!("{:?}", cli.cmd), "format": format!("{:?}", cli.format)});
    let key = cache::key(&op, &inputs);

    let cached = cache.as_ref().and_then(|c| c.get(&key, err));
    let result = match (&cached, cli.verify_cache) {
        (Some(v), false) => Ok(Output::Json(v.clone())),
        _ => execute(&cli, err),
    };
    let output = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return if e.is_usage() { 2 } else { 1 };
        }
    };
    let value = match output {
        Output::Json(v) => v,
        Output::Raw(s) => Value::String(s),
    };
    if let Some(c) = &cache {
        match &cached {
            Some(old) if cli.verify_cache => {
                if canonical(old) != canonical(&value) {
                    let _ = writeln!(err, "error: cached result for {op} differs from recomputation");
                    return 1;
                }
            }
            Some(_) => {}
            None => c.put(&key, &value, err),
        }
    }
    match &value {
        Value::String(s) => {
            let _ = write!(out, "{s}");
        }
        v => {
            let _ = writeln!(out, "{}", canonical(v));
        }
    }
    if value.get("ok") == Some(&Value::Bool(false)) {
        1
    } else {
        0
    }
}

fn op_name(cmd: &Cmd) -> String {
    let dbg = format!("{cmd:?}");
    dbg.split([' ', '(', '{']).next().unwrap_or("").to_lowercase()
}

fn select_places(level: &Level) -> Result<Vec<Place>> {
    let pls = enumerate_places(level.n, level.p)?;
    match level.place {
        None => Ok(pls),
        Some(k) if k < pls.len() => Ok(vec![pls[k].clone()]),
        Some(k) => Err(Error::domain(format!("place index {k} out of range (there are {})", pls.len()))),
    }
}

fn sums(pl: &Place) -> Result<Vec<crate::cyclotomic::CycInt>> {
    all_sums(pl, Method::auto(pl.np()))
}

fn execute(cli: &Cli, err: &mut dyn Write) -> Result<Output> {
    let timing = cli.timing;
    let v = match &cli.cmd {
        Cmd::Places { n, p } => {
            let pls = enumerate_places(*n, *p)?;
            json!({"n": n, "p": p, "places": pls.iter().map(Place::to_json).collect::<Vec<_>>()})
        }
        Cmd::Trace { level, i, method } => trace(level, *i, *method, timing)?,
        Cmd::Charpoly { level, i, newton } => {
            let mut rows = Vec::new();
            let mut ok = true;
            for pl in select_places(level)? {
                let d = frobenius::frobenius_datum(&pl, *i)?;
                let purity = frobenius::weight3_weil_verify(&d);
                ok &= purity.ok;
                let mut row = json!({
                    "datum": d.to_json(),
                    "quadratic": d.quadratic().to_json(),
                    "purity": purity.to_json(),
                });
                if *newton {
                    let r = frobenius::newton_cubic_check(&d)?;
                    ok &= r.ok;
                    row["newton"] = r.to_json();
                }
                rows.push(row);
            }
            json!({"n": level.n, "i": i, "p": level.p, "places": rows, "ok": ok})
        }
        Cmd::Induce { n, p } => {
            let r = frobenius::induce_charpoly(*n, *p)?;
            if cli.format == Format::Text {
                return Ok(Output::Raw(format!("{}\n", r.product)));
            }
            let mut v = r.to_json();
            v["display"] = json!(r.product.to_string());
            v["ok"] = json!(r.place_independent);
            v
        }
        Cmd::Twist { level } => per_place(level, |pl, s| {
            let rows = (1..pl.n()).map(|i| twist_from_sums(pl, s, i)).collect::<Result<Vec<_>>>()?;
            let ok = rows.iter().all(|r| r.ok);
            Ok((json!(rows.iter().map(|r| r.to_json()).collect::<Vec<_>>()), ok))
        })?,
        Cmd::Weil { level } => per_place(level, |pl, s| {
            let rows: Vec<_> = crate::arith::units_mod(pl.n())
                .into_iter()
                .map(|i| (i, weil_check_value(&s[i as usize], pl.np(), 1e-6)))
                .collect();
            let ok = rows.iter().all(|(_, r)| r.ok);
            Ok((json!(rows.iter().map(|(i, r)| { let mut v = r.to_json(); v["i"] = json!(i); v }).collect::<Vec<_>>()), ok))
        })?,
        Cmd::Newpart { level } => per_place(level, |pl, s| {
            Ok((big_to_json(&charsums::new_part_from_sums(pl.n(), s)?), true))
        })?,
        Cmd::CountIdentity { level } => {
            let mut rows = Vec::new();
            let mut ok = true;
            for pl in select_places(level)? {
                let r = solution_count_identity(&pl)?;
                ok &= r.ok;
                rows.push(json!({"place": pl.to_json(), "report": r.to_json()}));
            }
            json!({"n": level.n, "p": level.p, "places": rows, "ok": ok})
        }
        Cmd::Curve(c) => curve(c)?,
        Cmd::Symmetry(s) => match s {
            SymmetryCmd::En { n, q } => curves::en_symmetry_check(*n, *q)?.to_json(),
            SymmetryCmd::Involution { a, q } => curves::involution_check(*a, *q)?.to_json(),
            SymmetryCmd::Frobcomm { n, p, k } => curves::frobenius_commutation_check(*n, *p, *k)?.to_json(),
        },
        Cmd::Qexp(q) => return qexp(q, cli.format),
        Cmd::Asd(a) => asd_cmd(a)?,
        Cmd::TableCheck => criteria_json(vec![suite::criterion_1(), suite::criterion_2()], err),
        Cmd::Sweep { criteria } => sweep(criteria, err)?,
        Cmd::FetchNewform { label, b, primes_up_to } => fetch_newform(label, *b, *primes_up_to)?,
    };
    Ok(Output::Json(v))
}

fn per_place(level: &Level, f: impl Fn(&Place, &[crate::cyclotomic::CycInt]) -> Result<(Value, bool)>) -> Result<Value> {
    let mut rows = Vec::new();
    let mut ok = true;
    for pl in select_places(level)? {
        let s = sums(&pl)?;
        let (v, good) = f(&pl, &s)?;
        ok &= good;
        rows.push(json!({"place": pl.to_json(), "result": v}));
    }
    Ok(json!({"n": level.n, "p": level.p, "places": rows, "ok": ok}))
}

fn trace(level: &Level, i: u64, method: MethodArg, timing: bool) -> Result<Value> {
    let mut rows = Vec::new();
    let mut ok = true;
    for pl in select_places(level)? {
        match method {
            MethodArg::Both => {
                let b = charsums::trace_sum_with(&pl, i, Method::Brute)?;
                let g = charsums::trace_sum_with(&pl, i, Method::Greene)?;
                let agree = b.value == g.value;
                ok &= agree;
                let mut row = json!({
                    "place": pl.to_json(), "value": b.value.to_json(),
                    "brute": b.value.to_json(), "greene": g.value.to_json(), "agree": agree,
                });
                if timing {
                    row["ms"] = json!({"brute": b.elapsed.as_secs_f64() * 1e3, "greene": g.elapsed.as_secs_f64() * 1e3});
                }
                rows.push(row);
            }
            m => {
                let m = match m {
                    MethodArg::Brute => Method::Brute,
                    MethodArg::Greene => Method::Greene,
                    _ => Method::auto(pl.np()),
                };
                rows.push(charsums::trace_sum_with(&pl, i, m)?.to_json(timing));
            }
        }
    }
    let mut v = json!({"n": level.n, "i": i, "p": level.p, "results": rows});
    if method == MethodArg::Both {
        v["ok"] = json!(ok);
    }
    Ok(v)
}

fn curve(c: &CurveCmd) -> Result<Value> {
    Ok(match c {
        CurveCmd::Count { n, q, f } => {
            let ctx = field_of_order(*q)?;
            curves::superelliptic_count(*n, &curves::poly_from_ints(&ctx, f), &ctx)?.to_json()
        }
        CurveCmd::Lpoly { p, f } => curves::genus2_lpoly(f, *p)?.to_json(),
        CurveCmd::Structure { b, p } => curves::cb_structure_check(*b, *p).to_json(),
    })
}

fn parse_eta_spec(spec: &str) -> Result<Vec<(u64, i64)>> {
    spec.split(',')
        .map(|part| {
            let (m, e) = part
                .split_once(':')
                .ok_or_else(|| Error::domain(format!("eta factor {part:?} is not m:e")))?;
            let m: u64 = m.trim().parse().map_err(|_| Error::domain(format!("bad level {m:?}")))?;
            let e: i64 = e.trim().parse().map_err(|_| Error::domain(format!("bad exponent {e:?}")))?;
            if m == 0 {
                return Err(Error::domain("eta level must be positive"));
            }
            Ok((m, e))
        })
        .collect()
}

fn series_csv<R: CoeffRing>(rows: &mut String, name: &str, s: &FracSeries<R>, render: impl Fn(&R::Elem) -> String) {
    for (j, c) in s.coeffs().iter().enumerate() {
        let e = s.start() + (s.step() * j as u64) as i64;
        let g = num_integer::gcd(e, s.den() as i64).max(1);
        rows.push_str(&format!("{name},{},{},{}\n", e / g, s.den() as i64 / g, render(c)));
    }
}

fn rational_csv(s: &num_rational::BigRational) -> String {
    format!("{},{}", s.numer(), s.denom())
}

fn qexp(cmd: &QexpCmd, format: Format) -> Result<Output> {
    let csv = format == Format::Csv;
    let mut table = String::new();
    let header_rational = "series,exponent_num,exponent_den,num,den\n";
    let header_mod = "series,exponent_num,exponent_den,residue\n";
    let v = match cmd {
        QexpCmd::Eta { spec, prec, modulus } => {
            let spec = parse_eta_spec(spec)?;
            match modulus {
                Some(m) => {
                    let s = qseries::eta_quotient(IntegersMod::new(*m)?, &spec, *prec);
                    table += header_mod;
                    series_csv(&mut table, "eta", &s, |c| c.to_string());
                    s.to_json()
                }
                None => {
                    let s = qseries::eta_quotient(Rationals, &spec, *prec);
                    table += header_rational;
                    series_csv(&mut table, "eta", &s, rational_csv);
                    s.to_json()
                }
            }
        }
        QexpCmd::E2 { prec } => {
            let s = qseries::e2_series(Rationals, *prec);
            table += header_rational;
            series_csv(&mut table, "e2", &s, rational_csv);
            s.to_json()
        }
        QexpCmd::Weight4 { max_index, modulus } => match modulus {
            Some(m) => {
                let (f1, f2) = qseries::weight4_basis(IntegersMod::new(*m)?, *max_index)?;
                table += header_mod;
                series_csv(&mut table, "f1", &f1, |c| c.to_string());
                series_csv(&mut table, "f2", &f2, |c| c.to_string());
                json!({"f1": f1.to_json(), "f2": f2.to_json()})
            }
            None => {
                let (f1, f2) = qseries::weight4_basis(Rationals, *max_index)?;
                table += header_rational;
                series_csv(&mut table, "f1", &f1, rational_csv);
                series_csv(&mut table, "f2", &f2, rational_csv);
                json!({"f1": f1.to_json(), "f2": f2.to_json()})
            }
        },
        QexpCmd::Gpm { prec } => {
            let (gp, gm) = qseries::eigenforms_g(*prec)?;
            table += header_rational;
            series_csv(&mut table, "g_plus", &gp, rational_csv);
            series_csv(&mut table, "g_minus", &gm, rational_csv);
            json!({"g_plus": gp.to_json(), "g_minus": gm.to_json()})
        }
    };
    Ok(if csv { Output::Raw(table) } else { Output::Json(v) })
}

fn table_row(p: u64) -> Result<ASDQuartic> {
    golden::rows()?
        .into_iter()
        .find(|r| r.p == p)
        .map(|r| ASDQuartic::from_coeffs(p, r.a))
        .ok_or_else(|| Error::domain(format!("p = {p} is not a table row; pass --a")))
}

fn asd_cmd(cmd: &AsdCmd) -> Result<Value> {
    match cmd {
        AsdCmd::Verify { p, a, r_min, r_max, form, seeds } => {
            let quartic = match a.as_slice() {
                [] => table_row(*p)?,
                [a3, a2, a1, a0] => ASDQuartic::from_coeffs(*p, [*a3, *a2, *a1, *a0]),
                _ => return Err(Error::domain("--a takes four integers A3,A2,A1,A0")),
            };
            if *r_min < -1 || r_max < r_min {
                return Err(Error::domain("need -1 <= r-min <= r-max"));
            }
            let form = match form {
                FormArg::Printed => Congruence::Printed,
                FormArg::Scholl => Congruence::Scholl,
            };
            let top = seeds.iter().max().copied().unwrap_or(1);
            let (_, modulus) = asd::requirements(*p, *r_max);
            let max_index = top * p.pow((*r_max + 2) as u32);
            let (f1, f2) = qseries::weight4_basis(IntegersMod::new(modulus)?, max_index)?;
            let r1 = asd::asd_verify(&f1, &quartic, *r_min, *r_max, form, seeds)?;
            let r2 = asd::asd_verify(&f2, &quartic, *r_min, *r_max, form, seeds)?;
            Ok(json!({"quartic": quartic.to_json(), "f1": r1.to_json(), "f2": r2.to_json(), "ok": r1.ok && r2.ok}))
        }
        AsdCmd::Solve { p, r_cap, details } => {
            let r_cap = r_cap.unwrap_or(if *p <= 7 { 2 } else { 1 });
            let sol = asd::solve_from_eta(*p, r_cap)?;
            Ok(if *details { sol.to_json() } else { sol.quartic.to_json() })
        }
    }
}

fn criteria_json(reports: Vec<suite::CriterionReport>, err: &mut dyn Write) -> Value {
    for r in &reports {
        let _ = writeln!(err, "{}", r.line());
    }
    json!({
        "criteria": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "ok": reports.iter().all(|r| r.pass()),
        "complete": reports.iter().all(|r| r.complete()),
    })
}

fn sweep(criteria: &[u32], err: &mut dyn Write) -> Result<Value> {
    let wanted: Vec<u32> = if criteria.is_empty() { (1..=12).collect() } else { criteria.to_vec() };
    if let Some(bad) = wanted.iter().find(|&&c| !(1..=12).contains(&c)) {
        return Err(Error::domain(format!("no criterion {bad}; choose from 1..12")));
    }
    let needs_sweep = wanted.iter().any(|c| [4, 5, 6, 8].contains(c));
    let sw = needs_sweep.then(suite::twist_sweep);
    let sw = sw.as_ref();
    let reports = wanted
        .iter()
        .map(|&c| match c {
            1 => suite::criterion_1(),
            2 => suite::criterion_2(),
            3 => suite::criterion_3(),
            4 => suite::criterion_4(sw.unwrap()),
            5 => suite::criterion_5(sw.unwrap()),
            6 => suite::criterion_6(sw.unwrap()),
            7 => suite::criterion_7(),
            8 => suite::criterion_8(sw.unwrap()),
            9 => suite::criterion_9(),
            10 => suite::criterion_10(),
            11 => suite::criterion_11(),
            _ => suite::criterion_12(),
        })
        .collect();
    Ok(criteria_json(reports, err))
}

#[cfg(feature = "fetch")]
fn fetch_newform(label: &str, b: i64, primes_up_to: u64) -> Result<Value> {
    fetch::side_by_side(label, b, primes_up_to)
}

#[cfg(not(feature = "fetch"))]
fn fetch_newform(_label: &str, _b: i64, _primes_up_to: u64) -> Result<Value> {
    Err(Error::domain("this build has no network support; rebuild with --features fetch"))
}
