use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::finite_fields::{build_extension, build_prime_field};
use crate::places::enumerate_places;

fn place(n: u64, p: u64, idx: usize) -> Place {
    enumerate_places(n, p).unwrap().remove(idx)
}

fn int(n: u64, v: i64) -> CycInt {
    CycInt::from_int(n, v)
}

#[test]
fn trace_examples() {
    assert_eq!(trace_sum(&place(2, 5, 0), 1).unwrap().value, int(2, -6));
    assert_eq!(trace_sum(&place(2, 3, 0), 1).unwrap().value, int(2, 0));
    for pl in enumerate_places(3, 7).unwrap() {
        let v1 = trace_sum(&pl, 1).unwrap().value;
        let v2 = trace_sum(&pl, 2).unwrap().value;
        assert_eq!(v1.galois_conjugate(2).unwrap(), v2);
    }
    assert!(matches!(trace_sum(&place(3, 7, 0), 3), Err(Error::Domain(_))));
    assert!(matches!(trace_sum(&place(3, 7, 0), 0), Err(Error::Domain(_))));
}

#[test]
fn greene_examples() {
    assert_eq!(trace_sum_greene(&place(2, 5, 0), 1).unwrap().value, int(2, -6));
    assert_eq!(trace_sum_greene(&place(2, 7, 0), 1).unwrap().value, int(2, 0));
    for pl in enumerate_places(3, 13).unwrap() {
        let brute1 = trace_sum(&pl, 1).unwrap().value;
        let g2 = trace_sum_greene(&pl, 2).unwrap();
        assert_eq!(g2.value, brute1.galois_conjugate(2).unwrap());
        assert!(g2.margin.unwrap() < 1e-6);
    }
}

#[test]
fn zech_kernel_matches_direct_symbols() {
    let cases = [(2u64, 5u64), (2, 3), (3, 7), (3, 2), (4, 3), (4, 5), (5, 11), (5, 2), (6, 7), (8, 3), (7, 2), (12, 5)];
    for (n, p) in cases {
        for pl in enumerate_places(n, p).unwrap() {
            let sums = all_sums(&pl, Method::Brute).unwrap();
            assert_eq!(sums[0], int(n, nonvanishing_count(pl.np()) as i64));
            for i in 1..n {
                assert_eq!(sums[i as usize], trace_sum_naive(&pl, i).unwrap(), "n={n} p={p} i={i}");
            }
        }
    }
}

#[test]
fn extension_places_match_direct_symbols() {
    let pl = place(3, 7, 0).extension(2).unwrap();
    assert_eq!(pl.np(), 49);
    let sums = all_sums(&pl, Method::Brute).unwrap();
    assert_eq!(sums[1], trace_sum_naive(&pl, 1).unwrap());
    let pl = place(2, 3, 0).extension(3).unwrap();
    assert_eq!(all_sums(&pl, Method::Brute).unwrap()[1], trace_sum_naive(&pl, 1).unwrap());
}

#[test]
fn greene_matches_brute_small_fields() {
    for n in 2..=12u64 {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if n % p == 0 || crate::places::place_shape(n, p).1 > 4 || p.pow(crate::places::place_shape(n, p).1 as u32) > 343 {
                continue;
            }
            for pl in enumerate_places(n, p).unwrap() {
                let b = all_sums(&pl, Method::Brute).unwrap();
                let g = all_sums(&pl, Method::Greene).unwrap();
                assert_eq!(b, g, "n={n} p={p} idx={}", pl.index());
            }
        }
    }
}

#[test]
fn fft_matches_naive_dft() {
    for ctx in [build_prime_field(31).unwrap(), build_extension(3, &[1, 2, 0, 1]).unwrap(), build_extension(2, &[1, 1, 0, 0, 1]).unwrap()] {
        let a = greene::gauss_sums(&ctx, Dft::Fft).unwrap();
        let b = greene::gauss_sums(&ctx, Dft::Naive).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-9);
        }
        // |g(χ)|² = q for nontrivial χ, g(trivial) = -1.
        assert!((a[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        for z in &a[1..] {
            assert!((z.norm_sqr() - ctx.q() as f64).abs() < 1e-6);
        }
    }
    let pl = place(4, 13, 0);
    let fast = trace_sum_greene_with(&pl, 1, Dft::Fft).unwrap().value;
    let slow = trace_sum_greene_with(&pl, 1, Dft::Naive).unwrap().value;
    assert_eq!(fast, slow);
}

#[test]
fn jacobi_cases_match_direct_sums() {
    let fields = [
        build_prime_field(7).unwrap(),
        build_prime_field(13).unwrap(),
        build_extension(2, &[1, 1, 1]).unwrap(),
        build_extension(2, &[1, 1, 0, 1]).unwrap(),
        build_extension(3, &[1, 0, 1]).unwrap(),
        build_extension(5, &[2, 0, 1]).unwrap(),
        build_extension(7, &[1, 0, 1]).unwrap(),
    ];
    for ctx in &fields {
        let g = greene::gauss_sums(ctx, Dft::Fft).unwrap();
        let jac = greene::Jacobi { g: &g, q: ctx.q() };
        let m = g.len();
        for u in 0..m {
            for v in 0..m {
                let d = greene::jacobi_direct(ctx, u, v);
                assert!((jac.j(u, v) - d).norm() < 1e-8, "q={} u={u} v={v}", ctx.q());
            }
        }
    }
}

#[test]
fn twist_examples() {
    for pl in enumerate_places(3, 7).unwrap() {
        let r = twist_check(&pl, 1, Method::Brute).unwrap();
        assert!(r.ok);
        assert_eq!(r.symbol, int(3, 1));
    }
    let r = twist_check(&place(4, 5, 0), 1, Method::Brute).unwrap();
    assert!(r.ok);
    assert_eq!(r.symbol, int(4, -1));
    assert!(twist_check(&place(2, 5, 0), 1, Method::Brute).unwrap().ok);
}

#[test]
fn weil_examples() {
    let r = weil_check(&trace_sum(&place(2, 5, 0), 1).unwrap());
    assert!(r.ok && (r.max_abs - 6.0).abs() < 1e-12 && r.bound == 10.0);
    let r = weil_check(&trace_sum(&place(2, 3, 0), 1).unwrap());
    assert!(r.ok && r.max_abs == 0.0);
    assert!(!weil_check_value(&int(2, 11), 5, 1e-6).ok);
}

#[test]
fn gcd_examples() {
    let r = gcd_reduction_check(&place(4, 5, 0), 2, &place(2, 5, 0), Method::Brute).unwrap();
    assert!(r.ok);
    assert_eq!(r.high, int(4, -6));
    let r = gcd_reduction_check(&place(6, 7, 0), 3, &place(2, 7, 0), Method::Brute).unwrap();
    assert!(r.ok && r.high.is_zero());
    for pl in enumerate_places(6, 7).unwrap() {
        let below = pl.below(3).unwrap();
        assert!(gcd_reduction_check(&pl, 2, &below, Method::Brute).unwrap().ok);
        assert!(gcd_reduction_check(&pl, 4, &below, Method::Brute).unwrap().ok);
    }
    // A proper divisor of the gcd: S(12, 4) = S(6, 2) = S(3, 1).
    for pl in enumerate_places(12, 13).unwrap() {
        for d in [2, 4] {
            let low = pl.below(12 / d).unwrap();
            assert!(gcd_reduction_check_by(&pl, 4, d, &low, Method::Brute).unwrap().ok);
        }
        assert!(gcd_reduction_check_by(&pl, 4, 3, &pl.below(4).unwrap(), Method::Brute).is_err());
    }
    // Residue fields of different size are rejected.
    assert!(matches!(
        gcd_reduction_check(&place(4, 3, 0), 2, &place(2, 3, 0), Method::Brute),
        Err(Error::Domain(_))
    ));
    let top = place(4, 3, 0);
    assert!(gcd_reduction_check(&top, 2, &top.below(2).unwrap(), Method::Brute).unwrap().ok);
    // A compatible-looking place whose factor misses ω^d is rejected.
    let pls = enumerate_places(3, 7).unwrap();
    let six = place(6, 7, 0);
    let wrong = pls.iter().find(|pl| pl.factor() != six.below(3).unwrap().factor()).unwrap();
    assert!(gcd_reduction_check(&six, 2, wrong, Method::Brute).is_err());
}

#[test]
fn new_part_examples() {
    assert_eq!(new_part_trace(&place(2, 5, 0), Method::Brute).unwrap(), int(2, -6));
    for pl in enumerate_places(3, 7).unwrap() {
        let v = trace_sum(&pl, 1).unwrap().value;
        let total = &v + &v.galois_conjugate(2).unwrap();
        assert_eq!(new_part_trace(&pl, Method::Brute).unwrap(), CycInt::from_int(3, total.as_integer().unwrap()));
    }
    let pl = place(4, 5, 0);
    let s1 = trace_sum(&pl, 1).unwrap().value;
    let s3 = trace_sum(&pl, 3).unwrap().value;
    assert_eq!(new_part_trace(&pl, Method::Brute).unwrap(), &s1 + &s3);
}

#[test]
fn count_identity_examples() {
    assert!(solution_count_identity(&place(2, 5, 0)).unwrap().ok);
    for pl in enumerate_places(3, 7).unwrap() {
        assert!(solution_count_identity(&pl).unwrap().ok);
    }
    let pl = place(2, 3, 0);
    let r = solution_count_identity(&pl).unwrap();
    assert!(r.ok);
    let ctx = pl.ctx();
    let squares = ctx
        .elements()
        .flat_map(|x| ctx.elements().map(move |y| (x.clone(), y)))
        .filter(|(x, y)| {
            let v = f_n(ctx, 2, x, y);
            !v.is_zero() && ctx.pow(&v, (ctx.q() - 1) / 2) == ctx.one()
        })
        .count();
    assert_eq!(r.lhs, BigInt::from(2 * squares));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn any_partition_gives_the_same_histogram(chunks in 1usize..40, which in 0usize..4) {
        let (n, p) = [(3u64, 13u64), (4, 7), (6, 19), (5, 31)][which];
        for pl in enumerate_places(n, p).unwrap() {
            prop_assert_eq!(brute::histogram(&pl).unwrap(), brute::histogram_chunked(&pl, chunks).unwrap());
        }
    }
}
