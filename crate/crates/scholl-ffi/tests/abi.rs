use std::ffi::CStr;
use std::ptr;

use scholl_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(scholl_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn trace_sum_through_handles() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(scholl_places_new(2, 5, &mut h), SchollStatus::Ok);
        assert_eq!(scholl_places_count(h), 1);
        assert_eq!(scholl_places_norm(h, 0), 5);
        let mut buf = [0i64; 4];
        let mut len = 0usize;
        for method in [SchollMethod::Brute, SchollMethod::Greene, SchollMethod::Auto] {
            assert_eq!(scholl_trace_sum(h, 0, 1, method, buf.as_mut_ptr(), buf.len(), &mut len), SchollStatus::Ok);
            assert_eq!(&buf[..len], &[-6]);
        }
        assert_eq!(scholl_trace_sum(h, 3, 1, SchollMethod::Auto, buf.as_mut_ptr(), 4, &mut len), SchollStatus::Domain);
        assert!(last_error().contains("out of range"));
        scholl_places_free(h);
    }
}

#[test]
fn small_buffer_reports_needed_length() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(scholl_places_new(5, 11, &mut h), SchollStatus::Ok);
        assert_eq!(scholl_places_count(h), 4);
        let mut buf = [0i64; 2];
        let mut len = 0usize;
        let st = scholl_trace_sum(h, 0, 1, SchollMethod::Brute, buf.as_mut_ptr(), buf.len(), &mut len);
        assert_eq!(st, SchollStatus::BufferTooSmall);
        assert_eq!(len, 4);
        scholl_places_free(h);
    }
}

#[test]
fn induce_and_solve() {
    unsafe {
        let mut buf = [0i64; 8];
        let mut len = 0usize;
        assert_eq!(scholl_induce(2, 5, buf.as_mut_ptr(), buf.len(), &mut len), SchollStatus::Ok);
        assert_eq!(&buf[..len], &[25, 6, 1]);

        let mut q = ptr::null_mut();
        assert_eq!(scholl_asd_solve(7, 2, &mut q), SchollStatus::Ok);
        let mut a = [0i64; 4];
        assert_eq!(scholl_quartic_coeffs(q, a.as_mut_ptr()), SchollStatus::Ok);
        assert_eq!(a, [8, -279, 2744, 117649]);
        assert!(scholl_quartic_r_used(q) >= 0);
        scholl_quartic_free(q);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(scholl_places_new(5, 4, &mut h), SchollStatus::NotPrime);
        assert!(h.is_null());
        assert!(last_error().contains("not prime"));
        assert_eq!(scholl_places_new(5, 11, ptr::null_mut()), SchollStatus::NullPointer);
        assert_eq!(scholl_places_count(ptr::null()), 0);
        assert_eq!(scholl_quartic_coeffs(ptr::null(), ptr::null_mut()), SchollStatus::NullPointer);
        scholl_places_free(ptr::null_mut());
        scholl_quartic_free(ptr::null_mut());

        let mut ok = ptr::null_mut();
        assert_eq!(scholl_places_new(2, 5, &mut ok), SchollStatus::Ok);
        assert_eq!(last_error(), "");
        scholl_places_free(ok);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/scholl.h")).unwrap();
    for name in [
        "scholl_last_error",
        "scholl_places_new",
        "scholl_places_count",
        "scholl_places_norm",
        "scholl_places_free",
        "scholl_trace_sum",
        "scholl_induce",
        "scholl_asd_solve",
        "scholl_quartic_coeffs",
        "scholl_quartic_r_used",
        "scholl_quartic_free",
        "SCHOLL_STATUS_BUFFER_TOO_SMALL",
        "typedef struct SchollPlaces SchollPlaces",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
