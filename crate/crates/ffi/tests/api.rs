use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use lame_susy_ffi::*;

fn last_error() -> String {
    let p = ls_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn solution_round_trip() {
    let mut sol = ptr::null_mut();
    assert_eq!(ls_solution_new(3, 2, 0.9, 8.0, &mut sol), LsStatus::Ok);
    assert!(ls_last_error().is_null());
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(ls_solution_evaluate(sol, 1, 0.0, &mut re, &mut im), LsStatus::Ok);
    assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);
    assert_eq!(ls_solution_bloch_factor(sol, -1, &mut re, &mut im), LsStatus::Ok);
    assert!(((re * re + im * im).sqrt() - 1.0).abs() > 1e-3, "ε = 8 is below the spectrum");

    let mut written = 0;
    assert_eq!(ls_solution_coefficients(sol, ptr::null_mut(), 0, &mut written), LsStatus::BufferTooSmall);
    assert_eq!(written, 6);
    let mut a = [0.0; 6];
    assert_eq!(ls_solution_coefficients(sol, a.as_mut_ptr(), a.len(), &mut written), LsStatus::Ok);
    assert_eq!(a[0], 1.0);
    let (mut br, mut bi) = ([0.0; 5], [0.0; 5]);
    assert_eq!(ls_solution_shifts(sol, br.as_mut_ptr(), bi.as_mut_ptr(), 5, &mut written), LsStatus::Ok);
    assert_eq!(written, 5);

    assert_eq!(ls_solution_evaluate(sol, 0, 0.0, &mut re, &mut im), LsStatus::InvalidArgument);
    unsafe { ls_solution_free(sol) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut sol = ptr::null_mut();
    assert_eq!(ls_solution_new(1, 3, 0.9, 1.0, &mut sol), LsStatus::Domain);
    assert!(sol.is_null());
    assert!(last_error().contains("m >= ell"));
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(ls_solution_evaluate(ptr::null(), 1, 0.0, &mut re, &mut im), LsStatus::NullPointer);
    assert_eq!(ls_potential(3, 2, 0.9, 0.0, ptr::null_mut()), LsStatus::NullPointer);
    unsafe { ls_solution_free(ptr::null_mut()) };
}

#[test]
fn bands_and_partners() {
    let mut b = ptr::null_mut();
    assert_eq!(ls_bands_new(3, 2, 0.9, 0.0, 15.0, 5e-4, &mut b), LsStatus::Ok);
    let mut edges = [0.0; 16];
    let mut n = 0;
    assert_eq!(ls_bands_edges(b, edges.as_mut_ptr(), edges.len(), &mut n), LsStatus::Ok);
    assert!((edges[0] - 8.1).abs() < 5e-4 && (edges[1] - 8.1031).abs() < 5e-4);
    let mut gaps = [0.0; 16];
    assert_eq!(ls_bands_gaps(b, gaps.as_mut_ptr(), gaps.len(), &mut n), LsStatus::Ok);
    assert!(n >= 2 && (gaps[1] - 11.7154).abs() < 5e-4);
    unsafe { ls_bands_free(b) };

    let seeds = [
        LsSeed { energy: 10.0, lambda: 1.0, sign: 1 },
        LsSeed { energy: 10.1, lambda: -1.5, sign: 1 },
    ];
    let mut q = ptr::null_mut();
    assert_eq!(ls_partner_new(3, 2, 0.9, seeds.as_ptr(), 2, &mut q), LsStatus::Ok);
    let (mut order, mut periodic) = (0, true);
    assert_eq!(ls_partner_info(q, &mut order, &mut periodic), LsStatus::Ok);
    assert_eq!((order, periodic), (2, false));
    let mut v = 0.0;
    assert_eq!(ls_partner_value(q, 0.0, &mut v), LsStatus::Ok);
    assert!(v.is_finite());
    let mut bound = [0.0; 2];
    assert_eq!(ls_partner_bound_states(q, bound.as_mut_ptr(), 2, &mut n), LsStatus::Ok);
    assert_eq!(bound, [10.0, 10.1]);
    unsafe { ls_partner_free(q) };

    let nodal = LsSeed { energy: 8.0, lambda: -1.0, sign: 1 };
    assert_eq!(ls_partner_new(3, 2, 0.9, &nodal, 1, &mut q), LsStatus::NodalSeed);
    assert_eq!(ls_partner_new(3, 2, 0.9, seeds.as_ptr(), 0, &mut q), LsStatus::InvalidArgument);
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// The static library next to this test's `deps/` directory.
fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let lib = exe.parent()?.parent()?.join("liblame_susy_ffi.a");
    lib.exists().then_some(lib)
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn header_compiles_as_c_and_cpp() {
    if !have_cc() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let header = crate_dir().join("include/lame_susy.h");
    for lang in ["c", "c++"] {
        let status = Command::new("cc")
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg(&header)
            .status()
            .unwrap();
        assert!(status.success(), "{lang}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let (true, Some(lib)) = (have_cc(), static_lib()) else {
        eprintln!("no C compiler or static library; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let include: &Path = &crate_dir().join("include");
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/smoke.c"))
        .arg("-I")
        .arg(include)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 0.1.0"));
}
