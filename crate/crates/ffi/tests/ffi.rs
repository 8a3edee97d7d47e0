use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use sing2ep_ffi::*;

const EX5_1: &str = include_str!("../../core/corpus/ex5_1.json");

fn last_error() -> String {
    let p = sing2ep_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn problem(json: &str) -> *mut Sing2epProblem {
    let text = CString::new(json).unwrap();
    let mut p = ptr::null_mut();
    let st = unsafe { sing2ep_problem_from_json(text.as_ptr(), &mut p) };
    assert_eq!(st, Sing2epStatus::Ok);
    p
}

#[test]
fn solves_diagonal_example_through_handles() {
    let p = problem(EX5_1);
    let (mut n1, mut n2) = (0, 0);
    assert_eq!(
        unsafe { sing2ep_problem_dims(p, &mut n1, &mut n2) },
        Sing2epStatus::Ok
    );
    assert_eq!((n1, n2), (2, 2));

    let mut s = ptr::null_mut();
    let st = unsafe { sing2ep_solve(p, 1, SING2EP_ROTATE_AUTO, 0.0, 0.0, &mut s) };
    assert_eq!(st, Sing2epStatus::Ok);
    assert_eq!(unsafe { sing2ep_solution_count(s) }, 2);
    let mut got = Vec::new();
    for i in 0..2 {
        let mut z = [0.0; 4];
        let (mut flag, mut hint) = (false, 0);
        let st = unsafe { sing2ep_solution_eigenvalue(s, i, z.as_mut_ptr(), &mut flag, &mut hint) };
        assert_eq!(st, Sing2epStatus::Ok);
        assert!(flag && hint == 1);
        got.push(z);
    }
    for (z, want) in got.iter().zip([[0.0, 0.0], [1.0, 1.0]]) {
        assert!(
            (z[0] - want[0]).abs() < 1e-8 && (z[2] - want[1]).abs() < 1e-8,
            "{z:?}"
        );
        assert!(z[1].abs() < 1e-8 && z[3].abs() < 1e-8);
    }

    let mut z = [0.0; 4];
    let st = unsafe {
        sing2ep_solution_eigenvalue(s, 2, z.as_mut_ptr(), ptr::null_mut(), ptr::null_mut())
    };
    assert_eq!(st, Sing2epStatus::IndexOutOfRange);

    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { sing2ep_solution_to_json(s, &mut json) },
        Sing2epStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { sing2ep_string_free(json) };
    let report = sing2ep::io::SolveReport::parse(&text).unwrap();
    assert_eq!(report.name, "ex5_1");
    assert_eq!(report.eigenvalues.len(), 2);

    unsafe {
        sing2ep_solution_free(s);
        sing2ep_problem_free(p);
    }
}

#[test]
fn raw_matrices_match_json() {
    // W1 = λ − 1, W2 = μ − 2.
    let w1 = [-1.0, 0.0, 1.0, 0.0, 0.0, 0.0];
    let w2 = [-2.0, 0.0, 0.0, 0.0, 1.0, 0.0];
    let mut p = ptr::null_mut();
    let st = unsafe { sing2ep_problem_new(1, w1.as_ptr(), 1, w2.as_ptr(), &mut p) };
    assert_eq!(st, Sing2epStatus::Ok);
    let mut s = ptr::null_mut();
    let st = unsafe { sing2ep_solve(p, 3, SING2EP_ROTATE_ANGLE, 0.3, 1e-9, &mut s) };
    assert_eq!(st, Sing2epStatus::Ok);
    let mut z = [0.0; 4];
    let st = unsafe {
        sing2ep_solution_eigenvalue(s, 0, z.as_mut_ptr(), ptr::null_mut(), ptr::null_mut())
    };
    assert_eq!(st, Sing2epStatus::Ok);
    assert!(
        (z[0] - 1.0).abs() < 1e-10 && (z[2] - 2.0).abs() < 1e-10,
        "{z:?}"
    );
    unsafe {
        sing2ep_solution_free(s);
        sing2ep_problem_free(p);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut p = ptr::null_mut();
    let bad = CString::new("{").unwrap();
    assert_eq!(
        unsafe { sing2ep_problem_from_json(bad.as_ptr(), &mut p) },
        Sing2epStatus::Parse
    );
    assert!(p.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { sing2ep_problem_from_json(ptr::null(), &mut p) },
        Sing2epStatus::NullPointer
    );
    assert!(last_error().contains("null"));

    // W1 ≡ 0 has det ≡ 0.
    let zero = [0.0; 6];
    let w2 = [-2.0, 0.0, 0.0, 0.0, 1.0, 0.0];
    let st = unsafe { sing2ep_problem_new(1, zero.as_ptr(), 1, w2.as_ptr(), &mut p) };
    assert_eq!(st, Sing2epStatus::Ok);
    let mut s = ptr::null_mut();
    let st = unsafe { sing2ep_solve(p, 1, SING2EP_ROTATE_NONE, 0.0, 0.0, &mut s) };
    assert_eq!(st, Sing2epStatus::InvalidInput);
    let st = unsafe { sing2ep_solve(p, 1, 42, 0.0, 0.0, &mut s) };
    assert_eq!(st, Sing2epStatus::InvalidInput);
    let st = unsafe { sing2ep_solve(p, 1, SING2EP_ROTATE_ANGLE, f64::NAN, 0.0, &mut s) };
    assert_eq!(st, Sing2epStatus::InvalidInput);
    assert!(s.is_null());
    unsafe { sing2ep_problem_free(p) };

    let nan = [f64::NAN, 0.0, 1.0, 0.0, 0.0, 0.0];
    let st = unsafe { sing2ep_problem_new(1, nan.as_ptr(), 1, w2.as_ptr(), &mut p) };
    assert_eq!(st, Sing2epStatus::InvalidInput);

    assert_eq!(unsafe { sing2ep_solution_count(ptr::null()) }, 0);
    unsafe {
        sing2ep_problem_free(ptr::null_mut());
        sing2ep_solution_free(ptr::null_mut());
        sing2ep_string_free(ptr::null_mut());
    }
}

#[test]
fn kcf_of_identity_pencil() {
    let json =
        CString::new(r#"{"A": [[[1,0],[0,0]],[[0,0],[1,0]]], "B": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#)
            .unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { sing2ep_kcf(json.as_ptr(), 1, &mut out) },
        Sing2epStatus::Ok
    );
    assert_eq!(unsafe { CStr::from_ptr(out) }.to_str().unwrap(), "2*J1(1)");
    unsafe { sing2ep_string_free(out) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(sing2ep_version()) }
        .to_str()
        .unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<this test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_every_export() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/sing2ep.h");
    let text = std::fs::read_to_string(&header).unwrap();
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12, "{exports:?}");
    for f in exports {
        assert!(text.contains(&format!("{f}(")), "{f} missing from header");
    }
    for t in [
        "typedef struct Sing2epProblem Sing2epProblem;",
        "SING2EP_STATUS_AMBIGUITY = 2",
    ] {
        assert!(text.contains(t), "{t}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libsing2ep_ffi.a");
    assert!(
        lib.exists(),
        "static library not built at {}",
        lib.display()
    );
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::temp_dir().join(format!("sing2ep_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler is required for this test");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("count 1\n"), "{text}");
    assert!(
        text.contains("1.000000 0.000000 2.000000 0.000000 0 1\n"),
        "{text}"
    );
    assert!(text.contains("kcf 2*J1(1)\n"), "{text}");
    assert!(text.contains("bad 1\n"), "{text}");
}
