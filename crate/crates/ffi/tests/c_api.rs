use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use parsched_ffi::*;

fn new_runner(alg: u32, delta: f64) -> *mut PsRunner {
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { ps_runner_new(alg, delta, &mut r) }, PsStatus::PS_OK);
    assert!(!r.is_null());
    r
}

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 512];
    unsafe {
        ps_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn general_runner_matches_the_library() {
    let r = new_runner(PS_ALG_GENERAL, 1.0);
    unsafe {
        for s in [1.0, 1.0] {
            assert_eq!(ps_runner_step(r, s), PsStatus::PS_OK);
        }
        let mut n = 0;
        assert_eq!(ps_runner_solution_count(r, &mut n), PsStatus::PS_OK);
        assert_eq!(n, 2);
        assert_eq!(ps_runner_job_count(r, &mut n), PsStatus::PS_OK);
        assert_eq!(n, 2);
        let mut m = 0.0;
        assert_eq!(ps_runner_makespan(r, &mut m), PsStatus::PS_OK);
        assert!((m - (5f64.sqrt() - 1.0)).abs() < 1e-9);
        let mut loads = [0.0; 2];
        assert_eq!(ps_runner_solution_loads(r, 1, loads.as_mut_ptr()), PsStatus::PS_OK);
        assert!((loads[0] + loads[1] - 2.0).abs() < 1e-12);
        assert_eq!(
            ps_runner_solution_loads(r, 2, loads.as_mut_ptr()),
            PsStatus::PS_OUT_OF_RANGE
        );
        ps_runner_free(r);
    }
}

#[test]
fn pieces_report_required_capacity() {
    let r = new_runner(PS_ALG_SORTED, 1.0);
    unsafe {
        for s in [1.0, 1.0, 1.0] {
            assert_eq!(ps_runner_step(r, s), PsStatus::PS_OK);
        }
        let mut n = 0;
        assert_eq!(
            ps_runner_pieces(r, 0, ptr::null_mut(), 0, &mut n),
            PsStatus::PS_BUFFER_TOO_SMALL
        );
        assert!(n > 0);
        let mut buf = vec![
            PsPiece {
                machine: 0,
                job: 0,
                start: 0.0,
                end: 0.0
            };
            n
        ];
        let mut written = 0;
        assert_eq!(
            ps_runner_pieces(r, 0, buf.as_mut_ptr(), buf.len(), &mut written),
            PsStatus::PS_OK
        );
        assert_eq!(written, n);
        let total: f64 = buf.iter().map(|p| p.end - p.start).sum();
        assert!((total - 3.0).abs() < 1e-9);
        assert!(buf.iter().all(|p| p.machine == 1 || p.machine == 2));
        ps_runner_free(r);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(ps_runner_new(99, 1.0, &mut r), PsStatus::PS_INVALID_ARGUMENT);
        assert!(r.is_null());
        assert_eq!(ps_runner_new(PS_ALG_MULTI, 0.0, &mut r), PsStatus::PS_BAD_DELTA);
        assert!(last_error().contains("delta"));
        assert_eq!(ps_runner_new(PS_ALG_GENERAL, 1.0, ptr::null_mut()), PsStatus::PS_NULL_POINTER);
        assert_eq!(ps_runner_step(ptr::null_mut(), 1.0), PsStatus::PS_NULL_POINTER);

        let r = new_runner(PS_ALG_SORTED, 1.0);
        assert_eq!(ps_runner_step(r, 1.0), PsStatus::PS_OK);
        assert_eq!(ps_runner_step(r, 2.0), PsStatus::PS_UNSORTED_INPUT);
        assert_eq!(ps_runner_step(r, 0.0), PsStatus::PS_NON_POSITIVE_SIZE);
        assert_eq!(ps_runner_step(r, f64::NAN), PsStatus::PS_NON_POSITIVE_SIZE);
        // Rejected jobs leave the runner usable.
        assert_eq!(ps_runner_step(r, 0.5), PsStatus::PS_OK);
        let mut n = 0;
        ps_runner_job_count(r, &mut n);
        assert_eq!(n, 2);
        ps_runner_free(r);

        let u = new_runner(PS_ALG_UNIT, 1.0);
        assert_eq!(ps_runner_step(u, 2.0), PsStatus::PS_INVALID_ARGUMENT);
        ps_runner_free(u);
        ps_runner_free(ptr::null_mut());
    }
}

#[test]
fn multi_runner_has_nine_over_delta_squared_solutions() {
    let r = new_runner(PS_ALG_MULTI, 0.5);
    let mut n = 0;
    unsafe {
        ps_runner_solution_count(r, &mut n);
        ps_runner_free(r);
    }
    assert_eq!(n, 36);
}

#[test]
fn opt_of_raw_sizes() {
    let sizes = [3.0, 3.0, 1.0];
    let mut out = 0.0;
    unsafe {
        assert_eq!(ps_opt_makespan(sizes.as_ptr(), 3, &mut out), PsStatus::PS_OK);
        assert_eq!(out, 3.5);
        assert_eq!(ps_opt_makespan(ptr::null(), 0, &mut out), PsStatus::PS_OK);
        assert_eq!(out, 0.0);
        assert_eq!(ps_opt_makespan(ptr::null(), 2, &mut out), PsStatus::PS_NULL_POINTER);
        let bad = [1.0, -2.0];
        assert_eq!(ps_opt_makespan(bad.as_ptr(), 2, &mut out), PsStatus::PS_NON_POSITIVE_SIZE);
    }
}

#[test]
fn error_message_truncates_and_reports_length() {
    unsafe {
        let mut r = ptr::null_mut();
        ps_runner_new(7, 1.0, &mut r);
        let full = ps_last_error_message(ptr::null_mut(), 0);
        let mut small = [0 as std::ffi::c_char; 4];
        assert_eq!(ps_last_error_message(small.as_mut_ptr(), 4), full);
        assert_eq!(CStr::from_ptr(small.as_ptr()).to_bytes().len(), 3);
        assert_eq!(CStr::from_ptr(ps_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}

/// Compiles `tests/smoke.c` against the generated header and the static
/// library and runs it.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // `cargo test` leaves the archive in deps/; `cargo build` also copies it up.
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = [deps, deps.parent().unwrap()]
        .iter()
        .map(|d| d.join("libparsched_ffi.a"))
        .find(|p| p.exists())
        .unwrap_or_else(|| panic!("static library not found near {}", deps.display()));
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("parsched_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("running cc");
    assert!(status.success(), "cc failed");
    let run = Command::new(&out).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(run.status.success(), "{stdout}{}", String::from_utf8_lossy(&run.stderr));
    assert!(stdout.starts_with("ok "));
}
