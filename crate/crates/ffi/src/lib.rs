//! C ABI for `parsched`.
//!
//! Algorithms are driven through an opaque `PsRunner` handle. Every function
//! returns a `PsStatus`; on failure a description is kept per thread and can
//! be fetched with `ps_last_error_message`. Panics never cross the boundary.

#![allow(non_camel_case_types)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use parsched::baseline::AnyAlgorithm;
use parsched::{opt_makespan, Error, Machine, OnlineAlgorithm};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    PS_OK = 0,
    PS_NULL_POINTER = 1,
    PS_INVALID_ARGUMENT = 2,
    PS_BAD_DELTA = 3,
    PS_NON_POSITIVE_SIZE = 4,
    PS_UNSORTED_INPUT = 5,
    PS_INVARIANT_VIOLATION = 6,
    PS_OUT_OF_RANGE = 7,
    PS_BUFFER_TOO_SMALL = 8,
    PS_PANIC = 9,
}

/// Algorithm selector for `ps_runner_new`.
pub const PS_ALG_GENERAL: u32 = 0;
pub const PS_ALG_SORTED: u32 = 1;
pub const PS_ALG_MULTI: u32 = 2;
pub const PS_ALG_UNIT: u32 = 3;
pub const PS_ALG_LIST: u32 = 4;

/// One piece of a solution. `machine` is 1 or 2; `job` is 1-based.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsPiece {
    pub machine: u8,
    pub job: usize,
    pub start: f64,
    pub end: f64,
}

/// Opaque algorithm instance.
pub struct PsRunner {
    alg: AnyAlgorithm,
    /// Set once an internal error left the state unusable.
    poisoned: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: PsStatus, msg: &str) -> PsStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> PsStatus {
    match e {
        Error::BadDelta(_) | Error::BadSolutionCount => PsStatus::PS_BAD_DELTA,
        Error::NonPositiveSize { .. } => PsStatus::PS_NON_POSITIVE_SIZE,
        Error::UnsortedInput { .. } => PsStatus::PS_UNSORTED_INPUT,
        Error::InvariantViolation(_) => PsStatus::PS_INVARIANT_VIOLATION,
        _ => PsStatus::PS_INVALID_ARGUMENT,
    }
}

fn guard(f: impl FnOnce() -> PsStatus) -> PsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PsStatus::PS_PANIC, "panic inside parsched"),
    }
}

unsafe fn as_runner<'a>(r: *const PsRunner) -> Result<&'a PsRunner, PsStatus> {
    r.as_ref()
        .ok_or_else(|| fail(PsStatus::PS_NULL_POINTER, "runner is null"))
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! out_ptr {
    ($p:expr) => {
        if $p.is_null() {
            return fail(PsStatus::PS_NULL_POINTER, "output pointer is null");
        }
    };
}

/// Creates a runner for `algorithm` (one of the `PS_ALG_*` constants).
/// `delta` is only read by the multi-solution algorithm.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_runner_new(algorithm: u32, delta: f64, out: *mut *mut PsRunner) -> PsStatus {
    guard(|| {
        out_ptr!(out);
        *out = ptr::null_mut();
        let name = match algorithm {
            PS_ALG_GENERAL => "general",
            PS_ALG_SORTED => "sorted",
            PS_ALG_MULTI => "multi",
            PS_ALG_UNIT => "unit",
            PS_ALG_LIST => "list",
            other => {
                return fail(
                    PsStatus::PS_INVALID_ARGUMENT,
                    &format!("unknown algorithm {other}"),
                )
            }
        };
        match AnyAlgorithm::from_name(name, delta) {
            Ok(alg) => {
                *out = Box::into_raw(Box::new(PsRunner {
                    alg,
                    poisoned: false,
                }));
                PsStatus::PS_OK
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Releases a runner. Null is ignored.
///
/// # Safety
/// `runner` must be null or a pointer returned by `ps_runner_new` that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn ps_runner_free(runner: *mut PsRunner) {
    if !runner.is_null() {
        drop(Box::from_raw(runner));
    }
}

/// Presents the next job. On a rejected job the runner is unchanged, except
/// after `PS_INVARIANT_VIOLATION` or `PS_PANIC`, which leave it unusable.
///
/// # Safety
/// `runner` must be a live pointer from `ps_runner_new`.
#[no_mangle]
pub unsafe extern "C" fn ps_runner_step(runner: *mut PsRunner, size: f64) -> PsStatus {
    let Some(r) = runner.as_mut() else {
        return fail(PsStatus::PS_NULL_POINTER, "runner is null");
    };
    if r.poisoned {
        return fail(
            PsStatus::PS_INVARIANT_VIOLATION,
            "runner is unusable after an earlier internal error",
        );
    }
    let status = guard(|| match r.alg.step(size) {
        Ok(_) => PsStatus::PS_OK,
        Err(e) => fail(status_of(&e), &e.to_string()),
    });
    if matches!(status, PsStatus::PS_INVARIANT_VIOLATION | PsStatus::PS_PANIC) {
        r.poisoned = true;
    }
    status
}

/// # Safety
/// `runner` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_runner_job_count(runner: *const PsRunner, out: *mut usize) -> PsStatus {
    let r = try_ffi!(as_runner(runner));
    out_ptr!(out);
    *out = r.alg.jobs_seen();
    PsStatus::PS_OK
}

/// # Safety
/// `runner` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_runner_solution_count(runner: *const PsRunner, out: *mut usize) -> PsStatus {
    let r = try_ffi!(as_runner(runner));
    out_ptr!(out);
    *out = r.alg.solution_count();
    PsStatus::PS_OK
}

/// Best maximum completion time over the solutions (0 before any job).
///
/// # Safety
/// `runner` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_runner_makespan(runner: *const PsRunner, out: *mut f64) -> PsStatus {
    let r = try_ffi!(as_runner(runner));
    out_ptr!(out);
    guard(|| {
        *out = r.alg.makespan();
        PsStatus::PS_OK
    })
}

/// Optimal offline makespan of the jobs presented so far.
///
/// # Safety
/// `runner` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_runner_opt(runner: *const PsRunner, out: *mut f64) -> PsStatus {
    let r = try_ffi!(as_runner(runner));
    out_ptr!(out);
    *out = r.alg.stats().opt;
    PsStatus::PS_OK
}

/// Writes the completion times of machines 1 and 2 of one solution.
///
/// # Safety
/// `runner` must be live; `out` must point to two writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_runner_solution_loads(
    runner: *const PsRunner,
    solution: usize,
    out: *mut f64,
) -> PsStatus {
    let r = try_ffi!(as_runner(runner));
    out_ptr!(out);
    guard(|| {
        let set = r.alg.snapshot();
        let Some(s) = set.solutions.get(solution) else {
            return fail(
                PsStatus::PS_OUT_OF_RANGE,
                &format!("solution {solution} out of range 0..{}", set.len()),
            );
        };
        let loads = slice::from_raw_parts_mut(out, 2);
        loads[0] = s.load(Machine::First);
        loads[1] = s.load(Machine::Second);
        PsStatus::PS_OK
    })
}

/// Copies the pieces of one solution into `buf`. `*written` receives the
/// number of pieces; when `capacity` is too small (or `buf` is null) nothing
/// is copied and `PS_BUFFER_TOO_SMALL` is returned with the required count.
///
/// # Safety
/// `runner` must be live; `buf` must be null or hold `capacity` pieces;
/// `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_runner_pieces(
    runner: *const PsRunner,
    solution: usize,
    buf: *mut PsPiece,
    capacity: usize,
    written: *mut usize,
) -> PsStatus {
    let r = try_ffi!(as_runner(runner));
    out_ptr!(written);
    guard(|| {
        let set = r.alg.snapshot();
        let Some(s) = set.solutions.get(solution) else {
            return fail(
                PsStatus::PS_OUT_OF_RANGE,
                &format!("solution {solution} out of range 0..{}", set.len()),
            );
        };
        let pieces = s.pieces();
        *written = pieces.len();
        if buf.is_null() || capacity < pieces.len() {
            return fail(
                PsStatus::PS_BUFFER_TOO_SMALL,
                &format!("{} pieces do not fit in {capacity}", pieces.len()),
            );
        }
        let dst = slice::from_raw_parts_mut(buf, pieces.len());
        for (d, p) in dst.iter_mut().zip(pieces) {
            *d = PsPiece {
                machine: p.machine.number(),
                job: p.job,
                start: p.start,
                end: p.end,
            };
        }
        PsStatus::PS_OK
    })
}

/// Optimal preemptive makespan `max(W/2, p_max)` of `n` sizes.
///
/// # Safety
/// `sizes` must hold `n` doubles (it may be null when `n` is 0); `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_opt_makespan(sizes: *const f64, n: usize, out: *mut f64) -> PsStatus {
    out_ptr!(out);
    if sizes.is_null() && n > 0 {
        return fail(PsStatus::PS_NULL_POINTER, "sizes is null");
    }
    let sizes = if n == 0 { &[][..] } else { slice::from_raw_parts(sizes, n) };
    let jobs = match parsched::jobs_from_sizes(sizes) {
        Ok(j) => j,
        Err(e) => return fail(status_of(&e), &e.to_string()),
    };
    match opt_makespan(&jobs) {
        Ok(v) => {
            *out = v;
            PsStatus::PS_OK
        }
        Err(e) => fail(status_of(&e), &e.to_string()),
    }
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `capacity`). Returns the full message length
/// without the terminator.
///
/// # Safety
/// `buf` must be null or hold `capacity` bytes.
#[no_mangle]
pub unsafe extern "C" fn ps_last_error_message(buf: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes();
        if !buf.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
