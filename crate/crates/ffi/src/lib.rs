//! C ABI over `dgalois`. Objects are opaque handles released with their
//! `_free` function; strings returned to C are released with
//! `dg_string_free`. Every entry point returns a `DgStatus` and leaves a
//! message for `dg_last_error` on failure.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::c_char;
use num_rational::BigRational;

use dgalois::fixtures::{reproduce, FixtureOptions};
use dgalois::roots::{Kind, RootSystem};
use dgalois::system::{assemble_group_equation, ActionKind, ActionSpec, Factor, SystemRecord};
use dgalois::verify::{check_system, mutate, Mutation, Status, VerificationBundle};
use dgalois::weyl::{enumerate_cycle_types, is_strictly_transitive, weyl_action, CycleType, WeylReport};
use dgalois::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgStatus {
    Ok = 0,
    VerificationFailed = 1,
    BadInput = 2,
    ResourceCap = 3,
    NullPointer = 4,
    Internal = 5,
}

/// Weyl group action on a minuscule orbit with all its cycle types.
pub struct DgWeylReport {
    inner: WeylReport,
}

/// An assembled system `Y' = A Y` with everything needed to re-verify it.
pub struct DgSystem {
    inner: SystemRecord,
}

/// Outcome of verifying a system.
pub struct DgReport {
    inner: VerificationBundle,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DgStatus {
    match e {
        Error::ResourceCap(_) => DgStatus::ResourceCap,
        Error::Internal(_) => DgStatus::Internal,
        _ => DgStatus::BadInput,
    }
}

fn guard(f: impl FnOnce() -> Result<DgStatus, (DgStatus, String)>) -> DgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside dgalois".to_string());
            DgStatus::Internal
        }
    }
}

fn lib<T>(r: dgalois::Result<T>) -> Result<T, (DgStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (DgStatus, String) {
    (DgStatus::NullPointer, format!("{what} is NULL"))
}

/// # Safety
/// `s` is NULL or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (DgStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (DgStatus::BadInput, format!("{what} is not UTF-8")))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, (DgStatus, String)> {
    serde_json::to_string_pretty(v).map_err(|e| (DgStatus::Internal, e.to_string()))
}

/// Message of the last failure on this thread, or NULL. Owned by the
/// library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is NULL or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Enumerate the Weyl group of `kind` (A, B, C, D, E6, E7) and rank on its
/// first minuscule orbit. `cap` bounds stored elements; 0 uses the default
/// memory budget.
///
/// # Safety
/// `kind` is a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_weyl_report_new(
    kind: *const c_char,
    rank: usize,
    cap: usize,
    out: *mut *mut DgWeylReport,
) -> DgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kind: Kind = lib(read_str(kind, "kind")?.parse())?;
        let rs = lib(RootSystem::new(kind, rank))?;
        let highest = rs.minuscule_weights().into_iter().next().ok_or_else(|| (DgStatus::BadInput, "no minuscule weight".into()))?;
        let (_, orbit, gens) = lib(weyl_action(kind, rank, &highest))?;
        let en = lib(enumerate_cycle_types(&gens, if cap == 0 { None } else { Some(cap) }))?;
        let inner = WeylReport {
            kind,
            rank,
            highest_weight: highest,
            orbit_size: orbit.len(),
            orbit,
            group_order: en.order,
            cycle_types: en.types,
            strictly_transitive_sets: None,
            nonexistence_proven: None,
        };
        *out = Box::into_raw(Box::new(DgWeylReport { inner }));
        Ok(DgStatus::Ok)
    })
}

/// # Safety
/// `r` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn dg_weyl_report_group_order(r: *const DgWeylReport) -> u64 {
    r.as_ref().map_or(0, |r| r.inner.group_order)
}

/// # Safety
/// `r` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn dg_weyl_report_orbit_size(r: *const DgWeylReport) -> usize {
    r.as_ref().map_or(0, |r| r.inner.orbit_size)
}

/// # Safety
/// `r` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn dg_weyl_report_cycle_type_count(r: *const DgWeylReport) -> usize {
    r.as_ref().map_or(0, |r| r.inner.cycle_types.len())
}

/// JSON text of the report; free with `dg_string_free`. NULL on failure.
///
/// # Safety
/// `r` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn dg_weyl_report_to_json(r: *const DgWeylReport) -> *mut c_char {
    match r.as_ref() {
        None => {
            set_error("report is NULL".into());
            ptr::null_mut()
        }
        Some(r) => serde_json::to_string_pretty(&r.inner).map_or(ptr::null_mut(), to_c_string),
    }
}

/// # Safety
/// `r` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dg_weyl_report_free(r: *mut DgWeylReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Strict transitivity on `m` points of `count` cycle types, given as
/// `lengths[i]` parts each, concatenated in `parts`.
///
/// # Safety
/// `parts` holds sum(lengths) values, `lengths` holds `count`, `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn dg_is_strictly_transitive(
    parts: *const usize,
    lengths: *const usize,
    count: usize,
    m: usize,
    out: *mut bool,
) -> DgStatus {
    guard(|| {
        if out.is_null() || (count > 0 && (parts.is_null() || lengths.is_null())) {
            return Err(null("argument"));
        }
        let lengths = if count == 0 { &[][..] } else { std::slice::from_raw_parts(lengths, count) };
        let total: usize = lengths.iter().sum();
        let parts = if total == 0 { &[][..] } else { std::slice::from_raw_parts(parts, total) };
        let mut cts = Vec::with_capacity(count);
        let mut at = 0;
        for &l in lengths {
            let ct = CycleType::new(parts[at..at + l].to_vec());
            if ct.degree() != m {
                return Err((DgStatus::BadInput, format!("cycle type {ct} is not on {m} points")));
            }
            cts.push(ct);
            at += l;
        }
        *out = is_strictly_transitive(&cts, m).0;
        Ok(DgStatus::Ok)
    })
}

/// Assemble a system. `group` is comma-separated ("sl2,sp4"), `action` is
/// trivial, conjugation or transpose-inverse, `points` comma-separated
/// rationals ("4,9,16").
///
/// # Safety
/// String arguments are valid C strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_system_build(
    group: *const c_char,
    action: *const c_char,
    order: u32,
    points: *const c_char,
    out: *mut *mut DgSystem,
) -> DgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let factors: Vec<Factor> = lib(read_str(group, "group")?.split(',').map(str::parse).collect())?;
        let kind: ActionKind = lib(read_str(action, "action")?.parse())?;
        let xs: Vec<BigRational> = read_str(points, "points")?
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| (DgStatus::BadInput, format!("bad point {p:?}"))))
            .collect::<Result<_, _>>()?;
        let inner = lib(assemble_group_equation(&factors, &ActionSpec { kind, order }, &xs))?;
        *out = Box::into_raw(Box::new(DgSystem { inner }));
        Ok(DgStatus::Ok)
    })
}

/// # Safety
/// `text` is a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_system_from_json(text: *const c_char, out: *mut *mut DgSystem) -> DgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner: SystemRecord =
            serde_json::from_str(read_str(text, "text")?).map_err(|e| (DgStatus::BadInput, e.to_string()))?;
        *out = Box::into_raw(Box::new(DgSystem { inner }));
        Ok(DgStatus::Ok)
    })
}

/// # Safety
/// `s` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn dg_system_to_json(s: *const DgSystem) -> *mut c_char {
    match s.as_ref() {
        None => {
            set_error("system is NULL".into());
            ptr::null_mut()
        }
        Some(s) => serde_json::to_string_pretty(&s.inner).map_or(ptr::null_mut(), to_c_string),
    }
}

/// New system with one documented mutation applied (see `verify --mutate`).
///
/// # Safety
/// `s` is a live handle, `mutation` a valid C string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_system_mutate(s: *const DgSystem, mutation: *const c_char, out: *mut *mut DgSystem) -> DgStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("system"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let m: Mutation = lib(read_str(mutation, "mutation")?.parse())?;
        let (inner, _) = lib(mutate(&s.inner, m))?;
        *out = Box::into_raw(Box::new(DgSystem { inner }));
        Ok(DgStatus::Ok)
    })
}

/// # Safety
/// `s` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dg_system_free(s: *mut DgSystem) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Verify every hypothesis. The report is produced whenever the record is
/// well formed; the status is `VerificationFailed` if any check fails.
///
/// # Safety
/// `s` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_system_verify(s: *const DgSystem, out: *mut *mut DgReport) -> DgStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("system"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = lib(check_system(&s.inner))?;
        let passed = inner.passed;
        *out = Box::into_raw(Box::new(DgReport { inner }));
        if passed {
            Ok(DgStatus::Ok)
        } else {
            set_error("verification failed".into());
            Ok(DgStatus::VerificationFailed)
        }
    })
}

/// # Safety
/// `r` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn dg_report_passed(r: *const DgReport) -> bool {
    r.as_ref().is_some_and(|r| r.inner.passed)
}

/// # Safety
/// `r` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn dg_report_check_count(r: *const DgReport) -> usize {
    r.as_ref().map_or(0, |r| r.inner.checks.len())
}

/// # Safety
/// `r` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn dg_report_failed_count(r: *const DgReport) -> usize {
    r.as_ref().map_or(0, |r| r.inner.checks.iter().filter(|c| c.status == Status::Fail).count())
}

/// # Safety
/// `r` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn dg_report_to_json(r: *const DgReport) -> *mut c_char {
    match r.as_ref() {
        None => {
            set_error("report is NULL".into());
            ptr::null_mut()
        }
        Some(r) => serde_json::to_string_pretty(&r.inner).map_or(ptr::null_mut(), to_c_string),
    }
}

/// # Safety
/// `r` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dg_report_free(r: *mut DgReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Run a named fixture and return its JSON log in `out_json` (free with
/// `dg_string_free`). `VerificationFailed` if any of its checks fail.
///
/// # Safety
/// `fixture` is a valid C string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_reproduce(fixture: *const c_char, out_json: *mut *mut c_char) -> DgStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let log = lib(reproduce(read_str(fixture, "fixture")?, FixtureOptions::default()))?;
        *out_json = to_c_string(json(&log)?);
        Ok(if log.passed { DgStatus::Ok } else { DgStatus::VerificationFailed })
    })
}
