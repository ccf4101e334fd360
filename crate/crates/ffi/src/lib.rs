//! C interface to `ellipzeta`.
//!
//! A lattice is created once with [`ez_lattice_new`] or [`ez_lattice_from_tau`]
//! and released with [`ez_lattice_free`]. Every other call returns an
//! [`EzStatus`]; on anything but `EZ_STATUS_OK` a message is available from
//! [`ez_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ellipzeta::{functions, verify, Error, Lattice, SeriesConfig, Weierstrass};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EzStatus {
    Ok = 0,
    /// the argument is at or near a pole; no value was written
    Pole = 1,
    NullPointer = 2,
    InvalidLattice = 3,
    InvalidArgument = 4,
    UnknownFunction = 5,
    /// a series or branch computation failed
    Numerical = 6,
    /// at least one identity failed; the report was still written
    IdentityFailed = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EzComplex {
    pub re: f64,
    pub im: f64,
}

impl From<EzComplex> for Complex64 {
    fn from(z: EzComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for EzComplex {
    fn from(z: Complex64) -> Self {
        EzComplex { re: z.re, im: z.im }
    }
}

/// Lattice constants; index 0..2 of `e` and `eta` is half-period 1..3.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EzConstants {
    pub omega1: EzComplex,
    pub omega3: EzComplex,
    pub tau: EzComplex,
    pub q: EzComplex,
    pub e: [EzComplex; 3],
    pub eta: [EzComplex; 3],
    pub g2: EzComplex,
    pub g3: EzComplex,
    pub disc: EzComplex,
    pub ksq: EzComplex,
    pub kpsq: EzComplex,
}

/// Opaque lattice handle.
pub struct EzLattice {
    w: Weierstrass,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: EzStatus, msg: impl Into<String>) -> EzStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &Error) -> EzStatus {
    match e {
        Error::PoleProximity { .. } => EzStatus::Pole,
        Error::ZeroPeriod
        | Error::InvalidPeriodRatio { .. }
        | Error::ConvergencePolicy { .. }
        | Error::DegenerateLattice => EzStatus::InvalidLattice,
        Error::UnknownFunction(_) => EzStatus::UnknownFunction,
        Error::InvalidArgument(_) | Error::InvalidConfig(_) | Error::IdenticalIndices(_) | Error::SuiteConfig(_) => {
            EzStatus::InvalidArgument
        }
        _ => EzStatus::Numerical,
    }
}

fn from_error(e: Error) -> EzStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, turning a panic into `EZ_STATUS_PANIC` and clearing the last error on success.
fn guarded(f: impl FnOnce() -> EzStatus) -> EzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == EzStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            s
        }
        Err(_) => fail(EzStatus::Panic, "internal panic"),
    }
}

/// Borrowed UTF-8 string, or `None` for a null pointer.
unsafe fn opt_str<'a>(p: *const c_char) -> Result<Option<&'a str>, EzStatus> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Some)
        .map_err(|_| fail(EzStatus::InvalidArgument, "string is not valid UTF-8"))
}

fn build(lat: Result<Lattice, Error>, out: *mut *mut EzLattice) -> EzStatus {
    if out.is_null() {
        return fail(EzStatus::NullPointer, "out is null");
    }
    match lat.and_then(|l| Weierstrass::new(l, SeriesConfig::default())) {
        Ok(w) => {
            unsafe { *out = Box::into_raw(Box::new(EzLattice { w })) };
            EzStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Creates a lattice from its half-periods.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ez_lattice_new(omega1: EzComplex, omega3: EzComplex, out: *mut *mut EzLattice) -> EzStatus {
    guarded(|| build(Lattice::new(omega1.into(), omega3.into()), out))
}

/// Creates a lattice from ω1 and τ = ω3/ω1.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ez_lattice_from_tau(omega1: EzComplex, tau: EzComplex, out: *mut *mut EzLattice) -> EzStatus {
    guarded(|| build(Lattice::from_tau(omega1.into(), tau.into()), out))
}

/// Releases a lattice. Null is ignored.
///
/// # Safety
/// `lat` must come from `ez_lattice_new`/`ez_lattice_from_tau` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ez_lattice_free(lat: *mut EzLattice) {
    if !lat.is_null() {
        drop(Box::from_raw(lat));
    }
}

/// Writes the lattice constants to `out`.
///
/// # Safety
/// `lat` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ez_constants(lat: *const EzLattice, out: *mut EzConstants) -> EzStatus {
    guarded(|| {
        let (Some(lat), false) = (lat.as_ref(), out.is_null()) else {
            return fail(EzStatus::NullPointer, "null lattice or output");
        };
        let l = lat.w.lattice();
        let k = lat.w.constants();
        *out = EzConstants {
            omega1: l.omega1.into(),
            omega3: l.omega3.into(),
            tau: l.tau.into(),
            q: l.q.into(),
            e: k.e.map(Into::into),
            eta: k.eta.map(Into::into),
            g2: k.g2.into(),
            g3: k.g3.into(),
            disc: k.disc.into(),
            ksq: k.ksq.into(),
            kpsq: k.kpsq.into(),
        };
        EzStatus::Ok
    })
}

/// Evaluates the function `name` (as listed by `ellipzeta --list-fns`) at `u`.
///
/// `a` is the second argument of `Pi` and must be null otherwise; `route`
/// may be null for the default route. Returns `EZ_STATUS_POLE` without writing
/// `out` when `u` is at or near a pole.
///
/// # Safety
/// `lat` must be a live handle, `name` a nul-terminated string, `a` and
/// `route` null or valid, and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ez_eval(
    lat: *const EzLattice,
    name: *const c_char,
    u: EzComplex,
    a: *const EzComplex,
    route: *const c_char,
    out: *mut EzComplex,
) -> EzStatus {
    guarded(|| {
        let (Some(lat), false, false) = (lat.as_ref(), name.is_null(), out.is_null()) else {
            return fail(EzStatus::NullPointer, "null lattice, name or output");
        };
        let (name, route) = match (opt_str(name), opt_str(route)) {
            (Ok(Some(n)), Ok(r)) => (n, r),
            (Err(s), _) | (_, Err(s)) => return s,
            (Ok(None), _) => unreachable!("checked above"),
        };
        let a = a.as_ref().map(|z| Complex64::from(*z));
        match functions::evaluate(&lat.w, name, u.into(), a, route) {
            Ok(r) if r.is_finite() => {
                *out = r.value.into();
                EzStatus::Ok
            }
            Ok(r) => fail(
                EzStatus::Pole,
                format!("{name} at {}: {}", Complex64::from(u), r.status),
            ),
            Err(e) => from_error(e),
        }
    })
}

/// Runs the identity suite on the lattice and returns the JSON report in
/// `*out`, to be released with [`ez_string_free`]. `only` is an optional
/// glob over identity names. Returns `EZ_STATUS_IDENTITY_FAILED` (with the report
/// written) when an identity fails.
///
/// # Safety
/// `lat` must be a live handle, `only` null or a nul-terminated string,
/// and `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ez_verify_json(
    lat: *const EzLattice,
    n: usize,
    seed: u64,
    only: *const c_char,
    out: *mut *mut c_char,
) -> EzStatus {
    guarded(|| {
        let (Some(lat), false) = (lat.as_ref(), out.is_null()) else {
            return fail(EzStatus::NullPointer, "null lattice or output");
        };
        let only = match opt_str(only) {
            Ok(o) => o,
            Err(s) => return s,
        };
        let reports = match verify::select(only)
            .and_then(|s| verify::run_suite_with(&lat.w, &verify::default_registry(), &s, n, seed))
        {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        let json = CString::new(verify::report_json(&reports)).expect("JSON has no nul");
        *out = json.into_raw();
        if reports.iter().all(|r| r.passed) {
            EzStatus::Ok
        } else {
            fail(EzStatus::IdentityFailed, "at least one identity failed")
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ez_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ez_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
