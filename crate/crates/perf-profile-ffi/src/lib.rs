//! C ABI for the perf-profile library.
//!
//! Handles are opaque pointers created and destroyed by this library.
//! Every fallible function returns a [`PpStatus`]; on any non-OK status the
//! thread-local message from [`pp_last_error_message`] describes the
//! failure. Strings returned through out-parameters are heap-allocated and
//! must be released with [`pp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use perf_profile::ingest::{parse_timing_csv, parse_timing_json, write_timing_csv, IngestPolicy};
use perf_profile::plot::{export_steps, render_svg, PlotSpec, Scale};
use perf_profile::{
    compute_profiles, compute_ratios, l1_distance, sup_distance, Error, ProfileSet, RmPolicy,
    TimingTable,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    UnknownSolver = 5,
    IndexOutOfRange = 6,
    Panic = 99,
}

/// An ingested timing table.
pub struct PpTable(TimingTable);

/// Profiles for every solver of one table, sharing n_p and r_M.
pub struct PpProfiles(ProfileSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<Vec<u8>>) {
    let message = CString::new(message).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(err: &Error) -> PpStatus {
    match err {
        Error::Parse { .. } | Error::Json(_) => PpStatus::ParseError,
        Error::UnknownSolver(_) => PpStatus::UnknownSolver,
        _ => PpStatus::InvalidInput,
    }
}

fn fail(err: Error) -> PpStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn guard(f: impl FnOnce() -> PpStatus) -> PpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            PpStatus::Panic
        }
    }
}

/// # Safety
/// `text` must be a valid NUL-terminated C string.
unsafe fn utf8_in<'a>(text: *const c_char) -> Result<&'a str, PpStatus> {
    if text.is_null() {
        set_error("null string argument");
        return Err(PpStatus::NullArgument);
    }
    CStr::from_ptr(text).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        PpStatus::InvalidUtf8
    })
}

fn string_out(out: *mut *mut c_char, value: String) -> PpStatus {
    if out.is_null() {
        set_error("null output argument");
        return PpStatus::NullArgument;
    }
    match CString::new(value) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            PpStatus::Ok
        }
        Err(_) => {
            set_error("output contains an interior NUL byte");
            PpStatus::InvalidInput
        }
    }
}

/// # Safety
/// `ptr` must be non-null.
unsafe fn deref<'a, T>(ptr: *const T) -> Result<&'a T, PpStatus> {
    if ptr.is_null() {
        set_error("null handle");
        return Err(PpStatus::NullArgument);
    }
    Ok(&*ptr)
}

/// Message describing the most recent failure on this thread, or NULL when
/// every call so far succeeded. The pointer stays valid until the next
/// failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn pp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned through an out-parameter of
/// this library, not yet freed; NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn pp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a timing CSV document (default ingest policy) into a table.
///
/// # Safety
/// `text` must be a valid NUL-terminated C string; `out` must be a valid
/// pointer to a `PpTable*`.
#[no_mangle]
pub unsafe extern "C" fn pp_table_parse_csv(
    text: *const c_char,
    out: *mut *mut PpTable,
) -> PpStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output argument");
            return PpStatus::NullArgument;
        }
        let text = match utf8_in(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_timing_csv(text, &IngestPolicy::default()) {
            Ok(table) => {
                *out = Box::into_raw(Box::new(PpTable(table)));
                PpStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Parse a timing JSON document (explicit nulls mark failures).
///
/// # Safety
/// Same contract as [`pp_table_parse_csv`].
#[no_mangle]
pub unsafe extern "C" fn pp_table_parse_json(
    text: *const c_char,
    out: *mut *mut PpTable,
) -> PpStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output argument");
            return PpStatus::NullArgument;
        }
        let text = match utf8_in(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_timing_json(text, &IngestPolicy::default()) {
            Ok(table) => {
                *out = Box::into_raw(Box::new(PpTable(table)));
                PpStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Destroy a table handle. NULL is a no-op.
///
/// # Safety
/// `table` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pp_table_free(table: *mut PpTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of problems, or 0 for a NULL handle.
///
/// # Safety
/// `table` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pp_table_problem_count(table: *const PpTable) -> usize {
    deref(table).map_or(0, |t| t.0.n_problems())
}

/// Number of solvers, or 0 for a NULL handle.
///
/// # Safety
/// `table` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pp_table_solver_count(table: *const PpTable) -> usize {
    deref(table).map_or(0, |t| t.0.n_solvers())
}

/// Serialize a table back to canonical CSV.
///
/// # Safety
/// `table` must be a live handle; `out` receives a string to release with
/// [`pp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn pp_table_to_csv(table: *const PpTable, out: *mut *mut c_char) -> PpStatus {
    guard(|| match deref(table) {
        Ok(t) => string_out(out, write_timing_csv(&t.0)),
        Err(s) => s,
    })
}

/// Compute performance profiles for every solver of `table`.
///
/// `r_m` chooses the failure sentinel: any value <= 0 selects the automatic
/// rule (twice the largest finite ratio); a positive value must strictly
/// exceed every finite ratio.
///
/// # Safety
/// `table` must be a live handle; `out` must point to a `PpProfiles*`.
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_compute(
    table: *const PpTable,
    r_m: f64,
    out: *mut *mut PpProfiles,
) -> PpStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output argument");
            return PpStatus::NullArgument;
        }
        let table = match deref(table) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let policy = if r_m > 0.0 {
            RmPolicy::Explicit(r_m)
        } else {
            RmPolicy::Auto
        };
        let result = compute_ratios(&table.0, policy).and_then(|r| compute_profiles(&r));
        match result {
            Ok(set) => {
                *out = Box::into_raw(Box::new(PpProfiles(set)));
                PpStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Rebuild profiles from the JSON interchange document.
///
/// # Safety
/// Same string contract as [`pp_table_parse_csv`].
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_from_json(
    text: *const c_char,
    out: *mut *mut PpProfiles,
) -> PpStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output argument");
            return PpStatus::NullArgument;
        }
        let text = match utf8_in(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match ProfileSet::from_json_str(text) {
            Ok(set) => {
                *out = Box::into_raw(Box::new(PpProfiles(set)));
                PpStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Destroy a profiles handle. NULL is a no-op.
///
/// # Safety
/// `profiles` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_free(profiles: *mut PpProfiles) {
    if !profiles.is_null() {
        drop(Box::from_raw(profiles));
    }
}

/// Shared problem count, or 0 for a NULL handle.
///
/// # Safety
/// `profiles` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_problem_count(profiles: *const PpProfiles) -> usize {
    deref(profiles).map_or(0, |p| p.0.n_problems())
}

/// Number of solvers, or 0 for a NULL handle.
///
/// # Safety
/// `profiles` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_solver_count(profiles: *const PpProfiles) -> usize {
    deref(profiles).map_or(0, |p| p.0.profiles().len())
}

/// The shared failure sentinel, or NaN for a NULL handle.
///
/// # Safety
/// `profiles` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_r_m(profiles: *const PpProfiles) -> f64 {
    deref(profiles).map_or(f64::NAN, |p| p.0.r_m())
}

fn profile_at(set: &PpProfiles, index: usize) -> Result<&perf_profile::Profile, PpStatus> {
    set.0.profiles().get(index).ok_or_else(|| {
        set_error(format!(
            "solver index {index} out of range ({} solvers)",
            set.0.profiles().len()
        ));
        PpStatus::IndexOutOfRange
    })
}

/// Name of the solver at `index`.
///
/// # Safety
/// `profiles` must be a live handle; `out` receives a string to release
/// with [`pp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_solver_name(
    profiles: *const PpProfiles,
    index: usize,
    out: *mut *mut c_char,
) -> PpStatus {
    guard(|| {
        let set = match deref(profiles) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match profile_at(set, index) {
            Ok(p) => string_out(out, p.solver().to_string()),
            Err(s) => s,
        }
    })
}

macro_rules! profile_scalar {
    ($(#[$doc:meta])* $name:ident, |$p:ident| $expr:expr) => {
        $(#[$doc])*
        /// # Safety
        /// `profiles` must be a live handle; `out` must point to a double.
        #[no_mangle]
        pub unsafe extern "C" fn $name(
            profiles: *const PpProfiles,
            index: usize,
            out: *mut f64,
        ) -> PpStatus {
            guard(|| {
                if out.is_null() {
                    set_error("null output argument");
                    return PpStatus::NullArgument;
                }
                let set = match deref(profiles) {
                    Ok(p) => p,
                    Err(s) => return s,
                };
                match profile_at(set, index) {
                    Ok($p) => {
                        *out = $expr;
                        PpStatus::Ok
                    }
                    Err(s) => s,
                }
            })
        }
    };
}

profile_scalar!(
    /// Fraction of problems on which the solver matched the best metric.
    pp_profiles_win_probability,
    |p| p.win_probability()
);

profile_scalar!(
    /// Fraction of problems the solver solved at all.
    pp_profiles_success_probability,
    |p| p.success_probability()
);

/// Profile value at `tau`: the fraction of problems whose ratio is at most
/// `tau`.
///
/// # Safety
/// `profiles` must be a live handle; `out` must point to a double.
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_evaluate(
    profiles: *const PpProfiles,
    index: usize,
    tau: f64,
    out: *mut f64,
) -> PpStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output argument");
            return PpStatus::NullArgument;
        }
        let set = match deref(profiles) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match profile_at(set, index) {
            Ok(p) => {
                *out = p.evaluate(tau);
                PpStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Number of breakpoints of the solver at `index`.
///
/// # Safety
/// `profiles` must be a live handle; `out` must point to a size_t.
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_breakpoint_count(
    profiles: *const PpProfiles,
    index: usize,
    out: *mut usize,
) -> PpStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output argument");
            return PpStatus::NullArgument;
        }
        let set = match deref(profiles) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match profile_at(set, index) {
            Ok(p) => {
                *out = p.breakpoints().len();
                PpStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// One breakpoint of a profile: its tau and the profile value there.
///
/// # Safety
/// `profiles` must be a live handle; `out_tau` and `out_value` must point
/// to doubles.
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_breakpoint(
    profiles: *const PpProfiles,
    index: usize,
    breakpoint: usize,
    out_tau: *mut f64,
    out_value: *mut f64,
) -> PpStatus {
    guard(|| {
        if out_tau.is_null() || out_value.is_null() {
            set_error("null output argument");
            return PpStatus::NullArgument;
        }
        let set = match deref(profiles) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let profile = match profile_at(set, index) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match profile.breakpoint_values().nth(breakpoint) {
            Some((tau, value)) => {
                *out_tau = tau;
                *out_value = value;
                PpStatus::Ok
            }
            None => {
                set_error(format!(
                    "breakpoint index {breakpoint} out of range ({} breakpoints)",
                    profile.breakpoints().len()
                ));
                PpStatus::IndexOutOfRange
            }
        }
    })
}

/// Serialize profiles to the JSON interchange document.
///
/// # Safety
/// `profiles` must be a live handle; `out` receives a string to release
/// with [`pp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_to_json(
    profiles: *const PpProfiles,
    out: *mut *mut c_char,
) -> PpStatus {
    guard(|| match deref(profiles) {
        Ok(set) => string_out(out, set.0.to_json_string()),
        Err(s) => s,
    })
}

fn spec_for(log_base: f64) -> Result<PlotSpec, Error> {
    let spec = PlotSpec {
        scale: if log_base > 0.0 {
            Scale::Log(log_base)
        } else {
            Scale::Linear
        },
        ..PlotSpec::default()
    };
    spec.validate()?;
    Ok(spec)
}

/// Render the profiles as a deterministic SVG document. `log_base` <= 0
/// selects a linear axis; otherwise the axis is log with that base (> 1).
///
/// # Safety
/// `profiles` must be a live handle; `out` receives a string to release
/// with [`pp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_render_svg(
    profiles: *const PpProfiles,
    log_base: f64,
    out: *mut *mut c_char,
) -> PpStatus {
    guard(|| {
        let set = match deref(profiles) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match spec_for(log_base).and_then(|spec| render_svg(&set.0, &spec)) {
            Ok(svg) => string_out(out, svg),
            Err(e) => fail(e),
        }
    })
}

/// Export merged step data as CSV, tau in plot coordinates.
///
/// # Safety
/// Same contract as [`pp_profiles_render_svg`].
#[no_mangle]
pub unsafe extern "C" fn pp_profiles_export_steps(
    profiles: *const PpProfiles,
    log_base: f64,
    out: *mut *mut c_char,
) -> PpStatus {
    guard(|| {
        let set = match deref(profiles) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match spec_for(log_base).and_then(|spec| export_steps(&set.0, &spec)) {
            Ok(csv) => string_out(out, csv),
            Err(e) => fail(e),
        }
    })
}

/// Exact integral of the absolute difference of two profiles over
/// [1, upper]. `upper` <= 0 selects the larger of the two r_M values.
///
/// # Safety
/// Both handles must be live; `out` must point to a double.
#[no_mangle]
pub unsafe extern "C" fn pp_distance_l1(
    a: *const PpProfiles,
    solver_a: usize,
    b: *const PpProfiles,
    solver_b: usize,
    upper: f64,
    out: *mut f64,
) -> PpStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output argument");
            return PpStatus::NullArgument;
        }
        let (set_a, set_b) = match (deref(a), deref(b)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let (pa, pb) = match (profile_at(set_a, solver_a), profile_at(set_b, solver_b)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let upper = if upper > 0.0 {
            upper
        } else {
            set_a.0.r_m().max(set_b.0.r_m())
        };
        match l1_distance(pa, pb, upper) {
            Ok(d) => {
                *out = d;
                PpStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Maximum absolute difference of two profiles.
///
/// # Safety
/// Both handles must be live; `out` must point to a double.
#[no_mangle]
pub unsafe extern "C" fn pp_distance_sup(
    a: *const PpProfiles,
    solver_a: usize,
    b: *const PpProfiles,
    solver_b: usize,
    out: *mut f64,
) -> PpStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output argument");
            return PpStatus::NullArgument;
        }
        let (set_a, set_b) = match (deref(a), deref(b)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let (pa, pb) = match (profile_at(set_a, solver_a), profile_at(set_b, solver_b)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match sup_distance(pa, pb) {
            Ok(d) => {
                *out = d;
                PpStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
