//! C ABI for `homlie`.
//!
//! Conventions:
//!
//! * every fallible function returns a [`HomlieStatus`]; `HOMLIE_STATUS_OK`
//!   is zero and the message of the most recent failure on the calling
//!   thread is available from [`homlie_last_error_message`];
//! * algebras and presentations are opaque handles created by `*_from_*` and
//!   `homlie_presentation_jackson`, released with the matching `*_free`;
//! * strings returned through `out` parameters are owned by the caller and
//!   must be released with [`homlie_string_free`];
//! * input strings are NUL-terminated UTF-8 (JSON documents or expressions);
//! * panics never cross the boundary: they are reported as
//!   `HOMLIE_STATUS_INTERNAL`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use homlie::covers::FamilySpec;
use homlie::enveloping::{self, NCPresentation, PresentationJson};
use homlie::homlie::{HomLieAlgebra, HomLieJson};
use homlie::zeta::{self, Budgets, ZetaConfig};
use homlie::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomlieStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON or expression input.
    Parse = 3,
    /// The requested object violates a construction precondition.
    InvalidConstruction = 4,
    /// The operation is outside the supported scope.
    Unsupported = 5,
    /// An algebraic precondition does not hold.
    Precondition = 6,
    /// A configured computation budget would be exceeded.
    Budget = 7,
    /// Ring mismatch, division by zero or inexact division.
    Arithmetic = 8,
    /// A map does not respect the defining relations.
    RelationViolated = 9,
    /// An internal error (a caught panic).
    Internal = 10,
}

impl From<&Error> for HomlieStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse(_) => HomlieStatus::Parse,
            Error::InvalidConstruction(_) => HomlieStatus::InvalidConstruction,
            Error::Unsupported(_) => HomlieStatus::Unsupported,
            Error::Precondition(_) => HomlieStatus::Precondition,
            Error::Budget(_) => HomlieStatus::Budget,
            Error::RingMismatch(_) | Error::DivisionByZero | Error::NotDivisible(_) => HomlieStatus::Arithmetic,
            Error::RelationViolated(_) => HomlieStatus::RelationViolated,
        }
    }
}

/// Opaque hom-Lie algebra handle.
pub struct HomlieAlgebra {
    inner: HomLieAlgebra,
}

/// Opaque enveloping-algebra presentation handle.
pub struct HomliePresentation {
    inner: NCPresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

struct Failure(HomlieStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(HomlieStatus::from(&e), e.to_string())
    }
}

/// Run `body`, translating errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> HomlieStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            HomlieStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal error");
            HomlieStatus::Internal
        }
    }
}

unsafe fn input<'a>(s: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(HomlieStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(HomlieStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn handle<'a, T>(h: *const T, name: &str) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(|| Failure(HomlieStatus::NullPointer, format!("{name} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(HomlieStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(HomlieStatus::Internal, "string contains NUL".into()))?;
    if out.is_null() {
        return Err(Failure(HomlieStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(c.into_raw());
    Ok(())
}

fn to_json<T: serde::Serialize>(x: &T) -> Result<String, Failure> {
    serde_json::to_string(x).map_err(|e| Failure(HomlieStatus::Internal, e.to_string()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn homlie_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread (empty after a success).  The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn homlie_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned by the library.  Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn homlie_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build an algebra from a family descriptor such as
/// `{"family":"kummer-witt","n":3,"r":1,"b":"sym"}`.
#[no_mangle]
pub unsafe extern "C" fn homlie_algebra_from_family(descriptor: *const c_char, out: *mut *mut HomlieAlgebra) -> HomlieStatus {
    guard(|| {
        let spec = FamilySpec::from_json(input(descriptor, "descriptor")?)?;
        let inner = spec.build()?;
        write_out(out, Box::into_raw(Box::new(HomlieAlgebra { inner })))
    })
}

/// Build an algebra from a structure-constant JSON document.
#[no_mangle]
pub unsafe extern "C" fn homlie_algebra_from_json(document: *const c_char, out: *mut *mut HomlieAlgebra) -> HomlieStatus {
    guard(|| {
        let doc: HomLieJson = serde_json::from_str(input(document, "document")?)
            .map_err(|e| Failure(HomlieStatus::Parse, format!("algebra document: {e}")))?;
        let inner = HomLieAlgebra::from_json(&doc)?;
        write_out(out, Box::into_raw(Box::new(HomlieAlgebra { inner })))
    })
}

/// Release an algebra.  Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn homlie_algebra_free(algebra: *mut HomlieAlgebra) {
    if !algebra.is_null() {
        drop(Box::from_raw(algebra));
    }
}

/// Rank of the underlying module.
#[no_mangle]
pub unsafe extern "C" fn homlie_algebra_rank(algebra: *const HomlieAlgebra, out: *mut usize) -> HomlieStatus {
    guard(|| write_out(out, handle(algebra, "algebra")?.inner.rank()))
}

/// Check the alternating and twisted Jacobi axioms; `*passed` receives the
/// verdict and `*report_json` (if non-null) the full axiom report.
#[no_mangle]
pub unsafe extern "C" fn homlie_algebra_check_axioms(
    algebra: *const HomlieAlgebra,
    passed: *mut bool,
    report_json: *mut *mut c_char,
) -> HomlieStatus {
    guard(|| {
        let report = handle(algebra, "algebra")?.inner.check_axioms();
        write_out(passed, report.passed())?;
        if !report_json.is_null() {
            write_string(report_json, to_json(&report)?)?;
        }
        Ok(())
    })
}

/// Structure-constant JSON document of an algebra.
#[no_mangle]
pub unsafe extern "C" fn homlie_algebra_to_json(algebra: *const HomlieAlgebra, out: *mut *mut c_char) -> HomlieStatus {
    guard(|| {
        let doc = handle(algebra, "algebra")?.inner.to_json();
        write_string(out, to_json(&doc)?)
    })
}

/// LaTeX bracket table of an algebra.
#[no_mangle]
pub unsafe extern "C" fn homlie_algebra_to_latex(algebra: *const HomlieAlgebra, out: *mut *mut c_char) -> HomlieStatus {
    guard(|| write_string(out, handle(algebra, "algebra")?.inner.to_latex()))
}

/// Dimensions of the derived series, as a JSON object
/// `{"dims": [...], "solvable": bool}`, computed over the fraction field.
#[no_mangle]
pub unsafe extern "C" fn homlie_algebra_derived_series(algebra: *const HomlieAlgebra, out: *mut *mut c_char) -> HomlieStatus {
    guard(|| {
        let series = handle(algebra, "algebra")?.inner.derived_series(true)?;
        write_string(out, serde_json::json!({ "dims": series.dims, "solvable": series.solvable }).to_string())
    })
}

/// The simplified Jackson presentation for `n` with symbolic `b`.
#[no_mangle]
pub unsafe extern "C" fn homlie_presentation_jackson(n: u32, out: *mut *mut HomliePresentation) -> HomlieStatus {
    guard(|| {
        let inner = enveloping::jackson_symbolic(n as usize)?;
        write_out(out, Box::into_raw(Box::new(HomliePresentation { inner })))
    })
}

/// A presentation from its JSON document.
#[no_mangle]
pub unsafe extern "C" fn homlie_presentation_from_json(document: *const c_char, out: *mut *mut HomliePresentation) -> HomlieStatus {
    guard(|| {
        let doc: PresentationJson = serde_json::from_str(input(document, "document")?)
            .map_err(|e| Failure(HomlieStatus::Parse, format!("presentation document: {e}")))?;
        let inner = NCPresentation::from_json(&doc)?;
        write_out(out, Box::into_raw(Box::new(HomliePresentation { inner })))
    })
}

/// Release a presentation.  Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn homlie_presentation_free(presentation: *mut HomliePresentation) {
    if !presentation.is_null() {
        drop(Box::from_raw(presentation));
    }
}

/// JSON document of a presentation.
#[no_mangle]
pub unsafe extern "C" fn homlie_presentation_to_json(presentation: *const HomliePresentation, out: *mut *mut c_char) -> HomlieStatus {
    guard(|| {
        let doc = handle(presentation, "presentation")?.inner.to_json()?;
        write_string(out, to_json(&doc)?)
    })
}

/// Normal form of an element written in the generator labels, e.g.
/// `"e2*e1 - xi*e0"`.
#[no_mangle]
pub unsafe extern "C" fn homlie_presentation_normal_form(
    presentation: *const HomliePresentation,
    element: *const c_char,
    out: *mut *mut c_char,
) -> HomlieStatus {
    guard(|| {
        let p = &handle(presentation, "presentation")?.inner;
        let x = p.parse_element(input(element, "element")?)?;
        write_string(out, p.normal_form(&x)?.format(p.labels()))
    })
}

/// Whether an element is central.
#[no_mangle]
pub unsafe extern "C" fn homlie_presentation_is_central(
    presentation: *const HomliePresentation,
    element: *const c_char,
    out: *mut bool,
) -> HomlieStatus {
    guard(|| {
        let p = &handle(presentation, "presentation")?.inner;
        let x = p.parse_element(input(element, "element")?)?;
        write_out(out, p.is_central(&x)?)
    })
}

/// Overlap resolution up to `degree`; `*confluent` receives the verdict.
#[no_mangle]
pub unsafe extern "C" fn homlie_presentation_confluent(
    presentation: *const HomliePresentation,
    degree: u32,
    confluent: *mut bool,
) -> HomlieStatus {
    guard(|| {
        let report = handle(presentation, "presentation")?.inner.confluence_check(degree as usize)?;
        write_out(confluent, report.confluent)
    })
}

/// Zeta element of the `n`-th Jackson fibre over the prime field `F_q`
/// with `ξ = xi` (`0` selects the smallest residue of order `n`) and the
/// integer `b`, truncated at `t^terms`, as the JSON body of a `zeta` report.
/// Budgets come from the environment as for the command-line tool.
#[no_mangle]
pub unsafe extern "C" fn homlie_zeta_jackson(n: u32, q: u64, xi: u64, b: i64, terms: u32, out: *mut *mut c_char) -> HomlieStatus {
    guard(|| {
        let p = zeta::jackson_fiber(n as usize, q, (xi != 0).then_some(xi), b)?;
        let config = ZetaConfig {
            terms: terms as usize,
            max_dim: 3,
            pi_degree: Some(n as usize),
            centre_degree: n as usize,
            budgets: Budgets::from_env(),
        };
        let z = zeta::zeta_element(&p, &config)?;
        write_string(out, homlie::cli::zeta_json(&z).to_string())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(HomlieStatus::from(&Error::DivisionByZero), HomlieStatus::Arithmetic);
        assert_eq!(HomlieStatus::from(&Error::Budget("x".into())), HomlieStatus::Budget);
        assert_eq!(HomlieStatus::Ok as i32, 0);
    }

    #[test]
    fn panics_are_contained() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, HomlieStatus::Internal);
        let msg = unsafe { CStr::from_ptr(homlie_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "internal error");
    }
}
