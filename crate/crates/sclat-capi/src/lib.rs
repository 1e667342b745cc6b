//! C ABI over the scaled-lattice toolkit: opaque base handles, status codes,
//! and JSON strings for every structured payload (the same documents the
//! file formats use). Strings returned through out-parameters are owned by
//! the caller and must be released with `sclat_string_free`.

use sclat::error::Error;
use sclat::io;
use sclat::logic::{self, DecideOptions, ModelBase, SatOptions};
use sclat::scaled::CheckMode;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::catch_unwind;
use std::ptr;

/// Status codes returned by every fallible entry point.
#[repr(i32)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum SclatStatus {
    Ok = 0,
    InvalidArgument = 1,
    IllFormed = 2,
    Refused = 3,
    TooLarge = 4,
    Internal = 5,
}

/// Sentinel for "minus infinity" in dimension results.
pub const SCLAT_DIM_NEG_INF: i32 = i32::MIN;

/// Opaque handle to a lattice base (with or without atom counts).
pub struct SclatBase {
    inner: ModelBase,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn status_of(e: &Error) -> SclatStatus {
    match e {
        Error::IllFormed(_) | Error::Syntax { .. } | Error::Json(_) => SclatStatus::IllFormed,
        Error::Refused(_) => SclatStatus::Refused,
        Error::TooLarge(_) => SclatStatus::TooLarge,
        Error::Io(_) => SclatStatus::Internal,
        _ => SclatStatus::InvalidArgument,
    }
}

/// Last error message for this thread; borrowed, valid until the next
/// failing call.
#[no_mangle]
pub extern "C" fn sclat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

fn run<T>(
    out: *mut T,
    body: impl FnOnce() -> Result<T, Error> + std::panic::UnwindSafe,
) -> SclatStatus {
    if out.is_null() {
        set_error("null out-parameter");
        return SclatStatus::InvalidArgument;
    }
    match catch_unwind(body) {
        Ok(Ok(value)) => {
            unsafe { ptr::write(out, value) };
            SclatStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal panic".into());
            set_error(&msg);
            SclatStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, Error> {
    if ptr.is_null() {
        return Err(Error::Argument("null string argument".into()));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| Error::Argument("string is not valid UTF-8".into()))
}

unsafe fn read_base<'a>(ptr: *const SclatBase) -> Result<&'a ModelBase, Error> {
    if ptr.is_null() {
        return Err(Error::Argument("null base handle".into()));
    }
    Ok(unsafe { &(*ptr).inner })
}

fn into_cstring(s: String) -> Result<*mut c_char, Error> {
    CString::new(s.replace('\0', " "))
        .map(CString::into_raw)
        .map_err(|_| Error::Argument("string contains interior NUL".into()))
}

fn json_out(v: serde_json::Value) -> Result<*mut c_char, Error> {
    into_cstring(serde_json::to_string_pretty(&v)?)
}

/// Parses a lattice document (the `sclat/1` JSON format) into a handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sclat_base_from_json(
    json: *const c_char,
    out: *mut *mut SclatBase,
) -> SclatStatus {
    run(out, || {
        let text = unsafe { read_str(json) }?;
        let value: serde_json::Value = serde_json::from_str(text)?;
        let inner = io::base_from_json(&value)?;
        Ok(Box::into_raw(Box::new(SclatBase { inner })))
    })
}

/// # Safety
/// `base` must come from a constructor of this library and not be freed.
#[no_mangle]
pub unsafe extern "C" fn sclat_base_to_json(
    base: *const SclatBase,
    out: *mut *mut c_char,
) -> SclatStatus {
    run(out, || {
        let b = unsafe { read_base(base) }?;
        json_out(io::base_to_json(b))
    })
}

/// Releases a base handle. Null is ignored.
///
/// # Safety
/// `base` must be a handle returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn sclat_base_free(base: *mut SclatBase) {
    if !base.is_null() {
        drop(unsafe { Box::from_raw(base) });
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn sclat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Canonical form as lowercase hex; equal strings mean isomorphic bases.
///
/// # Safety
/// See `sclat_base_to_json`.
#[no_mangle]
pub unsafe extern "C" fn sclat_base_canonical_hex(
    base: *const SclatBase,
    out: *mut *mut c_char,
) -> SclatStatus {
    run(out, || {
        let b = unsafe { read_base(base) }?;
        let hex: String = b
            .canonical_form()
            .iter()
            .map(|x| format!("{x:02x}"))
            .collect();
        into_cstring(hex)
    })
}

/// 1 when the bases are isomorphic (label- and count-preserving), else 0.
///
/// # Safety
/// Both handles must be live handles from this library.
#[no_mangle]
pub unsafe extern "C" fn sclat_base_is_isomorphic(
    a: *const SclatBase,
    b: *const SclatBase,
    out: *mut i32,
) -> SclatStatus {
    run(out, || {
        let (a, b) = (unsafe { read_base(a) }?, unsafe { read_base(b) }?);
        Ok(i32::from(a.canonical_form() == b.canonical_form()))
    })
}

/// Axiom verification report as JSON. `sample_tuples` 0 selects the
/// automatic mode (exhaustive up to 8 irreducibles).
///
/// # Safety
/// See `sclat_base_to_json`.
#[no_mangle]
pub unsafe extern "C" fn sclat_base_check_axioms_json(
    base: *const SclatBase,
    sample_tuples: u32,
    seed: u64,
    out: *mut *mut c_char,
) -> SclatStatus {
    run(out, || {
        let b = unsafe { read_base(base) }?;
        let mode = if sample_tuples == 0 {
            CheckMode::Auto { seed }
        } else {
            CheckMode::Sample {
                tuples: sample_tuples,
                seed,
            }
        };
        let report = b.scaled().check_axioms(mode)?;
        let mut doc = serde_json::to_value(&report)?;
        if let Some(a) = b.asc() {
            doc["asc"] = serde_json::to_value(a.check_asc_axioms(mode)?)?;
        }
        json_out(doc)
    })
}

/// Chain dimension of the top element (`SCLAT_DIM_NEG_INF` for the trivial
/// base).
///
/// # Safety
/// See `sclat_base_to_json`.
#[no_mangle]
pub unsafe extern "C" fn sclat_base_dim(base: *const SclatBase, out: *mut i32) -> SclatStatus {
    run(out, || {
        let b = unsafe { read_base(base) }?;
        Ok(match b.scaled().one().dim() {
            sclat::Dim::NegInf => SCLAT_DIM_NEG_INF,
            sclat::Dim::Finite(v) => v as i32,
        })
    })
}

/// sc-dimension of the top element.
///
/// # Safety
/// See `sclat_base_to_json`.
#[no_mangle]
pub unsafe extern "C" fn sclat_base_scdim(base: *const SclatBase, out: *mut i32) -> SclatStatus {
    run(out, || {
        let b = unsafe { read_base(base) }?;
        Ok(match b.scaled().scdim(&b.scaled().one())? {
            sclat::Dim::NegInf => SCLAT_DIM_NEG_INF,
            sclat::Dim::Finite(v) => v as i32,
        })
    })
}

/// The substructure generated by the empty set, as a fresh handle.
///
/// # Safety
/// See `sclat_base_to_json`.
#[no_mangle]
pub unsafe extern "C" fn sclat_base_prime(
    base: *const SclatBase,
    out: *mut *mut SclatBase,
) -> SclatStatus {
    run(out, || {
        let b = unsafe { read_base(base) }?;
        let inner = match b {
            ModelBase::Sc(s) => ModelBase::Sc(s.prime_substructure()?.induced.base),
            ModelBase::Asc(a) => ModelBase::Asc(a.prime_substructure()?.1),
        };
        Ok(Box::into_raw(Box::new(SclatBase { inner })))
    })
}

/// The irreducible-count bound as a decimal string.
#[no_mangle]
pub extern "C" fn sclat_mu_decimal(n: u64, d: i64, out: *mut *mut c_char) -> SclatStatus {
    run(out, || into_cstring(logic::mu(n, d)?.to_string()))
}

/// Signatures of the base as a JSON array.
///
/// # Safety
/// See `sclat_base_to_json`.
#[no_mangle]
pub unsafe extern "C" fn sclat_signatures_json(
    base: *const SclatBase,
    out: *mut *mut c_char,
) -> SclatStatus {
    run(out, || {
        let b = unsafe { read_base(base) }?;
        let docs: Result<Vec<_>, Error> = sclat::enumerate_signatures(b.scaled())?
            .iter()
            .map(|s| io::signature_to_json(b.scaled(), s))
            .collect();
        json_out(serde_json::Value::Array(docs?))
    })
}

/// Applies a signature (JSON, optionally with "K" counts on a counted base);
/// returns the extended base and writes the generator antichains as JSON
/// into `out_info`.
///
/// # Safety
/// See `sclat_base_to_json`; `signature_json` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sclat_apply_signature_json(
    base: *const SclatBase,
    signature_json: *const c_char,
    out: *mut *mut SclatBase,
    out_info: *mut *mut c_char,
) -> SclatStatus {
    if out_info.is_null() {
        set_error("null out-parameter");
        return SclatStatus::InvalidArgument;
    }
    run(out, || {
        let b = unsafe { read_base(base) }?;
        let doc: serde_json::Value = serde_json::from_str(unsafe { read_str(signature_json) }?)?;
        let sig = io::signature_from_json(b.scaled(), &doc)?;
        let (inner, x1, x2) = match (b, io::k_values_from_json(&doc)?) {
            (ModelBase::Asc(ab), Some((k1, k2))) => {
                let ext = sclat::apply_asc_signature(ab, &sclat::AscSignature::new(sig, k1, k2))?;
                (
                    ModelBase::Asc(ext.target),
                    ext.ext.x1.maximals(),
                    ext.ext.x2.maximals(),
                )
            }
            (_, Some(_)) => {
                return Err(Error::Argument(
                    "K values need a base with atom counts".into(),
                ))
            }
            (m, None) => {
                let ext = sclat::apply_signature(m.scaled(), &sig)?;
                (
                    ModelBase::Sc(ext.map.target.clone()),
                    ext.x1.maximals(),
                    ext.x2.maximals(),
                )
            }
        };
        let info = json_out(serde_json::json!({"x1": x1, "x2": x2}))?;
        unsafe { ptr::write(out_info, info) };
        Ok(Box::into_raw(Box::new(SclatBase { inner })))
    })
}

/// Linear representation as JSON `{"x": ..., "phi": ...}`. In counted mode
/// (`asc` nonzero) uncounted atoms receive at least `n_floor` points.
///
/// # Safety
/// See `sclat_base_to_json`.
#[no_mangle]
pub unsafe extern "C" fn sclat_represent_json(
    base: *const SclatBase,
    asc: i32,
    n_floor: u32,
    out: *mut *mut c_char,
) -> SclatStatus {
    run(out, || {
        let b = unsafe { read_base(base) }?;
        let rep = if asc != 0 {
            let ab = match b {
                ModelBase::Asc(a) => a.clone(),
                ModelBase::Sc(s) => sclat::AscBase::from_scaled(s.clone()),
            };
            sclat::represent_asc(&ab, n_floor)?
        } else {
            sclat::represent(b.scaled())?
        };
        json_out(serde_json::json!({
            "x": io::sls_to_json(&rep.x),
            "phi": io::representation_to_json(&rep),
        }))
    })
}

/// Bounded quantifier-free satisfiability; the outcome document of the CLI.
///
/// # Safety
/// `formula` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sclat_sat_json(
    formula: *const c_char,
    d: u32,
    max_irr: u32,
    asc: i32,
    out: *mut *mut c_char,
) -> SclatStatus {
    run(out, || {
        let f = sclat::formula::parse_formula(unsafe { read_str(formula) }?)?;
        let mut opts = SatOptions::new(d);
        if max_irr > 0 {
            opts.irr_ceiling = max_irr as usize;
        }
        opts.asc = asc != 0;
        json_out(io::outcome_to_json(&logic::sat_qf(&f, &opts)?))
    })
}

/// Decides a single-block sentence over the completion the prime determines.
///
/// # Safety
/// See `sclat_base_to_json`; `formula` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sclat_decide_json(
    prime: *const SclatBase,
    formula: *const c_char,
    d: u32,
    max_irr: u32,
    out: *mut *mut c_char,
) -> SclatStatus {
    run(out, || {
        let p = unsafe { read_base(prime) }?;
        let s = sclat::formula::parse_sentence(unsafe { read_str(formula) }?)?;
        let mut opts = DecideOptions::new(d);
        if max_irr > 0 {
            opts.sat.irr_ceiling = max_irr as usize;
        }
        opts.sat.asc = matches!(p, ModelBase::Asc(_));
        json_out(io::outcome_to_json(&logic::decide_sentence(p, &s, &opts)?))
    })
}

/// 1 when the completions the two bases determine are elementarily
/// equivalent.
///
/// # Safety
/// Both handles must be live handles from this library.
#[no_mangle]
pub unsafe extern "C" fn sclat_theory_equal(
    a: *const SclatBase,
    b: *const SclatBase,
    out: *mut i32,
) -> SclatStatus {
    run(out, || {
        let a = unsafe { read_base(a) }?;
        let b = unsafe { read_base(b) }?;
        Ok(i32::from(logic::theory_equal(a, b)?))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(p: *mut c_char) -> String {
        let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
        unsafe { sclat_string_free(p) };
        s
    }

    const CH2: &str = r#"{"d":1,"poset":{"elements":["x0","x1"],"covers":[["x0","x1"]]},"dimlabel":{"x0":0,"x1":1}}"#;

    #[test]
    fn round_trip_and_canonical() {
        unsafe {
            let mut h: *mut SclatBase = ptr::null_mut();
            let st = sclat_base_from_json(cstr(CH2).as_ptr(), &mut h);
            assert!(st == SclatStatus::Ok);
            let mut s: *mut c_char = ptr::null_mut();
            assert!(sclat_base_to_json(h, &mut s) == SclatStatus::Ok);
            let text = take_string(s);
            assert!(text.contains("\"sclat/1\""));

            let mut hexs: *mut c_char = ptr::null_mut();
            assert!(sclat_base_canonical_hex(h, &mut hexs) == SclatStatus::Ok);
            let hex = take_string(hexs);
            assert!(!hex.is_empty());

            let mut dim = 0i32;
            assert!(sclat_base_dim(h, &mut dim) == SclatStatus::Ok);
            assert_eq!(dim, 1);
            sclat_base_free(h);
        }
    }

    #[test]
    fn errors_set_the_message() {
        unsafe {
            let mut h: *mut SclatBase = ptr::null_mut();
            let st = sclat_base_from_json(cstr("{\"nope\": 1}").as_ptr(), &mut h);
            assert!(st == SclatStatus::IllFormed);
            let msg = CStr::from_ptr(sclat_last_error()).to_str().unwrap();
            assert!(!msg.is_empty());
        }
    }

    #[test]
    fn mu_and_sat_through_the_abi() {
        unsafe {
            let mut s: *mut c_char = ptr::null_mut();
            assert!(sclat_mu_decimal(1, 1, &mut s) == SclatStatus::Ok);
            assert_eq!(take_string(s), "18");

            let mut outp: *mut c_char = ptr::null_mut();
            let f = cstr("x != 0 /\\ C1(x) = x");
            assert!(sclat_sat_json(f.as_ptr(), 1, 4, 0, &mut outp) == SclatStatus::Ok);
            let doc: serde_json::Value = serde_json::from_str(&take_string(outp)).unwrap();
            assert_eq!(doc["verdict"], "SAT");
        }
    }

    #[test]
    fn prime_and_theory_equal() {
        unsafe {
            let mut h: *mut SclatBase = ptr::null_mut();
            assert!(sclat_base_from_json(cstr(CH2).as_ptr(), &mut h) == SclatStatus::Ok);
            let mut p: *mut SclatBase = ptr::null_mut();
            assert!(sclat_base_prime(h, &mut p) == SclatStatus::Ok);
            let mut eq = -1i32;
            assert!(sclat_theory_equal(h, p, &mut eq) == SclatStatus::Ok);
            assert_eq!(eq, 1);
            sclat_base_free(p);
            sclat_base_free(h);
        }
    }
}
