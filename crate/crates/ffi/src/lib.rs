//! C ABI over speh-kit.
//!
//! Handles are opaque and owned by the caller once returned; release them with
//! the matching `*_free`. Every entry point returns an [`SkStatus`]; on failure
//! the message (and, for parse errors, the position) of the last error on the
//! calling thread can be read with [`sk_last_error_message`] and
//! [`sk_last_error_position`]. Strings handed out must be released with
//! [`sk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use speh_kit::derivative::highest_shifted_derivative;
use speh_kit::distinction::{inductive_checker, is_distinguished};
use speh_kit::dsl::{evaluate, print_canonical};
use speh_kit::{Alphabet, UnitaryRep};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Alphabet = 3,
    Syntax = 4,
    Semantic = 5,
    AlphabetMismatch = 6,
    Internal = 7,
}

/// A loaded cuspidal alphabet.
pub struct SkAlphabet {
    inner: Arc<Alphabet>,
}

/// A canonical unitary representation, tied to the alphabet it was parsed with.
pub struct SkRep {
    alphabet: Arc<Alphabet>,
    rep: UnitaryRep,
}

struct LastError {
    message: CString,
    line: usize,
    column: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

struct Failure {
    status: SkStatus,
    message: String,
    position: (usize, usize),
}

impl Failure {
    fn new(status: SkStatus, message: impl Into<String>) -> Failure {
        Failure {
            status,
            message: message.into(),
            position: (0, 0),
        }
    }
}

fn set_last_error(f: &Failure) {
    // interior NULs cannot appear in our messages, but don't trust that
    let message = CString::new(f.message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = Some(LastError {
            message,
            line: f.position.0,
            column: f.position.1,
        })
    });
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SkStatus {
    let result = panic::catch_unwind(AssertUnwindSafe(body))
        .unwrap_or_else(|_| Err(Failure::new(SkStatus::Internal, "internal error")));
    match result {
        Ok(()) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SkStatus::Ok
        }
        Err(f) => {
            set_last_error(&f);
            f.status
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(SkStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(SkStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(SkStatus::NullArgument, format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(SkStatus::NullArgument, "output pointer is null"));
    }
    out.write(value);
    Ok(())
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Parses an alphabet from its JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_alphabet_load(json: *const c_char, out: *mut *mut SkAlphabet) -> SkStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let alphabet = Alphabet::load(text).map_err(|e| {
            let mut f = Failure::new(SkStatus::Alphabet, e.to_string());
            if let speh_kit::AlphabetError::ParseError { line, column, .. } = e {
                f.position = (line, column);
            }
            f
        })?;
        let handle = Box::new(SkAlphabet {
            inner: Arc::new(alphabet),
        });
        write_out(out, Box::into_raw(handle))
    })
}

/// Number of cuspidal symbols in the alphabet.
///
/// # Safety
/// `alphabet` must be a live handle from [`sk_alphabet_load`] and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sk_alphabet_len(alphabet: *const SkAlphabet, out: *mut usize) -> SkStatus {
    guard(|| {
        let a = ref_arg(alphabet, "alphabet")?;
        write_out(out, a.inner.len())
    })
}

/// # Safety
/// `alphabet` must be null or a handle from [`sk_alphabet_load`] not yet freed.
/// Representations parsed from it stay valid.
#[no_mangle]
pub unsafe extern "C" fn sk_alphabet_free(alphabet: *mut SkAlphabet) {
    if !alphabet.is_null() {
        drop(Box::from_raw(alphabet));
    }
}

/// Parses and canonicalizes an expression such as `u(St(r0,2),3) x St(t,1)`.
///
/// # Safety
/// `alphabet` must be a live handle, `text` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sk_rep_parse(
    alphabet: *const SkAlphabet,
    text: *const c_char,
    out: *mut *mut SkRep,
) -> SkStatus {
    guard(|| {
        let a = ref_arg(alphabet, "alphabet")?;
        let text = str_arg(text, "text")?;
        let rep = evaluate(text, &a.inner).map_err(|e| {
            let status = match e {
                speh_kit::DslError::Syntax { .. } => SkStatus::Syntax,
                speh_kit::DslError::Semantic { .. } => SkStatus::Semantic,
            };
            let pos = e.position();
            Failure {
                status,
                message: e.to_string(),
                position: (pos.line, pos.column),
            }
        })?;
        let handle = Box::new(SkRep {
            alphabet: Arc::clone(&a.inner),
            rep,
        });
        write_out(out, Box::into_raw(handle))
    })
}

/// # Safety
/// `rep` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sk_rep_free(rep: *mut SkRep) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Canonical text of the representation; free with [`sk_string_free`].
///
/// # Safety
/// `rep` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sk_rep_canonical(rep: *const SkRep, out: *mut *mut c_char) -> SkStatus {
    guard(|| {
        let r = ref_arg(rep, "rep")?;
        write_out(out, string_out(print_canonical(&r.rep, &r.alphabet)))
    })
}

/// # Safety
/// `rep` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sk_rep_degree(rep: *const SkRep, out: *mut u64) -> SkStatus {
    guard(|| {
        let r = ref_arg(rep, "rep")?;
        write_out(out, r.rep.degree())
    })
}

/// # Safety
/// `rep` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sk_rep_is_distinguished(rep: *const SkRep, out: *mut bool) -> SkStatus {
    guard(|| {
        let r = ref_arg(rep, "rep")?;
        write_out(out, is_distinguished(&r.rep, &r.alphabet).verdict)
    })
}

/// Verdict of the derivative-based inductive checker.
///
/// # Safety
/// `rep` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sk_rep_inductive_check(rep: *const SkRep, out: *mut bool) -> SkStatus {
    guard(|| {
        let r = ref_arg(rep, "rep")?;
        write_out(out, inductive_checker(&r.rep, &r.alphabet).verdict)
    })
}

/// Proof trace of the verdict as JSON; free with [`sk_string_free`].
///
/// # Safety
/// `rep` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sk_rep_trace_json(rep: *const SkRep, out: *mut *mut c_char) -> SkStatus {
    guard(|| {
        let r = ref_arg(rep, "rep")?;
        write_out(out, string_out(is_distinguished(&r.rep, &r.alphabet).to_json()))
    })
}

/// Highest shifted derivative, as a new handle.
///
/// # Safety
/// `rep` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sk_rep_derivative(rep: *const SkRep, out: *mut *mut SkRep) -> SkStatus {
    guard(|| {
        let r = ref_arg(rep, "rep")?;
        let handle = Box::new(SkRep {
            alphabet: Arc::clone(&r.alphabet),
            rep: highest_shifted_derivative(&r.rep),
        });
        write_out(out, Box::into_raw(handle))
    })
}

/// Parabolic induction `a x b`. Both handles must come from the same alphabet.
///
/// # Safety
/// `a` and `b` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sk_rep_product(a: *const SkRep, b: *const SkRep, out: *mut *mut SkRep) -> SkStatus {
    guard(|| {
        let a = ref_arg(a, "a")?;
        let b = ref_arg(b, "b")?;
        if !Arc::ptr_eq(&a.alphabet, &b.alphabet) {
            return Err(Failure::new(
                SkStatus::AlphabetMismatch,
                "operands were parsed with different alphabets",
            ));
        }
        let handle = Box::new(SkRep {
            alphabet: Arc::clone(&a.alphabet),
            rep: a.rep.product(&b.rep),
        });
        write_out(out, Box::into_raw(handle))
    })
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn sk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(err) => err.message.as_ptr(),
        None => ptr::null(),
    })
}

/// 1-based position of the last parse error on this thread; 0 when unknown.
///
/// # Safety
/// `line` and `column` must each be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sk_last_error_position(line: *mut usize, column: *mut usize) {
    let (l, c) = LAST_ERROR.with(|e| e.borrow().as_ref().map_or((0, 0), |err| (err.line, err.column)));
    if !line.is_null() {
        line.write(l);
    }
    if !column.is_null() {
        column.write(c);
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
