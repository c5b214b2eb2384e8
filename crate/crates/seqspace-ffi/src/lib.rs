//! C ABI for the seqspace toolkit.
//!
//! Handles are opaque pointers owned by the library and released with the
//! matching `_free` function. Every fallible call returns an `int` status
//! from the `SQS_*` family and writes results through out-pointers; no
//! call ever unwinds across the boundary.
//!
//! The committed header lives at `include/seqspace.h`.

use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use seqspace::dual::{dual_member, DualKind};
use seqspace::matclass::{class_check, reduce_and_check, MatrixDesc, ReducedClass};
use seqspace::spaces::{member, norm};
use seqspace::{Seq, SpaceId, Status, Verdict};

pub const SQS_OK: c_int = 0;
pub const SQS_ERR_PARSE: c_int = 1;
pub const SQS_ERR_DOMAIN: c_int = 2;
pub const SQS_ERR_NULL: c_int = 3;
pub const SQS_ERR_UTF8: c_int = 4;
pub const SQS_ERR_PANIC: c_int = 5;

pub const SQS_STATUS_MEMBER: c_int = 0;
pub const SQS_STATUS_NON_MEMBER: c_int = 1;
pub const SQS_STATUS_INCONCLUSIVE: c_int = 2;

/// Opaque sequence handle.
pub struct SqsSeq(Seq);

/// Opaque verdict handle.
pub struct SqsVerdict(Verdict);

fn read_str<'a>(p: *const c_char) -> Result<&'a str, c_int> {
    if p.is_null() {
        return Err(SQS_ERR_NULL);
    }
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| SQS_ERR_UTF8)
}

fn write_string(out: *mut *mut c_char, s: String) -> c_int {
    if out.is_null() {
        return SQS_ERR_NULL;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SQS_OK
        }
        Err(_) => SQS_ERR_DOMAIN,
    }
}

fn guarded(f: impl FnOnce() -> c_int) -> c_int {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(SQS_ERR_PANIC)
}

fn status_code(s: Status) -> c_int {
    match s {
        Status::Member => SQS_STATUS_MEMBER,
        Status::NonMember => SQS_STATUS_NON_MEMBER,
        Status::Inconclusive => SQS_STATUS_INCONCLUSIVE,
    }
}

fn emit_verdict(out: *mut *mut SqsVerdict, v: Verdict) -> c_int {
    if out.is_null() {
        return SQS_ERR_NULL;
    }
    unsafe { *out = Box::into_raw(Box::new(SqsVerdict(v))) };
    SQS_OK
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn sqs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parse a sequence literal (`finite:[...]`, `const:c`, `powerlaw:c,p`,
/// `geom:c,r`, `alt:c`).
#[no_mangle]
pub extern "C" fn sqs_seq_parse(literal: *const c_char, out: *mut *mut SqsSeq) -> c_int {
    guarded(|| {
        let text = match read_str(literal) {
            Ok(t) => t,
            Err(e) => return e,
        };
        if out.is_null() {
            return SQS_ERR_NULL;
        }
        match text.parse::<Seq>() {
            Ok(seq) => {
                unsafe { *out = Box::into_raw(Box::new(SqsSeq(seq))) };
                SQS_OK
            }
            Err(_) => SQS_ERR_PARSE,
        }
    })
}

#[no_mangle]
pub extern "C" fn sqs_seq_free(seq: *mut SqsSeq) {
    if !seq.is_null() {
        drop(unsafe { Box::from_raw(seq) });
    }
}

/// The k-th term (1-based) as a rational string `p/q`.
#[no_mangle]
pub extern "C" fn sqs_seq_term(
    seq: *const SqsSeq,
    k: u64,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        if seq.is_null() {
            return SQS_ERR_NULL;
        }
        if k < 1 {
            return SQS_ERR_DOMAIN;
        }
        let s = unsafe { &*seq };
        write_string(out, s.0.term(k).to_string())
    })
}

/// Release a string returned through an out-pointer.
#[no_mangle]
pub extern "C" fn sqs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Exact norm of a sequence in a space, as a rational string.
#[no_mangle]
pub extern "C" fn sqs_norm(
    space: *const c_char,
    seq: *const SqsSeq,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        let space = match read_str(space) {
            Ok(t) => t,
            Err(e) => return e,
        };
        if seq.is_null() {
            return SQS_ERR_NULL;
        }
        let space: SpaceId = match space.parse() {
            Ok(s) => s,
            Err(_) => return SQS_ERR_PARSE,
        };
        let x = unsafe { &*seq };
        match norm(space, &x.0) {
            Ok(v) => write_string(out, v.to_string()),
            Err(_) => SQS_ERR_DOMAIN,
        }
    })
}

/// Membership verdict for a sequence in a space.
#[no_mangle]
pub extern "C" fn sqs_member(
    space: *const c_char,
    seq: *const SqsSeq,
    probe: u64,
    out: *mut *mut SqsVerdict,
) -> c_int {
    guarded(|| {
        let space = match read_str(space) {
            Ok(t) => t,
            Err(e) => return e,
        };
        if seq.is_null() {
            return SQS_ERR_NULL;
        }
        let space: SpaceId = match space.parse() {
            Ok(s) => s,
            Err(_) => return SQS_ERR_PARSE,
        };
        let x = unsafe { &*seq };
        emit_verdict(out, member(space, &x.0, probe.max(1)))
    })
}

/// Dual membership (`kind` in alpha | beta | gamma) via the analytic path.
#[no_mangle]
pub extern "C" fn sqs_dual_member(
    space: *const c_char,
    kind: *const c_char,
    seq: *const SqsSeq,
    probe: u64,
    out: *mut *mut SqsVerdict,
) -> c_int {
    guarded(|| {
        let space = match read_str(space) {
            Ok(t) => t,
            Err(e) => return e,
        };
        let kind = match read_str(kind) {
            Ok(t) => t,
            Err(e) => return e,
        };
        if seq.is_null() {
            return SQS_ERR_NULL;
        }
        let space: SpaceId = match space.parse() {
            Ok(s) => s,
            Err(_) => return SQS_ERR_PARSE,
        };
        let kind: DualKind = match kind.parse() {
            Ok(k) => k,
            Err(_) => return SQS_ERR_PARSE,
        };
        let x = unsafe { &*seq };
        match dual_member(space, kind, &x.0, probe.max(1)) {
            Ok(v) => emit_verdict(out, v),
            Err(_) => SQS_ERR_DOMAIN,
        }
    })
}

/// Matrix class membership between undecorated spaces. `matrix` uses the
/// triangle grammar (`delta`, `gamma`, `sigma`, `identity`, `diag:...`,
/// `prod:a,b`, `closed:...`) or `zero`.
#[no_mangle]
pub extern "C" fn sqs_classify(
    matrix: *const c_char,
    from: *const c_char,
    to: *const c_char,
    probe: u64,
    out: *mut *mut SqsVerdict,
) -> c_int {
    guarded(|| {
        let (matrix, from, to) =
            match (read_str(matrix), read_str(from), read_str(to)) {
                (Ok(m), Ok(f), Ok(t)) => (m, f, t),
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return e,
            };
        let a: MatrixDesc = match matrix.parse() {
            Ok(a) => a,
            Err(_) => return SQS_ERR_PARSE,
        };
        let from: SpaceId = match from.parse() {
            Ok(s) => s,
            Err(_) => return SQS_ERR_PARSE,
        };
        let to: SpaceId = match to.parse() {
            Ok(s) => s,
            Err(_) => return SQS_ERR_PARSE,
        };
        match class_check(&a, from, to, probe.max(1)) {
            Ok(v) => emit_verdict(out, v),
            Err(_) => SQS_ERR_DOMAIN,
        }
    })
}

/// Matrix class membership for a class with a decorated bv side, written
/// `from:to` (for example `int_bv:linf`).
#[no_mangle]
pub extern "C" fn sqs_reduce(
    matrix: *const c_char,
    class: *const c_char,
    probe: u64,
    out: *mut *mut SqsVerdict,
) -> c_int {
    guarded(|| {
        let (matrix, class) = match (read_str(matrix), read_str(class)) {
            (Ok(m), Ok(c)) => (m, c),
            (Err(e), _) | (_, Err(e)) => return e,
        };
        let a: MatrixDesc = match matrix.parse() {
            Ok(a) => a,
            Err(_) => return SQS_ERR_PARSE,
        };
        let class: ReducedClass = match class.parse() {
            Ok(c) => c,
            Err(_) => return SQS_ERR_PARSE,
        };
        match reduce_and_check(&a, class, probe.max(1)) {
            Ok(v) => emit_verdict(out, v),
            Err(_) => SQS_ERR_DOMAIN,
        }
    })
}

/// Verdict status as `SQS_STATUS_*`; `SQS_ERR_NULL` (negative) on null.
#[no_mangle]
pub extern "C" fn sqs_verdict_status(v: *const SqsVerdict) -> c_int {
    if v.is_null() {
        return -SQS_ERR_NULL;
    }
    status_code(unsafe { &*v }.0.status)
}

/// Exact value backing the verdict; writes NULL when none exists.
#[no_mangle]
pub extern "C" fn sqs_verdict_value(
    v: *const SqsVerdict,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        if v.is_null() || out.is_null() {
            return SQS_ERR_NULL;
        }
        match unsafe { &*v }.0.value.clone() {
            Some(val) => write_string(out, val.to_string()),
            None => {
                unsafe { *out = ptr::null_mut() };
                SQS_OK
            }
        }
    })
}

#[no_mangle]
pub extern "C" fn sqs_verdict_certificate(
    v: *const SqsVerdict,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        if v.is_null() {
            return SQS_ERR_NULL;
        }
        write_string(out, unsafe { &*v }.0.certificate.clone())
    })
}

#[no_mangle]
pub extern "C" fn sqs_verdict_free(v: *mut SqsVerdict) {
    if !v.is_null() {
        drop(unsafe { Box::from_raw(v) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(p: *mut c_char) -> String {
        let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
        sqs_string_free(p);
        s
    }

    #[test]
    fn norm_round_trip() {
        unsafe {
            let mut seq = ptr::null_mut();
            assert_eq!(
                sqs_seq_parse(c("finite:[1,1/2,1/3]").as_ptr(), &mut seq),
                SQS_OK
            );
            let mut val = ptr::null_mut();
            assert_eq!(sqs_norm(c("int_bv").as_ptr(), seq, &mut val), SQS_OK);
            assert_eq!(take_string(val), "2");
            let mut term = ptr::null_mut();
            assert_eq!(sqs_seq_term(seq, 2, &mut term), SQS_OK);
            assert_eq!(take_string(term), "1/2");
            sqs_seq_free(seq);
        }
    }

    #[test]
    fn verdicts_and_errors() {
        unsafe {
            let mut v = ptr::null_mut();
            assert_eq!(
                sqs_classify(
                    c("delta").as_ptr(),
                    c("l1").as_ptr(),
                    c("l1").as_ptr(),
                    64,
                    &mut v
                ),
                SQS_OK
            );
            assert_eq!(sqs_verdict_status(v), SQS_STATUS_MEMBER);
            let mut val = ptr::null_mut();
            assert_eq!(sqs_verdict_value(v, &mut val), SQS_OK);
            assert_eq!(take_string(val), "2");
            let mut cert = ptr::null_mut();
            assert_eq!(sqs_verdict_certificate(v, &mut cert), SQS_OK);
            assert!(take_string(cert).contains("abs-sum"));
            sqs_verdict_free(v);

            let mut seq = ptr::null_mut();
            assert_eq!(sqs_seq_parse(c("oops").as_ptr(), &mut seq), SQS_ERR_PARSE);
            assert_eq!(sqs_seq_parse(ptr::null(), &mut seq), SQS_ERR_NULL);

            assert_eq!(sqs_seq_parse(c("const:1").as_ptr(), &mut seq), SQS_OK);
            let mut val = ptr::null_mut();
            // constant sequences have no bs norm in closed form
            assert_eq!(
                sqs_norm(c("bs").as_ptr(), seq, &mut val),
                SQS_ERR_DOMAIN
            );
            sqs_seq_free(seq);
        }
    }

    #[test]
    fn dual_and_reduce() {
        unsafe {
            let mut seq = ptr::null_mut();
            assert_eq!(sqs_seq_parse(c("alt:1").as_ptr(), &mut seq), SQS_OK);
            let mut v = ptr::null_mut();
            assert_eq!(
                sqs_dual_member(
                    c("int_bv").as_ptr(),
                    c("beta").as_ptr(),
                    seq,
                    128,
                    &mut v
                ),
                SQS_OK
            );
            assert!(sqs_verdict_status(v) >= 0);
            sqs_verdict_free(v);
            sqs_seq_free(seq);

            let mut v = ptr::null_mut();
            assert_eq!(
                sqs_reduce(
                    c("identity").as_ptr(),
                    c("int_bv:linf").as_ptr(),
                    128,
                    &mut v
                ),
                SQS_OK
            );
            assert_eq!(sqs_verdict_status(v), SQS_STATUS_MEMBER);
            let mut val = ptr::null_mut();
            assert_eq!(sqs_verdict_value(v, &mut val), SQS_OK);
            assert_eq!(take_string(val), "1");
            sqs_verdict_free(v);
        }
    }

    #[test]
    fn version_is_static() {
        unsafe {
            let v = CStr::from_ptr(sqs_version()).to_str().unwrap();
            assert_eq!(v, env!("CARGO_PKG_VERSION"));
        }
    }
}
