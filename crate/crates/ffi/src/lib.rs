//! C ABI over the `lenctl` decoder.
//!
//! Instances and results are opaque heap handles owned by the caller and
//! released with the matching `_free` function. Every fallible function
//! returns a [`LenctlStatus`]; on failure a message is available from
//! [`lenctl_last_error_message`] on the same thread until the next failure.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lenctl::ctc::ctc_score_text;
use lenctl::{
    decode_greedy, decode_length_control, DecodeResult, DecoderConfig, Error, LengthWeights, LogProbMatrix, MatrixFile,
    Reduction, Selection, Vocabulary,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LenctlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidInput = 3,
    Io = 4,
    TooLarge = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LenctlReduction {
    Merge = 0,
    NoMerge = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LenctlWeights {
    Separator = 0,
    Appended = 1,
    Unit = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LenctlSelection {
    BestFeasible = 0,
    Longest = 1,
    /// Report `target_bucket` only.
    Bucket = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LenctlDecodeOptions {
    pub budget: usize,
    pub bucket_size: usize,
    pub top_k: usize,
    pub reduction: LenctlReduction,
    pub weights: LenctlWeights,
    /// Length <= budget when true, < budget otherwise.
    pub inclusive_budget: bool,
    pub selection: LenctlSelection,
    pub target_bucket: usize,
}

/// Vocabulary plus log-probability matrix.
pub struct LenctlInstance {
    file: MatrixFile,
}

pub struct LenctlResult {
    inner: DecodeResult,
    text: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(LenctlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Io(_) => LenctlStatus::Io,
            Error::TooLarge { .. } => LenctlStatus::TooLarge,
            _ => LenctlStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(LenctlStatus::NullPointer, format!("{what} is null"))
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LenctlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LenctlStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            LenctlStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(LenctlStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn instance_arg<'a>(p: *const LenctlInstance) -> Result<&'a LenctlInstance, Failure> {
    p.as_ref().ok_or_else(|| null("instance"))
}

fn emit<T>(out: *mut *mut T, value: T) {
    // SAFETY: callers check `out` for null before doing any work
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

fn make_result(inner: DecodeResult) -> Result<LenctlResult, Failure> {
    let text = CString::new(inner.words.text())
        .map_err(|_| Failure(LenctlStatus::InvalidInput, "summary contains a NUL byte".into()))?;
    Ok(LenctlResult { inner, text })
}

impl From<LenctlReduction> for Reduction {
    fn from(r: LenctlReduction) -> Self {
        match r {
            LenctlReduction::Merge => Reduction::Merge,
            LenctlReduction::NoMerge => Reduction::NoMerge,
        }
    }
}

impl From<LenctlWeights> for LengthWeights {
    fn from(w: LenctlWeights) -> Self {
        match w {
            LenctlWeights::Separator => LengthWeights::Separator,
            LenctlWeights::Appended => LengthWeights::Appended,
            LenctlWeights::Unit => LengthWeights::Unit,
        }
    }
}

impl LenctlDecodeOptions {
    fn config(&self) -> Result<DecoderConfig, Failure> {
        if self.bucket_size == 0 || self.top_k == 0 {
            return Err(Failure(
                LenctlStatus::InvalidArgument,
                "bucket_size and top_k must be positive".into(),
            ));
        }
        let selection = match self.selection {
            LenctlSelection::BestFeasible => Selection::BestFeasible,
            LenctlSelection::Longest => Selection::Longest,
            LenctlSelection::Bucket => Selection::Bucket(self.target_bucket),
        };
        Ok(DecoderConfig::new(self.budget)
            .with_bucket_size(self.bucket_size)
            .with_top_k(self.top_k)
            .with_reduction(self.reduction.into())
            .with_weights(self.weights.into())
            .with_inclusive_budget(self.inclusive_budget)
            .with_selection(selection))
    }
}

/// Default options for `budget`: bucket size 4, top-k 20, merging,
/// separator-counted lengths, inclusive budget, best feasible cell.
#[no_mangle]
pub extern "C" fn lenctl_decode_options_default(budget: usize) -> LenctlDecodeOptions {
    let d = DecoderConfig::new(budget);
    LenctlDecodeOptions {
        budget,
        bucket_size: d.bucket_size,
        top_k: d.top_k,
        reduction: LenctlReduction::Merge,
        weights: LenctlWeights::Separator,
        inclusive_budget: true,
        selection: LenctlSelection::BestFeasible,
        target_bucket: 0,
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lenctl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Load a matrix file (text or binary).
#[no_mangle]
pub unsafe extern "C" fn lenctl_instance_read(path: *const c_char, out: *mut *mut LenctlInstance) -> LenctlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = str_arg(path, "path")?;
        emit(
            out,
            LenctlInstance {
                file: MatrixFile::read(path)?,
            },
        );
        Ok(())
    })
}

/// Build an instance from `vocab_size` token strings, the blank's index and
/// a row-major `slots * vocab_size` array of natural-log probabilities.
#[no_mangle]
pub unsafe extern "C" fn lenctl_instance_new(
    tokens: *const *const c_char,
    vocab_size: usize,
    blank: usize,
    log_probs: *const f64,
    slots: usize,
    out: *mut *mut LenctlInstance,
) -> LenctlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if tokens.is_null() || log_probs.is_null() {
            return Err(null("tokens or log_probs"));
        }
        let names = (0..vocab_size)
            .map(|i| str_arg(*tokens.add(i), "token").map(str::to_string))
            .collect::<Result<Vec<_>, _>>()?;
        let n = slots
            .checked_mul(vocab_size)
            .ok_or_else(|| Failure(LenctlStatus::InvalidArgument, "slots * vocab_size overflows".into()))?;
        let values = std::slice::from_raw_parts(log_probs, n).to_vec();
        let vocab = Vocabulary::new(names, blank)?;
        let matrix = LogProbMatrix::new(slots, vocab_size, values)?;
        emit(
            out,
            LenctlInstance {
                file: MatrixFile::new(vocab, matrix)?,
            },
        );
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn lenctl_instance_free(instance: *mut LenctlInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

#[no_mangle]
pub unsafe extern "C" fn lenctl_instance_slots(instance: *const LenctlInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.file.matrix.slots())
}

#[no_mangle]
pub unsafe extern "C" fn lenctl_instance_vocab_size(instance: *const LenctlInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.file.vocab.len())
}

/// Length-control decode. With bucket_size 1, no merging and a top_k of at
/// least the vocabulary size the result is exact.
#[no_mangle]
pub unsafe extern "C" fn lenctl_decode(
    instance: *const LenctlInstance,
    options: *const LenctlDecodeOptions,
    out: *mut *mut LenctlResult,
) -> LenctlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inst = instance_arg(instance)?;
        let cfg = options.as_ref().ok_or_else(|| null("options"))?.config()?;
        let r = decode_length_control(&inst.file.matrix, &inst.file.vocab, &cfg)?;
        emit(out, make_result(r)?);
        Ok(())
    })
}

/// Per-slot argmax decode with no length control.
#[no_mangle]
pub unsafe extern "C" fn lenctl_decode_greedy(
    instance: *const LenctlInstance,
    reduction: LenctlReduction,
    weights: LenctlWeights,
    out: *mut *mut LenctlResult,
) -> LenctlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inst = instance_arg(instance)?;
        let r = decode_greedy(&inst.file.matrix, &inst.file.vocab, reduction.into(), weights.into())?;
        emit(out, make_result(r)?);
        Ok(())
    })
}

/// CTC marginal log-probability of a space-separated word sequence.
#[no_mangle]
pub unsafe extern "C" fn lenctl_ctc_score(
    instance: *const LenctlInstance,
    text: *const c_char,
    out_log_prob: *mut f64,
) -> LenctlStatus {
    guard(|| {
        if out_log_prob.is_null() {
            return Err(null("out_log_prob"));
        }
        let inst = instance_arg(instance)?;
        let text = str_arg(text, "text")?;
        *out_log_prob = ctc_score_text(&inst.file.matrix, &inst.file.vocab, text)?.log_prob();
        Ok(())
    })
}

/// Summary text, owned by the result.
#[no_mangle]
pub unsafe extern "C" fn lenctl_result_text(result: *const LenctlResult) -> *const c_char {
    result.as_ref().map_or(ptr::null(), |r| r.text.as_ptr())
}

/// Path log-probability; NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn lenctl_result_score(result: *const LenctlResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.inner.score)
}

#[no_mangle]
pub unsafe extern "C" fn lenctl_result_char_len(result: *const LenctlResult) -> usize {
    result.as_ref().map_or(0, |r| r.inner.char_len)
}

/// True when no summary fit the budget and the all-blank path was returned.
#[no_mangle]
pub unsafe extern "C" fn lenctl_result_fallback(result: *const LenctlResult) -> bool {
    result.as_ref().is_some_and(|r| r.inner.fallback)
}

/// Token ids of the decoded path, one per slot; the length goes to `out_len`.
#[no_mangle]
pub unsafe extern "C" fn lenctl_result_path(result: *const LenctlResult, out_len: *mut usize) -> *const usize {
    let Some(r) = result.as_ref() else {
        if !out_len.is_null() {
            *out_len = 0;
        }
        return ptr::null();
    };
    if !out_len.is_null() {
        *out_len = r.inner.path.len();
    }
    r.inner.path.as_slice().as_ptr()
}

#[no_mangle]
pub unsafe extern "C" fn lenctl_result_free(result: *mut LenctlResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
