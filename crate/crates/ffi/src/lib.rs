//! C ABI over `sememevec`.
//!
//! Every fallible call returns an [`SvStatus`]; on failure a description is
//! available from [`sv_last_error_message`] on the same thread. Loaded
//! resources are opaque handles released with their `_free` function.
//! Panics never cross the boundary; they surface as `SV_PANIC`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use sememevec::embedding::{cosine, EmbeddingSpace};
use sememevec::eval::spearman;
use sememevec::morphsim::{word_similarity, SimilarityModel};
use sememevec::revise::tf_bucket;
use sememevec::sememe::{hownet_vector, parse_lexicon, SememeLexicon};
use sememevec::tagger::TaggerModel;
use sememevec::Error;

#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SvStatus {
    SV_OK = 0,
    SV_NULL_POINTER = 1,
    SV_INVALID_UTF8 = 2,
    SV_INVALID_ARGUMENT = 3,
    SV_IO = 4,
    SV_PARSE = 5,
    SV_NOT_FOUND = 6,
    SV_BUFFER_TOO_SMALL = 7,
    SV_EVALUATION = 8,
    SV_PANIC = 9,
}

/// Word or sememe vector space.
pub struct SvSpace(EmbeddingSpace);

/// Sememe lexicon.
pub struct SvLexicon(SememeLexicon);

/// Morphological similarity model.
pub struct SvSimilarityModel(SimilarityModel);

/// Trained tagger with its label strings.
pub struct SvTagger {
    model: TaggerModel,
    labels: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(SvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Io { .. } => SvStatus::SV_IO,
            Error::Encoding { .. } | Error::Parse { .. } => SvStatus::SV_PARSE,
            Error::Evaluation(_) => SvStatus::SV_EVALUATION,
            _ => SvStatus::SV_INVALID_ARGUMENT,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: SvStatus, message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, message.into()))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SvStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SvStatus::SV_OK,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_owned());
            set_error(message);
            SvStatus::SV_PANIC
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(SvStatus::SV_NULL_POINTER, format!("{what} is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(SvStatus::SV_INVALID_UTF8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .map_or_else(|| fail(SvStatus::SV_NULL_POINTER, format!("{what} handle is null")), Ok)
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, needed: usize) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return fail(SvStatus::SV_NULL_POINTER, "output buffer is null");
    }
    if len < needed {
        return fail(SvStatus::SV_BUFFER_TOO_SMALL, format!("output buffer holds {len}, need {needed}"));
    }
    Ok(std::slice::from_raw_parts_mut(p, needed))
}

unsafe fn in_slice<'a>(p: *const f64, len: usize) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return fail(SvStatus::SV_NULL_POINTER, "input array is null");
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return fail(SvStatus::SV_NULL_POINTER, "output handle pointer is null");
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failed call on this thread, or null. The string stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn sv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loads a vector file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sv_space_load(path: *const c_char, out: *mut *mut SvSpace) -> SvStatus {
    guard(|| {
        let path = PathBuf::from(str_arg(path, "path")?);
        store(out, SvSpace(EmbeddingSpace::load(&path)?))
    })
}

/// # Safety
/// `space` must be null or a handle from [`sv_space_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sv_space_free(space: *mut SvSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Vector dimension, or 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sv_space_dim(space: *const SvSpace) -> usize {
    space.as_ref().map_or(0, |s| s.0.dim())
}

/// Number of vectors, or 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sv_space_len(space: *const SvSpace) -> usize {
    space.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the vector of `token` into `out` (capacity `len`).
///
/// # Safety
/// `space` must be a live handle, `token` NUL-terminated, `out` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sv_space_lookup(
    space: *const SvSpace,
    token: *const c_char,
    out: *mut f64,
    len: usize,
) -> SvStatus {
    guard(|| {
        let space = &handle(space, "space")?.0;
        let token = str_arg(token, "token")?;
        let Some(v) = space.lookup(token) else {
            return fail(SvStatus::SV_NOT_FOUND, format!("no vector for {token:?}"));
        };
        out_slice(out, len, v.len())?.copy_from_slice(v);
        Ok(())
    })
}

/// Cosine of two arrays of length `len`; 0 if either is a zero vector or null.
///
/// # Safety
/// `a` and `b` must be readable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sv_cosine(a: *const f64, b: *const f64, len: usize) -> f64 {
    match (in_slice(a, len), in_slice(b, len)) {
        (Ok(a), Ok(b)) if len > 0 => cosine(a, b),
        _ => 0.0,
    }
}

/// # Safety
/// `path` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sv_lexicon_load(path: *const c_char, out: *mut *mut SvLexicon) -> SvStatus {
    guard(|| {
        let path = PathBuf::from(str_arg(path, "path")?);
        store(out, SvLexicon(parse_lexicon(&path)?))
    })
}

/// # Safety
/// `lexicon` must be null or a handle from [`sv_lexicon_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sv_lexicon_free(lexicon: *mut SvLexicon) {
    if !lexicon.is_null() {
        drop(Box::from_raw(lexicon));
    }
}

/// Sum of the sememe vectors of `word`'s first sense, written to `out`.
///
/// # Safety
/// Handles must be live, `word` NUL-terminated, `out` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sv_hownet_vector(
    lexicon: *const SvLexicon,
    sememe_space: *const SvSpace,
    word: *const c_char,
    out: *mut f64,
    len: usize,
) -> SvStatus {
    guard(|| {
        let lexicon = &handle(lexicon, "lexicon")?.0;
        let space = &handle(sememe_space, "space")?.0;
        let word = str_arg(word, "word")?;
        let Some(v) = hownet_vector(word, lexicon, space) else {
            return fail(SvStatus::SV_NOT_FOUND, format!("no sememe vector for {word:?}"));
        };
        out_slice(out, len, v.len())?.copy_from_slice(&v);
        Ok(())
    })
}

/// Five-bucket term-frequency weight in 0..=4.
#[no_mangle]
pub extern "C" fn sv_tf_bucket(tf: u64) -> u8 {
    tf_bucket(tf)
}

/// # Safety
/// `path` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sv_simmodel_load(path: *const c_char, out: *mut *mut SvSimilarityModel) -> SvStatus {
    guard(|| {
        let path = PathBuf::from(str_arg(path, "path")?);
        store(out, SvSimilarityModel(SimilarityModel::load(&path)?))
    })
}

/// # Safety
/// `model` must be null or a handle from [`sv_simmodel_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sv_simmodel_free(model: *mut SvSimilarityModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Morphological similarity in [0, 1]; empty words are rejected.
///
/// # Safety
/// `model` must be live, `a` and `b` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sv_word_similarity(
    model: *const SvSimilarityModel,
    a: *const c_char,
    b: *const c_char,
    out: *mut f64,
) -> SvStatus {
    guard(|| {
        let model = &handle(model, "model")?.0;
        let (a, b) = (str_arg(a, "a")?, str_arg(b, "b")?);
        if a.is_empty() || b.is_empty() {
            return fail(SvStatus::SV_INVALID_ARGUMENT, "similarity of an empty string");
        }
        if out.is_null() {
            return fail(SvStatus::SV_NULL_POINTER, "output pointer is null");
        }
        *out = word_similarity(model, a, b);
        Ok(())
    })
}

/// # Safety
/// `path` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sv_tagger_load(path: *const c_char, out: *mut *mut SvTagger) -> SvStatus {
    guard(|| {
        let path = PathBuf::from(str_arg(path, "path")?);
        let model = TaggerModel::load(&path)?;
        let labels = model
            .scheme
            .labels()
            .iter()
            .map(|l| CString::new(l.as_str()).or_else(|_| fail(SvStatus::SV_PARSE, "label contains NUL")))
            .collect::<Result<_, _>>()?;
        store(out, SvTagger { model, labels })
    })
}

/// # Safety
/// `tagger` must be null or a handle from [`sv_tagger_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sv_tagger_free(tagger: *mut SvTagger) {
    if !tagger.is_null() {
        drop(Box::from_raw(tagger));
    }
}

/// Length of the feature vector the tagger expects, or 0 for null.
///
/// # Safety
/// `tagger` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sv_tagger_feature_dim(tagger: *const SvTagger) -> usize {
    tagger.as_ref().map_or(0, |t| t.model.spec.feature_dim())
}

/// Number of labels, or 0 for null.
///
/// # Safety
/// `tagger` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sv_tagger_num_labels(tagger: *const SvTagger) -> usize {
    tagger.as_ref().map_or(0, |t| t.labels.len())
}

/// Label string for `index`, owned by the tagger; null when out of range.
///
/// # Safety
/// `tagger` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sv_tagger_label(tagger: *const SvTagger, index: usize) -> *const c_char {
    tagger
        .as_ref()
        .and_then(|t| t.labels.get(index))
        .map_or(ptr::null(), |l| l.as_ptr())
}

/// Classifies one assembled feature vector. Writes the label index and, if
/// `probs` is non-null, the class probabilities (capacity `probs_len`).
///
/// # Safety
/// `tagger` must be live, `features` readable for `len` doubles, `label`
/// writable, `probs` null or writable for `probs_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sv_tagger_predict(
    tagger: *const SvTagger,
    features: *const f64,
    len: usize,
    label: *mut usize,
    probs: *mut f64,
    probs_len: usize,
) -> SvStatus {
    guard(|| {
        let tagger = handle(tagger, "tagger")?;
        let expected = tagger.model.spec.feature_dim();
        if len != expected {
            return fail(SvStatus::SV_INVALID_ARGUMENT, format!("feature length {len}, model expects {expected}"));
        }
        let x = in_slice(features, len)?;
        if label.is_null() {
            return fail(SvStatus::SV_NULL_POINTER, "label pointer is null");
        }
        let (index, p) = tagger.model.predict(x);
        if !probs.is_null() {
            out_slice(probs, probs_len, p.len())?.copy_from_slice(&p);
        }
        *label = index;
        Ok(())
    })
}

/// Spearman rank correlation of two arrays of length `n`.
///
/// # Safety
/// `xs` and `ys` must be readable for `n` doubles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sv_spearman(xs: *const f64, ys: *const f64, n: usize, out: *mut f64) -> SvStatus {
    guard(|| {
        let (xs, ys) = (in_slice(xs, n)?, in_slice(ys, n)?);
        if out.is_null() {
            return fail(SvStatus::SV_NULL_POINTER, "output pointer is null");
        }
        *out = spearman(xs, ys)?;
        Ok(())
    })
}
