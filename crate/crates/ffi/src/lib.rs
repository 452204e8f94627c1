//! C ABI for `pinwords`.
//!
//! Every fallible function returns a [`PwStatus`] and writes its result
//! through an out-pointer. On failure a message for the calling thread is
//! available from [`pw_last_error_message`]. Handles are opaque and must be
//! released with their `*_free` function; strings returned by the library
//! must be released with [`pw_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pinwords::dictionary::{load_dic, merge, BuildOptions, DicEncoding, Dictionary, WordModel};
use pinwords::mapping::{LetterDigitMap, Pin};
use pinwords::phrase::{phrase_to_pin, pin_to_phrase, PhraseLexicon, PhraseTemplate};
use pinwords::pingen::{random_pin, GenerationSpec, Method, PinDistribution};
use pinwords::stats::{coverage, entropy};
use pinwords::HmmModel;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    ParseError = 4,
    Unmappable = 5,
    EmptyResult = 6,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwWordModel {
    Normalized = 0,
    SourceForm = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwMethod {
    Exact = 0,
    Prefix = 1,
    Suffix = 2,
    Polyglot = 3,
    Morph = 4,
    Combination = 5,
}

impl From<PwMethod> for Method {
    fn from(m: PwMethod) -> Self {
        match m {
            PwMethod::Exact => Method::Exact,
            PwMethod::Prefix => Method::Prefix,
            PwMethod::Suffix => Method::Suffix,
            PwMethod::Polyglot => Method::Polyglot,
            PwMethod::Morph => Method::Morph,
            PwMethod::Combination => Method::Combination,
        }
    }
}

/// A normalized word list.
pub struct PwDictionary(Dictionary);
/// A letter to digit map.
pub struct PwMap(LetterDigitMap);
/// Counts of PINs produced by a generation method.
pub struct PwDistribution(PinDistribution);
/// A trained letter bigram model.
pub struct PwModel(HmmModel);
/// A validated phrase lexicon.
pub struct PwLexicon(PhraseLexicon);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(PwStatus, String);

impl Failure {
    fn new(status: PwStatus, e: impl std::fmt::Display) -> Self {
        Failure(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> PwStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PwStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PwStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure::new(PwStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(PwStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<Option<&'a str>> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, what).map(Some)
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref()
        .ok_or_else(|| Failure::new(PwStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> FfiResult<&'a mut T> {
    p.as_mut()
        .ok_or_else(|| Failure::new(PwStatus::NullPointer, format!("{what} is null")))
}

fn to_c_string(s: String) -> FfiResult<*mut c_char> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Failure::new(PwStatus::InvalidArgument, e))
}

fn parse_pin(s: &str) -> FfiResult<Pin> {
    s.parse::<Pin>()
        .map_err(|e| Failure::new(PwStatus::InvalidArgument, e))
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn pw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a hunspell `.dic` buffer.
///
/// `encoding` may be NULL for UTF-8. `language_tag` selects language-specific
/// normalization (possessive stripping for `en`).
///
/// # Safety
/// `bytes` must point to `len` readable bytes; string arguments must be NULL
/// or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_dictionary_load(
    bytes: *const u8,
    len: usize,
    encoding: *const c_char,
    language_tag: *const c_char,
    word_model: PwWordModel,
    out: *mut *mut PwDictionary,
) -> PwStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if bytes.is_null() && len > 0 {
            return Err(Failure::new(PwStatus::NullPointer, "bytes is null"));
        }
        let data = if len == 0 { &[][..] } else { std::slice::from_raw_parts(bytes, len) };
        let tag = str_arg(language_tag, "language_tag")?;
        let enc = match opt_str_arg(encoding, "encoding")? {
            Some(label) => DicEncoding::for_label(label)
                .map_err(|e| Failure::new(PwStatus::InvalidArgument, e))?,
            None => DicEncoding::UTF_8,
        };
        let model = match word_model {
            PwWordModel::Normalized => WordModel::Normalized,
            PwWordModel::SourceForm => WordModel::SourceForm,
        };
        let opts = BuildOptions::for_language(tag).word_model(model);
        let dict = load_dic(data, enc, &opts, tag, tag)
            .map_err(|e| Failure::new(PwStatus::ParseError, e))?;
        *out = Box::into_raw(Box::new(PwDictionary(dict)));
        Ok(())
    })
}

/// Number of distinct normalized words.
///
/// # Safety
/// `dict` must be a live handle or NULL (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn pw_dictionary_word_count(dict: *const PwDictionary) -> usize {
    dict.as_ref().map_or(0, |d| d.0.len())
}

/// Number of words that contribute to PIN counts.
///
/// # Safety
/// `dict` must be a live handle or NULL (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn pw_dictionary_pin_word_count(dict: *const PwDictionary) -> usize {
    dict.as_ref().map_or(0, |d| d.0.pin_word_count())
}

/// # Safety
/// `dict` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_dictionary_free(dict: *mut PwDictionary) {
    if !dict.is_null() {
        drop(Box::from_raw(dict));
    }
}

/// Looks up `standard`, `extended` or `stretched`.
///
/// # Safety
/// `name` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_map_builtin(name: *const c_char, out: *mut *mut PwMap) -> PwStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let map = LetterDigitMap::builtin(str_arg(name, "name")?)
            .map_err(|e| Failure::new(PwStatus::InvalidArgument, e))?;
        *out = Box::into_raw(Box::new(PwMap(map)));
        Ok(())
    })
}

/// Parses a map from `digit: letters` lines.
///
/// # Safety
/// `name` and `text` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_map_parse(
    name: *const c_char,
    text: *const c_char,
    out: *mut *mut PwMap,
) -> PwStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let map = LetterDigitMap::parse_config(str_arg(name, "name")?, str_arg(text, "text")?)
            .map_err(|e| Failure::new(PwStatus::ParseError, e))?;
        *out = Box::into_raw(Box::new(PwMap(map)));
        Ok(())
    })
}

/// Translates a lowercase word; the PIN string is written to `out_pin`.
///
/// # Safety
/// `map` must be a live handle, `word` NUL-terminated, `out_pin` writable.
#[no_mangle]
pub unsafe extern "C" fn pw_map_word_to_pin(
    map: *const PwMap,
    word: *const c_char,
    out_pin: *mut *mut c_char,
) -> PwStatus {
    guard(|| {
        let out = out_ptr(out_pin, "out_pin")?;
        let map = handle(map, "map")?;
        let pin = map
            .0
            .word_to_pin(str_arg(word, "word")?)
            .map_err(|e| Failure::new(PwStatus::Unmappable, e))?;
        *out = to_c_string(pin.to_string())?;
        Ok(())
    })
}

/// # Safety
/// `map` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_map_free(map: *mut PwMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Runs a generation method over `count` dictionaries.
///
/// # Safety
/// `dicts` must point to `count` live dictionary handles; `map` must be a
/// live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_distribution_generate(
    method: PwMethod,
    pin_length: usize,
    map: *const PwMap,
    dicts: *const *const PwDictionary,
    count: usize,
    out: *mut *mut PwDistribution,
) -> PwStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let map = handle(map, "map")?;
        if dicts.is_null() && count > 0 {
            return Err(Failure::new(PwStatus::NullPointer, "dicts is null"));
        }
        let handles = if count == 0 { &[][..] } else { std::slice::from_raw_parts(dicts, count) };
        let dictionaries = handles
            .iter()
            .map(|&d| handle(d, "dictionary").map(|d| &d.0))
            .collect::<FfiResult<Vec<_>>>()?;
        let spec = GenerationSpec {
            method: method.into(),
            pin_length,
            map: &map.0,
            dictionaries,
        };
        let dist = spec
            .run()
            .map_err(|e| Failure::new(PwStatus::InvalidArgument, e))?;
        *out = Box::into_raw(Box::new(PwDistribution(dist)));
        Ok(())
    })
}

/// Sum of all PIN counts.
///
/// # Safety
/// `dist` must be a live handle or NULL (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn pw_distribution_total(dist: *const PwDistribution) -> u64 {
    dist.as_ref().map_or(0, |d| d.0.total())
}

/// Number of distinct PINs.
///
/// # Safety
/// `dist` must be a live handle or NULL (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn pw_distribution_distinct(dist: *const PwDistribution) -> usize {
    dist.as_ref().map_or(0, |d| d.0.distinct())
}

/// Count for one PIN (0 when absent or invalid).
///
/// # Safety
/// `dist` must be a live handle; `pin` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn pw_distribution_count(dist: *const PwDistribution, pin: *const c_char) -> u64 {
    let Some(d) = dist.as_ref() else { return 0 };
    if pin.is_null() {
        return 0;
    }
    match CStr::from_ptr(pin).to_str().ok().and_then(|s| Pin::new(s).ok()) {
        Some(p) => d.0.count(&p),
        None => 0,
    }
}

/// Fraction of the 10^n PIN space that is covered.
///
/// # Safety
/// `dist` must be a live handle or NULL (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn pw_distribution_coverage(dist: *const PwDistribution) -> f64 {
    dist.as_ref().map_or(0.0, |d| coverage(&d.0))
}

/// Shannon entropy in bits. Fails with `EmptyResult` for an empty
/// distribution.
///
/// # Safety
/// `dist` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_distribution_entropy(dist: *const PwDistribution, out: *mut f64) -> PwStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let d = handle(dist, "dist")?;
        *out = entropy(&d.0).map_err(|e| Failure::new(PwStatus::EmptyResult, e))?;
        Ok(())
    })
}

/// Serializes the distribution as JSON.
///
/// # Safety
/// `dist` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_distribution_to_json(
    dist: *const PwDistribution,
    out_json: *mut *mut c_char,
) -> PwStatus {
    guard(|| {
        let out = out_ptr(out_json, "out_json")?;
        *out = to_c_string(handle(dist, "dist")?.0.to_json())?;
        Ok(())
    })
}

/// # Safety
/// `dist` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_distribution_free(dist: *mut PwDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Trains a bigram model on the union of `count` dictionaries.
///
/// # Safety
/// `dicts` must point to `count` live dictionary handles; `map` must be a
/// live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_model_train(
    dicts: *const *const PwDictionary,
    count: usize,
    map: *const PwMap,
    out: *mut *mut PwModel,
) -> PwStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let map = handle(map, "map")?;
        if dicts.is_null() || count == 0 {
            return Err(Failure::new(PwStatus::InvalidArgument, "at least one dictionary is required"));
        }
        let refs = std::slice::from_raw_parts(dicts, count)
            .iter()
            .map(|&d| handle(d, "dictionary").map(|d| &d.0))
            .collect::<FfiResult<Vec<_>>>()?;
        let merged;
        let dict = if refs.len() == 1 {
            refs[0]
        } else {
            merged = merge(&refs, "merged").map_err(|e| Failure::new(PwStatus::InvalidArgument, e))?;
            &merged
        };
        let model = HmmModel::train_dictionary(dict, map.0.clone())
            .map_err(|e| Failure::new(PwStatus::InvalidArgument, e))?;
        *out = Box::into_raw(Box::new(PwModel(model)));
        Ok(())
    })
}

/// Loads a model saved with [`pw_model_to_json`].
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_model_from_json(json: *const c_char, out: *mut *mut PwModel) -> PwStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let model = HmmModel::from_json(str_arg(json, "json")?)
            .map_err(|e| Failure::new(PwStatus::ParseError, e))?;
        *out = Box::into_raw(Box::new(PwModel(model)));
        Ok(())
    })
}

/// # Safety
/// `model` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_model_to_json(model: *const PwModel, out_json: *mut *mut c_char) -> PwStatus {
    guard(|| {
        let out = out_ptr(out_json, "out_json")?;
        *out = to_c_string(handle(model, "model")?.0.to_json())?;
        Ok(())
    })
}

/// Most probable word for `pin`. `out_log_probability` receives the natural
/// log probability, or negative infinity when `out_smoothed` is set. Either
/// of those two out-pointers may be NULL.
///
/// # Safety
/// `model` must be a live handle, `pin` NUL-terminated, `out_word` writable.
#[no_mangle]
pub unsafe extern "C" fn pw_model_viterbi(
    model: *const PwModel,
    pin: *const c_char,
    out_word: *mut *mut c_char,
    out_log_probability: *mut f64,
    out_smoothed: *mut bool,
) -> PwStatus {
    guard(|| {
        let out = out_ptr(out_word, "out_word")?;
        let model = handle(model, "model")?;
        let pin = parse_pin(str_arg(pin, "pin")?)?;
        let best = model
            .0
            .viterbi(&pin)
            .map_err(|e| Failure::new(PwStatus::Unmappable, e))?;
        if let Some(lp) = out_log_probability.as_mut() {
            *lp = best.log_probability;
        }
        if let Some(s) = out_smoothed.as_mut() {
            *s = best.smoothed;
        }
        *out = to_c_string(best.word)?;
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_model_free(model: *mut PwModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Loads a lexicon. A NULL `json` selects the bundled English lexicon, which
/// requires the stretched map.
///
/// # Safety
/// `json` must be NULL or NUL-terminated; `map` must be a live handle;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_lexicon_load(
    json: *const c_char,
    map: *const PwMap,
    out: *mut *mut PwLexicon,
) -> PwStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let map = handle(map, "map")?;
        let text = opt_str_arg(json, "json")?.unwrap_or(pinwords::phrase::DEFAULT_LEXICON_JSON);
        let lex = PhraseLexicon::from_json(text, map.0.clone())
            .map_err(|e| Failure::new(PwStatus::ParseError, e))?;
        *out = Box::into_raw(Box::new(PwLexicon(lex)));
        Ok(())
    })
}

/// Builds a phrase for `pin`, words separated by single spaces. A NULL
/// `template` selects the default for the PIN length.
///
/// # Safety
/// `lexicon` must be a live handle; `pin` NUL-terminated; `template` NULL or
/// NUL-terminated; `out_phrase` writable.
#[no_mangle]
pub unsafe extern "C" fn pw_pin_to_phrase(
    lexicon: *const PwLexicon,
    pin: *const c_char,
    template: *const c_char,
    seed: u64,
    out_phrase: *mut *mut c_char,
) -> PwStatus {
    guard(|| {
        let out = out_ptr(out_phrase, "out_phrase")?;
        let lex = handle(lexicon, "lexicon")?;
        let pin = parse_pin(str_arg(pin, "pin")?)?;
        let template = match opt_str_arg(template, "template")? {
            Some(t) => t.parse::<PhraseTemplate>(),
            None => PhraseTemplate::default_for(pin.len()),
        }
        .map_err(|e| Failure::new(PwStatus::InvalidArgument, e))?;
        let words = pin_to_phrase(&lex.0, &template, &pin, seed)
            .map_err(|e| Failure::new(PwStatus::InvalidArgument, e))?;
        *out = to_c_string(words.join(" "))?;
        Ok(())
    })
}

/// Recovers the PIN from a space-separated phrase.
///
/// # Safety
/// `phrase` must be NUL-terminated; `map` a live handle; `out_pin` writable.
#[no_mangle]
pub unsafe extern "C" fn pw_phrase_to_pin(
    phrase: *const c_char,
    map: *const PwMap,
    out_pin: *mut *mut c_char,
) -> PwStatus {
    guard(|| {
        let out = out_ptr(out_pin, "out_pin")?;
        let map = handle(map, "map")?;
        let words: Vec<&str> = str_arg(phrase, "phrase")?.split_whitespace().collect();
        let pin = phrase_to_pin(&words, &map.0).map_err(|e| Failure::new(PwStatus::Unmappable, e))?;
        *out = to_c_string(pin.to_string())?;
        Ok(())
    })
}

/// # Safety
/// `lexicon` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_lexicon_free(lexicon: *mut PwLexicon) {
    if !lexicon.is_null() {
        drop(Box::from_raw(lexicon));
    }
}

/// Uniformly random PIN of `length` digits, deterministic for `seed`.
///
/// # Safety
/// `out_pin` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_random_pin(length: usize, seed: u64, out_pin: *mut *mut c_char) -> PwStatus {
    guard(|| {
        let out = out_ptr(out_pin, "out_pin")?;
        let pin = random_pin(length, seed).map_err(|e| Failure::new(PwStatus::InvalidArgument, e))?;
        *out = to_c_string(pin.to_string())?;
        Ok(())
    })
}
