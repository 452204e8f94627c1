use std::ffi::{c_char, CStr, CString};
use std::ptr;

use pinwords_ffi::*;

const DIC: &str = "6\nlion\nmail/S\nblue\nclear\nmnemonic\nJohn's\n";

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { pw_string_free(s) };
    owned
}

fn last_error() -> String {
    let p = pw_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn load(dic: &str, lang: &str) -> *mut PwDictionary {
    let tag = CString::new(lang).unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe {
        pw_dictionary_load(dic.as_ptr(), dic.len(), ptr::null(), tag.as_ptr(), PwWordModel::SourceForm, &mut out)
    };
    assert_eq!(st, PwStatus::Ok);
    out
}

fn builtin(name: &str) -> *mut PwMap {
    let name = CString::new(name).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pw_map_builtin(name.as_ptr(), &mut out) }, PwStatus::Ok);
    out
}

#[test]
fn dictionary_and_distribution() {
    let dict = load(DIC, "en");
    let map = builtin("standard");
    assert_eq!(unsafe { pw_dictionary_word_count(dict) }, 6);
    let dicts = [dict as *const PwDictionary];
    let mut dist = ptr::null_mut();
    let st = unsafe { pw_distribution_generate(PwMethod::Exact, 4, map, dicts.as_ptr(), 1, &mut dist) };
    assert_eq!(st, PwStatus::Ok);
    // lion, mail, blue, john
    assert_eq!(unsafe { pw_distribution_total(dist) }, 4);
    assert_eq!(unsafe { pw_distribution_coverage(dist) }, 4.0 / 10_000.0);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { pw_distribution_to_json(dist, &mut json) }, PwStatus::Ok);
    assert!(take(json).starts_with("{\"pin_length\":4,\"total\":4,"));

    let mut poly = ptr::null_mut();
    let st = unsafe { pw_distribution_generate(PwMethod::Polyglot, 4, map, dicts.as_ptr(), 1, &mut poly) };
    assert_eq!(st, PwStatus::InvalidArgument);
    assert!(poly.is_null());
    assert!(last_error().contains("polyglot"));

    unsafe {
        pw_distribution_free(dist);
        pw_map_free(map);
        pw_dictionary_free(dict);
    }
}

#[test]
fn model_round_trips_through_json() {
    let dict = load(DIC, "en");
    let map = builtin("stretched");
    let dicts = [dict as *const PwDictionary];
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { pw_model_train(dicts.as_ptr(), 1, map, &mut model) }, PwStatus::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { pw_model_to_json(model, &mut json) }, PwStatus::Ok);
    let json = CString::new(take(json)).unwrap();
    let mut loaded = ptr::null_mut();
    assert_eq!(unsafe { pw_model_from_json(json.as_ptr(), &mut loaded) }, PwStatus::Ok);

    let pin = CString::new("5476").unwrap();
    for m in [model, loaded] {
        let mut word = ptr::null_mut();
        let mut lp = 0.0;
        let mut smoothed = true;
        let st = unsafe { pw_model_viterbi(m, pin.as_ptr(), &mut word, &mut lp, &mut smoothed) };
        assert_eq!(st, PwStatus::Ok);
        assert_eq!(take(word), "lion");
        assert!(lp.is_finite() && !smoothed);
    }
    unsafe {
        pw_model_free(model);
        pw_model_free(loaded);
        pw_map_free(map);
        pw_dictionary_free(dict);
    }
}

#[test]
fn phrases_round_trip() {
    let map = builtin("stretched");
    let mut lex = ptr::null_mut();
    assert_eq!(unsafe { pw_lexicon_load(ptr::null(), map, &mut lex) }, PwStatus::Ok);
    for seed in 0..50u64 {
        let pin = CString::new(format!("{:05}", seed * 1997 % 100_000)).unwrap();
        let mut phrase = ptr::null_mut();
        assert_eq!(unsafe { pw_pin_to_phrase(lex, pin.as_ptr(), ptr::null(), seed, &mut phrase) }, PwStatus::Ok);
        let phrase = CString::new(take(phrase)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(unsafe { pw_phrase_to_pin(phrase.as_ptr(), map, &mut back) }, PwStatus::Ok);
        assert_eq!(take(back), pin.to_str().unwrap());
    }
    unsafe {
        pw_lexicon_free(lex);
        pw_map_free(map);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pw_map_builtin(ptr::null(), &mut out) }, PwStatus::NullPointer);
    let bogus = CString::new("qwerty").unwrap();
    assert_eq!(unsafe { pw_map_builtin(bogus.as_ptr(), &mut out) }, PwStatus::InvalidArgument);
    assert!(last_error().contains("qwerty"));

    let map = builtin("standard");
    let word = CString::new("héllo").unwrap();
    let mut pin = ptr::null_mut();
    assert_eq!(unsafe { pw_map_word_to_pin(map, word.as_ptr(), &mut pin) }, PwStatus::Unmappable);

    let config = CString::new("2: abc\n2: def\n").unwrap();
    let name = CString::new("broken").unwrap();
    let mut parsed = ptr::null_mut();
    assert_eq!(unsafe { pw_map_parse(name.as_ptr(), config.as_ptr(), &mut parsed) }, PwStatus::ParseError);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { pw_random_pin(11, 0, &mut s) }, PwStatus::InvalidArgument);
    assert_eq!(unsafe { pw_random_pin(4, 7, &mut s) }, PwStatus::Ok);
    assert!(pw_last_error_message().is_null());
    assert_eq!(take(s).len(), 4);

    let mut model = ptr::null_mut();
    let junk = CString::new("{}").unwrap();
    assert_eq!(unsafe { pw_model_from_json(junk.as_ptr(), &mut model) }, PwStatus::ParseError);
    unsafe { pw_map_free(map) };
}

#[test]
fn freeing_null_is_harmless() {
    unsafe {
        pw_string_free(ptr::null_mut());
        pw_dictionary_free(ptr::null_mut());
        pw_map_free(ptr::null_mut());
        pw_distribution_free(ptr::null_mut());
        pw_model_free(ptr::null_mut());
        pw_lexicon_free(ptr::null_mut());
    }
    assert_eq!(unsafe { pw_distribution_total(ptr::null()) }, 0);
    let v = unsafe { CStr::from_ptr(pw_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
