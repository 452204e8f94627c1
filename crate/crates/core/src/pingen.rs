//! PIN distributions induced by dictionary-based generation strategies.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dictionary::{merge, Dictionary, NormalizedWord};
use crate::mapping::{LetterDigitMap, Pin, MAX_PIN_LENGTH, MIN_PIN_LENGTH};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PinGenError {
    #[error("PIN length {0} outside {MIN_PIN_LENGTH}..={MAX_PIN_LENGTH}")]
    LengthOutOfRange(usize),
    #[error("{method} needs {expected} dictionaries, got {got}")]
    DictionaryCount {
        method: Method,
        expected: &'static str,
        got: usize,
    },
    #[error("polyglot dictionaries must be distinct; `{0}` given twice")]
    DuplicateDictionary(String),
    #[error("PIN `{pin}` has length {got}, distribution expects {expected}")]
    LengthMismatch {
        pin: String,
        got: usize,
        expected: usize,
    },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Multiset of PINs of one length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinDistribution {
    pin_length: usize,
    total: u64,
    counts: BTreeMap<Pin, u64>,
    #[serde(default, skip_serializing)]
    skipped_words: u64,
}

impl PinDistribution {
    pub fn new(pin_length: usize) -> Self {
        PinDistribution {
            pin_length,
            total: 0,
            counts: BTreeMap::new(),
            skipped_words: 0,
        }
    }

    pub fn pin_length(&self) -> usize {
        self.pin_length
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &BTreeMap<Pin, u64> {
        &self.counts
    }

    pub fn count(&self, pin: &Pin) -> u64 {
        self.counts.get(pin).copied().unwrap_or(0)
    }

    pub fn contains(&self, pin: &Pin) -> bool {
        self.counts.contains_key(pin)
    }

    /// Words that were skipped because the map could not translate them.
    pub fn skipped_words(&self) -> u64 {
        self.skipped_words
    }

    pub fn add(&mut self, pin: Pin, count: u64) -> Result<(), PinGenError> {
        if pin.len() != self.pin_length {
            return Err(PinGenError::LengthMismatch {
                got: pin.len(),
                pin: pin.to_string(),
                expected: self.pin_length,
            });
        }
        if count > 0 {
            *self.counts.entry(pin).or_insert(0) += count;
            self.total += count;
        }
        Ok(())
    }

    /// Adds another distribution's counts into this one.
    pub fn absorb(&mut self, other: &PinDistribution) -> Result<(), PinGenError> {
        for (pin, &c) in &other.counts {
            self.add(pin.clone(), c)?;
        }
        self.skipped_words += other.skipped_words;
        Ok(())
    }

    pub fn scaled(&self, factor: u64) -> PinDistribution {
        let mut out = PinDistribution::new(self.pin_length);
        for (pin, &c) in &self.counts {
            out.add(pin.clone(), c * factor).expect("same length");
        }
        out
    }

    /// `pin<TAB>count` lines in PIN order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (pin, c) in &self.counts {
            out.push_str(&format!("{pin}\t{c}\n"));
        }
        out
    }

    pub fn from_tsv(pin_length: usize, text: &str) -> Result<Self, PinGenError> {
        let mut dist = PinDistribution::new(pin_length);
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |reason: String| PinGenError::Parse {
                line: i + 1,
                reason,
            };
            let (pin, count) = line
                .split_once('\t')
                .ok_or_else(|| parse_err("expected `pin<TAB>count`".into()))?;
            let pin = Pin::new(pin).map_err(|e| parse_err(e.to_string()))?;
            let count: u64 = count
                .trim()
                .parse()
                .map_err(|e| parse_err(format!("count: {e}")))?;
            dist.add(pin, count)?;
        }
        Ok(dist)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("distribution serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PinGenError> {
        let raw: PinDistribution = serde_json::from_str(text).map_err(|e| PinGenError::Parse {
            line: e.line(),
            reason: e.to_string(),
        })?;
        let mut dist = PinDistribution::new(raw.pin_length);
        for (pin, c) in raw.counts {
            dist.add(pin, c)?;
        }
        if dist.total != raw.total {
            return Err(PinGenError::Parse {
                line: 0,
                reason: format!("total {} does not match counts ({})", raw.total, dist.total),
            });
        }
        Ok(dist)
    }
}

fn tally<'a>(
    words: impl Iterator<Item = &'a str>,
    n: usize,
    map: &LetterDigitMap,
) -> PinDistribution {
    let mut dist = PinDistribution::new(n);
    for w in words {
        match map.word_to_pin(w) {
            Ok(pin) => dist.add(pin, 1).expect("length checked by caller"),
            Err(_) => dist.skipped_words += 1,
        }
    }
    dist
}

fn words_of(dict: &Dictionary) -> impl Iterator<Item = &NormalizedWord> + '_ {
    dict.pin_words()
}

/// One count per dictionary word of length exactly `n`.
pub fn exact_length_pins(dict: &Dictionary, n: usize, map: &LetterDigitMap) -> PinDistribution {
    tally(
        words_of(dict).filter(|w| w.len() == n).map(|w| w.as_str()),
        n,
        map,
    )
}

/// First `n` letters of every word of length ≥ `n`.
pub fn prefix_pins(dict: &Dictionary, n: usize, map: &LetterDigitMap) -> PinDistribution {
    tally(
        words_of(dict)
            .filter(|w| w.len() >= n)
            .map(|w| &w.as_str()[..n]),
        n,
        map,
    )
}

/// Last `n` letters of every word of length ≥ `n`.
pub fn suffix_pins(dict: &Dictionary, n: usize, map: &LetterDigitMap) -> PinDistribution {
    tally(
        words_of(dict)
            .filter(|w| w.len() >= n)
            .map(|w| &w.as_str()[w.len() - n..]),
        n,
        map,
    )
}

/// Every length-`n` word with one position replaced by each digit, 10·n
/// counts per word.
pub fn morph_pins(dict: &Dictionary, n: usize, map: &LetterDigitMap) -> PinDistribution {
    let mut dist = PinDistribution::new(n);
    let mut buf = Vec::with_capacity(n);
    for w in words_of(dict).filter(|w| w.len() == n) {
        let Ok(base) = map.word_to_pin(w.as_str()) else {
            dist.skipped_words += 1;
            continue;
        };
        for pos in 0..n {
            for d in b'0'..=b'9' {
                buf.clear();
                buf.extend_from_slice(base.as_str().as_bytes());
                buf[pos] = d;
                let pin = Pin::new(String::from_utf8(buf.clone()).expect("ascii digits"))
                    .expect("digits");
                dist.add(pin, 1).expect("length n");
            }
        }
    }
    dist
}

fn check_distinct(dicts: &[&Dictionary]) -> Result<(), PinGenError> {
    for (i, a) in dicts.iter().enumerate() {
        for b in &dicts[i + 1..] {
            if std::ptr::eq(*a, *b) || (a.name() == b.name() && a.words() == b.words()) {
                return Err(PinGenError::DuplicateDictionary(a.name().to_string()));
            }
        }
    }
    Ok(())
}

/// Exact-length PINs over the union of two or more dictionaries.
pub fn polyglot_pins(
    dicts: &[&Dictionary],
    n: usize,
    map: &LetterDigitMap,
) -> Result<PinDistribution, PinGenError> {
    if dicts.len() < 2 {
        return Err(PinGenError::DictionaryCount {
            method: Method::Polyglot,
            expected: "at least 2",
            got: dicts.len(),
        });
    }
    check_distinct(dicts)?;
    let merged = merge(dicts, "polyglot").expect("non-empty");
    Ok(exact_length_pins(&merged, n, map))
}

/// Union of the dictionaries, then prefixes, translated with `map`.
pub fn combination_pins(
    dicts: &[&Dictionary],
    n: usize,
    map: &LetterDigitMap,
) -> Result<PinDistribution, PinGenError> {
    if dicts.is_empty() {
        return Err(PinGenError::DictionaryCount {
            method: Method::Combination,
            expected: "at least 1",
            got: 0,
        });
    }
    check_distinct(dicts)?;
    let merged = merge(dicts, "combination").expect("non-empty");
    Ok(prefix_pins(&merged, n, map))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Prefix,
    Suffix,
    Polyglot,
    Morph,
    Combination,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Exact,
        Method::Prefix,
        Method::Suffix,
        Method::Polyglot,
        Method::Morph,
        Method::Combination,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Prefix => "prefix",
            Method::Suffix => "suffix",
            Method::Polyglot => "polyglot",
            Method::Morph => "morph",
            Method::Combination => "combination",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// A fully specified generation run.
#[derive(Debug, Clone)]
pub struct GenerationSpec<'a> {
    pub method: Method,
    pub pin_length: usize,
    pub map: &'a LetterDigitMap,
    pub dictionaries: Vec<&'a Dictionary>,
}

impl GenerationSpec<'_> {
    pub fn validate(&self) -> Result<(), PinGenError> {
        check_length(self.pin_length)?;
        let got = self.dictionaries.len();
        match self.method {
            Method::Polyglot if got < 2 => Err(PinGenError::DictionaryCount {
                method: self.method,
                expected: "at least 2",
                got,
            }),
            Method::Combination if got < 1 => Err(PinGenError::DictionaryCount {
                method: self.method,
                expected: "at least 1",
                got,
            }),
            Method::Polyglot | Method::Combination => check_distinct(&self.dictionaries),
            _ if got != 1 => Err(PinGenError::DictionaryCount {
                method: self.method,
                expected: "exactly 1",
                got,
            }),
            _ => Ok(()),
        }
    }

    pub fn run(&self) -> Result<PinDistribution, PinGenError> {
        self.validate()?;
        let n = self.pin_length;
        let map = self.map;
        let dicts = &self.dictionaries;
        Ok(match self.method {
            Method::Exact => exact_length_pins(dicts[0], n, map),
            Method::Prefix => prefix_pins(dicts[0], n, map),
            Method::Suffix => suffix_pins(dicts[0], n, map),
            Method::Morph => morph_pins(dicts[0], n, map),
            Method::Polyglot => polyglot_pins(dicts, n, map)?,
            Method::Combination => combination_pins(dicts, n, map)?,
        })
    }
}

pub fn check_length(n: usize) -> Result<(), PinGenError> {
    if (MIN_PIN_LENGTH..=MAX_PIN_LENGTH).contains(&n) {
        Ok(())
    } else {
        Err(PinGenError::LengthOutOfRange(n))
    }
}

/// Seeded source of uniform PINs. The stream for a seed is stable across
/// releases (ChaCha20).
pub struct PinSource {
    rng: ChaCha20Rng,
    length: usize,
}

impl PinSource {
    pub fn new(length: usize, seed: u64) -> Result<Self, PinGenError> {
        check_length(length)?;
        Ok(PinSource {
            rng: ChaCha20Rng::seed_from_u64(seed),
            length,
        })
    }

    pub fn next_pin(&mut self) -> Pin {
        let digits: String = (0..self.length)
            .map(|_| (b'0' + self.rng.gen_range(0..10u8)) as char)
            .collect();
        Pin::new(digits).expect("digits")
    }
}

impl Iterator for PinSource {
    type Item = Pin;
    fn next(&mut self) -> Option<Pin> {
        Some(self.next_pin())
    }
}

/// A uniform PIN of length `n`, determined by `seed`.
pub fn random_pin(n: usize, seed: u64) -> Result<Pin, PinGenError> {
    Ok(PinSource::new(n, seed)?.next_pin())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dict(words: &[&str]) -> Dictionary {
        Dictionary::from_words("t", "en", words)
    }

    fn p(s: &str) -> Pin {
        Pin::new(s).unwrap()
    }

    #[test]
    fn exact_basic() {
        let std = LetterDigitMap::standard();
        let d = exact_length_pins(&dict(&["pares", "pards", "cat"]), 5, &std);
        assert_eq!(d.total(), 2);
        assert_eq!(d.distinct(), 1);
        assert_eq!(d.count(&p("72737")), 2);
        assert!(exact_length_pins(&dict(&[]), 4, &std).is_empty());
    }

    #[test]
    fn unmappable_words_are_skipped() {
        let partial = LetterDigitMap::from_groups("ab", [(2, "ab")]).unwrap();
        let d = exact_length_pins(&dict(&["ab", "ac", "ba"]), 2, &partial);
        assert_eq!(d.total(), 2);
        assert_eq!(d.skipped_words(), 1);
    }

    #[test]
    fn prefix_and_suffix() {
        let std = LetterDigitMap::standard();
        let d = dict(&["meth", "method", "cat"]);
        let pre = prefix_pins(&d, 4, &std);
        assert_eq!(pre.total(), 2);
        assert_eq!(pre.count(&std.word_to_pin("meth").unwrap()), 2);
        let suf = suffix_pins(&d, 4, &std);
        assert_eq!(suf.total(), 2);
        assert_eq!(suf.count(&std.word_to_pin("thod").unwrap()), 1);
        assert!(prefix_pins(&dict(&["cat"]), 4, &std).is_empty());
    }

    #[test]
    fn morph_counts() {
        let std = LetterDigitMap::standard();
        let d = morph_pins(&dict(&["pares"]), 5, &std);
        assert_eq!(d.total(), 50);
        // the five unchanged-digit morphs (e.g. "p7res" for the 7 at
        // position 1) all land on 72737 itself
        assert_eq!(d.count(&p("72737")), 5);
        assert_eq!(d.count(&p("77737")), 1);
    }

    #[test]
    fn morph_two_letter_enumeration() {
        // "pa" -> 72 under the standard map; hand enumeration of the 20 morphs:
        // position 0: d2 for d in 0..10, position 1: 7d for d in 0..10.
        let std = LetterDigitMap::standard();
        let d = morph_pins(&dict(&["pa"]), 2, &std);
        let mut expected = BTreeMap::new();
        for digit in 0..10 {
            *expected.entry(format!("{digit}2")).or_insert(0u64) += 1;
            *expected.entry(format!("7{digit}")).or_insert(0u64) += 1;
        }
        let got: BTreeMap<String, u64> =
            d.counts().iter().map(|(k, v)| (k.to_string(), *v)).collect();
        assert_eq!(got, expected);
        assert_eq!(d.count(&p("70")), 1);
        assert_eq!(d.count(&p("72")), 2);
    }

    #[test]
    fn polyglot_rules() {
        let std = LetterDigitMap::standard();
        let a = Dictionary::from_words("a", "x", ["cats"]);
        let b = Dictionary::from_words("b", "y", ["dogs"]);
        assert_eq!(polyglot_pins(&[&a, &b], 4, &std).unwrap().total(), 2);
        assert!(matches!(
            polyglot_pins(&[&a], 4, &std),
            Err(PinGenError::DictionaryCount { .. })
        ));
        assert_eq!(
            polyglot_pins(&[&a, &a], 4, &std),
            Err(PinGenError::DuplicateDictionary("a".into()))
        );
        let shared = Dictionary::from_words("c", "z", ["cats", "bird"]);
        assert_eq!(polyglot_pins(&[&a, &shared], 4, &std).unwrap().total(), 2);
    }

    #[test]
    fn spec_validation() {
        let std = LetterDigitMap::standard();
        let a = dict(&["cats"]);
        let run = |method, dicts: Vec<&Dictionary>, n| {
            GenerationSpec {
                method,
                pin_length: n,
                map: &std,
                dictionaries: dicts,
            }
            .run()
        };
        assert!(run(Method::Exact, vec![&a], 4).is_ok());
        assert!(run(Method::Exact, vec![&a, &a], 4).is_err());
        assert!(run(Method::Polyglot, vec![&a], 4).is_err());
        assert!(run(Method::Exact, vec![&a], 1).is_err());
        assert!(run(Method::Combination, vec![&a], 4).is_ok());
    }

    #[test]
    fn random_pin_rules() {
        assert_eq!(random_pin(4, 99).unwrap(), random_pin(4, 99).unwrap());
        assert_eq!(random_pin(4, 1).unwrap().len(), 4);
        assert_eq!(random_pin(1, 0), Err(PinGenError::LengthOutOfRange(1)));
        assert_eq!(random_pin(11, 0), Err(PinGenError::LengthOutOfRange(11)));
        assert!(random_pin(10, 0).is_ok());
    }

    #[test]
    fn serialization() {
        let mut d = PinDistribution::new(4);
        d.add(p("1234"), 3).unwrap();
        d.add(p("0000"), 1).unwrap();
        assert_eq!(d.to_tsv(), "0000\t1\n1234\t3\n");
        assert_eq!(PinDistribution::from_tsv(4, &d.to_tsv()).unwrap(), d);
        assert_eq!(
            d.to_json(),
            r#"{"pin_length":4,"total":4,"counts":{"0000":1,"1234":3}}"#
        );
        assert_eq!(PinDistribution::from_json(&d.to_json()).unwrap(), d);
        assert!(PinDistribution::from_json(
            r#"{"pin_length":4,"total":5,"counts":{"0000":1}}"#
        )
        .is_err());
        assert!(d.clone().add(p("123"), 1).is_err());
        assert!(PinDistribution::from_tsv(4, "12345\t1").is_err());
    }
}
