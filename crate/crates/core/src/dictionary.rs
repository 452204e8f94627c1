//! Hunspell `.dic` ingestion and word normalization.
//!
//! Only the word lists are read; affix files are never consulted. Each entry
//! is reduced to a lowercase `a..z` string by stripping an optional English
//! possessive, transliterating letters without an ASCII base, removing
//! diacritics, dropping everything non-alphabetic and lowercasing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DictionaryError {
    #[error("line {line}: byte sequence is not valid {encoding}")]
    Encoding { line: usize, encoding: String },
    #[error("unknown text encoding label `{0}`")]
    UnknownEncoding(String),
    #[error("merge needs at least one dictionary")]
    EmptyMerge,
    #[error("transliteration of `{letter}` must be a non-empty a-z string, got `{value}`")]
    BadTransliteration { letter: char, value: String },
}

/// One entry of a `.dic` file with affix flags already removed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RawEntry(String);

impl RawEntry {
    /// Returns `None` for entries that are empty after trimming.
    pub fn new(text: impl Into<String>) -> Option<Self> {
        let text = text.into();
        let trimmed = text.trim();
        if trimmed.is_empty() {
            None
        } else if trimmed.len() == text.len() {
            Some(RawEntry(text))
        } else {
            Some(RawEntry(trimmed.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RawEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A non-empty string over `a..z`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NormalizedWord(String);

impl NormalizedWord {
    pub fn new(text: impl Into<String>) -> Option<Self> {
        let text = text.into();
        if !text.is_empty() && text.bytes().all(|b| b.is_ascii_lowercase()) {
            Some(NormalizedWord(text))
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for NormalizedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for NormalizedWord {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl<'de> Deserialize<'de> for NormalizedWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        NormalizedWord::new(s.clone())
            .ok_or_else(|| serde::de::Error::custom(format!("`{s}` is not a lowercase a-z word")))
    }
}

/// Outcome of [`normalize_word`]: either a word or a rejection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    Word(NormalizedWord),
    Rejected,
}

impl Normalized {
    pub fn word(self) -> Option<NormalizedWord> {
        match self {
            Normalized::Word(w) => Some(w),
            Normalized::Rejected => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationOptions {
    pub strip_english_possessive: bool,
    pub transliteration: BTreeMap<char, String>,
}

impl Default for NormalizationOptions {
    fn default() -> Self {
        let pairs = [
            ('ß', "ss"),
            ('ẞ', "ss"),
            ('œ', "oe"),
            ('Œ', "oe"),
            ('æ', "ae"),
            ('Æ', "ae"),
            ('đ', "d"),
            ('Đ', "d"),
            ('ð', "d"),
            ('Ð', "d"),
            ('þ', "th"),
            ('Þ', "th"),
        ];
        NormalizationOptions {
            strip_english_possessive: false,
            transliteration: pairs.iter().map(|&(c, s)| (c, s.to_string())).collect(),
        }
    }
}

impl NormalizationOptions {
    /// Defaults for a language tag: possessive stripping is on for English only.
    pub fn for_language(tag: &str) -> Self {
        let primary = tag.split(['_', '-']).next().unwrap_or("");
        NormalizationOptions {
            strip_english_possessive: primary.eq_ignore_ascii_case("en"),
            ..Default::default()
        }
    }

    pub fn with_transliteration(
        mut self,
        letter: char,
        value: &str,
    ) -> Result<Self, DictionaryError> {
        if value.is_empty() || !value.bytes().all(|b| b.is_ascii_lowercase()) {
            return Err(DictionaryError::BadTransliteration {
                letter,
                value: value.to_string(),
            });
        }
        self.transliteration.insert(letter, value.to_string());
        Ok(self)
    }
}

/// Text encodings accepted for `.dic` input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DicEncoding(&'static encoding_rs::Encoding);

impl DicEncoding {
    pub const UTF_8: DicEncoding = DicEncoding(encoding_rs::UTF_8);

    /// Accepts WHATWG labels such as `utf-8`, `iso-8859-2`, `latin1`.
    pub fn for_label(label: &str) -> Result<Self, DictionaryError> {
        encoding_rs::Encoding::for_label(label.trim().as_bytes())
            .map(DicEncoding)
            .ok_or_else(|| DictionaryError::UnknownEncoding(label.to_string()))
    }

    pub fn name(&self) -> &'static str {
        self.0.name()
    }
}

impl Default for DicEncoding {
    fn default() -> Self {
        DicEncoding::UTF_8
    }
}

/// Parses the body of a hunspell `.dic` file.
///
/// A leading bare integer line is the entry-count header and is skipped.
/// Blank lines, `#` comments and TAB-indented lines are ignored. Affix flags
/// (from the first unescaped `/`) and morphological fields (after a TAB) are
/// cut off.
pub fn parse_dic(bytes: &[u8], encoding: DicEncoding) -> Result<Vec<RawEntry>, DictionaryError> {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    let mut entries = Vec::new();
    for (idx, line) in bytes.split(|&b| b == b'\n').enumerate() {
        let line_no = idx + 1;
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        let text = decode_line(line, encoding, line_no)?;
        if idx == 0 && is_count_header(&text) {
            continue;
        }
        if text.starts_with('\t') || text.trim_start().starts_with('#') {
            continue;
        }
        if let Some(entry) = RawEntry::new(strip_flags(&text)) {
            entries.push(entry);
        }
    }
    Ok(entries)
}

fn decode_line(
    line: &[u8],
    encoding: DicEncoding,
    line_no: usize,
) -> Result<String, DictionaryError> {
    if encoding.0 == encoding_rs::UTF_8 {
        return std::str::from_utf8(line)
            .map(str::to_string)
            .map_err(|_| DictionaryError::Encoding {
                line: line_no,
                encoding: encoding.name().to_string(),
            });
    }
    encoding
        .0
        .decode_without_bom_handling_and_without_replacement(line)
        .map(|s| s.into_owned())
        .ok_or_else(|| DictionaryError::Encoding {
            line: line_no,
            encoding: encoding.name().to_string(),
        })
}

fn is_count_header(line: &str) -> bool {
    let t = line.trim();
    !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
}

fn strip_flags(line: &str) -> String {
    let line = line.split('\t').next().unwrap_or("");
    let mut out = String::with_capacity(line.len());
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\\' if chars.peek() == Some(&'/') => {
                out.push('/');
                chars.next();
            }
            '/' => break,
            _ => out.push(c),
        }
    }
    out
}

fn strip_possessive(text: &str) -> &str {
    text.strip_suffix("'s").unwrap_or(text)
}

/// Reduces a raw entry to a lowercase `a..z` word.
pub fn normalize_word(raw: &RawEntry, opts: &NormalizationOptions) -> Normalized {
    normalize_str(raw.as_str(), opts)
}

pub(crate) fn normalize_str(text: &str, opts: &NormalizationOptions) -> Normalized {
    let text = if opts.strip_english_possessive {
        strip_possessive(text)
    } else {
        text
    };
    let mut transliterated = String::with_capacity(text.len());
    for c in text.chars() {
        match opts.transliteration.get(&c) {
            Some(rep) => transliterated.push_str(rep),
            None => transliterated.push(c),
        }
    }
    let word: String = transliterated
        .nfd()
        .filter(|&c| !is_combining_mark(c))
        .filter(char::is_ascii_alphabetic)
        .map(|c| c.to_ascii_lowercase())
        .collect();
    match NormalizedWord::new(word) {
        Some(w) => Normalized::Word(w),
        None => Normalized::Rejected,
    }
}

/// How entries that normalize to the same word are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WordModel {
    /// One PIN word per distinct normalized word.
    #[default]
    Normalized,
    /// One PIN word per distinct source entry, where entries differing only
    /// in ASCII letter case are the same entry. Accent-differing entries stay
    /// distinct even when they normalize identically (`mole` / `môle`).
    SourceForm,
}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    pub normalization: NormalizationOptions,
    pub word_model: WordModel,
}

impl BuildOptions {
    pub fn for_language(tag: &str) -> Self {
        BuildOptions {
            normalization: NormalizationOptions::for_language(tag),
            word_model: WordModel::default(),
        }
    }

    pub fn word_model(mut self, model: WordModel) -> Self {
        self.word_model = model;
        self
    }
}

/// A named, deduplicated word collection.
///
/// `words` is the set of distinct normalized words. The counted PIN-word list
/// ([`Dictionary::pin_words`]) depends on the [`WordModel`]: it equals `words`
/// under the normalized model and may repeat a normalized word under the
/// source-form model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    name: String,
    language_tag: String,
    word_model: WordModel,
    words: BTreeSet<NormalizedWord>,
    counted: BTreeMap<String, NormalizedWord>,
    source_word_count: usize,
}

impl Dictionary {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn language_tag(&self) -> &str {
        &self.language_tag
    }

    pub fn word_model(&self) -> WordModel {
        self.word_model
    }

    pub fn words(&self) -> &BTreeSet<NormalizedWord> {
        &self.words
    }

    pub fn source_word_count(&self) -> usize {
        self.source_word_count
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.iter().any(|w| w.as_str() == word)
    }

    /// The PIN words that generation strategies count, in deterministic order.
    pub fn pin_words(&self) -> impl Iterator<Item = &NormalizedWord> + '_ {
        self.counted.values()
    }

    pub fn pin_word_count(&self) -> usize {
        self.counted.len()
    }

    /// Builds a dictionary from words that are already normalized.
    pub fn from_words<I, S>(name: &str, language_tag: &str, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let entries: Vec<RawEntry> = words
            .into_iter()
            .filter_map(|w| RawEntry::new(w.as_ref()))
            .collect();
        build_dictionary(
            &entries,
            &BuildOptions {
                normalization: NormalizationOptions::default(),
                word_model: WordModel::Normalized,
            },
            name,
            language_tag,
        )
    }
}

fn source_key(text: &str, opts: &NormalizationOptions) -> String {
    let text = if opts.strip_english_possessive {
        strip_possessive(text)
    } else {
        text
    };
    text.chars().map(|c| c.to_ascii_lowercase()).collect()
}

/// Normalizes every entry and collects the survivors.
pub fn build_dictionary(
    entries: &[RawEntry],
    opts: &BuildOptions,
    name: &str,
    language_tag: &str,
) -> Dictionary {
    let mut words = BTreeSet::new();
    let mut counted = BTreeMap::new();
    for entry in entries {
        let Normalized::Word(word) = normalize_word(entry, &opts.normalization) else {
            continue;
        };
        let key = match opts.word_model {
            WordModel::Normalized => word.as_str().to_string(),
            WordModel::SourceForm => source_key(entry.as_str(), &opts.normalization),
        };
        counted.entry(key).or_insert_with(|| word.clone());
        words.insert(word);
    }
    Dictionary {
        name: name.to_string(),
        language_tag: language_tag.to_string(),
        word_model: opts.word_model,
        words,
        counted,
        source_word_count: entries.len(),
    }
}

/// Parses and builds in one step.
pub fn load_dic(
    bytes: &[u8],
    encoding: DicEncoding,
    opts: &BuildOptions,
    name: &str,
    language_tag: &str,
) -> Result<Dictionary, DictionaryError> {
    let entries = parse_dic(bytes, encoding)?;
    Ok(build_dictionary(&entries, opts, name, language_tag))
}

/// Union of word sets; source counts add up.
///
/// Dictionaries built with different word models merge under the normalized
/// model.
pub fn merge(dicts: &[&Dictionary], name: &str) -> Result<Dictionary, DictionaryError> {
    let first = dicts.first().ok_or(DictionaryError::EmptyMerge)?;
    let same_model = dicts.iter().all(|d| d.word_model == first.word_model);
    let word_model = if same_model {
        first.word_model
    } else {
        WordModel::Normalized
    };
    let mut words = BTreeSet::new();
    let mut counted = BTreeMap::new();
    let mut tags: Vec<&str> = Vec::new();
    for d in dicts {
        words.extend(d.words.iter().cloned());
        match word_model {
            WordModel::SourceForm => {
                for (k, w) in &d.counted {
                    counted.entry(k.clone()).or_insert_with(|| w.clone());
                }
            }
            WordModel::Normalized => {
                for w in &d.words {
                    counted
                        .entry(w.as_str().to_string())
                        .or_insert_with(|| w.clone());
                }
            }
        }
        if !tags.contains(&d.language_tag.as_str()) {
            tags.push(&d.language_tag);
        }
    }
    Ok(Dictionary {
        name: name.to_string(),
        language_tag: tags.join("+"),
        word_model,
        words,
        counted,
        source_word_count: dicts.iter().map(|d| d.source_word_count).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Vec<String> {
        parse_dic(s.as_bytes(), DicEncoding::UTF_8)
            .unwrap()
            .into_iter()
            .map(|e| e.0)
            .collect()
    }

    fn norm(s: &str) -> Normalized {
        normalize_word(&RawEntry::new(s).unwrap(), &NormalizationOptions::default())
    }

    fn word(s: &str) -> Normalized {
        Normalized::Word(NormalizedWord::new(s).unwrap())
    }

    #[test]
    fn header_and_flags() {
        assert_eq!(parse("3\nabbot/M\ncat\ndog"), ["abbot", "cat", "dog"]);
    }

    #[test]
    fn no_header() {
        assert_eq!(parse("cat\ndog"), ["cat", "dog"]);
    }

    #[test]
    fn blank_lines_skipped() {
        assert_eq!(parse("1\n\n  \nword"), ["word"]);
    }

    #[test]
    fn comments_tabs_and_morph_fields() {
        let text = "5\n# comment\n\tbanner line\n1er/23\t137\nand/or\\/x\nfoo\\/bar/X\r\n";
        assert_eq!(parse(text), ["1er", "and", "foo/bar"]);
    }

    #[test]
    fn integer_only_on_first_line_is_header() {
        assert_eq!(parse("cat\n42"), ["cat", "42"]);
    }

    #[test]
    fn invalid_utf8_names_line() {
        let err = parse_dic(b"2\ncat\nd\xffg\n", DicEncoding::UTF_8).unwrap_err();
        assert_eq!(
            err,
            DictionaryError::Encoding {
                line: 3,
                encoding: "UTF-8".into()
            }
        );
    }

    #[test]
    fn latin2_decoding() {
        // "ruči" in ISO-8859-2: č = 0xE8
        let enc = DicEncoding::for_label("iso-8859-2").unwrap();
        let entries = parse_dic(b"1\nru\xe8i/X\n", enc).unwrap();
        assert_eq!(entries[0].as_str(), "ruči");
        assert!(DicEncoding::for_label("no-such-encoding").is_err());
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(norm("m\u{00F4}le"), word("mole"));
        assert_eq!(norm("Amos"), word("amos"));
        assert_eq!(norm("''--''"), Normalized::Rejected);
        assert_eq!(norm("r\u{00FA}\u{010D}i"), word("ruci"));
        assert_eq!(norm("Straße"), word("strasse"));
        assert_eq!(norm("Œuvre"), word("oeuvre"));
        assert_eq!(norm("o'clock"), word("oclock"));
        assert_eq!(norm("12"), Normalized::Rejected);
    }

    #[test]
    fn possessive_only_when_enabled() {
        let en = NormalizationOptions::for_language("en_US");
        let sk = NormalizationOptions::for_language("sk");
        let raw = RawEntry::new("Amos's").unwrap();
        assert_eq!(normalize_word(&raw, &en), word("amos"));
        assert_eq!(normalize_word(&raw, &sk), word("amoss"));
        assert!(en.strip_english_possessive && !sk.strip_english_possessive);
    }

    #[test]
    fn bad_transliteration_rejected() {
        let opts = NormalizationOptions::default();
        assert!(opts.clone().with_transliteration('ł', "l").is_ok());
        assert!(opts.clone().with_transliteration('ł', "").is_err());
        assert!(opts.with_transliteration('ł', "L").is_err());
    }

    #[test]
    fn build_deduplicates_case() {
        let entries: Vec<_> = ["Amos", "amos"]
            .iter()
            .map(|s| RawEntry::new(*s).unwrap())
            .collect();
        let d = build_dictionary(&entries, &BuildOptions::default(), "t", "en");
        assert_eq!(d.len(), 1);
        assert!(d.contains("amos"));
        assert_eq!(d.source_word_count(), 2);
    }

    #[test]
    fn build_empty() {
        let d = build_dictionary(&[], &BuildOptions::default(), "t", "en");
        assert!(d.is_empty());
        assert_eq!(d.source_word_count(), 0);
    }

    #[test]
    fn accent_collision_models() {
        let entries: Vec<_> = ["mole", "m\u{00F4}le", "Mole"]
            .iter()
            .map(|s| RawEntry::new(*s).unwrap())
            .collect();
        let set = build_dictionary(&entries, &BuildOptions::default(), "fr", "fr");
        assert_eq!(set.len(), 1);
        assert_eq!(set.pin_word_count(), 1);

        let opts = BuildOptions::default().word_model(WordModel::SourceForm);
        let multi = build_dictionary(&entries, &opts, "fr", "fr");
        assert_eq!(multi.len(), 1);
        assert_eq!(multi.pin_word_count(), 2);
        assert!(multi.pin_words().all(|w| w.as_str() == "mole"));
    }

    #[test]
    fn merge_union() {
        let a = Dictionary::from_words("a", "x", ["a", "b"]);
        let b = Dictionary::from_words("b", "y", ["b", "c"]);
        let m = merge(&[&a, &b], "ab").unwrap();
        let got: Vec<_> = m.words().iter().map(|w| w.as_str()).collect();
        assert_eq!(got, ["a", "b", "c"]);
        assert_eq!(m.source_word_count(), 4);
        assert_eq!(m.language_tag(), "x+y");

        let same = merge(&[&a, &a], "aa").unwrap();
        assert_eq!(same.words(), a.words());
        assert_eq!(merge(&[], "none"), Err(DictionaryError::EmptyMerge));
    }
}
