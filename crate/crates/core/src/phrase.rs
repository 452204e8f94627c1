//! PIN phrases: sentences whose initial letters spell a PIN word.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dictionary::{Dictionary, NormalizedWord};
use crate::mapping::{LetterDigitMap, MappingError, Pin};

/// Starter English lexicon for the stretched map.
pub const DEFAULT_LEXICON_JSON: &str = include_str!("../data/lexicon_en.json");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PhraseError {
    #[error("lexicon is not valid JSON: {0}")]
    Json(String),
    #[error("lexicon key `{0}` is not a digit")]
    BadDigit(String),
    #[error("`{word}` under digit {digit} starts with a letter that maps to {actual:?}")]
    FirstLetter {
        word: String,
        digit: u8,
        actual: Option<u8>,
    },
    #[error("`{0}` is not a lowercase alphabetic word")]
    NotAlphabetic(String),
    #[error("no {pos} listed for digit {digit}")]
    MissingCell { digit: u8, pos: PartOfSpeech },
    #[error("template has {template} slots but the PIN has {pin} digits")]
    TemplateLength { template: usize, pin: usize },
    #[error("no default template for PIN length {0}; pass one explicitly")]
    NoDefaultTemplate(usize),
    #[error("unknown part of speech `{0}`")]
    UnknownPartOfSpeech(String),
    #[error("chunk sizes {sizes:?} do not split a {len}-digit PIN into 2- and 3-digit chunks")]
    BadChunks { sizes: Vec<usize>, len: usize },
    #[error("phrase is empty")]
    EmptyPhrase,
    #[error(transparent)]
    Mapping(#[from] MappingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartOfSpeech {
    Adjective,
    Noun,
    Verb,
}

impl PartOfSpeech {
    const ALL: [PartOfSpeech; 3] = [PartOfSpeech::Adjective, PartOfSpeech::Noun, PartOfSpeech::Verb];

    fn index(self) -> usize {
        self as usize
    }

    fn plural(self) -> &'static str {
        match self {
            PartOfSpeech::Adjective => "adjectives",
            PartOfSpeech::Noun => "nouns",
            PartOfSpeech::Verb => "verbs",
        }
    }
}

impl fmt::Display for PartOfSpeech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.plural())
    }
}

impl FromStr for PartOfSpeech {
    type Err = PhraseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "adj" | "adjective" | "adjectives" => Ok(PartOfSpeech::Adjective),
            "n" | "noun" | "nouns" => Ok(PartOfSpeech::Noun),
            "v" | "verb" | "verbs" => Ok(PartOfSpeech::Verb),
            other => Err(PhraseError::UnknownPartOfSpeech(other.to_string())),
        }
    }
}

/// Ordered parts of speech, one per PIN digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseTemplate(Vec<PartOfSpeech>);

impl PhraseTemplate {
    pub fn new(slots: Vec<PartOfSpeech>) -> Self {
        PhraseTemplate(slots)
    }

    /// adjective-noun-verb-adjective-noun for five digits,
    /// adjective-noun-verb-noun for four.
    pub fn default_for(len: usize) -> Result<Self, PhraseError> {
        use PartOfSpeech::*;
        match len {
            4 => Ok(PhraseTemplate(vec![Adjective, Noun, Verb, Noun])),
            5 => Ok(PhraseTemplate(vec![Adjective, Noun, Verb, Adjective, Noun])),
            n => Err(PhraseError::NoDefaultTemplate(n)),
        }
    }

    pub fn slots(&self) -> &[PartOfSpeech] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for PhraseTemplate {
    type Err = PhraseError;
    /// Comma-separated list, e.g. `adjective,noun,verb,noun`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(PhraseTemplate)
    }
}

#[derive(Debug, Default, Deserialize, Serialize)]
struct LexiconCell {
    #[serde(default)]
    adjectives: Vec<String>,
    #[serde(default)]
    nouns: Vec<String>,
    #[serde(default)]
    verbs: Vec<String>,
}

/// Word lists per digit and part of speech. Each word's first letter maps
/// to its digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseLexicon {
    map: LetterDigitMap,
    cells: [[Vec<String>; 3]; 10],
}

impl PhraseLexicon {
    /// Parses the JSON lexicon format and checks every word against `map`.
    pub fn from_json(text: &str, map: LetterDigitMap) -> Result<Self, PhraseError> {
        let raw: BTreeMap<String, LexiconCell> =
            serde_json::from_str(text).map_err(|e| PhraseError::Json(e.to_string()))?;
        let mut cells: [[Vec<String>; 3]; 10] = Default::default();
        for (key, cell) in raw {
            let digit = match key.trim().as_bytes() {
                [d @ b'0'..=b'9'] => d - b'0',
                _ => return Err(PhraseError::BadDigit(key)),
            };
            for (pos, words) in [
                (PartOfSpeech::Adjective, cell.adjectives),
                (PartOfSpeech::Noun, cell.nouns),
                (PartOfSpeech::Verb, cell.verbs),
            ] {
                for w in words {
                    check_word(&w, digit, &map)?;
                    let list = &mut cells[digit as usize][pos.index()];
                    if !list.contains(&w) {
                        list.push(w);
                    }
                }
            }
        }
        Ok(PhraseLexicon { map, cells })
    }

    /// The bundled English lexicon under the stretched map.
    pub fn default_english() -> Self {
        Self::from_json(DEFAULT_LEXICON_JSON, LetterDigitMap::stretched())
            .expect("bundled lexicon is valid")
    }

    pub fn map(&self) -> &LetterDigitMap {
        &self.map
    }

    pub fn words(&self, digit: u8, pos: PartOfSpeech) -> &[String] {
        &self.cells[digit as usize][pos.index()]
    }

    /// Every digit must have at least one word for each slot the template
    /// uses.
    pub fn check_template(&self, template: &PhraseTemplate) -> Result<(), PhraseError> {
        for pos in PartOfSpeech::ALL {
            if !template.slots().contains(&pos) {
                continue;
            }
            for digit in 0..10u8 {
                if self.words(digit, pos).is_empty() {
                    return Err(PhraseError::MissingCell { digit, pos });
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut out = BTreeMap::new();
        for digit in 0..10u8 {
            let cell = LexiconCell {
                adjectives: self.words(digit, PartOfSpeech::Adjective).to_vec(),
                nouns: self.words(digit, PartOfSpeech::Noun).to_vec(),
                verbs: self.words(digit, PartOfSpeech::Verb).to_vec(),
            };
            out.insert(digit.to_string(), cell);
        }
        serde_json::to_string_pretty(&out).expect("lexicon serializes")
    }
}

fn check_word(word: &str, digit: u8, map: &LetterDigitMap) -> Result<(), PhraseError> {
    if word.is_empty() || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return Err(PhraseError::NotAlphabetic(word.to_string()));
    }
    let first = word.chars().next().expect("non-empty");
    let actual = map.digit(first);
    if actual != Some(digit) {
        return Err(PhraseError::FirstLetter {
            word: word.to_string(),
            digit,
            actual,
        });
    }
    Ok(())
}

/// Parses a lexicon and checks it against the templates that will use it.
pub fn build_lexicon(
    json: &str,
    map: LetterDigitMap,
    templates: &[PhraseTemplate],
) -> Result<PhraseLexicon, PhraseError> {
    let lexicon = PhraseLexicon::from_json(json, map)?;
    for t in templates {
        lexicon.check_template(t)?;
    }
    Ok(lexicon)
}

/// Draws one word per digit, uniformly from the digit's cell for the
/// template slot.
pub fn pin_to_phrase(
    lexicon: &PhraseLexicon,
    template: &PhraseTemplate,
    pin: &Pin,
    seed: u64,
) -> Result<Vec<String>, PhraseError> {
    if template.len() != pin.len() {
        return Err(PhraseError::TemplateLength {
            template: template.len(),
            pin: pin.len(),
        });
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    pin.digits()
        .zip(template.slots())
        .map(|(digit, &pos)| {
            let cell = lexicon.words(digit, pos);
            if cell.is_empty() {
                return Err(PhraseError::MissingCell { digit, pos });
            }
            Ok(cell[rng.gen_range(0..cell.len())].clone())
        })
        .collect()
}

/// Translates the initial letters of the phrase's words.
pub fn phrase_to_pin<S: AsRef<str>>(phrase: &[S], map: &LetterDigitMap) -> Result<Pin, PhraseError> {
    if phrase.is_empty() {
        return Err(PhraseError::EmptyPhrase);
    }
    let mut initials = String::with_capacity(phrase.len());
    for w in phrase {
        let w = w.as_ref();
        let first = w
            .chars()
            .next()
            .filter(|c| c.is_alphabetic())
            .ok_or_else(|| PhraseError::NotAlphabetic(w.to_string()))?;
        initials.extend(first.to_lowercase());
    }
    Ok(map.word_to_pin(&initials)?)
}

/// Splits `n` digits into chunks of 2 and 3, preferring 2s and putting any
/// 3 last.
pub fn default_chunks(n: usize) -> Result<Vec<usize>, PhraseError> {
    match n {
        0 | 1 => Err(PhraseError::BadChunks {
            sizes: vec![],
            len: n,
        }),
        _ if n.is_multiple_of(2) => Ok(vec![2; n / 2]),
        _ => {
            let mut v = vec![2; (n - 3) / 2];
            v.push(3);
            Ok(v)
        }
    }
}

/// For each consecutive chunk of the PIN, the dictionary words whose prefix
/// of that length maps to the chunk.
pub fn chunk_words(
    dict: &Dictionary,
    map: &LetterDigitMap,
    pin: &Pin,
    chunk_sizes: &[usize],
) -> Result<Vec<Vec<NormalizedWord>>, PhraseError> {
    let valid = chunk_sizes.iter().all(|s| (2..=3).contains(s))
        && chunk_sizes.iter().sum::<usize>() == pin.len();
    if !valid || chunk_sizes.is_empty() {
        return Err(PhraseError::BadChunks {
            sizes: chunk_sizes.to_vec(),
            len: pin.len(),
        });
    }
    let mut out = Vec::with_capacity(chunk_sizes.len());
    let mut start = 0;
    for &size in chunk_sizes {
        let target = &pin.as_str()[start..start + size];
        let candidates = dict
            .words()
            .iter()
            .filter(|w| w.len() >= size)
            .filter(|w| {
                map.word_to_pin(&w.as_str()[..size])
                    .is_ok_and(|p| p.as_str() == target)
            })
            .cloned()
            .collect();
        out.push(candidates);
        start += size;
    }
    Ok(out)
}
