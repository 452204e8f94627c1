//! Character-bigram hidden Markov model over the letters `a..z`.
//!
//! States are letters, observations are digits, and emissions are fixed by a
//! [`LetterDigitMap`]: a letter emits exactly the digit it maps to. Decoding a
//! PIN therefore means finding the most probable letter sequence whose
//! letters map, position by position, to the PIN's digits.
//!
//! All arithmetic is done on natural logarithms; a probability of zero is
//! `f64::NEG_INFINITY`.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dictionary::Dictionary;
use crate::mapping::{LetterDigitMap, Pin, ALPHABET};

pub const STATES: usize = 26;

/// Add-α constant of the fallback model used for PINs that no trained path
/// can produce.
pub const SMOOTHING_ALPHA: f64 = 0.01;

/// Log-space scores closer than this are treated as equal, and the
/// lexicographically smaller word wins.
pub const TIE_EPSILON: f64 = 1e-9;

/// Longest PIN [`HmmModel::brute_force_best`] will enumerate.
pub const BRUTE_FORCE_MAX_LEN: usize = 8;

const STOCHASTIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum HmmError {
    #[error("cannot train on an empty word list")]
    EmptyTraining,
    #[error("digit {digit} has no letters under mapping `{map}`")]
    UnmappableDigit { digit: u8, map: String },
    #[error("brute force is limited to PINs of length {max}, got {len}")]
    PinTooLong { len: usize, max: usize },
    #[error("`{0}` is not a non-empty a-z word")]
    InvalidWord(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

/// Raw training tallies, kept so the smoothed fallback can be derived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingCounts {
    pub words: u64,
    pub initial: Vec<u64>,
    pub transition: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HmmModel {
    initial: [f64; STATES],
    transition: [[f64; STATES]; STATES],
    emission: LetterDigitMap,
    counts: Option<TrainingCounts>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeResult {
    pub word: String,
    /// Natural-log probability under the trained model;
    /// `f64::NEG_INFINITY` when the word comes from the smoothed fallback.
    #[serde(serialize_with = "ser_log_prob")]
    pub log_probability: f64,
    pub smoothed: bool,
}

fn ser_log_prob<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_some(v)
    } else {
        s.serialize_none()
    }
}

type LogTables = ([f64; STATES], [[f64; STATES]; STATES]);
type SearchFn = fn(&[f64; STATES], &[[f64; STATES]; STATES], &[Vec<usize>]) -> Vec<usize>;

fn letter(idx: usize) -> char {
    (b'a' + idx as u8) as char
}

fn state(c: char) -> Option<usize> {
    c.is_ascii_lowercase().then(|| (c as u8 - b'a') as usize)
}

impl HmmModel {
    /// Estimates initial and transition probabilities from a word list.
    ///
    /// `π_i` is the fraction of words starting with `i`; `a_ij` is the count
    /// of bigram `ij` over the count of `i` in non-final position. Letters
    /// never seen in non-final position get an all-zero (dead) row.
    pub fn train<'a, I, S>(words: I, emission: LetterDigitMap) -> Result<Self, HmmError>
    where
        I: IntoIterator<Item = &'a S>,
        S: AsRef<str> + 'a + ?Sized,
    {
        let mut counts = TrainingCounts {
            words: 0,
            initial: vec![0; STATES],
            transition: vec![vec![0; STATES]; STATES],
        };
        for w in words {
            let w = w.as_ref();
            let states: Vec<usize> = w
                .chars()
                .map(|c| state(c).ok_or_else(|| HmmError::InvalidWord(w.to_string())))
                .collect::<Result<_, _>>()?;
            let Some(&first) = states.first() else {
                return Err(HmmError::InvalidWord(w.to_string()));
            };
            counts.words += 1;
            counts.initial[first] += 1;
            for pair in states.windows(2) {
                counts.transition[pair[0]][pair[1]] += 1;
            }
        }
        if counts.words == 0 {
            return Err(HmmError::EmptyTraining);
        }
        Ok(Self::from_counts(counts, emission))
    }

    pub fn train_dictionary(dict: &Dictionary, emission: LetterDigitMap) -> Result<Self, HmmError> {
        Self::train(dict.pin_words(), emission)
    }

    fn from_counts(counts: TrainingCounts, emission: LetterDigitMap) -> Self {
        let mut initial = [0.0; STATES];
        let mut transition = [[0.0; STATES]; STATES];
        let n = counts.words as f64;
        for i in 0..STATES {
            initial[i] = counts.initial[i] as f64 / n;
            let row: u64 = counts.transition[i].iter().sum();
            if row > 0 {
                for j in 0..STATES {
                    transition[i][j] = counts.transition[i][j] as f64 / row as f64;
                }
            }
        }
        HmmModel {
            initial,
            transition,
            emission,
            counts: Some(counts),
        }
    }

    pub fn initial(&self, letter: char) -> f64 {
        state(letter).map_or(0.0, |i| self.initial[i])
    }

    pub fn transition(&self, from: char, to: char) -> f64 {
        match (state(from), state(to)) {
            (Some(i), Some(j)) => self.transition[i][j],
            _ => 0.0,
        }
    }

    /// Deterministic emission probability `b_i(k)`.
    pub fn emission(&self, letter: char, digit: u8) -> f64 {
        if self.emission.digit(letter) == Some(digit) {
            1.0
        } else {
            0.0
        }
    }

    pub fn emission_map(&self) -> &LetterDigitMap {
        &self.emission
    }

    pub fn counts(&self) -> Option<&TrainingCounts> {
        self.counts.as_ref()
    }

    /// Letters whose transition row carries no probability mass.
    pub fn dead_rows(&self) -> Vec<char> {
        (0..STATES)
            .filter(|&i| self.transition[i].iter().all(|&p| p == 0.0))
            .map(letter)
            .collect()
    }

    fn log_tables(&self) -> LogTables {
        let mut li = [0.0; STATES];
        let mut lt = [[0.0; STATES]; STATES];
        for i in 0..STATES {
            li[i] = self.initial[i].ln();
            for j in 0..STATES {
                lt[i][j] = self.transition[i][j].ln();
            }
        }
        (li, lt)
    }

    /// Add-α smoothed tables. Every entry is strictly positive.
    fn smoothed_log_tables(&self) -> LogTables {
        let a = SMOOTHING_ALPHA;
        let k = STATES as f64;
        let mut li = [0.0; STATES];
        let mut lt = [[0.0; STATES]; STATES];
        match &self.counts {
            Some(c) => {
                let n = c.words as f64;
                for i in 0..STATES {
                    li[i] = ((c.initial[i] as f64 + a) / (n + k * a)).ln();
                    let row: u64 = c.transition[i].iter().sum();
                    for j in 0..STATES {
                        lt[i][j] =
                            ((c.transition[i][j] as f64 + a) / (row as f64 + k * a)).ln();
                    }
                }
            }
            None => {
                for i in 0..STATES {
                    li[i] = ((self.initial[i] + a) / (1.0 + k * a)).ln();
                    let row: f64 = self.transition[i].iter().sum();
                    for j in 0..STATES {
                        lt[i][j] = ((self.transition[i][j] + a) / (row + k * a)).ln();
                    }
                }
            }
        }
        (li, lt)
    }

    fn allowed_states(&self, pin: &Pin) -> Result<Vec<Vec<usize>>, HmmError> {
        pin.digits()
            .map(|d| {
                let letters = self.emission.inverse(d);
                if letters.is_empty() {
                    Err(HmmError::UnmappableDigit {
                        digit: d,
                        map: self.emission.name().to_string(),
                    })
                } else {
                    Ok(letters.iter().filter_map(|&c| state(c)).collect())
                }
            })
            .collect()
    }

    /// Log-probability of a letter sequence, summed left to right.
    pub fn sequence_probability(&self, word: &str) -> Result<f64, HmmError> {
        let states = word_states(word)?;
        let (li, lt) = self.log_tables();
        Ok(path_score(&li, &lt, &states))
    }

    /// Most probable word that the emission map translates into `pin`.
    ///
    /// Ties go to the lexicographically smallest word. When every word for
    /// the PIN has probability zero, the word is decoded from the smoothed
    /// model instead and `log_probability` is `NEG_INFINITY`.
    pub fn viterbi(&self, pin: &Pin) -> Result<DecodeResult, HmmError> {
        let allowed = self.allowed_states(pin)?;
        let (li, lt) = self.log_tables();
        let path = best_path(&li, &lt, &allowed);
        Ok(self.finish(path, &li, &lt, &allowed, best_path))
    }

    /// Exhaustive search over every word for `pin`; the test oracle for
    /// [`viterbi`](HmmModel::viterbi).
    pub fn brute_force_best(&self, pin: &Pin) -> Result<DecodeResult, HmmError> {
        if pin.len() > BRUTE_FORCE_MAX_LEN {
            return Err(HmmError::PinTooLong {
                len: pin.len(),
                max: BRUTE_FORCE_MAX_LEN,
            });
        }
        let allowed = self.allowed_states(pin)?;
        let (li, lt) = self.log_tables();
        let path = enumerate_best(&li, &lt, &allowed);
        Ok(self.finish(path, &li, &lt, &allowed, enumerate_best))
    }

    fn finish(
        &self,
        path: Vec<usize>,
        li: &[f64; STATES],
        lt: &[[f64; STATES]; STATES],
        allowed: &[Vec<usize>],
        search: SearchFn,
    ) -> DecodeResult {
        let score = path_score(li, lt, &path);
        if score.is_finite() {
            return DecodeResult {
                word: path.into_iter().map(letter).collect(),
                log_probability: score,
                smoothed: false,
            };
        }
        let (si, st) = self.smoothed_log_tables();
        let path = search(&si, &st, allowed);
        DecodeResult {
            word: path.into_iter().map(letter).collect(),
            log_probability: f64::NEG_INFINITY,
            smoothed: true,
        }
    }

    /// Up to `k` words for `pin` with non-zero probability, best first.
    pub fn candidates(&self, pin: &Pin, k: usize) -> Result<Vec<DecodeResult>, HmmError> {
        let allowed = self.allowed_states(pin)?;
        if k == 0 {
            return Ok(Vec::new());
        }
        let (li, lt) = self.log_tables();
        let last = allowed.len() - 1;
        // suffixes[s] = best (score, suffix) lists starting in state s at step t
        let mut suffixes: BTreeMap<usize, Vec<(f64, Vec<usize>)>> = allowed[last]
            .iter()
            .map(|&s| (s, vec![(0.0, vec![s])]))
            .collect();
        for t in (0..last).rev() {
            let mut next = BTreeMap::new();
            for &s in &allowed[t] {
                let mut list: Vec<(f64, Vec<usize>)> = Vec::new();
                for (&s2, tails) in &suffixes {
                    let step = lt[s][s2];
                    if step == f64::NEG_INFINITY {
                        continue;
                    }
                    for (score, tail) in tails {
                        let mut path = Vec::with_capacity(tail.len() + 1);
                        path.push(s);
                        path.extend_from_slice(tail);
                        list.push((step + score, path));
                    }
                }
                sort_ranked(&mut list);
                list.truncate(k);
                next.insert(s, list);
            }
            suffixes = next;
        }
        let mut all: Vec<(f64, Vec<usize>)> = suffixes
            .into_values()
            .flatten()
            .filter_map(|(score, path)| {
                let total = li[path[0]] + score;
                total.is_finite().then_some((total, path))
            })
            .collect();
        sort_ranked(&mut all);
        all.truncate(k);
        Ok(all
            .into_iter()
            .map(|(_, path)| DecodeResult {
                log_probability: path_score(&li, &lt, &path),
                word: path.into_iter().map(letter).collect(),
                smoothed: false,
            })
            .collect())
    }

    /// The most probable word of `len` letters with no emission constraint.
    pub fn most_probable_word(&self, len: usize) -> Option<DecodeResult> {
        if len == 0 {
            return None;
        }
        let allowed = vec![(0..STATES).collect::<Vec<_>>(); len];
        let (li, lt) = self.log_tables();
        let path = best_path(&li, &lt, &allowed);
        let score = path_score(&li, &lt, &path);
        Some(DecodeResult {
            word: path.into_iter().map(letter).collect(),
            log_probability: score,
            smoothed: false,
        })
    }

    pub fn to_json(&self) -> String {
        let file = ModelFile {
            map_name: self.emission.name().to_string(),
            initial: self.initial.to_vec(),
            transition: self.transition.iter().map(|r| r.to_vec()).collect(),
            emission: Some(
                (0..10u8)
                    .filter(|&d| !self.emission.inverse(d).is_empty())
                    .map(|d| (d.to_string(), self.emission.inverse(d).iter().collect()))
                    .collect(),
            ),
            counts: self.counts.clone(),
        };
        serde_json::to_string(&file).expect("model serializes")
    }

    /// Loads a model document and re-checks the stochasticity invariants.
    /// Without an `emission` table the map is resolved by `map_name`
    /// among the built-in maps.
    pub fn from_json(text: &str) -> Result<Self, HmmError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| HmmError::InvalidModel(e.to_string()))?;
        let bad = |m: String| HmmError::InvalidModel(m);
        let emission = match &file.emission {
            Some(groups) => {
                let mut parsed = Vec::new();
                for (d, letters) in groups {
                    let digit: u8 = d
                        .parse()
                        .ok()
                        .filter(|&d: &u8| d < 10)
                        .ok_or_else(|| bad(format!("emission key `{d}` is not a digit")))?;
                    parsed.push((digit, letters.as_str()));
                }
                LetterDigitMap::from_groups(&file.map_name, parsed)
                    .map_err(|e| bad(e.to_string()))?
            }
            None => LetterDigitMap::builtin(&file.map_name).map_err(|e| bad(e.to_string()))?,
        };
        if file.initial.len() != STATES
            || file.transition.len() != STATES
            || file.transition.iter().any(|r| r.len() != STATES)
        {
            return Err(bad(format!("expected {STATES} initial values and a {STATES}x{STATES} matrix")));
        }
        let valid = |p: &f64| p.is_finite() && (0.0..=1.0).contains(p);
        if !file.initial.iter().all(valid) || !file.transition.iter().flatten().all(valid) {
            return Err(bad("probabilities must lie in [0, 1]".into()));
        }
        let sum: f64 = file.initial.iter().sum();
        if (sum - 1.0).abs() > STOCHASTIC_TOLERANCE {
            return Err(bad(format!("initial probabilities sum to {sum}")));
        }
        for (i, row) in file.transition.iter().enumerate() {
            let s: f64 = row.iter().sum();
            if s != 0.0 && (s - 1.0).abs() > STOCHASTIC_TOLERANCE {
                return Err(bad(format!("transition row `{}` sums to {s}", letter(i))));
            }
        }
        let mut model = HmmModel {
            initial: file.initial.clone().try_into().expect("length checked"),
            transition: [[0.0; STATES]; STATES],
            emission,
            counts: None,
        };
        for (i, row) in file.transition.iter().enumerate() {
            model.transition[i] = row.clone().try_into().expect("length checked");
        }
        if let Some(counts) = file.counts {
            if counts.initial.len() != STATES
                || counts.transition.len() != STATES
                || counts.transition.iter().any(|r| r.len() != STATES)
                || counts.words == 0
            {
                return Err(bad("malformed counts".into()));
            }
            let derived = Self::from_counts(counts, model.emission.clone());
            let close = |a: &[f64], b: &[f64]| {
                a.iter().zip(b).all(|(x, y)| (x - y).abs() <= STOCHASTIC_TOLERANCE)
            };
            let consistent = close(&derived.initial, &model.initial)
                && (0..STATES).all(|i| close(&derived.transition[i], &model.transition[i]));
            if !consistent {
                return Err(bad("counts disagree with probabilities".into()));
            }
            model.counts = derived.counts;
        }
        Ok(model)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    map_name: String,
    initial: Vec<f64>,
    transition: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    emission: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    counts: Option<TrainingCounts>,
}

fn word_states(word: &str) -> Result<Vec<usize>, HmmError> {
    let states: Option<Vec<usize>> = word.chars().map(state).collect();
    match states {
        Some(s) if !s.is_empty() => Ok(s),
        _ => Err(HmmError::InvalidWord(word.to_string())),
    }
}

fn path_score(li: &[f64; STATES], lt: &[[f64; STATES]; STATES], path: &[usize]) -> f64 {
    let mut score = li[path[0]];
    for pair in path.windows(2) {
        score += lt[pair[0]][pair[1]];
    }
    score
}

fn better(candidate: f64, incumbent: f64) -> bool {
    if incumbent == f64::NEG_INFINITY {
        candidate > f64::NEG_INFINITY
    } else {
        candidate > incumbent + TIE_EPSILON
    }
}

fn sort_ranked(list: &mut [(f64, Vec<usize>)]) {
    list.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.1.cmp(&b.1))
    });
}

/// Max-product dynamic program run from the last position backwards.
///
/// `tail[t][s]` is the best score of any continuation from state `s` at step
/// `t`; taking the smallest optimal successor at every step yields the
/// lexicographically smallest optimal word.
fn best_path(
    li: &[f64; STATES],
    lt: &[[f64; STATES]; STATES],
    allowed: &[Vec<usize>],
) -> Vec<usize> {
    let len = allowed.len();
    let mut tail = vec![[f64::NEG_INFINITY; STATES]; len];
    let mut next = vec![[usize::MAX; STATES]; len];
    for &s in &allowed[len - 1] {
        tail[len - 1][s] = 0.0;
    }
    for t in (0..len - 1).rev() {
        for &s in &allowed[t] {
            let mut best = f64::NEG_INFINITY;
            let mut arg = allowed[t + 1][0];
            for &s2 in &allowed[t + 1] {
                let v = lt[s][s2] + tail[t + 1][s2];
                if better(v, best) {
                    best = v;
                    arg = s2;
                }
            }
            tail[t][s] = best;
            next[t][s] = arg;
        }
    }
    let mut best = f64::NEG_INFINITY;
    let mut cur = allowed[0][0];
    for &s in &allowed[0] {
        let v = li[s] + tail[0][s];
        if better(v, best) {
            best = v;
            cur = s;
        }
    }
    let mut path = Vec::with_capacity(len);
    path.push(cur);
    for t in 0..len - 1 {
        cur = next[t][cur];
        path.push(cur);
    }
    path
}

/// Odometer enumeration of every allowed path in lexicographic order.
fn enumerate_best(
    li: &[f64; STATES],
    lt: &[[f64; STATES]; STATES],
    allowed: &[Vec<usize>],
) -> Vec<usize> {
    let len = allowed.len();
    let mut idx = vec![0usize; len];
    let mut best_score = f64::NEG_INFINITY;
    let mut best: Vec<usize> = allowed.iter().map(|a| a[0]).collect();
    loop {
        let path: Vec<usize> = idx.iter().zip(allowed).map(|(&i, a)| a[i]).collect();
        let score = path_score(li, lt, &path);
        if better(score, best_score) {
            best_score = score;
            best = path;
        }
        let mut pos = len;
        loop {
            if pos == 0 {
                return best;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < allowed[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Letters of the alphabet, for callers that index by state.
pub fn state_letters() -> impl Iterator<Item = char> {
    ALPHABET.chars()
}
