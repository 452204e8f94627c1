//! Letter to digit mappings and word translation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const ALPHABET: &str = "abcdefghijklmnopqrstuvwxyz";

/// Range of PIN lengths that generators accept.
pub const MIN_PIN_LENGTH: usize = 2;
pub const MAX_PIN_LENGTH: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MappingError {
    #[error("character `{ch}` has no digit under mapping `{map}`")]
    Unmappable { ch: char, map: String },
    #[error("`{0}` is not a PIN (expected one or more digits 0-9)")]
    InvalidPin(String),
    #[error("map config line {line}: {reason}")]
    Config { line: usize, reason: String },
    #[error("unknown mapping `{0}` (expected standard, extended or stretched)")]
    UnknownMapping(String),
}

/// A string of decimal digits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Pin(String);

impl Pin {
    pub fn new(digits: impl Into<String>) -> Result<Self, MappingError> {
        let digits = digits.into();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(MappingError::InvalidPin(digits));
        }
        Ok(Pin(digits))
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

    /// Digit values, most significant first.
    pub fn digits(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.bytes().map(|b| b - b'0')
    }
}

impl fmt::Display for Pin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Pin {
    type Err = MappingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pin::new(s.trim())
    }
}

impl TryFrom<String> for Pin {
    type Error = MappingError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Pin::new(s)
    }
}

impl From<Pin> for String {
    fn from(p: Pin) -> String {
        p.0
    }
}

/// A possibly partial function from `a..z` to digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterDigitMap {
    name: String,
    forward: [Option<u8>; 26],
    inverse: [Vec<char>; 10],
}

fn letter_index(c: char) -> Option<usize> {
    c.is_ascii_lowercase().then(|| (c as u8 - b'a') as usize)
}

impl LetterDigitMap {
    /// Builds a map from `(digit, letters)` groups. Fails when a letter is
    /// assigned twice or is outside `a..z`.
    pub fn from_groups<'a>(
        name: &str,
        groups: impl IntoIterator<Item = (u8, &'a str)>,
    ) -> Result<Self, MappingError> {
        let mut forward = [None; 26];
        for (i, (digit, letters)) in groups.into_iter().enumerate() {
            if digit > 9 {
                return Err(MappingError::Config {
                    line: i + 1,
                    reason: format!("digit {digit} out of range"),
                });
            }
            for c in letters.chars() {
                let idx = letter_index(c).ok_or_else(|| MappingError::Config {
                    line: i + 1,
                    reason: format!("`{c}` is not a letter a-z"),
                })?;
                if let Some(prev) = forward[idx] {
                    return Err(MappingError::Config {
                        line: i + 1,
                        reason: format!("letter `{c}` already mapped to {prev}"),
                    });
                }
                forward[idx] = Some(digit);
            }
        }
        Ok(Self::from_forward(name, forward))
    }

    fn from_forward(name: &str, forward: [Option<u8>; 26]) -> Self {
        let mut inverse: [Vec<char>; 10] = Default::default();
        for (c, d) in ALPHABET.chars().zip(forward.iter()) {
            if let Some(d) = d {
                inverse[*d as usize].push(c);
            }
        }
        LetterDigitMap {
            name: name.to_string(),
            forward,
            inverse,
        }
    }

    /// The telephone keypad: abc→2 … wxyz→9. Digits 0 and 1 are unreachable.
    pub fn standard() -> Self {
        Self::from_groups(
            "standard",
            [
                (2, "abc"),
                (3, "def"),
                (4, "ghi"),
                (5, "jkl"),
                (6, "mno"),
                (7, "pqrs"),
                (8, "tuv"),
                (9, "wxyz"),
            ],
        )
        .expect("standard map is a partition")
    }

    /// Standard keypad with l, i → 1 and o, z → 0.
    pub fn extended() -> Self {
        let mut forward = Self::standard().forward;
        for (c, d) in [('l', 1), ('i', 1), ('o', 0), ('z', 0)] {
            forward[letter_index(c).unwrap()] = Some(d);
        }
        Self::from_forward("extended", forward)
    }

    /// Alphabet spread in keypad order over all ten digits, so every digit
    /// has letters.
    pub fn stretched() -> Self {
        Self::from_groups(
            "stretched",
            [
                (1, "ab"),
                (2, "cd"),
                (3, "ef"),
                (4, "ghi"),
                (5, "jkl"),
                (6, "mn"),
                (7, "opq"),
                (8, "rst"),
                (9, "uvw"),
                (0, "xyz"),
            ],
        )
        .expect("stretched map is a partition")
    }

    pub fn builtin(name: &str) -> Result<Self, MappingError> {
        match name {
            "standard" => Ok(Self::standard()),
            "extended" => Ok(Self::extended()),
            "stretched" => Ok(Self::stretched()),
            other => Err(MappingError::UnknownMapping(other.to_string())),
        }
    }

    /// Parses the `digit: letters` config format, one digit per line.
    /// Blank lines and `#` comments are ignored.
    pub fn parse_config(name: &str, text: &str) -> Result<Self, MappingError> {
        let mut forward = [None; 26];
        let mut seen_digit = [false; 10];
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| MappingError::Config {
                line: line_no,
                reason,
            };
            let (digit, letters) = line
                .split_once(':')
                .ok_or_else(|| err("expected `digit: letters`".into()))?;
            let digit: u8 = match digit.trim().as_bytes() {
                [d @ b'0'..=b'9'] => d - b'0',
                _ => return Err(err(format!("`{}` is not a single digit", digit.trim()))),
            };
            if std::mem::replace(&mut seen_digit[digit as usize], true) {
                return Err(err(format!("digit {digit} listed twice")));
            }
            for c in letters.chars().filter(|c| !c.is_whitespace() && *c != ',') {
                let idx = letter_index(c.to_ascii_lowercase())
                    .ok_or_else(|| err(format!("`{c}` is not a letter a-z")))?;
                if let Some(prev) = forward[idx] {
                    return Err(err(format!("letter `{c}` already mapped to {prev}")));
                }
                forward[idx] = Some(digit);
            }
        }
        Ok(Self::from_forward(name, forward))
    }

    /// Renders the map in the config format accepted by [`parse_config`].
    ///
    /// [`parse_config`]: LetterDigitMap::parse_config
    pub fn to_config(&self) -> String {
        let mut out = String::new();
        for d in (1..10).chain(std::iter::once(0)) {
            let letters = &self.inverse[d];
            if !letters.is_empty() {
                out.push_str(&format!("{d}: {}\n", letters.iter().collect::<String>()));
            }
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn digit(&self, letter: char) -> Option<u8> {
        letter_index(letter).and_then(|i| self.forward[i])
    }

    /// Letters that map to `digit`, in alphabetical order.
    pub fn inverse(&self, digit: u8) -> &[char] {
        self.inverse.get(digit as usize).map_or(&[], Vec::as_slice)
    }

    /// Digits without any letter.
    pub fn unreachable_digits(&self) -> Vec<u8> {
        (0..10).filter(|&d| self.inverse[d as usize].is_empty()).collect()
    }

    pub fn is_total(&self) -> bool {
        self.forward.iter().all(Option::is_some)
    }

    /// Translates a word character by character. Digits stand for themselves.
    pub fn word_to_pin(&self, word: &str) -> Result<Pin, MappingError> {
        let mut digits = String::with_capacity(word.len());
        for c in word.chars() {
            let d = if c.is_ascii_digit() {
                c as u8 - b'0'
            } else {
                self.digit(c).ok_or_else(|| MappingError::Unmappable {
                    ch: c,
                    map: self.name.clone(),
                })?
            };
            digits.push((b'0' + d) as char);
        }
        Pin::new(digits).map_err(|_| MappingError::InvalidPin(word.to_string()))
    }
}

pub fn word_to_pin(word: &str, map: &LetterDigitMap) -> Result<Pin, MappingError> {
    map.word_to_pin(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pin(map: &LetterDigitMap, w: &str) -> String {
        map.word_to_pin(w).unwrap().to_string()
    }

    #[test]
    fn standard_examples() {
        let m = LetterDigitMap::standard();
        assert_eq!(pin(&m, "pares"), "72737");
        assert_eq!(pin(&m, "amos"), "2667");
        assert_eq!(pin(&m, "stoja"), "78652");
        assert!(m.inverse(0).is_empty());
        assert!(m.inverse(1).is_empty());
        assert_eq!(m.inverse(7), ['p', 'q', 'r', 's']);
        assert_eq!(m.unreachable_digits(), [0, 1]);
        assert!(m.is_total());
    }

    #[test]
    fn extended_examples() {
        let m = LetterDigitMap::extended();
        assert_eq!(pin(&m, "lion"), "1106");
        assert_eq!(pin(&m, "oz"), "00");
        assert_eq!(pin(&m, "cat"), "228");
        assert_eq!(m.inverse(1), ['i', 'l']);
    }

    #[test]
    fn stretched_examples() {
        let m = LetterDigitMap::stretched();
        assert_eq!(pin(&m, "whera"), "94381");
        assert_eq!(pin(&m, "anyl"), "1605");
        assert_eq!(pin(&m, "clmn"), "2566");
        assert!(m.unreachable_digits().is_empty());
    }

    #[test]
    fn digits_pass_through() {
        let m = LetterDigitMap::standard();
        assert_eq!(pin(&m, "p7per"), "77737");
        assert_eq!(pin(&m, "1aper"), "12737");
    }

    #[test]
    fn partial_map_is_unmappable() {
        let m = LetterDigitMap::from_groups("partial", [(2, "ab")]).unwrap();
        assert_eq!(
            m.word_to_pin("cat"),
            Err(MappingError::Unmappable {
                ch: 'c',
                map: "partial".into()
            })
        );
        assert!(LetterDigitMap::standard().word_to_pin("").is_err());
    }

    #[test]
    fn config_round_trip() {
        let m = LetterDigitMap::stretched();
        let parsed = LetterDigitMap::parse_config("stretched", &m.to_config()).unwrap();
        assert_eq!(parsed, m);
        let custom = LetterDigitMap::parse_config("c", "# keypad\n7: opq\n\n1: a, b\n").unwrap();
        assert_eq!(custom.digit('q'), Some(7));
        assert_eq!(custom.digit('b'), Some(1));
        assert_eq!(custom.digit('c'), None);
    }

    #[test]
    fn config_errors() {
        for bad in ["7 opq", "12: ab", "7: ab\n8: b", "7: ab\n7: c", "x: ab", "3: a1"] {
            assert!(
                matches!(
                    LetterDigitMap::parse_config("bad", bad),
                    Err(MappingError::Config { .. })
                ),
                "{bad:?} should fail"
            );
        }
    }

    #[test]
    fn pin_validation() {
        assert!(Pin::new("0123").is_ok());
        assert!(Pin::new("").is_err());
        assert!(Pin::new("12a").is_err());
        assert_eq!("  42 ".parse::<Pin>().unwrap().as_str(), "42");
        let p = Pin::new("907").unwrap();
        assert_eq!(p.digits().collect::<Vec<_>>(), [9, 0, 7]);
    }
}
