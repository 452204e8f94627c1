//! Dictionary-derived PIN analysis and memorable encodings of random PINs.
//!
//! * [`dictionary`] reads hunspell `.dic` word lists and normalizes words.
//! * [`mapping`] holds letter→digit keypad maps and translates words.
//! * [`pingen`] builds PIN distributions with the dictionary strategies.
//! * [`stats`] computes coverage, entropy and rankings.
//! * [`hmm`] decodes a PIN into its most probable word.
//! * [`phrase`] turns PINs into phrases and word chunks.
//! * [`cli`] implements the `pinwords` command line.

pub mod cli;
pub mod dictionary;
pub mod hmm;
pub mod mapping;
pub mod phrase;
pub mod pingen;
pub mod stats;

pub use dictionary::{
    build_dictionary, merge, normalize_word, parse_dic, BuildOptions, DicEncoding, Dictionary,
    DictionaryError, NormalizationOptions, NormalizedWord, RawEntry, WordModel,
};
pub use hmm::{DecodeResult, HmmError, HmmModel};
pub use mapping::{word_to_pin, LetterDigitMap, MappingError, Pin};
pub use phrase::{
    chunk_words, phrase_to_pin, pin_to_phrase, PartOfSpeech, PhraseError, PhraseLexicon,
    PhraseTemplate,
};
pub use pingen::{
    exact_length_pins, morph_pins, polyglot_pins, prefix_pins, random_pin, suffix_pins,
    GenerationSpec, Method, PinDistribution, PinGenError,
};
pub use stats::{coverage, entropy, overlap_with_list, top_k, StatsError, StatsReport};
