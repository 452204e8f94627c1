use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SAMPLE_DIC: &str = "12\nhello/S\nworld\nlion\nmail/SM\nblue\nclear\nmnemonic\nangry\ndoctor\nfeeds\nigloo\nJohn's\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pinwords"))
}

fn sample(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("sample.dic");
    std::fs::write(&path, SAMPLE_DIC).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn stats_reports_exact_length_pins() {
    let dir = TempDir::new().unwrap();
    let dic = sample(&dir);
    let v = json(&run(&["stats", "--dict", p(&dic), "--lang", "en", "--length", "4", "--top", "3"]));
    let report = &v["reports"][0]["report"];
    // lion, mail, blue, john
    assert_eq!(report["pin_word_total"], 4);
    assert_eq!(v["provenance"]["mapping"], "standard");
    assert_eq!(v["provenance"]["method"], "exact");
    assert_eq!(v["provenance"]["dictionaries"][0]["entries"], 12);
    assert_eq!(v["provenance"]["dictionaries"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn stats_table_and_tsv() {
    let dir = TempDir::new().unwrap();
    let dic = sample(&dir);
    let out = run(&["stats", "--dict", p(&dic), "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("#PIN words"));
    assert!(text.contains("Covering"));
    let out = run(&["stats", "--dict", p(&dic), "--format", "tsv", "--length", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.split('\t').count() == 2));
}

#[test]
fn polyglot_needs_two_dictionaries() {
    let dir = TempDir::new().unwrap();
    let dic = sample(&dir);
    let out = run(&["stats", "--dict", p(&dic), "--method", "polyglot"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pinword_decodes_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let dic = sample(&dir);
    let v = json(&run(&["pinword", "--dict", p(&dic), "--pin", "5376", "--candidates", "2"]));
    let word = v["results"][0]["word"].as_str().unwrap();
    assert_eq!(word.len(), 4);
    let pin = pinwords::LetterDigitMap::stretched().word_to_pin(word).unwrap();
    assert_eq!(pin.as_str(), "5376");
}

#[test]
fn pinword_rejects_a_map_with_unreachable_digits() {
    let dir = TempDir::new().unwrap();
    let dic = sample(&dir);
    let out = run(&["pinword", "--dict", p(&dic), "--mapping", "standard", "--pin", "1234"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cannot emit digits 0,1"), "{err}");
}

#[test]
fn pinword_uses_the_model_cache() {
    let dir = TempDir::new().unwrap();
    let dic = sample(&dir);
    let cache = dir.path().join("cache");
    let args = ["pinword", "--dict", p(&dic), "--pin", "12345", "--seed", "1", "--cache-dir", p(&cache)];
    let first = run(&args);
    assert!(first.status.success());
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn custom_mapping_file() {
    let dir = TempDir::new().unwrap();
    let dic = sample(&dir);
    let map = dir.path().join("vowels.map");
    std::fs::write(&map, "# two groups\n1: aeiou\n2: bcdfghjklmnpqrstvwxyz\n").unwrap();
    let v = json(&run(&["stats", "--dict", p(&dic), "--lang", "en", "--mapping", p(&map)]));
    assert_eq!(v["provenance"]["mapping"], "vowels");
    assert_eq!(v["reports"][0]["report"]["pin_word_total"], 4);
}

#[test]
fn phrase_spells_the_pin() {
    let v = json(&run(&["phrase", "--pin", "27354", "--seed", "5"]));
    let phrase = v["results"][0]["phrase"].as_str().unwrap();
    let words: Vec<&str> = phrase.split(' ').collect();
    let pin = pinwords::phrase_to_pin(&words, &pinwords::LetterDigitMap::stretched()).unwrap();
    assert_eq!(pin.as_str(), "27354");
}

#[test]
fn phrase_template_must_match_pin_length() {
    let out = run(&["phrase", "--pin", "1234", "--template", "adj,noun"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chunk_lists_prefix_words() {
    let dir = TempDir::new().unwrap();
    let dic = sample(&dir);
    // cl = 25, mn = 66 under the stretched map
    let v = json(&run(&["chunk", "--dict", p(&dic), "--pin", "2566", "--seed", "1"]));
    assert_eq!(v["chunks"][0]["candidates"][0], "clear");
    assert_eq!(v["chunks"][1]["candidates"][0], "mnemonic");
    assert_eq!(v["suggestion"], serde_json::json!(["clear", "mnemonic"]));
    let out = run(&["chunk", "--dict", p(&dic), "--pin", "2566", "--chunks", "2,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_counts_overlap() {
    let dir = TempDir::new().unwrap();
    let dic = sample(&dir);
    let list = dir.path().join("top.txt");
    // lion -> 5466, blue -> 2583
    std::fs::write(&list, "1234\n5466\n0000\n2583\n").unwrap();
    let v = json(&run(&["compare", "--dict", p(&dic), "--list", p(&list)]));
    assert_eq!(v["external_total"], 4);
    assert_eq!(v["results"][0]["overlap"], 2);
    assert_eq!(v["results"][0]["matched"], serde_json::json!(["5466", "2583"]));
}

#[test]
fn gen_respects_length_and_seed() {
    let a = json(&run(&["gen", "--length", "6", "--count", "5", "--seed", "11"]));
    let b = json(&run(&["gen", "--length", "6", "--count", "5", "--seed", "11"]));
    assert_eq!(a, b);
    assert_eq!(a["pins"].as_array().unwrap().len(), 5);
    assert!(a["pins"]
        .as_array()
        .unwrap()
        .iter()
        .all(|p| p.as_str().unwrap().len() == 6));
}

#[test]
fn missing_seed_is_generated_and_echoed() {
    let v = json(&run(&["gen"]));
    assert!(v["provenance"]["seed"].is_u64());
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["gen", "--length", "1"]).status.code(), Some(2));
    assert_eq!(run(&["stats"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["stats", "--dict", "/no/such/file.dic"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
