//! The `pinwords` command line.
//!
//! Every subcommand writes one document to stdout. JSON output carries the
//! provenance of the run (dictionary hashes, mapping, method, seed, tool
//! version) and is byte-identical for identical inputs and seed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::dictionary::{load_dic, merge, BuildOptions, DicEncoding, Dictionary, WordModel};
use crate::hmm::HmmModel;
use crate::mapping::{LetterDigitMap, Pin};
use crate::phrase::{
    chunk_words, default_chunks, phrase_to_pin, pin_to_phrase, PhraseLexicon, PhraseTemplate,
    DEFAULT_LEXICON_JSON,
};
use crate::pingen::{check_length, GenerationSpec, Method, PinDistribution, PinSource};
use crate::stats::{overlapping_pins, parse_pin_list, render_table, StatsReport};

pub const TOOL_NAME: &str = "pinwords";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit code for usage and input errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pinwords", version, about = "Dictionary PIN statistics and memorable PIN words")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coverage and entropy of dictionary PINs
    Stats(StatsArgs),
    /// Most probable word for a (random) PIN under a letter bigram model
    Pinword(PinwordArgs),
    /// PIN phrase whose initial letters spell the PIN
    Phrase(PhraseArgs),
    /// Dictionary words whose 2- or 3-letter prefixes spell chunks of a PIN
    Chunk(ChunkArgs),
    /// Overlap of dictionary PINs with an external frequency list
    Compare(CompareArgs),
    /// Uniformly random PINs
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WordModelArg {
    Normalized,
    SourceForm,
}

impl From<WordModelArg> for WordModel {
    fn from(v: WordModelArg) -> Self {
        match v {
            WordModelArg::Normalized => WordModel::Normalized,
            WordModelArg::SourceForm => WordModel::SourceForm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Prefix,
    Suffix,
    Polyglot,
    Morph,
    Combination,
}

impl From<MethodArg> for Method {
    fn from(v: MethodArg) -> Self {
        match v {
            MethodArg::Exact => Method::Exact,
            MethodArg::Prefix => Method::Prefix,
            MethodArg::Suffix => Method::Suffix,
            MethodArg::Polyglot => Method::Polyglot,
            MethodArg::Morph => Method::Morph,
            MethodArg::Combination => Method::Combination,
        }
    }
}

#[derive(Debug, Args)]
pub struct DictArgs {
    /// Hunspell .dic file (repeatable)
    #[arg(long = "dict", value_name = "PATH", required = true)]
    pub dicts: Vec<PathBuf>,
    /// Language tag per dictionary, in --dict order (default: file stem)
    #[arg(long = "lang", value_name = "TAG")]
    pub langs: Vec<String>,
    /// Text encoding of the .dic files (e.g. iso-8859-2)
    #[arg(long, default_value = "utf-8")]
    pub encoding: String,
    /// How entries that normalize to the same word are counted
    #[arg(long, value_enum, default_value = "source-form")]
    pub word_model: WordModelArg,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub dict: DictArgs,
    /// standard, extended, stretched or a map config file
    #[arg(long, default_value = "standard")]
    pub mapping: String,
    #[arg(long, default_value_t = 4)]
    pub length: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: MethodArg,
    /// Number of most frequent PINs to report
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Include the full PIN distribution in JSON output
    #[arg(long)]
    pub with_distribution: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PinwordArgs {
    #[command(flatten)]
    pub dict: DictArgs,
    #[arg(long, default_value = "stretched")]
    pub mapping: String,
    /// Decode this PIN instead of drawing random ones
    #[arg(long)]
    pub pin: Option<String>,
    #[arg(long, default_value_t = 5)]
    pub length: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also list this many runner-up words per PIN
    #[arg(long, default_value_t = 0)]
    pub candidates: usize,
    /// Directory for cached trained models
    #[arg(long, env = "PINWORDS_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PhraseArgs {
    /// Lexicon JSON file (default: bundled English lexicon)
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long, default_value = "stretched")]
    pub mapping: String,
    /// Comma-separated parts of speech, e.g. adjective,noun,verb,noun
    #[arg(long)]
    pub template: Option<String>,
    #[arg(long)]
    pub pin: Option<String>,
    #[arg(long, default_value_t = 5)]
    pub length: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ChunkArgs {
    #[command(flatten)]
    pub dict: DictArgs,
    #[arg(long, default_value = "stretched")]
    pub mapping: String,
    #[arg(long)]
    pub pin: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub length: usize,
    /// Chunk sizes, e.g. 2,3 (default: 2s with a trailing 3 for odd lengths)
    #[arg(long, value_delimiter = ',')]
    pub chunks: Vec<usize>,
    /// Candidates listed per chunk
    #[arg(long, default_value_t = 20)]
    pub limit: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub dict: DictArgs,
    #[arg(long, default_value = "standard")]
    pub mapping: String,
    #[arg(long, default_value_t = 4)]
    pub length: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: MethodArg,
    /// External frequency list: one PIN per line, most frequent first
    #[arg(long, value_name = "PATH")]
    pub list: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 4)]
    pub length: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

/// Parses `args` (including the program name), runs, and returns the exit
/// code. Output goes to `out`, diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

pub fn execute(command: Command) -> Result<String> {
    match command {
        Command::Stats(a) => cmd_stats(a),
        Command::Pinword(a) => cmd_pinword(a),
        Command::Phrase(a) => cmd_phrase(a),
        Command::Chunk(a) => cmd_chunk(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Gen(a) => cmd_gen(a),
    }
}

struct LoadedDictionary {
    path: PathBuf,
    sha256: String,
    dictionary: Dictionary,
}

#[derive(Serialize)]
struct DictionaryInfo {
    path: String,
    name: String,
    language: String,
    sha256: String,
    entries: usize,
    words: usize,
    pin_words: usize,
}

impl LoadedDictionary {
    fn info(&self) -> DictionaryInfo {
        DictionaryInfo {
            path: self.path.display().to_string(),
            name: self.dictionary.name().to_string(),
            language: self.dictionary.language_tag().to_string(),
            sha256: self.sha256.clone(),
            entries: self.dictionary.source_word_count(),
            words: self.dictionary.len(),
            pin_words: self.dictionary.pin_word_count(),
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dictionary".into())
}

fn load_dictionaries(args: &DictArgs) -> Result<Vec<LoadedDictionary>> {
    if !args.langs.is_empty() && args.langs.len() != args.dicts.len() {
        bail!(
            "{} --lang values given for {} dictionaries",
            args.langs.len(),
            args.dicts.len()
        );
    }
    let encoding = DicEncoding::for_label(&args.encoding)?;
    let model: WordModel = args.word_model.into();
    let jobs: Vec<(PathBuf, String)> = args
        .dicts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let lang = args.langs.get(i).cloned().unwrap_or_else(|| file_stem(p));
            (p.clone(), lang)
        })
        .collect();
    // independent files load in parallel
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(path, lang)| {
                scope.spawn(move || -> Result<LoadedDictionary> {
                    let bytes = fs::read(path)
                        .with_context(|| format!("cannot read {}", path.display()))?;
                    let opts = BuildOptions::for_language(lang).word_model(model);
                    let dictionary = load_dic(&bytes, encoding, &opts, &file_stem(path), lang)
                        .with_context(|| format!("cannot parse {}", path.display()))?;
                    Ok(LoadedDictionary {
                        path: path.clone(),
                        sha256: sha256_hex(&bytes),
                        dictionary,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().map_err(|_| anyhow!("dictionary loader panicked"))?)
            .collect()
    })
}

fn load_mapping(name: &str) -> Result<LetterDigitMap> {
    if let Ok(map) = LetterDigitMap::builtin(name) {
        return Ok(map);
    }
    let path = Path::new(name);
    if !path.exists() {
        bail!("unknown mapping `{name}` (expected standard, extended, stretched or a config file)");
    }
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {name}"))?;
    Ok(LetterDigitMap::parse_config(&file_stem(path), &text)?)
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| rand::rngs::OsRng.gen())
}

fn parse_pin(text: &str) -> Result<Pin> {
    let pin: Pin = text.parse()?;
    check_length(pin.len())?;
    Ok(pin)
}

fn provenance(
    command: &str,
    dicts: &[LoadedDictionary],
    map: Option<&LetterDigitMap>,
    extra: Value,
) -> Value {
    let mut p = json!({
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "command": command,
    });
    if !dicts.is_empty() {
        let infos: Vec<DictionaryInfo> = dicts.iter().map(LoadedDictionary::info).collect();
        p["dictionaries"] = json!(infos);
        p["word_model"] = json!(dicts[0].dictionary.word_model());
    }
    if let Some(map) = map {
        p["mapping"] = json!(map.name());
    }
    if let Value::Object(extra) = extra {
        for (k, v) in extra {
            p[k] = v;
        }
    }
    p
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn cmd_stats(a: StatsArgs) -> Result<String> {
    check_length(a.length)?;
    let map = load_mapping(&a.mapping)?;
    let loaded = load_dictionaries(&a.dict)?;
    let method: Method = a.method.into();
    let runs = generate(&loaded, method, a.length, &map)?;
    match a.format {
        Format::Tsv => {
            let mut out = String::new();
            for (label, dist) in &runs {
                if runs.len() > 1 {
                    out.push_str(&format!("# {label}\n"));
                }
                out.push_str(&dist.to_tsv());
            }
            Ok(out)
        }
        Format::Table => {
            let reports: Vec<(String, StatsReport)> = runs
                .iter()
                .map(|(l, d)| (l.clone(), StatsReport::from_distribution(d, a.top)))
                .collect();
            let cols: Vec<(String, &StatsReport)> =
                reports.iter().map(|(l, r)| (l.clone(), r)).collect();
            Ok(render_table(&cols))
        }
        Format::Json => {
            let reports: Vec<Value> = runs
                .iter()
                .map(|(label, dist)| {
                    let mut v = json!({
                        "label": label,
                        "report": StatsReport::from_distribution(dist, a.top),
                        "skipped_words": dist.skipped_words(),
                    });
                    if a.with_distribution {
                        v["distribution"] = json!(dist);
                    }
                    v
                })
                .collect();
            let doc = json!({
                "provenance": provenance("stats", &loaded, Some(&map), json!({
                    "method": method,
                    "pin_length": a.length,
                })),
                "reports": reports,
            });
            Ok(to_json(&doc))
        }
    }
}

/// Per-dictionary runs for single-dictionary methods, one merged run for
/// polyglot and combination.
fn generate(
    loaded: &[LoadedDictionary],
    method: Method,
    n: usize,
    map: &LetterDigitMap,
) -> Result<Vec<(String, PinDistribution)>> {
    let dicts: Vec<&Dictionary> = loaded.iter().map(|l| &l.dictionary).collect();
    match method {
        Method::Polyglot | Method::Combination => {
            let spec = GenerationSpec {
                method,
                pin_length: n,
                map,
                dictionaries: dicts,
            };
            Ok(vec![(method.to_string(), spec.run()?)])
        }
        _ => dicts
            .iter()
            .map(|d| {
                let spec = GenerationSpec {
                    method,
                    pin_length: n,
                    map,
                    dictionaries: vec![*d],
                };
                Ok((d.language_tag().to_string(), spec.run()?))
            })
            .collect(),
    }
}

fn training_dictionary(loaded: &[LoadedDictionary]) -> Result<Dictionary> {
    let dicts: Vec<&Dictionary> = loaded.iter().map(|l| &l.dictionary).collect();
    if dicts.len() == 1 {
        Ok(dicts[0].clone())
    } else {
        Ok(merge(&dicts, "merged")?)
    }
}

fn model_cache_key(loaded: &[LoadedDictionary], map: &LetterDigitMap) -> String {
    let mut h = Sha256::new();
    for l in loaded {
        h.update(l.sha256.as_bytes());
        h.update(l.dictionary.language_tag().as_bytes());
        h.update([0]);
    }
    h.update(format!("{:?}", loaded.first().map(|l| l.dictionary.word_model())).as_bytes());
    h.update(map.name().as_bytes());
    h.update(map.to_config().as_bytes());
    h.finalize().iter().take(12).map(|b| format!("{b:02x}")).collect()
}

fn trained_model(
    loaded: &[LoadedDictionary],
    map: &LetterDigitMap,
    cache_dir: Option<&Path>,
) -> Result<(HmmModel, bool)> {
    let cache_file = cache_dir.map(|d| d.join(format!("hmm-{}.json", model_cache_key(loaded, map))));
    if let Some(path) = &cache_file {
        if let Ok(text) = fs::read_to_string(path) {
            if let Ok(model) = HmmModel::from_json(&text) {
                if model.emission_map() == map {
                    return Ok((model, true));
                }
            }
        }
    }
    let dict = training_dictionary(loaded)?;
    let model = HmmModel::train_dictionary(&dict, map.clone())?;
    if let Some(path) = &cache_file {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)
                .with_context(|| format!("cannot create cache dir {}", dir.display()))?;
        }
        fs::write(path, model.to_json())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok((model, false))
}

fn pins_for(pin: Option<&str>, length: usize, count: usize, seed: u64) -> Result<Vec<Pin>> {
    match pin {
        Some(p) => Ok(vec![parse_pin(p)?]),
        None => {
            let source = PinSource::new(length, seed)?;
            Ok(source.take(count.max(1)).collect())
        }
    }
}

fn cmd_pinword(a: PinwordArgs) -> Result<String> {
    let map = load_mapping(&a.mapping)?;
    let missing = map.unreachable_digits();
    if !missing.is_empty() {
        let digits: Vec<String> = missing.iter().map(u8::to_string).collect();
        bail!(
            "mapping `{}` cannot emit digits {}; use a mapping that reaches every digit (e.g. stretched)",
            map.name(),
            digits.join(",")
        );
    }
    let seed = resolve_seed(a.seed);
    let pins = pins_for(a.pin.as_deref(), a.length, a.count, seed)?;
    let loaded = load_dictionaries(&a.dict)?;
    let (model, _cached) = trained_model(&loaded, &map, a.cache_dir.as_deref())?;

    let mut results = Vec::new();
    for pin in &pins {
        let best = model.viterbi(pin)?;
        let mut v = json!({ "pin": pin });
        if let Value::Object(fields) = json!(best) {
            for (k, f) in fields {
                v[k] = f;
            }
        }
        if a.candidates > 0 {
            v["candidates"] = json!(model.candidates(pin, a.candidates)?);
        }
        results.push((pin.clone(), best, v));
    }
    match a.format {
        Format::Json => {
            let doc = json!({
                "provenance": provenance("pinword", &loaded, Some(&map), json!({"seed": seed})),
                "results": results.iter().map(|r| r.2.clone()).collect::<Vec<_>>(),
            });
            Ok(to_json(&doc))
        }
        Format::Tsv | Format::Table => {
            let mut out = String::new();
            for (pin, best, _) in &results {
                let lp = if best.log_probability.is_finite() {
                    format!("{:.4}", best.log_probability)
                } else {
                    "-inf".into()
                };
                let flag = if best.smoothed { "\tsmoothed" } else { "" };
                out.push_str(&format!("{pin}\t{}\t{lp}{flag}\n", best.word));
            }
            Ok(out)
        }
    }
}

fn cmd_phrase(a: PhraseArgs) -> Result<String> {
    let map = load_mapping(&a.mapping)?;
    let (lexicon_text, lexicon_source) = match &a.lexicon {
        Some(p) => (
            fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?,
            p.display().to_string(),
        ),
        None => (DEFAULT_LEXICON_JSON.to_string(), "bundled:en".to_string()),
    };
    let lexicon = PhraseLexicon::from_json(&lexicon_text, map.clone())
        .with_context(|| format!("invalid lexicon {lexicon_source}"))?;
    let seed = resolve_seed(a.seed);
    let pins = pins_for(a.pin.as_deref(), a.length, a.count, seed)?;
    let n = pins[0].len();
    let template = match &a.template {
        Some(t) => t.parse::<PhraseTemplate>()?,
        None => PhraseTemplate::default_for(n)?,
    };
    lexicon
        .check_template(&template)
        .with_context(|| format!("invalid lexicon {lexicon_source}"))?;

    // each phrase gets its own seed, drawn from the run seed
    let mut seeds = ChaCha20Rng::seed_from_u64(seed ^ 0x7068_7261_7365);
    let mut results = Vec::new();
    for pin in &pins {
        let phrase_seed: u64 = if pins.len() == 1 { seed } else { seeds.gen() };
        let words = pin_to_phrase(&lexicon, &template, pin, phrase_seed)?;
        debug_assert_eq!(phrase_to_pin(&words, &map).ok().as_ref(), Some(pin));
        results.push((pin.clone(), words.join(" "), phrase_seed));
    }
    match a.format {
        Format::Json => {
            let doc = json!({
                "provenance": provenance("phrase", &[], Some(&map), json!({
                    "seed": seed,
                    "lexicon": lexicon_source,
                    "lexicon_sha256": sha256_hex(lexicon_text.as_bytes()),
                    "template": template.slots(),
                })),
                "results": results.iter().map(|(pin, phrase, s)| json!({
                    "pin": pin, "phrase": phrase, "seed": s,
                })).collect::<Vec<_>>(),
            });
            Ok(to_json(&doc))
        }
        Format::Tsv | Format::Table => Ok(results
            .iter()
            .map(|(pin, phrase, _)| format!("{pin}\t{phrase}\n"))
            .collect()),
    }
}

fn cmd_chunk(a: ChunkArgs) -> Result<String> {
    let map = load_mapping(&a.mapping)?;
    let seed = resolve_seed(a.seed);
    let pin = pins_for(a.pin.as_deref(), a.length, 1, seed)?.remove(0);
    let sizes = if a.chunks.is_empty() {
        default_chunks(pin.len())?
    } else {
        a.chunks.clone()
    };
    let loaded = load_dictionaries(&a.dict)?;
    let dict = training_dictionary(&loaded)?;
    let chunks = chunk_words(&dict, &map, &pin, &sizes)?;

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let suggestion: Option<Vec<String>> = chunks
        .iter()
        .map(|c| (!c.is_empty()).then(|| c[rng.gen_range(0..c.len())].to_string()))
        .collect();
    let mut start = 0;
    let mut rows = Vec::new();
    for (size, cands) in sizes.iter().zip(&chunks) {
        let digits = &pin.as_str()[start..start + size];
        start += size;
        rows.push(json!({
            "digits": digits,
            "prefix_length": size,
            "total": cands.len(),
            "candidates": cands.iter().take(a.limit).collect::<Vec<_>>(),
        }));
    }
    match a.format {
        Format::Json => {
            let doc = json!({
                "provenance": provenance("chunk", &loaded, Some(&map), json!({"seed": seed})),
                "pin": pin,
                "chunks": rows,
                "suggestion": suggestion,
            });
            Ok(to_json(&doc))
        }
        Format::Tsv | Format::Table => {
            let mut out = String::new();
            for row in &rows {
                let cands: Vec<&str> = row["candidates"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .filter_map(Value::as_str)
                    .collect();
                out.push_str(&format!(
                    "{}\t{}\t{}\n",
                    row["digits"].as_str().unwrap_or(""),
                    row["total"],
                    cands.join(" ")
                ));
            }
            if let Some(s) = &suggestion {
                out.push_str(&format!("suggestion\t{}\n", s.join(" ")));
            }
            Ok(out)
        }
    }
}

fn cmd_compare(a: CompareArgs) -> Result<String> {
    check_length(a.length)?;
    let map = load_mapping(&a.mapping)?;
    let text = fs::read_to_string(&a.list)
        .with_context(|| format!("cannot read {}", a.list.display()))?;
    let external = parse_pin_list(&text)?;
    let loaded = load_dictionaries(&a.dict)?;
    let method: Method = a.method.into();
    let runs = generate(&loaded, method, a.length, &map)?;
    let mut rows = Vec::new();
    for (label, dist) in &runs {
        let matched = overlapping_pins(dist, &external)?;
        rows.push((label.clone(), matched));
    }
    match a.format {
        Format::Json => {
            let doc = json!({
                "provenance": provenance("compare", &loaded, Some(&map), json!({
                    "method": method,
                    "pin_length": a.length,
                    "list": a.list.display().to_string(),
                    "list_sha256": sha256_hex(text.as_bytes()),
                })),
                "external_total": external.len(),
                "results": rows.iter().map(|(label, m)| json!({
                    "label": label,
                    "overlap": m.len(),
                    "matched": m,
                })).collect::<Vec<_>>(),
            });
            Ok(to_json(&doc))
        }
        Format::Tsv | Format::Table => Ok(rows
            .iter()
            .map(|(label, m)| {
                let pins: Vec<&str> = m.iter().map(Pin::as_str).collect();
                format!("{label}\t{}\t{}\n", m.len(), pins.join(","))
            })
            .collect()),
    }
}

fn cmd_gen(a: GenArgs) -> Result<String> {
    let seed = resolve_seed(a.seed);
    let pins: Vec<Pin> = PinSource::new(a.length, seed)?.take(a.count).collect();
    match a.format {
        Format::Json => {
            let doc = json!({
                "provenance": provenance("gen", &[], None, json!({
                    "seed": seed,
                    "pin_length": a.length,
                })),
                "pins": pins,
            });
            Ok(to_json(&doc))
        }
        Format::Tsv | Format::Table => Ok(pins.iter().map(|p| format!("{p}\n")).collect()),
    }
}
