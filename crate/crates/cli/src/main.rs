//! Command-line surface for the word machinery: normalization, the
//! permutation and pair partition of a word, completion of partial
//! neutral words, censuses, moments, sandwich bounds, and the
//! local-confluence harness. Output is deterministic byte-for-byte for
//! identical inputs; big integers serialize as strings.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use serde::Deserialize;
use serde_json::json;

use thompson_clt_core::binning::{self, PairPartition, PartialWord, Permutation};
use thompson_clt_core::census::{
    self, MomentReport, DEFAULT_CANDIDATE_BUDGET, DEFAULT_HALFWORD_BUDGET,
};
use thompson_clt_core::rewrite::{self, ConfluenceReport, ReductionKind};
use thompson_clt_core::word::{format_word, parse_word, Sign};
use thompson_clt_core::{Error as CoreError, ErrorClass};

#[derive(Parser)]
#[command(
    name = "thompson-clt",
    version,
    about = "Word rewriting, neutral-word censuses, and moment computations for Thompson's group F"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a word to its normal form.
    Normalize {
        /// The word, e.g. "g3^-1 g6 g0^-1 g2 g4^-1".
        word: String,
        /// Also print every rewriting step.
        #[arg(long)]
        verbose: bool,
    },
    /// Print the permutation the normalization induces on letter positions.
    Tau { word: String },
    /// Print the pair partition of a neutral word.
    Partition { word: String },
    /// Complete a partially specified neutral word from JSON data (a
    /// file path, or "-" for stdin).
    Complete { input: String },
    /// Count the neutral words of length d over indices {0..n-1}.
    Census {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: u64,
        /// Scan all (2n)^d words instead of meeting in the middle.
        #[arg(long)]
        naive: bool,
        #[arg(long, default_value_t = DEFAULT_CANDIDATE_BUDGET)]
        budget_candidates: u64,
        #[arg(long, default_value_t = DEFAULT_HALFWORD_BUDGET)]
        budget_halfwords: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact moment |W0(d,n)| / (2n)^(d/2) with its sandwich envelopes.
    Moments {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_HALFWORD_BUDGET)]
        budget_halfwords: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Binomial sandwich bounds for the per-permutation counts.
    Bounds {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively check local confluence of one reduction relation.
    Confluence {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        max_index: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Separate,
    Order,
    PushSmallest,
}

impl From<KindArg> for ReductionKind {
    fn from(k: KindArg) -> ReductionKind {
        match k {
            KindArg::Separate => ReductionKind::Separate,
            KindArg::Order => ReductionKind::Order,
            KindArg::PushSmallest => ReductionKind::PushSmallest,
        }
    }
}

/// Exit codes: 0 success, 1 resource/budget, 2 syntax, 3 semantic.
enum CliError {
    Core(CoreError),
    Message { code: i32, text: String },
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.class() {
                ErrorClass::Budget => 1,
                ErrorClass::Syntax => 2,
                ErrorClass::Semantic => 3,
            },
            CliError::Message { code, .. } => *code,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Message { text, .. } => write!(f, "{text}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Message {
            code: 1,
            text: format!("i/o error: {e}"),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::Message {
            code: 2,
            text: format!("malformed completion input: {e}"),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(output) => print!("{output}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.code());
        }
    }
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Normalize { word, verbose } => cmd_normalize(&word, verbose),
        Command::Tau { word } => cmd_tau(&word),
        Command::Partition { word } => cmd_partition(&word),
        Command::Complete { input } => cmd_complete(&input),
        Command::Census {
            d,
            n,
            naive,
            budget_candidates,
            budget_halfwords,
            format,
            out,
        } => deliver(
            cmd_census(d, n, naive, budget_candidates, budget_halfwords, format)?,
            out,
        ),
        Command::Moments {
            d,
            n,
            budget_halfwords,
            format,
            out,
        } => deliver(cmd_moments(d, n, budget_halfwords, format)?, out),
        Command::Bounds { d, n, format, out } => deliver(cmd_bounds(d, n, format)?, out),
        Command::Confluence {
            kind,
            max_len,
            max_index,
            format,
            out,
        } => deliver(cmd_confluence(kind.into(), max_len, max_index, format)?, out),
    }
}

/// Writes to the output path when one is given, otherwise hands the
/// text back for stdout.
fn deliver(output: String, out: Option<PathBuf>) -> Result<String, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, output)?;
            Ok(String::new())
        }
        None => Ok(output),
    }
}

fn cmd_normalize(word: &str, verbose: bool) -> Result<String, CliError> {
    let w = parse_word(word)?;
    let (nf, trace) = rewrite::normalize(&w)?;
    let mut out = format!("{}\n", format_word(&nf.strip()));
    if verbose {
        for (i, step) in trace.steps.iter().enumerate() {
            out.push_str(&format!(
                "step {}: {} at pair {}: {} {} -> {} {}\n",
                i + 1,
                step.kind,
                step.position,
                step.before.0,
                step.before.1,
                step.after.0,
                step.after.1,
            ));
        }
    }
    Ok(out)
}

fn images_text(t: &Permutation) -> String {
    let images: Vec<String> = t.images().iter().map(|v| v.to_string()).collect();
    format!("[{}]", images.join(","))
}

fn pairs_text(p: &PairPartition) -> String {
    let pairs: Vec<String> = p
        .pairs()
        .iter()
        .map(|(a, b)| format!("[{a},{b}]"))
        .collect();
    format!("[{}]", pairs.join(","))
}

fn cmd_tau(word: &str) -> Result<String, CliError> {
    let w = parse_word(word)?;
    let t = binning::tau_of(&w)?;
    Ok(format!("{}\n{}\n", images_text(&t), t.cycle_string()))
}

fn cmd_partition(word: &str) -> Result<String, CliError> {
    let w = parse_word(word)?;
    let p = binning::partition_of(&w)?;
    Ok(format!("{}\n", pairs_text(&p)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CompletionInput {
    d: usize,
    mode: String,
    /// Position -> generator index, keyed by 1-based position.
    known: BTreeMap<String, u64>,
    /// +1 / -1 per position; partition mode only.
    signs: Option<Vec<i8>>,
    partition: Option<Vec<[usize; 2]>>,
    /// One-line permutation images; spaced mode only.
    tau: Option<Vec<usize>>,
}

fn bad_input(text: impl Into<String>) -> CliError {
    CliError::Message {
        code: 2,
        text: text.into(),
    }
}

fn cmd_complete(input: &str) -> Result<String, CliError> {
    let raw = if input == "-" {
        let mut buffer = String::new();
        std::io::stdin().read_to_string(&mut buffer)?;
        buffer
    } else {
        std::fs::read_to_string(input)?
    };
    let data: CompletionInput = serde_json::from_str(&raw)?;

    let mut known = BTreeMap::new();
    for (key, index) in &data.known {
        let position: usize = key
            .parse()
            .map_err(|_| bad_input(format!("known-index key {key:?} is not a position")))?;
        if position == 0 || position > data.d {
            return Err(bad_input(format!(
                "known-index position {position} is outside 1..={}",
                data.d
            )));
        }
        known.insert(position, *index);
    }

    let word = match data.mode.as_str() {
        "partition" => {
            let signs = data
                .signs
                .ok_or_else(|| bad_input("partition mode needs a signs array"))?;
            let pairs = data
                .partition
                .ok_or_else(|| bad_input("partition mode needs a partition array"))?;
            if signs.len() != data.d {
                return Err(bad_input(format!(
                    "expected {} signs, got {}",
                    data.d,
                    signs.len()
                )));
            }
            let signs: Vec<Sign> = signs
                .into_iter()
                .map(|s| match s {
                    1 => Ok(Sign::Plus),
                    -1 => Ok(Sign::Minus),
                    other => Err(bad_input(format!("signs must be 1 or -1, got {other}"))),
                })
                .collect::<Result<_, _>>()?;
            let indices = (1..=data.d).map(|pos| known.get(&pos).copied()).collect();
            let partial = PartialWord::new(signs, indices)?;
            let pi = PairPartition::from_pairs(pairs.into_iter().map(|[a, b]| (a, b)))?;
            binning::complete_from_partition(&partial, &pi)?
        }
        "spaced" => {
            let images = data
                .tau
                .ok_or_else(|| bad_input("spaced mode needs a tau image array"))?;
            if images.len() != data.d {
                return Err(bad_input(format!(
                    "expected {} tau images, got {}",
                    data.d,
                    images.len()
                )));
            }
            let t = Permutation::from_images(images)?;
            binning::complete_from_spaced(&t, &known)?
        }
        other => {
            return Err(bad_input(format!(
                "mode must be \"partition\" or \"spaced\", got {other:?}"
            )));
        }
    };
    Ok(format!("{}\n", format_word(&word)))
}

fn tau_label(t: &Permutation) -> String {
    t.cycle_string()
}

fn cmd_census(
    d: usize,
    n: u64,
    naive: bool,
    budget_candidates: u64,
    budget_halfwords: u64,
    format: Format,
) -> Result<String, CliError> {
    let table = if naive {
        let words = census::enumerate_naive_with_budget(d, n, budget_candidates)?;
        census::census_from_words(d, n, &words)?
    } else {
        census::enumerate_mitm_with_budget(d, n, budget_halfwords)?
    };
    table.check_invariants()?;
    Ok(match format {
        Format::Text => {
            let mut out = format!("d: {}\nn: {}\ntotal: {}\n", table.d, table.n, table.total);
            for (t, count) in &table.by_tau {
                out.push_str(&format!("tau {}: {count}\n", tau_label(t)));
            }
            for (p, count) in &table.by_partition {
                out.push_str(&format!("partition {}: {count}\n", pairs_text(p)));
            }
            out
        }
        Format::Json => {
            let by_tau: Vec<_> = table
                .by_tau
                .iter()
                .map(|(t, count)| {
                    json!({
                        "images": t.images(),
                        "cycles": t.cycle_string(),
                        "count": count.to_string(),
                    })
                })
                .collect();
            let by_partition: Vec<_> = table
                .by_partition
                .iter()
                .map(|(p, count)| {
                    json!({
                        "pairs": p.pairs().iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
                        "count": count.to_string(),
                    })
                })
                .collect();
            let doc = json!({
                "schema_version": 1,
                "kind": "census",
                "d": table.d,
                "n": table.n,
                "total": table.total.to_string(),
                "by_tau": by_tau,
                "by_partition": by_partition,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer
                .write_record(["d", "n", "tau_cycles", "count"])
                .map_err(csv_error)?;
            for (t, count) in &table.by_tau {
                writer
                    .write_record([
                        table.d.to_string(),
                        table.n.to_string(),
                        tau_label(t),
                        count.to_string(),
                    ])
                    .map_err(csv_error)?;
            }
            finish_csv(writer)?
        }
    })
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Message {
        code: 1,
        text: format!("csv error: {e}"),
    }
}

fn finish_csv(writer: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = writer.into_inner().map_err(|e| CliError::Message {
        code: 1,
        text: format!("csv error: {e}"),
    })?;
    String::from_utf8(bytes).map_err(|e| CliError::Message {
        code: 1,
        text: format!("csv produced invalid utf-8: {e}"),
    })
}

fn rational_text(r: &num::rational::BigRational) -> String {
    let approx = r.to_f64().map(|x| format!("{x:.6}")).unwrap_or_else(|| "?".into());
    format!("{}/{} (approximately {approx})", r.numer(), r.denom())
}

fn cmd_moments(
    d: usize,
    n: u64,
    budget_halfwords: u64,
    format: Format,
) -> Result<String, CliError> {
    let report: MomentReport = census::moment_with_budget(d, n, budget_halfwords)?;
    Ok(match format {
        Format::Text => format!(
            "d: {}\nn: {}\nmoment: {}\nlimit: {}\nlower envelope: {}\nupper envelope: {}\nlower bound applies: {}\n",
            report.d,
            report.n,
            rational_text(&report.moment),
            report.limit,
            rational_text(&report.lower_envelope),
            rational_text(&report.upper_envelope),
            report.lower_bound_applies(),
        ),
        Format::Json => {
            let rational = |r: &num::rational::BigRational| {
                json!({
                    "num": r.numer().to_string(),
                    "den": r.denom().to_string(),
                    "approx": r.to_f64(),
                })
            };
            let doc = json!({
                "schema_version": 1,
                "kind": "moment",
                "d": report.d,
                "n": report.n,
                "moment": rational(&report.moment),
                "limit": report.limit.to_string(),
                "lower_envelope": rational(&report.lower_envelope),
                "upper_envelope": rational(&report.upper_envelope),
                "lower_bound_applies": report.lower_bound_applies(),
            });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer
                .write_record([
                    "d",
                    "n",
                    "moment_num",
                    "moment_den",
                    "lower_num",
                    "lower_den",
                    "upper_num",
                    "upper_den",
                ])
                .map_err(csv_error)?;
            writer
                .write_record([
                    report.d.to_string(),
                    report.n.to_string(),
                    report.moment.numer().to_string(),
                    report.moment.denom().to_string(),
                    report.lower_envelope.numer().to_string(),
                    report.lower_envelope.denom().to_string(),
                    report.upper_envelope.numer().to_string(),
                    report.upper_envelope.denom().to_string(),
                ])
                .map_err(csv_error)?;
            finish_csv(writer)?
        }
    })
}

fn cmd_bounds(d: usize, n: u64, format: Format) -> Result<String, CliError> {
    let (lower, upper) = census::sandwich_bounds(d, n)?;
    Ok(match format {
        Format::Text => format!("d: {d}\nn: {n}\nlower: {lower}\nupper: {upper}\n"),
        Format::Json => {
            let doc = json!({
                "schema_version": 1,
                "kind": "bounds",
                "d": d,
                "n": n,
                "lower": lower.to_string(),
                "upper": upper.to_string(),
            });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer
                .write_record(["d", "n", "lower", "upper"])
                .map_err(csv_error)?;
            writer
                .write_record([
                    d.to_string(),
                    n.to_string(),
                    lower.to_string(),
                    upper.to_string(),
                ])
                .map_err(csv_error)?;
            finish_csv(writer)?
        }
    })
}

fn cmd_confluence(
    kind: ReductionKind,
    max_len: usize,
    max_index: u64,
    format: Format,
) -> Result<String, CliError> {
    let report: ConfluenceReport = rewrite::check_local_confluence(kind, max_len, max_index);
    Ok(match format {
        Format::Text => {
            let mut out = format!(
                "relation: {}\nmax length: {}\nmax index: {}\nwords checked: {}\ndivergent pairs joined: {}\n{} counterexamples\n",
                report.kind,
                report.max_len,
                report.max_index,
                report.words_checked,
                report.divergent_pairs,
                report.counterexamples.len(),
            );
            for w in &report.counterexamples {
                out.push_str(&format!("counterexample: {}\n", format_word(w)));
            }
            out
        }
        Format::Json => {
            let doc = json!({
                "schema_version": 1,
                "kind": "confluence",
                "relation": report.kind.to_string(),
                "max_len": report.max_len,
                "max_index": report.max_index,
                "words_checked": report.words_checked,
                "divergent_pairs": report.divergent_pairs,
                "counterexamples": report
                    .counterexamples
                    .iter()
                    .map(format_word)
                    .collect::<Vec<_>>(),
            });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer
                .write_record([
                    "relation",
                    "max_len",
                    "max_index",
                    "words_checked",
                    "divergent_pairs",
                    "counterexamples",
                ])
                .map_err(csv_error)?;
            writer
                .write_record([
                    report.kind.to_string(),
                    report.max_len.to_string(),
                    report.max_index.to_string(),
                    report.words_checked.to_string(),
                    report.divergent_pairs.to_string(),
                    report.counterexamples.len().to_string(),
                ])
                .map_err(csv_error)?;
            finish_csv(writer)?
        }
    })
}
