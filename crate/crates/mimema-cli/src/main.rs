//! Command-line front end: line-oriented subcommands over the toolkit.
//!
//! Every subcommand reads one token or record per line (from a file argument
//! or stdin) and writes one result per line. Per-line failures go to stderr
//! with their line number and processing continues unless `--strict`.
//! Exit status: 0 on success, 1 on input error, 2 on usage error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mimema::lexicon::{build_lexicon, BuildOptions, FrequencyWordList, Generator, Lexicon};
use mimema::metric::{
    corpus_tr_message_averaged, corpus_tr_with_options, edit_cost_with_options, MetricOptions,
};
use mimema::phonetic::{phonetize, RuleCatalogue, DEFAULT_VARIANT_CAP};
use mimema::rebus::{build_rebus_model, score_rebus, RebusParams};
use mimema::simulator::{
    corpus_to_tsv, evaluate, generate_corpus, parse_corpus, standard_bundles, ConfusionModel,
    CorpusSpec,
};
use mimema::skeleton::skeletonize;
use mimema::text::{OnsetSet, Syllabifier};
use mimema::{Report, Weight};

#[derive(Parser)]
#[command(name = "mimema", version, about = "French SMS shorthand toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArg {
    /// Input file; reads standard input when omitted.
    input: Option<PathBuf>,
    /// Abort on the first per-line error instead of continuing.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct OnsetArg {
    /// Syllable-onset list (one cluster per line); built-in French set by
    /// default.
    #[arg(long)]
    onsets: Option<PathBuf>,
}

#[derive(Args)]
struct RulesArg {
    /// Phonetic rule catalogue TSV; built-in catalogue by default.
    #[arg(long)]
    rules: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Consonant skeleton of each input word (salut -> slt).
    Skeletonize {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        onsets: OnsetArg,
    },
    /// Phonetic variants of each input word, comma-separated.
    Phonetize {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        rules: RulesArg,
        /// Print each variant on its own line.
        #[arg(long)]
        one_per_line: bool,
        /// Bound on the number of variants per word.
        #[arg(long, default_value_t = DEFAULT_VARIANT_CAP)]
        variant_cap: usize,
    },
    /// Syllable segmentation of each input word, separated by middle dots.
    Syllabify {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        onsets: OnsetArg,
    },
    /// Rebus plausibility log-score of each input token.
    RebusScore {
        #[command(flatten)]
        input: InputArg,
        /// Rebus parameter file (key = value lines).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Build an abbreviation lexicon from a word-frequency list.
    BuildLexicon {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        onsets: OnsetArg,
        #[command(flatten)]
        rules: RulesArg,
        /// Comma-separated generators to run.
        #[arg(long, default_value = "skeleton,phonetic")]
        generators: String,
        /// Bound on phonetic variants per word.
        #[arg(long, default_value_t = DEFAULT_VARIANT_CAP)]
        variant_cap: usize,
    },
    /// Expand abbreviated forms against a lexicon file.
    Lookup {
        #[command(flatten)]
        input: InputArg,
        /// Lexicon TSV produced by build-lexicon.
        #[arg(long)]
        lexicon: PathBuf,
    },
    /// Character recognition rate of `label<TAB>hypothesis` lines.
    Tr {
        #[command(flatten)]
        input: InputArg,
        /// Fold case before comparing.
        #[arg(long)]
        fold_case: bool,
        /// Strip diacritics before comparing.
        #[arg(long)]
        fold_diacritics: bool,
        /// Aggregate as the mean of per-line rates instead of
        /// character-weighted.
        #[arg(long)]
        message_averaged: bool,
    },
    /// Corrupt a corpus and compare resource bundles.
    Simulate {
        /// Corpus TSV (`category<TAB>label`); generated synthetically when
        /// omitted.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Tokens per category for the synthetic corpus.
        #[arg(long, default_value_t = 300)]
        per_category: usize,
        /// Word-frequency list for the developed resources; bundled list by
        /// default.
        #[arg(long)]
        words: Option<PathBuf>,
        /// Confusion-model config; calibrated default model otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Seed for corpus generation and corruption.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also print the corpus TSV before the table.
        #[arg(long)]
        emit_corpus: bool,
        #[command(flatten)]
        onsets: OnsetArg,
        #[command(flatten)]
        rules: RulesArg,
    },
    /// Print the phonetic rule catalogue as TSV.
    DumpRules {
        #[command(flatten)]
        rules: RulesArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("mimema: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(path) => {
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
        }
        None => {
            let mut text = String::new();
            io::stdin()
                .lock()
                .read_to_string(&mut text)
                .context("cannot read standard input")?;
            Ok(text)
        }
    }
}

fn load_syllabifier(arg: &OnsetArg) -> Result<Syllabifier> {
    match &arg.onsets {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            Ok(Syllabifier::new(OnsetSet::parse(&text)?))
        }
        None => Ok(Syllabifier::french()),
    }
}

fn load_catalogue(arg: &RulesArg) -> Result<RuleCatalogue> {
    match &arg.rules {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            Ok(RuleCatalogue::from_tsv(&text)?)
        }
        None => Ok(RuleCatalogue::builtin()),
    }
}

/// Run `process` over every line, writing one output line per input line.
/// Failed lines are diagnosed on stderr with their number.
fn for_each_line<F>(input: &InputArg, mut process: F) -> Result<()>
where
    F: FnMut(&str) -> Result<String>,
{
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for (idx, line) in read_input(&input.input)?.lines().enumerate() {
        match process(line) {
            Ok(result) => writeln!(out, "{result}")?,
            Err(err) => {
                eprintln!("line {}: {err:#}", idx + 1);
                if input.strict {
                    bail!("aborted at line {} (--strict)", idx + 1);
                }
            }
        }
    }
    Ok(())
}

/// Generator subcommands lowercase their input and only accept letter
/// tokens.
fn letter_token(line: &str) -> Result<String> {
    let token = line.trim().to_lowercase();
    if token.is_empty() {
        bail!("empty token");
    }
    if token.chars().any(|c| !c.is_alphabetic()) {
        bail!("not a letter token: {token:?}");
    }
    Ok(token)
}

fn parse_generators(spec: &str) -> Result<Vec<Generator>> {
    let mut generators = Vec::new();
    if spec.trim().is_empty() {
        return Ok(generators);
    }
    for name in spec.split(',') {
        let generator: Generator = name
            .trim()
            .parse()
            .map_err(|_| anyhow!("unknown generator {name:?}"))?;
        if !generators.contains(&generator) {
            generators.push(generator);
        }
    }
    Ok(generators)
}

fn load_word_list(path: &Path) -> Result<FrequencyWordList> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(FrequencyWordList::parse(&text)?)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Skeletonize { input, onsets } => {
            let syllabifier = load_syllabifier(&onsets)?;
            for_each_line(&input, |line| {
                let token = letter_token(line)?;
                Ok(skeletonize(&token, &syllabifier)?.skeleton().to_string())
            })
        }
        Command::Phonetize {
            input,
            rules,
            one_per_line,
            variant_cap,
        } => {
            let catalogue = load_catalogue(&rules)?;
            for_each_line(&input, |line| {
                let token = letter_token(line)?;
                let variants = phonetize(&token, &catalogue, variant_cap);
                let forms: Vec<&str> = variants.forms().collect();
                if one_per_line {
                    Ok(forms.join("\n"))
                } else {
                    Ok(forms.join(","))
                }
            })
        }
        Command::Syllabify { input, onsets } => {
            let syllabifier = load_syllabifier(&onsets)?;
            for_each_line(&input, |line| {
                let token = letter_token(line)?;
                let word = syllabifier.syllabify(&token)?;
                Ok(word.syllable_strings().join("·"))
            })
        }
        Command::RebusScore { input, config } => {
            let params = match &config {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .with_context(|| format!("cannot read {}", path.display()))?;
                    RebusParams::from_config_str(&text)?
                }
                None => RebusParams::<Weight>::default(),
            };
            let model = build_rebus_model(params)?;
            for_each_line(&input, |line| {
                let token = line.trim().to_lowercase();
                match score_rebus(&model, &token)? {
                    Some(score) => Ok(score.to_string()),
                    None => Ok("reject".to_string()),
                }
            })
        }
        Command::BuildLexicon {
            input,
            onsets,
            rules,
            generators,
            variant_cap,
        } => {
            let syllabifier = load_syllabifier(&onsets)?;
            let catalogue = load_catalogue(&rules)?;
            let generators = parse_generators(&generators)?;
            let words = FrequencyWordList::parse(&read_input(&input.input)?)?;
            let lexicon = build_lexicon(
                &words,
                &BuildOptions {
                    generators,
                    variant_cap,
                },
                &syllabifier,
                &catalogue,
            )?;
            print!("{}", lexicon.serialize());
            Ok(())
        }
        Command::Lookup { input, lexicon } => {
            let text = fs::read_to_string(&lexicon)
                .with_context(|| format!("cannot read {}", lexicon.display()))?;
            let lexicon = Lexicon::deserialize(&text)?;
            for_each_line(&input, |line| {
                let form = line.trim().to_lowercase();
                if form.is_empty() {
                    bail!("empty token");
                }
                let words: Vec<String> = lexicon
                    .lookup(&form)
                    .into_iter()
                    .map(|(word, _)| word)
                    .collect();
                Ok(words.join(","))
            })
        }
        Command::Tr {
            input,
            fold_case,
            fold_diacritics,
            message_averaged,
        } => {
            let options = MetricOptions {
                fold_case,
                fold_diacritics,
            };
            let mut pairs: Vec<(String, String)> = Vec::new();
            let stdout = io::stdout();
            let mut out = stdout.lock();
            for (idx, line) in read_input(&input.input)?.lines().enumerate() {
                let result = line
                    .split_once('\t')
                    .ok_or_else(|| anyhow!("expected label<TAB>hypothesis"))
                    .and_then(|(label, hyp)| {
                        let report: Report = edit_cost_with_options(label, hyp, &options)?;
                        Ok((label.to_string(), hyp.to_string(), report))
                    });
                match result {
                    Ok((label, hyp, report)) => {
                        writeln!(out, "{:.1}", report.tr)?;
                        pairs.push((label, hyp));
                    }
                    Err(err) => {
                        eprintln!("line {}: {err:#}", idx + 1);
                        if input.strict {
                            bail!("aborted at line {} (--strict)", idx + 1);
                        }
                    }
                }
            }
            if pairs.is_empty() {
                bail!("no valid label/hypothesis pairs");
            }
            let total: Weight = if message_averaged {
                corpus_tr_message_averaged(&pairs, &options)?
            } else {
                corpus_tr_with_options(&pairs, &options)?
            };
            writeln!(out, "total\t{total:.1}")?;
            Ok(())
        }
        Command::Simulate {
            corpus,
            per_category,
            words,
            config,
            seed,
            emit_corpus,
            onsets,
            rules,
        } => {
            let syllabifier = load_syllabifier(&onsets)?;
            let catalogue = load_catalogue(&rules)?;
            let words = match &words {
                Some(path) => load_word_list(path)?,
                None => FrequencyWordList::bundled(),
            };
            let corpus = match &corpus {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .with_context(|| format!("cannot read {}", path.display()))?;
                    parse_corpus(&text)?
                }
                None => generate_corpus(
                    &words,
                    &CorpusSpec { per_category, seed },
                    &syllabifier,
                    &catalogue,
                )?,
            };
            let model = match &config {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .with_context(|| format!("cannot read {}", path.display()))?;
                    ConfusionModel::from_config_str(&text)?.with_seed(seed)
                }
                None => ConfusionModel::default_french(seed),
            };
            let bundles = standard_bundles(&words, &corpus, &syllabifier, &catalogue)?;
            let table = evaluate(&corpus, &model, &bundles)?;
            let stdout = io::stdout();
            let mut out = stdout.lock();
            if emit_corpus {
                write!(out, "{}", corpus_to_tsv(&corpus))?;
                writeln!(out)?;
            }
            write!(out, "{}", table.to_tsv())?;
            writeln!(out)?;
            write!(out, "{}", table.summary())?;
            Ok(())
        }
        Command::DumpRules { rules } => {
            let catalogue = load_catalogue(&rules)?;
            print!("{}", catalogue.to_tsv());
            Ok(())
        }
    }
}
