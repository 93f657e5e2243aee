//! Command-line front end. Every subcommand loads its inputs, calls one
//! library operation and writes the result; no numerics live here.
//!
//! Exit status is 0 on success, 2 on usage errors and 1 on data or
//! processing errors. Progress goes to standard error as one
//! `event=... key=value` line per step.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};

use crate::corpus::{load_corpus, load_tagged_corpus, write_tagged, TaggedSentence, Vocabulary};
use crate::embedding::{corpus_to_characters, train_embeddings, Architecture, EmbeddingSpace, TrainConfig, VectorSource};
use crate::error::{Error, Result};
use crate::eval::{decode_corpus_spans, eval_similarity, load_judgements, span_prf};
use crate::morphsim::{build_pairs, load_thesaurus, train_perceptron, SimilarityModel};
use crate::revise::{build_combined_space, CombinedSpaceConfig};
use crate::sememe::{build_sememe_space, hownet_vector, parse_lexicon, HownetSource, SememeLexicon};
use crate::tagger::{FeatureSources, FeatureSpec, LabelScheme, TaggerModel, TrainParams};
use crate::textio;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "sememevec", version, about = "Sememe- and morphology-enhanced word vectors and tagging")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train word vectors on a segmented corpus.
    TrainEmbeddings(TrainEmbeddingsArgs),
    /// Train character vectors on the characters of a segmented corpus.
    TrainCharEmbeddings(TrainEmbeddingsArgs),
    /// Train a joint word and sememe space over sememe-replaced corpus copies.
    BuildSememeSpace(BuildSememeSpaceArgs),
    /// Sum sememe vectors into word vectors.
    HownetVector(HownetVectorArgs),
    /// Fit the morphological similarity perceptron on thesaurus pairs.
    TrainSimmodel(TrainSimmodelArgs),
    /// Revise rare and unseen word vectors into a combined space.
    Revise(ReviseArgs),
    /// Train the logistic-regression tagger.
    TrainTagger(TrainTaggerArgs),
    /// Tag a segmented corpus.
    Tag(TagArgs),
    /// Spearman correlation of cosine similarities with human judgements.
    EvalSim(EvalSimArgs),
    /// Exact-span precision, recall and F of predicted tags.
    EvalNer(EvalNerArgs),
}

#[derive(Debug, Args)]
struct TrainOptions {
    #[arg(long, default_value_t = 100)]
    dim: usize,
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long, default_value_t = 5)]
    negative: usize,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long = "lr", default_value_t = 0.025)]
    learning_rate: f64,
    #[arg(long, default_value_t = 1)]
    min_count: u64,
    #[arg(long)]
    subsample: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// skipgram or cbow
    #[arg(long, default_value = "skipgram")]
    arch: Architecture,
}

impl TrainOptions {
    fn config(&self) -> TrainConfig {
        TrainConfig {
            dim: self.dim,
            window: self.window,
            negative: self.negative,
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            min_count: self.min_count,
            subsample: self.subsample,
            seed: self.seed,
            architecture: self.arch,
        }
    }
}

#[derive(Debug, Args)]
struct TrainEmbeddingsArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    train: TrainOptions,
}

#[derive(Debug, Args)]
struct BuildSememeSpaceArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 3)]
    max_rank: usize,
    #[command(flatten)]
    train: TrainOptions,
}

#[derive(Debug, Args)]
struct HownetVectorArgs {
    #[arg(long)]
    lexicon: PathBuf,
    /// Sememe space from build-sememe-space.
    #[arg(long)]
    space: PathBuf,
    /// Words to compose; all lexicon words when omitted.
    #[arg(long = "word")]
    words: Vec<String>,
    /// Output vector file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TrainSimmodelArgs {
    #[arg(long)]
    thesaurus: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 200)]
    n_pos: usize,
    #[arg(long, default_value_t = 200)]
    n_neg: usize,
    #[arg(long, default_value_t = 20)]
    epochs: usize,
    #[arg(long = "lr", default_value_t = 0.1)]
    learning_rate: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ReviseArgs {
    /// Original word space.
    #[arg(long)]
    space: PathBuf,
    /// Corpus the original space was trained on (term frequencies, candidates).
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = 1)]
    min_count: u64,
    #[arg(long)]
    simmodel: PathBuf,
    /// Extra segmented files whose tokens are revised.
    #[arg(long = "targets")]
    targets: Vec<PathBuf>,
    /// Extra tagged files whose tokens are revised.
    #[arg(long = "tagged-targets")]
    tagged_targets: Vec<PathBuf>,
    #[arg(long, default_value_t = 2)]
    rare_threshold: u64,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Space for the context window (combined or original).
    #[arg(long)]
    context: Option<PathBuf>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    sememe_space: Option<PathBuf>,
    #[arg(long)]
    char_space: Option<PathBuf>,
}

struct LoadedSources {
    context: Option<EmbeddingSpace>,
    lexicon: Option<SememeLexicon>,
    sememe: Option<EmbeddingSpace>,
    chars: Option<EmbeddingSpace>,
}

impl SourceArgs {
    fn load(&self) -> Result<LoadedSources> {
        let space = |p: &Option<PathBuf>| p.as_deref().map(EmbeddingSpace::load).transpose();
        Ok(LoadedSources {
            context: space(&self.context)?,
            lexicon: self.lexicon.as_deref().map(parse_lexicon).transpose()?,
            sememe: space(&self.sememe_space)?,
            chars: space(&self.char_space)?,
        })
    }
}

impl LoadedSources {
    fn hownet(&self) -> Option<HownetSource<'_>> {
        Some(HownetSource {
            lexicon: self.lexicon.as_ref()?,
            space: self.sememe.as_ref()?,
        })
    }

    fn dim(&self) -> Option<usize> {
        self.context
            .as_ref()
            .or(self.sememe.as_ref())
            .or(self.chars.as_ref())
            .map(EmbeddingSpace::dim)
    }
}

fn feature_sources<'a>(loaded: &'a LoadedSources, hownet: &'a Option<HownetSource<'a>>) -> FeatureSources<'a> {
    FeatureSources {
        context: loaded.context.as_ref().map(|s| s as &dyn VectorSource),
        hownet: hownet.as_ref().map(|h| h as &dyn VectorSource),
        chars: loaded.chars.as_ref().map(|s| s as &dyn VectorSource),
    }
}

#[derive(Debug, Args)]
struct TrainTaggerArgs {
    #[arg(long)]
    train: PathBuf,
    #[command(flatten)]
    sources: SourceArgs,
    /// Comma-separated feature components: context, hownet, char.
    #[arg(long, default_value = "context,hownet,char", value_delimiter = ',')]
    components: Vec<String>,
    /// Comma-separated entity types; inferred from the training labels when omitted.
    #[arg(long, value_delimiter = ',')]
    types: Vec<String>,
    #[arg(long, default_value_t = 2)]
    radius: usize,
    #[arg(long, default_value_t = TrainParams::default().lambda)]
    lambda: f64,
    #[arg(long, default_value_t = TrainParams::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = TrainParams::default().max_iter)]
    max_iter: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TagArgs {
    #[arg(long)]
    model: PathBuf,
    /// Segmented corpus to tag.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    sources: SourceArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalSimArgs {
    /// Word space, or the sememe space when --lexicon is given.
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    judgements: PathBuf,
    /// Score with sememe-sum vectors built from this lexicon.
    #[arg(long)]
    lexicon: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalNerArgs {
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    pred: PathBuf,
}

fn progress(event: &str, fields: &[(&str, String)]) {
    let mut line = format!("event={event}");
    for (k, v) in fields {
        line.push_str(&format!(" {k}={v}"));
    }
    eprintln!("{line}");
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => textio::write_file(p, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn train_embeddings_cmd(args: &TrainEmbeddingsArgs, characters: bool) -> Result<()> {
    let mut corpus = load_corpus(&args.corpus)?;
    if characters {
        corpus = corpus_to_characters(&corpus);
    }
    progress(
        "corpus_loaded",
        &[("sentences", corpus.len().to_string()), ("tokens", corpus.token_count().to_string())],
    );
    let mut space = train_embeddings(&corpus, &args.train.config())?;
    if characters {
        space.set_name("character");
    }
    progress("trained", &[("vectors", space.len().to_string()), ("dim", space.dim().to_string())]);
    space.save(&args.out)
}

fn build_sememe_space_cmd(args: &BuildSememeSpaceArgs) -> Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let lexicon = parse_lexicon(&args.lexicon)?;
    progress(
        "inputs_loaded",
        &[("sentences", corpus.len().to_string()), ("lexicon_entries", lexicon.len().to_string())],
    );
    let space = build_sememe_space(&corpus, &lexicon, &args.train.config(), args.max_rank)?;
    progress("trained", &[("vectors", space.len().to_string())]);
    space.save(&args.out)
}

fn hownet_vector_cmd(args: &HownetVectorArgs) -> Result<()> {
    let lexicon = parse_lexicon(&args.lexicon)?;
    let space = EmbeddingSpace::load(&args.space)?;
    let words: Vec<&str> = if args.words.is_empty() {
        lexicon.words()
    } else {
        args.words.iter().map(String::as_str).collect()
    };
    let mut out = EmbeddingSpace::new("hownet", space.dim());
    for w in &words {
        match hownet_vector(w, &lexicon, &space) {
            Some(v) => out.insert(*w, &v),
            None => progress("absent", &[("word", (*w).to_owned())]),
        }
    }
    progress("composed", &[("requested", words.len().to_string()), ("vectors", out.len().to_string())]);
    emit(args.out.as_deref(), &out.to_text())
}

fn train_simmodel_cmd(args: &TrainSimmodelArgs) -> Result<()> {
    if args.learning_rate.is_nan() || args.learning_rate <= 0.0 {
        return Err(Error::Config("learning rate must be positive".into()));
    }
    let thesaurus = load_thesaurus(&args.thesaurus)?;
    let pairs = build_pairs(&thesaurus, args.n_pos, args.n_neg, args.seed)?;
    let model = train_perceptron(&pairs, args.epochs, args.learning_rate);
    let accuracy = pairs
        .iter()
        .filter(|p| model.classify(&p.word_a, &p.word_b) == p.label)
        .count() as f64
        / pairs.len().max(1) as f64;
    progress("trained", &[("pairs", pairs.len().to_string()), ("train_accuracy", format!("{accuracy:.4}"))]);
    model.save(&args.out)
}

fn revise_cmd(args: &ReviseArgs) -> Result<()> {
    let original = EmbeddingSpace::load(&args.space)?;
    let corpus = load_corpus(&args.corpus)?;
    let vocab = Vocabulary::build(&corpus, args.min_count.max(1));
    let model = SimilarityModel::load(&args.simmodel)?;

    let mut targets: BTreeSet<String> = vocab.tokens().iter().cloned().collect();
    for p in &args.targets {
        targets.extend(load_corpus(p)?.tokens().map(str::to_owned));
    }
    for p in &args.tagged_targets {
        targets.extend(load_tagged_corpus(p)?.into_iter().flat_map(|s| s.tokens));
    }
    let config = CombinedSpaceConfig {
        rare_tf_threshold: args.rare_threshold,
        k: args.k,
    };
    if config.k == 0 {
        return Err(Error::Config("k must be positive".into()));
    }
    let combined = build_combined_space(targets.iter().map(String::as_str), &original, &model, &vocab, &config);
    progress("revised", &[("targets", targets.len().to_string()), ("vectors", combined.len().to_string())]);
    combined.save(&args.out)
}

fn parse_components(components: &[String], radius: usize, dim: usize) -> Result<FeatureSpec> {
    let mut spec = FeatureSpec {
        radius,
        context: false,
        hownet: false,
        last_char: false,
        dim,
    };
    for c in components {
        match c.trim() {
            "context" => spec.context = true,
            "hownet" => spec.hownet = true,
            "char" | "last-char" => spec.last_char = true,
            "" => {}
            other => return Err(Error::Config(format!("unknown feature component {other:?}"))),
        }
    }
    Ok(spec)
}

fn train_tagger_cmd(args: &TrainTaggerArgs) -> Result<()> {
    let train = load_tagged_corpus(&args.train)?;
    let loaded = args.sources.load()?;
    let dim = loaded
        .dim()
        .ok_or_else(|| Error::Config("no feature space given".into()))?;
    let spec = parse_components(&args.components, args.radius, dim)?;
    let hownet = loaded.hownet();
    let sources = feature_sources(&loaded, &hownet);
    let scheme = if args.types.is_empty() {
        LabelScheme::infer(&train)?
    } else {
        LabelScheme::new(&args.types)
    };
    let params = TrainParams {
        lambda: args.lambda,
        tol: args.tol,
        max_iter: args.max_iter,
    };
    progress(
        "training",
        &[("sentences", train.len().to_string()), ("features", spec.feature_dim().to_string()), ("labels", scheme.len().to_string())],
    );
    let (model, report) = TaggerModel::train(&train, scheme, spec, &sources, &params)?;
    progress(
        "trained",
        &[
            ("iterations", report.iterations.to_string()),
            ("converged", report.converged.to_string()),
            ("loss", format!("{:.6}", report.losses.last().copied().unwrap_or(f64::NAN))),
        ],
    );
    model.save(&args.out)
}

fn tag_cmd(args: &TagArgs) -> Result<()> {
    let model = TaggerModel::load(&args.model)?;
    let corpus = load_corpus(&args.input)?;
    let loaded = args.sources.load()?;
    let hownet = loaded.hownet();
    let sources = feature_sources(&loaded, &hownet);
    sources.check(&model.spec)?;
    let tagged: Vec<TaggedSentence> = corpus
        .sentences()
        .iter()
        .map(|s| TaggedSentence::new(s.clone(), model.tag_sentence(s, &sources)))
        .collect();
    progress("tagged", &[("sentences", tagged.len().to_string())]);
    emit(args.out.as_deref(), &write_tagged(&tagged))
}

fn eval_sim_cmd(args: &EvalSimArgs) -> Result<()> {
    let space = EmbeddingSpace::load(&args.space)?;
    let judgements = load_judgements(&args.judgements)?;
    let report = match &args.lexicon {
        Some(p) => {
            let lexicon = parse_lexicon(p)?;
            eval_similarity(
                &HownetSource {
                    lexicon: &lexicon,
                    space: &space,
                },
                &judgements,
            )?
        }
        None => eval_similarity(&space, &judgements)?,
    };
    println!(
        "spearman {:.4}\ncoverage {:.4}\nscored {}",
        report.spearman, report.coverage, report.scored
    );
    Ok(())
}

fn eval_ner_cmd(args: &EvalNerArgs) -> Result<()> {
    let gold = load_tagged_corpus(&args.gold)?;
    let pred = load_tagged_corpus(&args.pred)?;
    if gold.len() != pred.len() || gold.iter().zip(&pred).any(|(g, p)| g.tokens != p.tokens) {
        return Err(Error::Evaluation("gold and predicted files have different tokens".into()));
    }
    let labels = |s: &[TaggedSentence]| s.iter().map(|t| t.labels.clone()).collect::<Vec<_>>();
    let prf = span_prf(&decode_corpus_spans(&labels(&gold)), &decode_corpus_spans(&labels(&pred)));
    println!("P R F\n{prf}");
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::TrainEmbeddings(a) => train_embeddings_cmd(a, false),
        Command::TrainCharEmbeddings(a) => train_embeddings_cmd(a, true),
        Command::BuildSememeSpace(a) => build_sememe_space_cmd(a),
        Command::HownetVector(a) => hownet_vector_cmd(a),
        Command::TrainSimmodel(a) => train_simmodel_cmd(a),
        Command::Revise(a) => revise_cmd(a),
        Command::TrainTagger(a) => train_tagger_cmd(a),
        Command::Tag(a) => tag_cmd(a),
        Command::EvalSim(a) => eval_sim_cmd(a),
        Command::EvalNer(a) => eval_ner_cmd(a),
    }
}

/// Splices `key=value` lines from a `--config FILE` into the argument list
/// as `--key value`, skipping keys already given on the command line and
/// keys the chosen subcommand does not accept.
fn apply_config_file(args: Vec<OsString>) -> std::result::Result<Vec<OsString>, String> {
    let mut out = Vec::with_capacity(args.len());
    let mut config_path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            config_path = Some(it.next().ok_or("--config needs a file")?);
        } else if let Some(p) = s.strip_prefix("--config=") {
            config_path = Some(p.into());
        } else {
            out.push(a);
        }
    }
    let Some(path) = config_path else {
        return Ok(out);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", Path::new(&path).display()))?;

    let command = Cli::command();
    let Some(sub) = out
        .iter()
        .skip(1)
        .find_map(|a| command.find_subcommand(a.to_string_lossy().as_ref()))
    else {
        return Ok(out);
    };
    let given: BTreeSet<String> = out
        .iter()
        .filter_map(|a| a.to_str())
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_owned())
        .collect();

    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", n + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if given.contains(&key) {
            continue;
        }
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            continue;
        };
        if arg.get_action().takes_values() {
            out.push(format!("--{key}").into());
            out.push(value.into());
        } else if value == "true" {
            out.push(format!("--{key}").into());
        }
    }
    Ok(out)
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = match apply_config_file(args.into_iter().map(Into::into).collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        assert_eq!(run(["sememevec", "frobnicate"]), 2);
        assert_eq!(run(["sememevec"]), 2);
    }

    #[test]
    fn components_parse() {
        let spec = parse_components(&["context".into(), "char".into()], 2, 10).unwrap();
        assert!(spec.context && spec.last_char && !spec.hownet);
        assert!(parse_components(&["bogus".into()], 2, 10).is_err());
    }
}
