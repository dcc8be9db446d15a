//! `lexshift`: staged and end-to-end domain polarity-change detection.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lexshift::classifier::{predictions_tsv, LabeledFormat};
use lexshift::collection::SentimentWordSet;
use lexshift::config::{Baseline, DetectMode, PipelineConfig};
use lexshift::corpus::InputFormat;
use lexshift::correlation::{triples_from_tsv, triples_tsv};
use lexshift::detection::{detect_lci, lci_rank, lci_tsv};
use lexshift::error::read_file;
use lexshift::inference::{beliefs_from_tsv, beliefs_tsv};
use lexshift::lexicon::{LexiconDelta, SentimentLexicon};
use lexshift::mrf::SentimentGraph;
use lexshift::pipeline::{self, PipelineInput};
use lexshift::{Error, ErrorClass, Result};

#[derive(Parser)]
#[command(
    name = "lexshift",
    version,
    about = "Detect lexicon words whose sentiment polarity changes in a domain corpus"
)]
struct Cli {
    /// Pipeline config (TOML). Keys left out keep their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LexiconArgs {
    /// Positive word list, one entry per line.
    #[arg(long, value_name = "PATH")]
    positive: PathBuf,
    /// Negative word list, one entry per line.
    #[arg(long, value_name = "PATH")]
    negative: PathBuf,
}

#[derive(Args)]
struct CorpusArgs {
    /// Domain corpus.
    #[arg(long, value_name = "PATH")]
    corpus: PathBuf,
    /// Corpus layout; overrides `input_format` from the config.
    #[arg(long, value_name = "raw|tagged")]
    format: Option<InputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Collect candidate sentiment words with their priors.
    Collect {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        lexicon: LexiconArgs,
        /// Output word table (default stdout).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Extract typed correlation triples between collected words.
    Extract {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        lexicon: LexiconArgs,
        /// Word table written by `collect`.
        #[arg(long, value_name = "PATH")]
        words: PathBuf,
        /// Output file (default stdout).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Build the graph (node and edge tables) from words and triples.
    Graph {
        /// Word table written by `collect`.
        #[arg(long, value_name = "PATH")]
        words: PathBuf,
        /// Triples written by `extract`.
        #[arg(long, value_name = "PATH")]
        triples: PathBuf,
        /// Output node table.
        #[arg(long, value_name = "PATH")]
        nodes_out: PathBuf,
        /// Output edge table.
        #[arg(long, value_name = "PATH")]
        edges_out: PathBuf,
    },
    /// Run belief propagation over a graph.
    Infer {
        /// Node table written by `graph`.
        #[arg(long, value_name = "PATH")]
        nodes: PathBuf,
        /// Edge table written by `graph`.
        #[arg(long, value_name = "PATH")]
        edges: PathBuf,
        /// Iteration cap; overrides `max_iterations`.
        #[arg(long)]
        max_iter: Option<usize>,
        /// L-infinity message change that counts as converged.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Message damping in [0, 1).
        #[arg(long)]
        damping: Option<f64>,
        /// Output beliefs (default stdout).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Where to write the convergence report (JSON).
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
    /// Rank lexicon words and select the polarity corrections.
    Detect {
        #[command(flatten)]
        lexicon: LexiconArgs,
        /// Beliefs written by `infer` (dsg baseline).
        #[arg(long, value_name = "PATH")]
        beliefs: Option<PathBuf>,
        /// Word table written by `collect` (dsg baseline).
        #[arg(long, value_name = "PATH")]
        words: Option<PathBuf>,
        /// Corpus (lci baseline).
        #[arg(long, value_name = "PATH")]
        corpus: Option<PathBuf>,
        /// Corpus layout; overrides `input_format` from the config.
        #[arg(long, value_name = "raw|tagged")]
        format: Option<InputFormat>,
        /// Ranking method; overrides `baseline` from the config.
        #[arg(long, value_name = "dsg|lci")]
        baseline: Option<Baseline>,
        /// Flip the N highest-ranked words.
        #[arg(long, value_name = "N", conflicts_with = "threshold")]
        top_n: Option<usize>,
        /// Flip every word scoring above T.
        #[arg(long, value_name = "T")]
        threshold: Option<f64>,
        /// Output ranking (default stdout).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Where to write the selected corrections.
        #[arg(long, value_name = "PATH")]
        delta_out: Option<PathBuf>,
        /// Inferred polarities of collected words outside the lexicon.
        #[arg(long, value_name = "PATH")]
        nonlexical_out: Option<PathBuf>,
    },
    /// Score sentences with the lexicon classifier.
    Classify {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        lexicon: LexiconArgs,
        /// Corrections to overlay on the lexicon.
        #[arg(long, value_name = "PATH")]
        delta: Option<PathBuf>,
        /// Output file (default stdout).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Compare classifier accuracy before and after the corrections.
    Eval {
        /// Labeled sentences.
        #[arg(long, value_name = "PATH")]
        labeled: PathBuf,
        /// Labeled file layout; overrides `labeled_format` from the config.
        #[arg(long, value_name = "csv|tagged")]
        labeled_format: Option<LabeledFormat>,
        #[command(flatten)]
        lexicon: LexiconArgs,
        /// Corrections written by `detect`.
        #[arg(long, value_name = "PATH")]
        delta: PathBuf,
        /// Only score sentences containing a corrected word.
        #[arg(long)]
        affected_only: bool,
        /// Output file (default stdout).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run every stage and write all artifacts to a directory.
    Run {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        lexicon: LexiconArgs,
        /// Labeled sentences; adds eval.json.
        #[arg(long, value_name = "PATH")]
        labeled: Option<PathBuf>,
        /// Directory for all artifacts (created if missing).
        #[arg(long, value_name = "PATH")]
        out_dir: PathBuf,
    },
}

fn write_output(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, contents).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn load_lexicon(args: &LexiconArgs) -> Result<SentimentLexicon> {
    SentimentLexicon::load(&read_file(&args.positive)?, &read_file(&args.negative)?)
}

fn load_corpus(
    path: &Path,
    lexicon: &SentimentLexicon,
    cfg: &PipelineConfig,
) -> Result<lexshift::corpus::Corpus> {
    pipeline::parse_corpus(&read_file(path)?, lexicon, cfg)
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };

    match cli.command {
        Command::Collect {
            corpus,
            lexicon,
            out,
        } => {
            cfg.input_format = corpus.format.unwrap_or(cfg.input_format);
            let lexicon = load_lexicon(&lexicon)?;
            let corpus = load_corpus(&corpus.corpus, &lexicon, &cfg)?;
            let words = pipeline::collect_words(&corpus, &lexicon, &cfg);
            write_output(out.as_deref(), &words.to_tsv())
        }
        Command::Extract {
            corpus,
            lexicon,
            words,
            out,
        } => {
            cfg.input_format = corpus.format.unwrap_or(cfg.input_format);
            let lexicon = load_lexicon(&lexicon)?;
            let corpus = load_corpus(&corpus.corpus, &lexicon, &cfg)?;
            let words = SentimentWordSet::from_tsv(&read_file(&words)?)?;
            let triples = pipeline::extract(&corpus, &words, &cfg);
            write_output(out.as_deref(), &triples_tsv(&triples))
        }
        Command::Graph {
            words,
            triples,
            nodes_out,
            edges_out,
        } => {
            let words = SentimentWordSet::from_tsv(&read_file(&words)?)?;
            let triples = triples_from_tsv(&read_file(&triples)?)?;
            let graph = pipeline::graph(&words, &triples, &cfg)?;
            write_output(Some(&nodes_out), &graph.nodes_tsv())?;
            write_output(Some(&edges_out), &graph.edges_tsv())
        }
        Command::Infer {
            nodes,
            edges,
            max_iter,
            tolerance,
            damping,
            out,
            report,
        } => {
            cfg.max_iterations = max_iter.unwrap_or(cfg.max_iterations);
            cfg.tolerance = tolerance.unwrap_or(cfg.tolerance);
            cfg.damping = damping.unwrap_or(cfg.damping);
            cfg.validate()?;
            let graph =
                SentimentGraph::from_tsv(&read_file(&nodes)?, &read_file(&edges)?, cfg.graph())?;
            let inference = pipeline::infer(&graph, &cfg)?;
            if let Some(report) = report {
                write_output(Some(&report), &inference.report.to_json())?;
            }
            write_output(out.as_deref(), &beliefs_tsv(&inference.beliefs))
        }
        Command::Detect {
            lexicon,
            beliefs,
            words,
            corpus,
            format,
            baseline,
            top_n,
            threshold,
            out,
            delta_out,
            nonlexical_out,
        } => {
            cfg.input_format = format.unwrap_or(cfg.input_format);
            if let Some(n) = top_n {
                cfg.detect_mode = DetectMode::TopN;
                cfg.top_n = n;
            }
            if let Some(t) = threshold {
                cfg.detect_mode = DetectMode::Threshold;
                cfg.threshold = t;
            }
            cfg.baseline = baseline.unwrap_or(cfg.baseline);
            cfg.validate()?;
            let lexicon = load_lexicon(&lexicon)?;
            let (ranking, delta, nonlexical) = match cfg.baseline {
                Baseline::Dsg => {
                    let (Some(beliefs), Some(words)) = (beliefs, words) else {
                        return Err(Error::Config(
                            "the dsg baseline needs --beliefs and --words".into(),
                        ));
                    };
                    let beliefs = beliefs_from_tsv(&read_file(&beliefs)?)?;
                    let words = SentimentWordSet::from_tsv(&read_file(&words)?)?;
                    let d = pipeline::detect_changes(&lexicon, &beliefs, &words, None, &cfg)?;
                    (d.ranked, d.delta, Some(d.nonlexical))
                }
                Baseline::Lci => {
                    let Some(corpus) = corpus else {
                        return Err(Error::Config("the lci baseline needs --corpus".into()));
                    };
                    let corpus = load_corpus(&corpus, &lexicon, &cfg)?;
                    let scores = lci_rank(&corpus, &lexicon, &cfg.classifier());
                    let delta = detect_lci(&lexicon, &scores, cfg.selection())?;
                    (lci_tsv(&scores), delta, None)
                }
            };
            if let Some(path) = delta_out {
                write_output(Some(&path), &delta.to_tsv(&lexicon))?;
            }
            if let (Some(path), Some(text)) = (nonlexical_out, nonlexical) {
                write_output(Some(&path), &text)?;
            }
            write_output(out.as_deref(), &ranking)
        }
        Command::Classify {
            corpus,
            lexicon,
            delta,
            out,
        } => {
            cfg.input_format = corpus.format.unwrap_or(cfg.input_format);
            let base = load_lexicon(&lexicon)?;
            let corpus = load_corpus(&corpus.corpus, &base, &cfg)?;
            let lexicon = match delta {
                Some(path) => {
                    base.apply_delta(&LexiconDelta::from_tsv(&read_file(&path)?, &base)?)?
                }
                None => base,
            };
            write_output(
                out.as_deref(),
                &predictions_tsv(corpus.sentences(), &lexicon, &cfg.classifier()),
            )
        }
        Command::Eval {
            labeled,
            labeled_format,
            lexicon,
            delta,
            affected_only,
            out,
        } => {
            cfg.labeled_format = labeled_format.unwrap_or(cfg.labeled_format);
            let lexicon = load_lexicon(&lexicon)?;
            let delta = LexiconDelta::from_tsv(&read_file(&delta)?, &lexicon)?;
            let comparison =
                pipeline::compare(&read_file(&labeled)?, &lexicon, &delta, affected_only, &cfg)?;
            write_output(out.as_deref(), &pipeline::comparison_json(&comparison))
        }
        Command::Run {
            corpus,
            lexicon,
            labeled,
            out_dir,
        } => {
            cfg.input_format = corpus.format.unwrap_or(cfg.input_format);
            let corpus_text = read_file(&corpus.corpus)?;
            let positive = read_file(&lexicon.positive)?;
            let negative = read_file(&lexicon.negative)?;
            let labeled = labeled.map(read_file).transpose()?;
            let input = PipelineInput {
                corpus: &corpus_text,
                positive: &positive,
                negative: &negative,
                labeled: labeled.as_deref(),
            };
            let artifacts = pipeline::run_pipeline(&input, &cfg)?;
            artifacts.write_to(&out_dir)?;
            log::info!(
                "wrote {} artifacts to {}",
                artifacts.files.len(),
                out_dir.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("lexshift: error: {err}");
            ExitCode::from(match err.class() {
                ErrorClass::Input => 2,
                ErrorClass::Config => 3,
                ErrorClass::Internal => 4,
            })
        }
    }
}
