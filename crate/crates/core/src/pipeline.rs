//! End-to-end pipeline and the stage functions shared with the CLI.
//!
//! Every stage is a pure function from in-memory inputs to artifact text, so
//! running the stages one by one through files yields the same bytes as a
//! single call to [`run_pipeline`].

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::classifier::{evaluate, parse_labeled, EvalReport};
use crate::collection::{collect, SentimentWordSet};
use crate::config::{Baseline, PipelineConfig};
use crate::corpus::{parse, Corpus, ParseContext};
use crate::correlation::{aggregate, extract_triples, triples_tsv, Triple};
use crate::detection::{
    detect, detect_lci, lci_rank, lci_tsv, nonlexical_tsv, rank_lexicon_words, ranked_tsv,
};
use crate::error::{Error, Result};
use crate::inference::{beliefs_tsv, propagate, BeliefVector, Inference};
use crate::lexicon::{LexiconDelta, SentimentLexicon};
use crate::mrf::{build_graph, SentimentGraph};

pub fn parse_corpus(
    text: &str,
    lexicon: &SentimentLexicon,
    cfg: &PipelineConfig,
) -> Result<Corpus> {
    let negators = cfg.negator_set();
    let corpus = parse(
        cfg.input_format,
        text,
        ParseContext::new(&negators, Some(lexicon)),
    )?;
    if corpus.is_empty() {
        log::warn!("corpus contains no sentences; the ranking will be empty");
    }
    Ok(corpus)
}

pub fn collect_words(
    corpus: &Corpus,
    lexicon: &SentimentLexicon,
    cfg: &PipelineConfig,
) -> SentimentWordSet {
    collect(corpus, lexicon, &cfg.collection())
}

pub fn extract(corpus: &Corpus, words: &SentimentWordSet, cfg: &PipelineConfig) -> Vec<Triple> {
    extract_triples(corpus, words, &cfg.correlation())
}

pub fn graph(
    words: &SentimentWordSet,
    triples: &[Triple],
    cfg: &PipelineConfig,
) -> Result<SentimentGraph> {
    build_graph(words, &aggregate(triples), cfg.graph())
}

/// Runs belief propagation, surfacing non-convergence as a warning.
pub fn infer(graph: &SentimentGraph, cfg: &PipelineConfig) -> Result<Inference> {
    let inference = propagate(graph, &cfg.inference())?;
    if !inference.report.converged {
        log::warn!(
            "belief propagation stopped after {} iterations without converging (last change {})",
            inference.report.iterations,
            inference.report.final_delta
        );
    }
    Ok(inference)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detection {
    pub ranked: String,
    pub nonlexical: String,
    pub lci: Option<String>,
    pub delta: LexiconDelta,
}

/// Ranks lexicon words and selects the delta. Under the LCI baseline the
/// delta comes from the consistency ranking instead of the beliefs.
pub fn detect_changes(
    lexicon: &SentimentLexicon,
    beliefs: &BTreeMap<String, BeliefVector>,
    words: &SentimentWordSet,
    corpus: Option<&Corpus>,
    cfg: &PipelineConfig,
) -> Result<Detection> {
    let ranked = rank_lexicon_words(lexicon, beliefs, words);
    let nonlexical = nonlexical_tsv(lexicon, beliefs, words);
    let (delta, lci) = match cfg.baseline {
        Baseline::Dsg => (detect(lexicon, &ranked, cfg.selection())?, None),
        Baseline::Lci => {
            let corpus =
                corpus.ok_or_else(|| Error::Config("the lci baseline needs the corpus".into()))?;
            let scores = lci_rank(corpus, lexicon, &cfg.classifier());
            (
                detect_lci(lexicon, &scores, cfg.selection())?,
                Some(lci_tsv(&scores)),
            )
        }
    };
    Ok(Detection {
        ranked: ranked_tsv(&ranked),
        nonlexical,
        lci,
        delta,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub original: EvalReport,
    pub corrected: EvalReport,
}

/// Accuracy of the base and corrected lexicons on labeled text, optionally
/// restricted to sentences mentioning a delta word.
pub fn compare(
    labeled_text: &str,
    lexicon: &SentimentLexicon,
    delta: &LexiconDelta,
    affected_only: bool,
    cfg: &PipelineConfig,
) -> Result<Comparison> {
    let negators = cfg.negator_set();
    let labeled = parse_labeled(
        cfg.labeled_format,
        labeled_text,
        ParseContext::new(&negators, Some(lexicon)),
    )?;
    let classifier = cfg.classifier();
    let restrict = affected_only.then_some(delta);
    let corrected = lexicon.apply_delta(delta)?;
    Ok(Comparison {
        original: evaluate(&labeled, lexicon, &classifier, restrict)?,
        corrected: evaluate(&labeled, &corrected, &classifier, restrict)?,
    })
}

pub fn comparison_json(c: &Comparison) -> String {
    serde_json::to_string_pretty(c).expect("report serializes") + "\n"
}

pub struct PipelineInput<'a> {
    pub corpus: &'a str,
    pub positive: &'a str,
    pub negative: &'a str,
    pub labeled: Option<&'a str>,
}

/// Every artifact of a run as `(file name, contents)`, in write order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifacts {
    pub files: Vec<(&'static str, String)>,
    pub delta: LexiconDelta,
}

impl Artifacts {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, c)| c.as_str())
    }

    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        for (name, contents) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, contents).map_err(|source| Error::Io { path, source })?;
        }
        Ok(())
    }
}

pub fn run_pipeline(input: &PipelineInput<'_>, cfg: &PipelineConfig) -> Result<Artifacts> {
    cfg.validate()?;
    let lexicon = SentimentLexicon::load(input.positive, input.negative)?;
    let corpus = parse_corpus(input.corpus, &lexicon, cfg)?;
    let words = collect_words(&corpus, &lexicon, cfg);
    let triples = extract(&corpus, &words, cfg);
    let graph = graph(&words, &triples, cfg)?;
    let inference = infer(&graph, cfg)?;
    let detection = detect_changes(&lexicon, &inference.beliefs, &words, Some(&corpus), cfg)?;

    let mut files = vec![
        ("words.tsv", words.to_tsv()),
        ("triples.tsv", triples_tsv(&triples)),
        ("nodes.tsv", graph.nodes_tsv()),
        ("edges.tsv", graph.edges_tsv()),
        ("beliefs.tsv", beliefs_tsv(&inference.beliefs)),
        ("convergence.json", inference.report.to_json()),
        ("ranked.tsv", detection.ranked),
        ("nonlexical.tsv", detection.nonlexical),
    ];
    if let Some(lci) = detection.lci {
        files.push(("lci.tsv", lci));
    }
    files.push(("delta.tsv", detection.delta.to_tsv(&lexicon)));
    if let Some(labeled) = input.labeled {
        let comparison = compare(labeled, &lexicon, &detection.delta, false, cfg)?;
        files.push(("eval.json", comparison_json(&comparison)));
    }
    Ok(Artifacts {
        files,
        delta: detection.delta,
    })
}
