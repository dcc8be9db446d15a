//! Lexicon-based sentence classifier with negation and intensity.
//!
//! A sentence score is the sum over its lexicon words of
//! `negation * intensity * polarity`, where polarity is +1/-1, negation is
//! -1 when a negator precedes the word within a small window, and
//! intensity is the product of the intensifiers directly before the word.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::merge_negations;
use crate::corpus::{
    default_negators, parse_raw, split_tagged_line, ParseContext, Sentence, Token,
};
use crate::error::{Error, Result};
use crate::lexicon::{LexiconDelta, Polarity, SentimentLexicon};

pub fn default_intensifiers() -> BTreeMap<String, f64> {
    [
        ("very", 1.5),
        ("really", 1.5),
        ("extremely", 2.0),
        ("so", 1.3),
        ("quite", 1.2),
        ("slightly", 0.5),
        ("somewhat", 0.7),
    ]
    .into_iter()
    .map(|(w, m)| (w.to_string(), m))
    .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifierConfig {
    pub negators: BTreeSet<String>,
    /// Tokens scanned to the left of a lexicon word for a negator.
    pub negation_window: usize,
    pub intensifiers: BTreeMap<String, f64>,
    /// Label given to sentences scoring exactly zero.
    pub tie_label: Polarity,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            negators: default_negators(),
            negation_window: 3,
            intensifiers: default_intensifiers(),
            tie_label: Polarity::Positive,
        }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<()> {
        for (word, m) in &self.intensifiers {
            if !m.is_finite() || *m <= 0.0 {
                return Err(Error::Config(format!(
                    "intensifier {word:?} must have a positive multiplier, got {m}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub score: f64,
    pub label: Polarity,
}

/// Polarity carried by a token, and whether it came from a merged negation
/// (in which case the reversal is already applied).
fn token_polarity(token: &Token, lexicon: &SentimentLexicon) -> Option<(Polarity, bool)> {
    if let Some(p) = lexicon.polarity_of(&token.form) {
        return Some((p, false));
    }
    if token.negated {
        return lexicon
            .polarity_of(token.base_form())
            .map(|p| (p.flip(), true));
    }
    None
}

fn is_negator(token: &Token, lexicon: &SentimentLexicon, cfg: &ClassifierConfig) -> bool {
    // A merged negation whose base carries no polarity (`not_really`) still
    // negates what follows it.
    cfg.negators.contains(&token.form)
        || (token.negated && token_polarity(token, lexicon).is_none())
}

pub fn score_sentence(
    sentence: &Sentence,
    lexicon: &SentimentLexicon,
    cfg: &ClassifierConfig,
) -> Prediction {
    let tokens = &sentence.tokens;
    let mut score = 0.0;
    for (i, token) in tokens.iter().enumerate() {
        let Some((polarity, merged)) = token_polarity(token, lexicon) else {
            continue;
        };
        let mut negation = 1.0;
        if !merged {
            for prev in tokens[i.saturating_sub(cfg.negation_window)..i]
                .iter()
                .rev()
            {
                if token_polarity(prev, lexicon).is_some() {
                    break;
                }
                if is_negator(prev, lexicon, cfg) {
                    negation = -1.0;
                    break;
                }
            }
        }
        let intensity: f64 = tokens[..i]
            .iter()
            .rev()
            .map_while(|t| cfg.intensifiers.get(&t.form))
            .product();
        score += negation * intensity * polarity.sign();
    }
    let label = if score > 0.0 {
        Polarity::Positive
    } else if score < 0.0 {
        Polarity::Negative
    } else {
        cfg.tie_label
    };
    Prediction { score, label }
}

/// True when a prediction for `sentence` can depend on a word of `delta`.
pub fn mentions_delta(sentence: &Sentence, delta: &LexiconDelta) -> bool {
    sentence
        .tokens
        .iter()
        .any(|t| delta.contains(&t.form) || delta.contains(t.base_form()))
}

/// `source_id<TAB>score<TAB>label` for every sentence.
pub fn predictions_tsv<'a>(
    sentences: impl IntoIterator<Item = &'a Sentence>,
    lexicon: &SentimentLexicon,
    cfg: &ClassifierConfig,
) -> String {
    sentences
        .into_iter()
        .map(|s| {
            let p = score_sentence(s, lexicon, cfg);
            format!("{}\t{}\t{}\n", s.source_id, p.score, p.label)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ClassReport {
    pub total: usize,
    pub correct: usize,
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Confusion {
    /// Gold positive, predicted positive.
    pub true_positive: usize,
    pub false_negative: usize,
    pub false_positive: usize,
    pub true_negative: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub total: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub positive: ClassReport,
    pub negative: ClassReport,
    pub confusion: Confusion,
}

pub fn evaluate(
    labeled: &[(Sentence, Polarity)],
    lexicon: &SentimentLexicon,
    cfg: &ClassifierConfig,
    restrict_to: Option<&LexiconDelta>,
) -> Result<EvalReport> {
    let mut confusion = Confusion::default();
    let selected = labeled
        .iter()
        .filter(|(s, _)| restrict_to.is_none_or(|d| mentions_delta(s, d)));
    for (sentence, gold) in selected {
        let predicted = score_sentence(sentence, lexicon, cfg).label;
        match (gold, predicted) {
            (Polarity::Positive, Polarity::Positive) => confusion.true_positive += 1,
            (Polarity::Positive, Polarity::Negative) => confusion.false_negative += 1,
            (Polarity::Negative, Polarity::Positive) => confusion.false_positive += 1,
            (Polarity::Negative, Polarity::Negative) => confusion.true_negative += 1,
        }
    }
    let class = |total: usize, correct: usize| ClassReport {
        total,
        correct,
        accuracy: (total > 0).then(|| correct as f64 / total as f64),
    };
    let positive = class(
        confusion.true_positive + confusion.false_negative,
        confusion.true_positive,
    );
    let negative = class(
        confusion.true_negative + confusion.false_positive,
        confusion.true_negative,
    );
    let total = positive.total + negative.total;
    if total == 0 {
        return Err(Error::EmptyEvaluation);
    }
    let correct = positive.correct + negative.correct;
    Ok(EvalReport {
        total,
        correct,
        accuracy: correct as f64 / total as f64,
        positive,
        negative,
        confusion,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabeledFormat {
    /// `text,label` records, optional header row.
    #[default]
    Csv,
    /// `token<TAB>TAG<TAB>label` rows, blank line between sentences.
    Tagged,
}

impl FromStr for LabeledFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(LabeledFormat::Csv),
            "tagged" => Ok(LabeledFormat::Tagged),
            other => Err(format!(
                "unknown labeled format {other:?} (expected csv or tagged)"
            )),
        }
    }
}

pub fn parse_labeled(
    format: LabeledFormat,
    text: &str,
    ctx: ParseContext<'_>,
) -> Result<Vec<(Sentence, Polarity)>> {
    match format {
        LabeledFormat::Csv => parse_labeled_csv(text, ctx),
        LabeledFormat::Tagged => parse_labeled_tagged(text, ctx),
    }
}

fn parse_labeled_csv(text: &str, ctx: ParseContext<'_>) -> Result<Vec<(Sentence, Polarity)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 1;
        let record = record.map_err(|e| Error::malformed(line, e.to_string()))?;
        if record.len() != 2 {
            return Err(Error::malformed(line, "expected text,label"));
        }
        let (body, label) = (&record[0], record[1].trim());
        if idx == 0 && body.trim() == "text" && label == "label" {
            continue;
        }
        let label: Polarity = label.parse().map_err(|e| Error::malformed(line, e))?;
        let mut corpus = parse_raw(&body.replace(['\n', '\r'], " "), ctx).into_sentences();
        let mut sentence = corpus.pop().unwrap_or(Sentence {
            tokens: Vec::new(),
            source_id: String::new(),
        });
        sentence.source_id = line.to_string();
        out.push((sentence, label));
    }
    Ok(out)
}

fn parse_labeled_tagged(text: &str, ctx: ParseContext<'_>) -> Result<Vec<(Sentence, Polarity)>> {
    let mut out = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    let mut label: Option<Polarity> = None;
    let mut first_line = 0;

    let mut flush = |tokens: &mut Vec<Token>, label: &mut Option<Polarity>, first: usize| {
        if let Some(l) = label.take() {
            let sentence = Sentence {
                tokens: merge_negations(std::mem::take(tokens), ctx),
                source_id: first.to_string(),
            };
            out.push((sentence, l));
        }
    };

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            flush(&mut tokens, &mut label, first_line);
            continue;
        }
        let Some((token_part, label_part)) = line.rsplit_once('\t') else {
            return Err(Error::malformed(
                line_no,
                "expected token<TAB>TAG<TAB>label",
            ));
        };
        let (surface, tag) = split_tagged_line(token_part, line_no)?;
        let row_label: Polarity = label_part
            .parse()
            .map_err(|e| Error::malformed(line_no, e))?;
        match label {
            None => {
                label = Some(row_label);
                first_line = line_no;
            }
            Some(l) if l != row_label => {
                return Err(Error::malformed(line_no, "label differs within a sentence"));
            }
            Some(_) => {}
        }
        tokens.push(Token::new(surface, tag));
    }
    flush(&mut tokens, &mut label, first_line);
    Ok(out)
}
