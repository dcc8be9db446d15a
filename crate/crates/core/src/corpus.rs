//! Sentence-level corpora of tagged tokens.
//!
//! Two input shapes are supported: raw text with one sentence per line, and
//! a two-column `token<TAB>TAG` file with blank lines between sentences.
//! Either way the tokens end up with a coarse [`Tag`] and adjacent negation
//! phrases are merged (`not bad` becomes the single token `not_bad`).

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::SentimentLexicon;
use crate::tagger::{tag_word, Tag};

pub const DEFAULT_NEGATORS: &[&str] = &[
    "not", "no", "never", "hardly", "barely", "n't", "cannot", "without",
];

pub fn default_negators() -> BTreeSet<String> {
    DEFAULT_NEGATORS.iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub form: String,
    pub tag: Tag,
    /// Set only on tokens produced by negation merging.
    pub negated: bool,
}

impl Token {
    pub fn new(surface: impl Into<String>, tag: Tag) -> Self {
        let surface = surface.into();
        let form = surface.to_lowercase().replace('\u{2019}', "'");
        Self {
            surface,
            form,
            tag,
            negated: false,
        }
    }

    /// For a merged token, the `(negator, base)` form pair.
    pub fn negation_parts(&self) -> Option<(&str, &str)> {
        if self.negated {
            self.form.split_once('_')
        } else {
            None
        }
    }

    /// The form whose lexicon polarity this token carries: the base of a
    /// merged negation, otherwise the form itself.
    pub fn base_form(&self) -> &str {
        self.negation_parts().map_or(&self.form, |(_, base)| base)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub source_id: String,
}

impl Sentence {
    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.form.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub sentences: usize,
    pub tokens: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    sentences: Vec<Sentence>,
    stats: CorpusStats,
}

impl Corpus {
    pub fn new(sentences: Vec<Sentence>) -> Self {
        let stats = CorpusStats {
            sentences: sentences.len(),
            tokens: sentences.iter().map(|s| s.tokens.len()).sum(),
        };
        Self { sentences, stats }
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn stats(&self) -> CorpusStats {
        self.stats
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn into_sentences(self) -> Vec<Sentence> {
        self.sentences
    }

    /// Writes the corpus in the two-column tagged format. Merged negations
    /// are written back as their two constituent tokens.
    pub fn to_tagged_tsv(&self) -> String {
        let mut out = String::new();
        for (i, sentence) in self.sentences.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for token in &sentence.tokens {
                match (token.negated, token.surface.split_once(' ')) {
                    (true, Some((neg, base))) => {
                        out.push_str(&format!("{neg}\t{}\n{base}\t{}\n", Tag::Neg, token.tag));
                    }
                    _ => out.push_str(&format!("{}\t{}\n", token.surface, token.tag)),
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    #[default]
    Raw,
    Tagged,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "raw" => Ok(InputFormat::Raw),
            "tagged" => Ok(InputFormat::Tagged),
            other => Err(format!(
                "unknown corpus format {other:?} (expected raw or tagged)"
            )),
        }
    }
}

/// Shared parsing context: negator words and an optional lexicon used to
/// decide which tokens are sentiment-bearing for negation merging.
#[derive(Debug, Clone, Copy)]
pub struct ParseContext<'a> {
    pub negators: &'a BTreeSet<String>,
    pub lexicon: Option<&'a SentimentLexicon>,
}

impl<'a> ParseContext<'a> {
    pub fn new(negators: &'a BTreeSet<String>, lexicon: Option<&'a SentimentLexicon>) -> Self {
        Self { negators, lexicon }
    }
}

pub fn parse(format: InputFormat, text: &str, ctx: ParseContext<'_>) -> Result<Corpus> {
    match format {
        InputFormat::Raw => Ok(parse_raw(text, ctx)),
        InputFormat::Tagged => parse_tagged(text, ctx),
    }
}

/// Splits one line on whitespace and punctuation boundaries.
///
/// Word characters are alphanumerics plus `'`, `-` and `_`; any other
/// character becomes its own token. A trailing `n't` clitic is split off
/// (`don't` becomes `do` + `n't`).
pub fn tokenize(line: &str) -> Vec<String> {
    fn is_word_char(c: char) -> bool {
        c.is_alphanumeric() || matches!(c, '\'' | '\u{2019}' | '-' | '_')
    }
    fn is_edge(c: char) -> bool {
        matches!(c, '\'' | '\u{2019}' | '-' | '_')
    }

    let mut out = Vec::new();
    let push_word = |word: &str, out: &mut Vec<String>| {
        let core_start = word.find(|c: char| !is_edge(c));
        let Some(start) = core_start else {
            out.extend(word.chars().map(String::from));
            return;
        };
        let end = word
            .char_indices()
            .rev()
            .find(|(_, c)| !is_edge(*c))
            .map(|(i, c)| i + c.len_utf8())
            .unwrap_or(word.len());
        out.extend(word[..start].chars().map(String::from));
        let core = &word[start..end];
        let lower = core.to_lowercase().replace('\u{2019}', "'");
        if lower.len() > 3 && lower.ends_with("n't") {
            let split = core.len() - 3;
            out.push(core[..split].to_string());
            out.push(core[split..].to_string());
        } else {
            out.push(core.to_string());
        }
        out.extend(word[end..].chars().map(String::from));
    };

    let mut word = String::new();
    for c in line.chars() {
        if is_word_char(c) {
            word.push(c);
            continue;
        }
        if !word.is_empty() {
            push_word(&word, &mut out);
            word.clear();
        }
        if !c.is_whitespace() {
            out.push(c.to_string());
        }
    }
    if !word.is_empty() {
        push_word(&word, &mut out);
    }
    out
}

/// Parses raw text, one sentence per line; empty lines are skipped.
/// Each sentence's `source_id` is its 1-based line number.
pub fn parse_raw(text: &str, ctx: ParseContext<'_>) -> Corpus {
    let sentences = text
        .lines()
        .enumerate()
        .filter_map(|(idx, line)| {
            let words = tokenize(line);
            if words.is_empty() {
                return None;
            }
            let tokens = words
                .into_iter()
                .map(|w| {
                    let mut t = Token::new(w, Tag::Other);
                    t.tag = tag_word(&t.form, ctx.negators);
                    t
                })
                .collect();
            Some(Sentence {
                tokens: merge_negations(tokens, ctx),
                source_id: (idx + 1).to_string(),
            })
        })
        .collect();
    Corpus::new(sentences)
}

/// Parses `token<TAB>TAG` lines with blank-line sentence separators.
///
/// Tags may be coarse tags or Penn/UD tags from the shipped mapping table.
/// A sentence's `source_id` is the line number of its first token.
pub fn parse_tagged(text: &str, ctx: ParseContext<'_>) -> Result<Corpus> {
    let mut sentences = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let mut first_line = 0;

    let flush = |tokens: &mut Vec<Token>, first_line: usize, out: &mut Vec<Sentence>| {
        if !tokens.is_empty() {
            out.push(Sentence {
                tokens: merge_negations(std::mem::take(tokens), ctx),
                source_id: first_line.to_string(),
            });
        }
    };

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            flush(&mut current, first_line, &mut sentences);
            continue;
        }
        let (surface, tag) = split_tagged_line(line, line_no)?;
        if current.is_empty() {
            first_line = line_no;
        }
        current.push(Token::new(surface, tag));
    }
    flush(&mut current, first_line, &mut sentences);
    Ok(Corpus::new(sentences))
}

pub(crate) fn split_tagged_line(line: &str, line_no: usize) -> Result<(&str, Tag)> {
    let mut cols = line.split('\t');
    let (Some(surface), Some(tag)) = (cols.next(), cols.next()) else {
        return Err(Error::malformed(line_no, "expected token<TAB>TAG"));
    };
    let surface = surface.trim();
    if surface.is_empty() || surface.contains(char::is_whitespace) {
        return Err(Error::malformed(
            line_no,
            "token must be a single nonempty word",
        ));
    }
    let tag_str = tag.trim();
    let tag = Tag::from_external(tag_str).ok_or_else(|| Error::UnknownTag {
        line: line_no,
        tag: tag_str.to_string(),
    })?;
    Ok((surface, tag))
}

fn is_sentiment_bearing(token: &Token, lexicon: Option<&SentimentLexicon>) -> bool {
    matches!(token.tag, Tag::Adj | Tag::Adv) || lexicon.is_some_and(|l| l.contains(&token.form))
}

/// Merges each negator with the immediately following sentiment-bearing
/// token (ADJ, ADV or lexicon word) into a single negated token.
///
/// One left-to-right pass, non-overlapping. A negator directly followed by
/// another negator is left alone, so `never not bad` becomes
/// `never`, `not_bad`.
pub fn merge_negations(tokens: Vec<Token>, ctx: ParseContext<'_>) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut iter = tokens.into_iter().peekable();
    while let Some(token) = iter.next() {
        let mergeable = !token.negated && ctx.negators.contains(&token.form);
        if mergeable {
            if let Some(next) = iter.peek() {
                if !next.negated
                    && !next.form.contains('_')
                    && !ctx.negators.contains(&next.form)
                    && is_sentiment_bearing(next, ctx.lexicon)
                {
                    let base = iter.next().expect("peeked");
                    out.push(Token {
                        surface: format!("{} {}", token.surface, base.surface),
                        form: format!("{}_{}", token.form, base.form),
                        tag: base.tag,
                        negated: true,
                    });
                    continue;
                }
            }
        }
        out.push(token);
    }
    out
}
