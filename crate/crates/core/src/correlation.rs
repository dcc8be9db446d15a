//! Typed sentiment correlations between collected words.
//!
//! Within a sentence, conjunction triggers relate the collected words on
//! either side of them (`and`, `or`, `but`/`however`, `although`/`though`),
//! and any two collected words in adjacent positions form a neighbor
//! relation unless a conjunction already paired them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::collection::SentimentWordSet;
use crate::corpus::{Corpus, Sentence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CorrelationKind {
    And,
    Or,
    Nb,
    Alt,
    But,
}

impl CorrelationKind {
    pub const ALL: [CorrelationKind; 5] = [
        CorrelationKind::And,
        CorrelationKind::Or,
        CorrelationKind::Nb,
        CorrelationKind::Alt,
        CorrelationKind::But,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CorrelationKind::And => "AND",
            CorrelationKind::Or => "OR",
            CorrelationKind::Nb => "NB",
            CorrelationKind::Alt => "ALT",
            CorrelationKind::But => "BUT",
        }
    }

    /// The conjunction kind a trigger word introduces.
    pub fn for_trigger(form: &str) -> Option<CorrelationKind> {
        match form {
            "and" => Some(CorrelationKind::And),
            "or" => Some(CorrelationKind::Or),
            "but" | "however" => Some(CorrelationKind::But),
            "although" | "though" => Some(CorrelationKind::Alt),
            _ => None,
        }
    }
}

impl fmt::Display for CorrelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorrelationKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        CorrelationKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown correlation kind {s:?}"))
    }
}

/// Agreement strength per correlation kind; the off-diagonal mass of the
/// kind's transition matrix is `0.5 - epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonTable {
    pub and: f64,
    pub or: f64,
    pub nb: f64,
    pub alt: f64,
    pub but: f64,
}

impl Default for EpsilonTable {
    fn default() -> Self {
        Self {
            and: 0.20,
            or: 0.10,
            nb: 0.05,
            alt: -0.10,
            but: -0.20,
        }
    }
}

impl EpsilonTable {
    pub fn get(&self, kind: CorrelationKind) -> f64 {
        match kind {
            CorrelationKind::And => self.and,
            CorrelationKind::Or => self.or,
            CorrelationKind::Nb => self.nb,
            CorrelationKind::Alt => self.alt,
            CorrelationKind::But => self.but,
        }
    }

    pub fn set(&mut self, kind: CorrelationKind, value: f64) {
        match kind {
            CorrelationKind::And => self.and = value,
            CorrelationKind::Or => self.or = value,
            CorrelationKind::Nb => self.nb = value,
            CorrelationKind::Alt => self.alt = value,
            CorrelationKind::But => self.but = value,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for kind in CorrelationKind::ALL {
            let value = self.get(kind);
            if value.is_nan() || value.abs() >= 0.5 {
                return Err(Error::InvalidEpsilon {
                    kind: kind.to_string(),
                    value,
                });
            }
        }
        Ok(())
    }
}

/// An unordered word pair, stored in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordPair {
    pub first: String,
    pub second: String,
}

impl WordPair {
    /// Orders `a` and `b`; the flag is true when they were swapped.
    pub fn new(a: &str, b: &str) -> (Self, bool) {
        if a <= b {
            (
                Self {
                    first: a.into(),
                    second: b.into(),
                },
                false,
            )
        } else {
            (
                Self {
                    first: b.into(),
                    second: a.into(),
                },
                true,
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub pair: WordPair,
    pub kind: CorrelationKind,
    /// True when the word that came first in the sentence is `pair.second`.
    pub reversed: bool,
    /// Index of the sentence in the corpus.
    pub sentence: usize,
}

impl Triple {
    fn new(left: &str, right: &str, kind: CorrelationKind, sentence: usize) -> Self {
        let (pair, reversed) = WordPair::new(left, right);
        Self {
            pair,
            kind,
            reversed,
            sentence,
        }
    }

    /// The two words in the order they appeared in the sentence.
    pub fn in_text_order(&self) -> (&str, &str) {
        if self.reversed {
            (&self.pair.second, &self.pair.first)
        } else {
            (&self.pair.first, &self.pair.second)
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.in_text_order();
        write!(f, "({a}, {}, {b})", self.kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorrelationConfig {
    /// Token distance searched on each side of `and` / `or`.
    pub conj_window: usize,
}

impl Default for CorrelationConfig {
    fn default() -> Self {
        Self { conj_window: 2 }
    }
}

fn sentence_triples(
    sentence: &Sentence,
    index: usize,
    words: &SentimentWordSet,
    cfg: &CorrelationConfig,
    out: &mut Vec<Triple>,
) {
    let tokens = &sentence.tokens;
    let collected: Vec<bool> = tokens.iter().map(|t| words.contains(&t.form)).collect();
    let mut paired: BTreeSet<WordPair> = BTreeSet::new();

    for (i, token) in tokens.iter().enumerate() {
        if token.negated {
            continue;
        }
        let Some(kind) = CorrelationKind::for_trigger(&token.form) else {
            continue;
        };
        let (lo, hi) = match kind {
            CorrelationKind::And | CorrelationKind::Or => (
                i.saturating_sub(cfg.conj_window),
                (i + cfg.conj_window).min(tokens.len() - 1),
            ),
            _ => (0, tokens.len() - 1),
        };
        let left = (lo..i).rev().find(|&j| collected[j]);
        let right = (i + 1..=hi).find(|&j| collected[j]);
        if let (Some(l), Some(r)) = (left, right) {
            let (a, b) = (&tokens[l].form, &tokens[r].form);
            if a != b {
                let triple = Triple::new(a, b, kind, index);
                paired.insert(triple.pair.clone());
                out.push(triple);
            }
        }
    }

    for i in 1..tokens.len() {
        if !(collected[i - 1] && collected[i]) {
            continue;
        }
        let (a, b) = (&tokens[i - 1].form, &tokens[i].form);
        if a == b {
            continue;
        }
        let triple = Triple::new(a, b, CorrelationKind::Nb, index);
        if !paired.contains(&triple.pair) {
            out.push(triple);
        }
    }
}

/// Extracts all typed correlation triples, sentence by sentence.
pub fn extract_triples(
    corpus: &Corpus,
    words: &SentimentWordSet,
    cfg: &CorrelationConfig,
) -> Vec<Triple> {
    let mut out = Vec::new();
    for (index, sentence) in corpus.sentences().iter().enumerate() {
        sentence_triples(sentence, index, words, cfg, &mut out);
    }
    out
}

/// Triple counts grouped by unordered pair and kind.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorrelationCounts {
    counts: BTreeMap<(WordPair, CorrelationKind), usize>,
}

impl CorrelationCounts {
    pub fn get(&self, a: &str, b: &str, kind: CorrelationKind) -> usize {
        let (pair, _) = WordPair::new(a, b);
        self.counts.get(&(pair, kind)).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WordPair, CorrelationKind, usize)> {
        self.counts.iter().map(|((p, k), c)| (p, *k, *c))
    }

    pub fn add(&mut self, pair: WordPair, kind: CorrelationKind, count: usize) {
        *self.counts.entry((pair, kind)).or_insert(0) += count;
    }

    /// TSV rows `word1<TAB>kind<TAB>word2<TAB>count` in canonical order.
    pub fn to_tsv(&self) -> String {
        self.iter()
            .map(|(p, k, c)| format!("{}\t{k}\t{}\t{c}\n", p.first, p.second))
            .collect()
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut counts = Self::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(Error::malformed(
                    line_no,
                    "expected word1, kind, word2, count",
                ));
            }
            let kind = cols[1].parse().map_err(|e| Error::malformed(line_no, e))?;
            let count = cols[3]
                .parse()
                .map_err(|_| Error::malformed(line_no, format!("bad count {:?}", cols[3])))?;
            if cols[0] == cols[2] {
                return Err(Error::malformed(line_no, "self-loop pair"));
            }
            let (pair, _) = WordPair::new(cols[0], cols[2]);
            counts.add(pair, kind, count);
        }
        Ok(counts)
    }
}

/// One row per triple: `sentence<TAB>word1<TAB>kind<TAB>word2`, words in
/// text order, sentence as a 0-based corpus index.
pub fn triples_tsv(triples: &[Triple]) -> String {
    triples
        .iter()
        .map(|t| {
            let (a, b) = t.in_text_order();
            format!("{}\t{a}\t{}\t{b}\n", t.sentence, t.kind)
        })
        .collect()
}

pub fn triples_from_tsv(text: &str) -> Result<Vec<Triple>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(Error::malformed(
                line_no,
                "expected sentence, word1, kind, word2",
            ));
        }
        let sentence = cols[0]
            .parse()
            .map_err(|_| Error::malformed(line_no, format!("bad sentence index {:?}", cols[0])))?;
        let kind = cols[2].parse().map_err(|e| Error::malformed(line_no, e))?;
        if cols[1] == cols[3] {
            return Err(Error::malformed(line_no, "self-loop pair"));
        }
        out.push(Triple::new(cols[1], cols[3], kind, sentence));
    }
    Ok(out)
}

pub fn aggregate<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> CorrelationCounts {
    let mut counts = CorrelationCounts::default();
    for t in triples {
        counts.add(t.pair.clone(), t.kind, 1);
    }
    counts
}
