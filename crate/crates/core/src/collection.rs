//! Collection of candidate sentiment words and their prior potentials.
//!
//! A word is collected when it is a lexicon word, an adjective, or an adverb
//! that has an adjective form. Negated phrases (`not_bad`) are collected as
//! their own words when the base qualifies, and carry the reversed prior.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Token};
use crate::error::{Error, Result};
use crate::lexicon::{Polarity, SentimentLexicon};
use crate::tagger::{adjective_seeds, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    Lexical,
    Adjective,
    AdverbDerived,
    NegatedLexical,
    NegatedNonlexical,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Lexical => "lexical",
            Origin::Adjective => "adjective",
            Origin::AdverbDerived => "adverb",
            Origin::NegatedLexical => "negated-lexical",
            Origin::NegatedNonlexical => "negated-nonlexical",
        }
    }

    pub fn is_negated(self) -> bool {
        matches!(self, Origin::NegatedLexical | Origin::NegatedNonlexical)
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Origin {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        [
            Origin::Lexical,
            Origin::Adjective,
            Origin::AdverbDerived,
            Origin::NegatedLexical,
            Origin::NegatedNonlexical,
        ]
        .into_iter()
        .find(|o| o.as_str() == s)
        .ok_or_else(|| format!("unknown origin {s:?}"))
    }
}

/// The `p` of a node prior `[p, 1 - p]` for each class of word.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorTable {
    pub positive: f64,
    pub nonlexical: f64,
    pub negative: f64,
}

impl Default for PriorTable {
    fn default() -> Self {
        Self {
            positive: 0.70,
            nonlexical: 0.50,
            negative: 0.30,
        }
    }
}

impl PriorTable {
    pub fn for_polarity(&self, polarity: Option<Polarity>) -> f64 {
        match polarity {
            Some(Polarity::Positive) => self.positive,
            Some(Polarity::Negative) => self.negative,
            None => self.nonlexical,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("prior_positive", self.positive),
            ("prior_nonlexical", self.nonlexical),
            ("prior_negative", self.negative),
        ] {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Config(format!(
                    "{name} must lie strictly in (0, 1), got {p}"
                )));
            }
        }
        Ok(())
    }
}

/// `p -> 1 - p`, snapped to 12 decimals so that reversing a table value
/// such as 0.7 lands exactly on 0.3.
pub fn reverse_prior(p: f64) -> f64 {
    ((1.0 - p) * 1e12).round() / 1e12
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollectedWord {
    pub form: String,
    pub origin: Origin,
    pub prior_p: f64,
    pub corpus_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CollectionConfig {
    pub min_count: usize,
    pub priors: PriorTable,
}

impl Default for CollectionConfig {
    fn default() -> Self {
        Self {
            min_count: 1,
            priors: PriorTable::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SentimentWordSet {
    words: BTreeMap<String, CollectedWord>,
}

impl SentimentWordSet {
    pub fn from_words(words: impl IntoIterator<Item = CollectedWord>) -> Self {
        Self {
            words: words.into_iter().map(|w| (w.form.clone(), w)).collect(),
        }
    }

    pub fn get(&self, form: &str) -> Option<&CollectedWord> {
        self.words.get(form)
    }

    pub fn contains(&self, form: &str) -> bool {
        self.words.contains_key(form)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CollectedWord> {
        self.words.values()
    }

    /// TSV rows `form<TAB>origin<TAB>prior<TAB>count`, sorted by form.
    pub fn to_tsv(&self) -> String {
        self.iter()
            .map(|w| {
                format!(
                    "{}\t{}\t{}\t{}\n",
                    w.form, w.origin, w.prior_p, w.corpus_count
                )
            })
            .collect()
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut words = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(Error::malformed(
                    line_no,
                    "expected form, origin, prior, count",
                ));
            }
            let origin = cols[1].parse().map_err(|e| Error::malformed(line_no, e))?;
            let prior_p: f64 = cols[2]
                .parse()
                .map_err(|_| Error::malformed(line_no, format!("bad prior {:?}", cols[2])))?;
            if !(0.0..=1.0).contains(&prior_p) {
                return Err(Error::malformed(line_no, "prior must lie in [0, 1]"));
            }
            let corpus_count = cols[3]
                .parse()
                .map_err(|_| Error::malformed(line_no, format!("bad count {:?}", cols[3])))?;
            words.push(CollectedWord {
                form: cols[0].to_string(),
                origin,
                prior_p,
                corpus_count,
            });
        }
        Ok(Self::from_words(words))
    }
}

/// Finds the adjective an adverb is derived from, if any.
///
/// Candidates are tried in order: strip `-ly`, `-ily` to `-y`, `-bly` to
/// `-ble`, `-ically` to `-ic`. The first candidate in `known_adjectives`
/// is returned.
pub fn adverb_to_adjective(form: &str, known_adjectives: &BTreeSet<String>) -> Option<String> {
    let candidates = [
        form.strip_suffix("ly").map(str::to_string),
        form.strip_suffix("ily").map(|s| format!("{s}y")),
        form.strip_suffix("bly").map(|s| format!("{s}ble")),
        form.strip_suffix("ically").map(|s| format!("{s}ic")),
    ];
    candidates
        .into_iter()
        .flatten()
        .find(|c| !c.is_empty() && known_adjectives.contains(c))
}

/// The prior `p` for a collected word under `priors`.
pub fn assign_prior(word: &CollectedWord, lexicon: &SentimentLexicon, priors: &PriorTable) -> f64 {
    match word.origin {
        Origin::Lexical => priors.for_polarity(lexicon.polarity_of(&word.form)),
        Origin::Adjective | Origin::AdverbDerived => priors.nonlexical,
        Origin::NegatedLexical => {
            let base = word
                .form
                .split_once('_')
                .map_or(word.form.as_str(), |(_, b)| b);
            reverse_prior(priors.for_polarity(lexicon.polarity_of(base)))
        }
        Origin::NegatedNonlexical => reverse_prior(priors.nonlexical),
    }
}

/// Adjective forms used to decide whether an adverb has an adjective form:
/// every lexicon entry (the lexicon carries no POS), every ADJ-tagged corpus
/// form, and the embedded seed list.
pub fn known_adjectives(corpus: &Corpus, lexicon: &SentimentLexicon) -> BTreeSet<String> {
    let mut known: BTreeSet<String> = lexicon.iter().map(|(w, _)| w.to_string()).collect();
    for sentence in corpus.sentences() {
        for token in &sentence.tokens {
            if token.tag == Tag::Adj {
                known.insert(token.base_form().to_string());
            }
        }
    }
    known.extend(adjective_seeds().iter().cloned());
    known
}

fn classify_token(
    token: &Token,
    lexicon: &SentimentLexicon,
    known: &BTreeSet<String>,
) -> Option<Origin> {
    if lexicon.contains(&token.form) {
        return Some(Origin::Lexical);
    }
    let base = token.base_form();
    let qualifies_nonlexical = match token.tag {
        Tag::Adj => true,
        Tag::Adv => adverb_to_adjective(base, known).is_some(),
        _ => false,
    };
    match (token.negated, lexicon.contains(base)) {
        (true, true) => Some(Origin::NegatedLexical),
        (true, false) if qualifies_nonlexical => Some(Origin::NegatedNonlexical),
        (false, _) if token.tag == Tag::Adj => Some(Origin::Adjective),
        (false, _) if qualifies_nonlexical => Some(Origin::AdverbDerived),
        _ => None,
    }
}

/// Collects the domain sentiment-word set from a tagged, negation-merged corpus.
pub fn collect(
    corpus: &Corpus,
    lexicon: &SentimentLexicon,
    cfg: &CollectionConfig,
) -> SentimentWordSet {
    let known = known_adjectives(corpus, lexicon);
    let mut found: BTreeMap<String, (Origin, usize)> = BTreeMap::new();
    for sentence in corpus.sentences() {
        for token in &sentence.tokens {
            if let Some(origin) = classify_token(token, lexicon, &known) {
                let entry = found.entry(token.form.clone()).or_insert((origin, 0));
                entry.0 = entry.0.min(origin);
                entry.1 += 1;
            }
        }
    }

    let words = found
        .into_iter()
        .filter(|(_, (_, count))| *count >= cfg.min_count.max(1))
        .map(|(form, (origin, corpus_count))| {
            let mut word = CollectedWord {
                form,
                origin,
                prior_p: 0.0,
                corpus_count,
            };
            word.prior_p = assign_prior(&word, lexicon, &cfg.priors);
            word
        });
    SentimentWordSet::from_words(words)
}
