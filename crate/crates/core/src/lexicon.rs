//! General-purpose sentiment lexicons and polarity corrections.
//!
//! A lexicon is read from two word lists (positive and negative), one entry
//! per line. Entries are case-folded at load time. Corrections are expressed
//! as a [`LexiconDelta`] overlaid on the base lexicon, so the original value
//! is never mutated.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    /// The +1/-1 score used by the sentence classifier.
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Positive => 1.0,
            Polarity::Negative => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "pos" | "+" | "+1" | "1" => Ok(Polarity::Positive),
            "negative" | "neg" | "-" | "-1" => Ok(Polarity::Negative),
            other => Err(format!("unknown polarity {other:?}")),
        }
    }
}

/// Word form to default polarity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SentimentLexicon {
    entries: BTreeMap<String, Polarity>,
}

impl SentimentLexicon {
    /// Builds a lexicon from the contents of a positive and a negative word list.
    ///
    /// Blank lines and lines starting with `;` are skipped. A word present in
    /// both lists is rejected.
    pub fn load(positive_list: &str, negative_list: &str) -> Result<Self> {
        let positive = parse_word_list(positive_list);
        let negative = parse_word_list(negative_list);
        if positive.is_empty() {
            log::warn!("positive word list is empty");
        }
        if negative.is_empty() {
            log::warn!("negative word list is empty");
        }

        let mut entries = BTreeMap::new();
        for word in positive {
            entries.insert(word, Polarity::Positive);
        }
        for word in negative {
            if entries.get(&word) == Some(&Polarity::Positive) {
                return Err(Error::ConflictingPolarity { word });
            }
            entries.insert(word, Polarity::Negative);
        }
        Ok(Self { entries })
    }

    pub fn from_entries<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Polarity)>,
        S: AsRef<str>,
    {
        let mut map = BTreeMap::new();
        for (word, polarity) in entries {
            let word = normalize(word.as_ref());
            if word.is_empty() {
                continue;
            }
            match map.insert(word.clone(), polarity) {
                Some(previous) if previous != polarity => {
                    return Err(Error::ConflictingPolarity { word });
                }
                _ => {}
            }
        }
        Ok(Self { entries: map })
    }

    /// Looks a word up after case folding.
    pub fn polarity_of(&self, word: &str) -> Option<Polarity> {
        match self.entries.get(word) {
            Some(p) => Some(*p),
            None if word.chars().any(char::is_uppercase) => {
                self.entries.get(&word.to_lowercase()).copied()
            }
            None => None,
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.polarity_of(word).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.entries
            .values()
            .filter(|p| **p == Polarity::Positive)
            .count()
    }

    pub fn negative_count(&self) -> usize {
        self.len() - self.positive_count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Polarity)> {
        self.entries.iter().map(|(w, p)| (w.as_str(), *p))
    }

    /// Returns a copy of `self` with every delta entry overriding the base polarity.
    ///
    /// Only key membership is checked here, so applying the same delta twice
    /// is a no-op rather than an error.
    pub fn apply_delta(&self, delta: &LexiconDelta) -> Result<Self> {
        let mut entries = self.entries.clone();
        for (word, polarity) in &delta.changes {
            match entries.get_mut(word) {
                Some(slot) => *slot = *polarity,
                None => return Err(Error::DeltaKeyMissing { word: word.clone() }),
            }
        }
        Ok(Self { entries })
    }

    /// Serializes back into `(positive_list, negative_list)` file contents.
    pub fn to_word_lists(&self) -> (String, String) {
        let mut pos = String::new();
        let mut neg = String::new();
        for (word, polarity) in self.iter() {
            let out = match polarity {
                Polarity::Positive => &mut pos,
                Polarity::Negative => &mut neg,
            };
            out.push_str(word);
            out.push('\n');
        }
        (pos, neg)
    }
}

fn normalize(word: &str) -> String {
    word.trim().to_lowercase()
}

fn parse_word_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with(';'))
        .map(normalize)
        .collect()
}

/// Corrected in-domain polarities for a subset of lexicon words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LexiconDelta {
    changes: BTreeMap<String, Polarity>,
}

impl LexiconDelta {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a delta and checks it against `base`: every key must be a
    /// lexicon word and every new polarity must differ from the base one.
    pub fn new<I, S>(base: &SentimentLexicon, changes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Polarity)>,
        S: AsRef<str>,
    {
        let changes: BTreeMap<String, Polarity> = changes
            .into_iter()
            .map(|(w, p)| (normalize(w.as_ref()), p))
            .collect();
        let delta = Self { changes };
        delta.validate(base)?;
        Ok(delta)
    }

    /// Flips every listed word relative to `base`.
    pub fn flipping<I, S>(base: &SentimentLexicon, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut changes = BTreeMap::new();
        for word in words {
            let word = normalize(word.as_ref());
            let old = base
                .polarity_of(&word)
                .ok_or_else(|| Error::DeltaKeyMissing { word: word.clone() })?;
            changes.insert(word, old.flip());
        }
        Ok(Self { changes })
    }

    pub fn validate(&self, base: &SentimentLexicon) -> Result<()> {
        for (word, polarity) in &self.changes {
            match base.polarity_of(word) {
                None => return Err(Error::DeltaKeyMissing { word: word.clone() }),
                Some(old) if old == *polarity => {
                    return Err(Error::DeltaNoChange { word: word.clone() })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// The delta that undoes `self` when applied to `base.apply_delta(self)`.
    pub fn inverse(&self, base: &SentimentLexicon) -> Result<Self> {
        let mut changes = BTreeMap::new();
        for word in self.changes.keys() {
            let old = base
                .polarity_of(word)
                .ok_or_else(|| Error::DeltaKeyMissing { word: word.clone() })?;
            changes.insert(word.clone(), old);
        }
        Ok(Self { changes })
    }

    pub fn get(&self, word: &str) -> Option<Polarity> {
        self.changes.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.changes.contains_key(word)
    }

    pub fn len(&self) -> usize {
        self.changes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Polarity)> {
        self.changes.iter().map(|(w, p)| (w.as_str(), *p))
    }

    /// TSV rows `word<TAB>old_polarity<TAB>new_polarity`.
    pub fn to_tsv(&self, base: &SentimentLexicon) -> String {
        let mut out = String::new();
        for (word, new) in self.iter() {
            let old = base.polarity_of(word).unwrap_or(new.flip());
            out.push_str(&format!("{word}\t{old}\t{new}\n"));
        }
        out
    }

    /// Parses the TSV written by [`LexiconDelta::to_tsv`] and validates it.
    pub fn from_tsv(text: &str, base: &SentimentLexicon) -> Result<Self> {
        let mut changes = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::malformed(
                    line_no,
                    "expected word, old and new polarity",
                ));
            }
            let old: Polarity = cols[1].parse().map_err(|e| Error::malformed(line_no, e))?;
            let new: Polarity = cols[2].parse().map_err(|e| Error::malformed(line_no, e))?;
            let word = normalize(cols[0]);
            if base.polarity_of(&word).is_some_and(|p| p != old) {
                return Err(Error::malformed(
                    line_no,
                    format!("old polarity of {word:?} does not match the lexicon"),
                ));
            }
            changes.insert(word, new);
        }
        let delta = Self { changes };
        delta.validate(base)?;
        Ok(delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(pos: &[&str], neg: &[&str]) -> SentimentLexicon {
        SentimentLexicon::load(&pos.join("\n"), &neg.join("\n")).unwrap()
    }

    #[test]
    fn load_basic() {
        let l = lex(&["good"], &["bad", "crush"]);
        assert_eq!(l.len(), 3);
        assert_eq!(l.polarity_of("crush"), Some(Polarity::Negative));
        assert_eq!(l.positive_count(), 1);
        assert_eq!(l.negative_count(), 2);
    }

    #[test]
    fn load_empty() {
        let l = SentimentLexicon::load("", "").unwrap();
        assert!(l.is_empty());
    }

    #[test]
    fn load_dedups_after_case_folding() {
        let l = lex(&["Good", "good"], &[]);
        assert_eq!(l.len(), 1);
        assert_eq!(l.polarity_of("good"), Some(Polarity::Positive));
    }

    #[test]
    fn load_skips_comments() {
        let l = SentimentLexicon::load("; header\n\ngood\n", ";x\nbad").unwrap();
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn load_rejects_cross_list_duplicate() {
        let err = SentimentLexicon::load("fine", "FINE").unwrap_err();
        assert!(matches!(err, Error::ConflictingPolarity { word } if word == "fine"));
    }

    #[test]
    fn polarity_lookup() {
        let l = lex(&["good"], &["crush"]);
        assert_eq!(l.polarity_of("crush"), Some(Polarity::Negative));
        assert_eq!(l.polarity_of("zzz-unknown"), None);
        assert_eq!(l.polarity_of("GOOD"), Some(Polarity::Positive));
    }

    #[test]
    fn apply_delta_flips_crush() {
        let base = lex(&[], &["crush"]);
        let delta = LexiconDelta::new(&base, [("crush", Polarity::Positive)]).unwrap();
        let fixed = base.apply_delta(&delta).unwrap();
        assert_eq!(fixed.polarity_of("crush"), Some(Polarity::Positive));
        assert_eq!(base.polarity_of("crush"), Some(Polarity::Negative));
    }

    #[test]
    fn apply_empty_delta_is_identity() {
        let base = lex(&["good"], &[]);
        assert_eq!(base.apply_delta(&LexiconDelta::empty()).unwrap(), base);
    }

    #[test]
    fn delta_key_must_exist() {
        let base = lex(&["good"], &[]);
        assert!(matches!(
            LexiconDelta::new(&base, [("bad", Polarity::Positive)]),
            Err(Error::DeltaKeyMissing { .. })
        ));
        let unchecked = LexiconDelta {
            changes: [("bad".to_string(), Polarity::Positive)].into(),
        };
        assert!(base.apply_delta(&unchecked).is_err());
    }

    #[test]
    fn delta_must_change_polarity() {
        let base = lex(&["good"], &[]);
        assert!(matches!(
            LexiconDelta::new(&base, [("good", Polarity::Positive)]),
            Err(Error::DeltaNoChange { .. })
        ));
    }

    #[test]
    fn delta_tsv_round_trip() {
        let base = lex(&["good", "cold"], &["crush"]);
        let delta = LexiconDelta::flipping(&base, ["crush", "cold"]).unwrap();
        let tsv = delta.to_tsv(&base);
        assert_eq!(tsv, "cold\tpositive\tnegative\ncrush\tnegative\tpositive\n");
        assert_eq!(LexiconDelta::from_tsv(&tsv, &base).unwrap(), delta);
    }

    #[test]
    fn delta_tsv_rejects_bad_rows() {
        let base = lex(&["good"], &[]);
        assert!(matches!(
            LexiconDelta::from_tsv("good\tpositive\n", &base),
            Err(Error::Malformed { line: 1, .. })
        ));
        assert!(LexiconDelta::from_tsv("good\tnegative\tpositive\n", &base).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn lexicon_and_flips() -> impl Strategy<Value = (SentimentLexicon, Vec<String>)> {
            proptest::collection::btree_map("[a-z]{1,6}", any::<bool>(), 1..30).prop_flat_map(
                |entries| {
                    let words: Vec<String> = entries.keys().cloned().collect();
                    let lexicon =
                        SentimentLexicon::from_entries(entries.into_iter().map(|(w, pos)| {
                            (
                                w,
                                if pos {
                                    Polarity::Positive
                                } else {
                                    Polarity::Negative
                                },
                            )
                        }))
                        .unwrap();
                    (
                        Just(lexicon),
                        proptest::sample::subsequence(words.clone(), 0..=words.len()),
                    )
                },
            )
        }

        proptest! {
            #[test]
            fn delta_idempotent_and_invertible((base, flips) in lexicon_and_flips()) {
                let delta = LexiconDelta::flipping(&base, &flips).unwrap();
                let once = base.apply_delta(&delta).unwrap();
                let twice = once.apply_delta(&delta).unwrap();
                prop_assert_eq!(&once, &twice);

                let inverse = delta.inverse(&base).unwrap();
                prop_assert_eq!(once.apply_delta(&inverse).unwrap(), base.clone());

                let changed = base
                    .iter()
                    .filter(|(w, p)| once.polarity_of(w) != Some(*p))
                    .count();
                prop_assert_eq!(changed, delta.len());
            }
        }
    }
}
