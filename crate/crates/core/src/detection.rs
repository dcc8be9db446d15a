//! Ranking of lexicon words by how strongly the corpus contradicts them.
//!
//! The polarity-change score of a word is the belief mass on the polarity
//! opposite to its lexicon entry. The lexicon-consistency baseline ranks
//! words instead by how often the sentences containing them are classified
//! against their lexicon polarity.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::classifier::{score_sentence, ClassifierConfig};
use crate::collection::SentimentWordSet;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::inference::BeliefVector;
use crate::lexicon::{LexiconDelta, Polarity, SentimentLexicon};

pub fn pcs(original: Polarity, belief: BeliefVector) -> f64 {
    match original {
        Polarity::Positive => belief.negative(),
        Polarity::Negative => belief.positive(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedWord {
    pub rank: usize,
    pub form: String,
    pub original: Polarity,
    pub pcs: f64,
    pub belief: BeliefVector,
    pub corpus_count: usize,
}

/// Higher score first, then higher count, then form ascending.
fn rank_order(a: (f64, usize, &str), b: (f64, usize, &str)) -> Ordering {
    b.0.total_cmp(&a.0)
        .then(b.1.cmp(&a.1))
        .then_with(|| a.2.cmp(b.2))
}

/// Ranks every plain lexicon word that received a belief. Negated forms
/// and words outside the lexicon are left out.
pub fn rank_lexicon_words(
    lexicon: &SentimentLexicon,
    beliefs: &BTreeMap<String, BeliefVector>,
    words: &SentimentWordSet,
) -> Vec<RankedWord> {
    let mut ranked: Vec<RankedWord> = beliefs
        .iter()
        .filter(|(form, _)| words.get(form).is_none_or(|w| !w.origin.is_negated()))
        .filter_map(|(form, &belief)| {
            let original = lexicon.polarity_of(form)?;
            Some(RankedWord {
                rank: 0,
                form: form.clone(),
                original,
                pcs: pcs(original, belief),
                belief,
                corpus_count: words.get(form).map_or(0, |w| w.corpus_count),
            })
        })
        .collect();
    ranked.sort_by(|a, b| {
        rank_order(
            (a.pcs, a.corpus_count, &a.form),
            (b.pcs, b.corpus_count, &b.form),
        )
    });
    for (i, r) in ranked.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    ranked
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selection {
    TopN(usize),
    /// Every word whose score exceeds the threshold.
    Threshold(f64),
}

impl Default for Selection {
    fn default() -> Self {
        Selection::TopN(20)
    }
}

impl Selection {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Selection::Threshold(t) if !(0.0..=1.0).contains(&t) => Err(Error::Config(format!(
                "detection threshold must lie in [0, 1], got {t}"
            ))),
            _ => Ok(()),
        }
    }

    fn select<'a>(&self, ranked: impl Iterator<Item = (&'a str, f64)>) -> Vec<&'a str> {
        match *self {
            Selection::TopN(n) => ranked.take(n).map(|(f, _)| f).collect(),
            Selection::Threshold(t) => ranked.filter(|(_, s)| *s > t).map(|(f, _)| f).collect(),
        }
    }
}

/// Flips the selected words of a ranking.
pub fn detect(
    lexicon: &SentimentLexicon,
    ranked: &[RankedWord],
    selection: Selection,
) -> Result<LexiconDelta> {
    let chosen = selection.select(ranked.iter().map(|r| (r.form.as_str(), r.pcs)));
    LexiconDelta::flipping(lexicon, chosen)
}

/// `rank<TAB>form<TAB>old<TAB>pcs<TAB>b_pos<TAB>b_neg`.
pub fn ranked_tsv(ranked: &[RankedWord]) -> String {
    ranked
        .iter()
        .map(|r| {
            format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                r.rank,
                r.form,
                r.original,
                r.pcs,
                r.belief.positive(),
                r.belief.negative()
            )
        })
        .collect()
}

/// Inferred polarity of collected words that are not lexicon entries:
/// `form<TAB>origin<TAB>b_pos<TAB>b_neg<TAB>inferred`.
pub fn nonlexical_tsv(
    lexicon: &SentimentLexicon,
    beliefs: &BTreeMap<String, BeliefVector>,
    words: &SentimentWordSet,
) -> String {
    let mut out = String::new();
    for (form, belief) in beliefs {
        let Some(word) = words.get(form) else {
            continue;
        };
        if lexicon.contains(form) || word.origin.is_negated() {
            continue;
        }
        let inferred = if belief.favors_positive() {
            Polarity::Positive
        } else {
            Polarity::Negative
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            form,
            word.origin.as_str(),
            belief.positive(),
            belief.negative(),
            inferred
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct LciScore {
    pub rank: usize,
    pub form: String,
    pub original: Polarity,
    /// Containing sentences whose predicted label disagrees with `original`.
    pub inconsistent: usize,
    pub containing: usize,
    pub ratio: f64,
}

/// Lexicon-consistency baseline: classifies every sentence with the base
/// lexicon and ranks each lexicon word by the share of its sentences that
/// came out opposite to its own polarity.
pub fn lci_rank(
    corpus: &Corpus,
    lexicon: &SentimentLexicon,
    cfg: &ClassifierConfig,
) -> Vec<LciScore> {
    let mut tallies: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for sentence in corpus.sentences() {
        let label = score_sentence(sentence, lexicon, cfg).label;
        let present: BTreeSet<&str> = sentence
            .tokens
            .iter()
            .filter(|t| !t.negated && lexicon.contains(&t.form))
            .map(|t| t.form.as_str())
            .collect();
        for form in present {
            let entry = tallies.entry(form).or_default();
            entry.1 += 1;
            if lexicon.polarity_of(form) != Some(label) {
                entry.0 += 1;
            }
        }
    }
    let mut scores: Vec<LciScore> = tallies
        .into_iter()
        .filter_map(|(form, (inconsistent, containing))| {
            Some(LciScore {
                rank: 0,
                form: form.to_string(),
                original: lexicon.polarity_of(form)?,
                inconsistent,
                containing,
                ratio: inconsistent as f64 / containing as f64,
            })
        })
        .collect();
    scores.sort_by(|a, b| {
        rank_order(
            (a.ratio, a.containing, &a.form),
            (b.ratio, b.containing, &b.form),
        )
    });
    for (i, s) in scores.iter_mut().enumerate() {
        s.rank = i + 1;
    }
    scores
}

pub fn detect_lci(
    lexicon: &SentimentLexicon,
    ranked: &[LciScore],
    selection: Selection,
) -> Result<LexiconDelta> {
    let chosen = selection.select(ranked.iter().map(|r| (r.form.as_str(), r.ratio)));
    LexiconDelta::flipping(lexicon, chosen)
}

/// `rank<TAB>form<TAB>old<TAB>ratio<TAB>inconsistent<TAB>containing`.
pub fn lci_tsv(scores: &[LciScore]) -> String {
    scores
        .iter()
        .map(|s| {
            format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                s.rank, s.form, s.original, s.ratio, s.inconsistent, s.containing
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::{CollectedWord, Origin};
    use crate::corpus::{default_negators, parse_raw, ParseContext};
    use proptest::prelude::*;

    fn b(pos: f64) -> BeliefVector {
        BeliefVector([pos, 1.0 - pos])
    }

    #[test]
    fn pcs_picks_opposite_mass() {
        assert_eq!(pcs(Polarity::Positive, BeliefVector([0.9, 0.1])), 0.1);
        assert_eq!(pcs(Polarity::Negative, BeliefVector([0.7, 0.3])), 0.7);
        assert_eq!(pcs(Polarity::Positive, BeliefVector([0.5, 0.5])), 0.5);
        assert_eq!(pcs(Polarity::Negative, BeliefVector([0.5, 0.5])), 0.5);
    }

    fn word(form: &str, origin: Origin, count: usize) -> CollectedWord {
        CollectedWord {
            form: form.into(),
            origin,
            prior_p: 0.5,
            corpus_count: count,
        }
    }

    fn fixture() -> (
        SentimentLexicon,
        BTreeMap<String, BeliefVector>,
        SentimentWordSet,
    ) {
        let lex = SentimentLexicon::load("good\nquiet\nnice", "bad\ncrush\nslow").unwrap();
        let beliefs: BTreeMap<String, BeliefVector> = [
            ("good", b(0.8)),
            ("quiet", b(0.4)),
            ("nice", b(0.4)),
            ("bad", b(0.3)),
            ("crush", b(0.9)),
            ("not_bad", b(0.7)),
            ("cheap", b(0.2)),
        ]
        .into_iter()
        .map(|(w, v)| (w.to_string(), v))
        .collect();
        let words = SentimentWordSet::from_words([
            word("good", Origin::Lexical, 4),
            word("quiet", Origin::Lexical, 2),
            word("nice", Origin::Lexical, 5),
            word("bad", Origin::Lexical, 1),
            word("crush", Origin::Lexical, 3),
            word("not_bad", Origin::NegatedLexical, 1),
            word("cheap", Origin::Adjective, 2),
        ]);
        (lex, beliefs, words)
    }

    #[test]
    fn ranking_order_and_tiebreak() {
        let (lex, beliefs, words) = fixture();
        let ranked = rank_lexicon_words(&lex, &beliefs, &words);
        let forms: Vec<&str> = ranked.iter().map(|r| r.form.as_str()).collect();
        // quiet and nice tie on score; nice has the larger count.
        assert_eq!(forms, ["crush", "nice", "quiet", "bad", "good"]);
        assert_eq!(ranked[0].rank, 1);
        assert_eq!(ranked[0].pcs, 0.9);

        let delta = detect(&lex, &ranked, Selection::TopN(2)).unwrap();
        assert_eq!(delta.get("crush"), Some(Polarity::Positive));
        assert_eq!(delta.get("nice"), Some(Polarity::Negative));
        assert_eq!(delta.len(), 2);

        let delta = detect(&lex, &ranked, Selection::Threshold(0.5)).unwrap();
        assert_eq!(
            delta.iter().map(|(w, _)| w).collect::<Vec<_>>(),
            ["crush", "nice", "quiet"]
        );
        assert!(detect(&lex, &ranked, Selection::Threshold(0.95))
            .unwrap()
            .is_empty());
        assert!(Selection::Threshold(1.5).validate().is_err());

        let tsv = ranked_tsv(&ranked);
        assert!(tsv.starts_with("1\tcrush\tnegative\t0.9\t0.9\t0.09999999999999998\n"));
        let nonlex = nonlexical_tsv(&lex, &beliefs, &words);
        assert_eq!(nonlex, "cheap\tadjective\t0.2\t0.8\tnegative\n");
    }

    #[test]
    fn ranking_examples() {
        let lex = SentimentLexicon::load("fine\nhot", "crush\ncold\nrare").unwrap();
        let beliefs: BTreeMap<String, BeliefVector> = [
            ("crush", b(0.7)),
            ("cold", b(0.6)),
            ("fine", b(0.6)),
            ("hot", b(0.6)),
        ]
        .into_iter()
        .map(|(w, v)| (w.to_string(), v))
        .collect();
        let words = SentimentWordSet::from_words([
            word("crush", Origin::Lexical, 1),
            word("cold", Origin::Lexical, 1),
            word("fine", Origin::Lexical, 3),
            word("hot", Origin::Lexical, 10),
        ]);
        let ranked = rank_lexicon_words(&lex, &beliefs, &words);
        let forms: Vec<&str> = ranked.iter().map(|r| r.form.as_str()).collect();
        // `rare` never occurs, so it has no belief and no rank.
        assert_eq!(forms, ["crush", "cold", "hot", "fine"]);

        assert!(detect(&lex, &ranked, Selection::TopN(0))
            .unwrap()
            .is_empty());
        assert_eq!(detect(&lex, &ranked, Selection::TopN(20)).unwrap().len(), 4);
    }

    #[test]
    fn lci_ratio_definition() {
        let lex = SentimentLexicon::load("good\nnice", "crush").unwrap();
        let negs = default_negators();
        let mut lines = vec!["very good crush"; 7];
        lines.extend(["crush"; 3]);
        let corpus = parse_raw(&lines.join("\n"), ParseContext::new(&negs, Some(&lex)));
        let scores = lci_rank(&corpus, &lex, &ClassifierConfig::default());
        let crush = scores.iter().find(|s| s.form == "crush").unwrap();
        assert_eq!((crush.inconsistent, crush.containing), (7, 10));
        assert_eq!(crush.ratio, 0.7);
        assert!(scores.iter().all(|s| s.form != "nice"));
    }

    #[test]
    fn lci_counts_inconsistent_sentences() {
        let lex = SentimentLexicon::load("good", "bad\ncrush").unwrap();
        let negs = default_negators();
        let corpus = parse_raw(
            "good and bad\nvery good but crush\ngood\ncrush ice",
            ParseContext::new(&negs, Some(&lex)),
        );
        let scores = lci_rank(&corpus, &lex, &ClassifierConfig::default());
        let get = |w: &str| scores.iter().find(|s| s.form == w).unwrap();
        // "good and bad" ties and is labeled positive.
        assert_eq!(get("bad").ratio, 1.0);
        assert_eq!(get("good").ratio, 0.0);
        assert_eq!((get("crush").inconsistent, get("crush").containing), (1, 2));
        assert_eq!(scores[0].form, "bad");
        let delta = detect_lci(&lex, &scores, Selection::TopN(1)).unwrap();
        assert_eq!(delta.get("bad"), Some(Polarity::Positive));
        assert!(lci_tsv(&scores).starts_with("1\tbad\tnegative\t1\t1\t1\n"));
    }

    proptest! {
        #[test]
        fn ranking_properties(
            probs in proptest::collection::vec(0u32..=20, 1..15),
            signs in proptest::collection::vec(any::<bool>(), 15),
            counts in proptest::collection::vec(1usize..4, 15),
            n in 0usize..16,
        ) {
            let forms: Vec<String> = (0..probs.len()).map(|i| format!("w{i:02}")).collect();
            let pos: Vec<&str> = forms.iter().zip(&signs).filter(|(_, s)| **s).map(|(f, _)| f.as_str()).collect();
            let neg: Vec<&str> = forms.iter().zip(&signs).filter(|(_, s)| !**s).map(|(f, _)| f.as_str()).collect();
            let lex = SentimentLexicon::load(&pos.join("\n"), &neg.join("\n")).unwrap();
            let beliefs: BTreeMap<String, BeliefVector> = forms.iter().zip(&probs)
                .map(|(f, p)| (f.clone(), b(*p as f64 / 20.0))).collect();
            let words = SentimentWordSet::from_words(forms.iter().zip(&counts)
                .map(|(f, c)| word(f, Origin::Lexical, *c)));
            let ranked = rank_lexicon_words(&lex, &beliefs, &words);
            prop_assert_eq!(ranked.len(), forms.len());

            // Order is fixed by content alone, so reversing the insertion order changes nothing.
            let mut shuffled: Vec<CollectedWord> = words.iter().cloned().collect();
            shuffled.reverse();
            let again = rank_lexicon_words(&lex, &beliefs, &SentimentWordSet::from_words(shuffled));
            prop_assert_eq!(&ranked, &again);

            // Top-n is a prefix of top-(n+1).
            let small = detect(&lex, &ranked, Selection::TopN(n)).unwrap();
            let large = detect(&lex, &ranked, Selection::TopN(n + 1)).unwrap();
            prop_assert_eq!(small.len(), n.min(ranked.len()));
            for (w, p) in small.iter() {
                prop_assert_eq!(large.get(w), Some(p));
            }

            // Flipping a word's lexicon entry maps its score to the complement.
            let flipped_lex = lex.apply_delta(&LexiconDelta::flipping(&lex, [&forms[0]]).unwrap()).unwrap();
            let flipped = rank_lexicon_words(&flipped_lex, &beliefs, &words);
            let before = ranked.iter().find(|r| r.form == forms[0]).unwrap().pcs;
            let after = flipped.iter().find(|r| r.form == forms[0]).unwrap().pcs;
            prop_assert!((before + after - 1.0).abs() < 1e-15);
        }
    }
}
