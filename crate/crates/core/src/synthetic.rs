//! Synthetic corpora with planted polarity changes.
//!
//! A balanced lexicon of `posNN` / `negNN` words is generated, and a few of
//! its words are made to behave like the opposite camp in the domain: they
//! are conjoined and juxtaposed with that camp's words and labeled with its
//! polarity. Everything is driven by a seeded ChaCha generator.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lexicon::Polarity;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub per_side: usize,
    /// Negative lexicon words that read as positive in the domain.
    pub planted_to_positive: usize,
    /// Positive lexicon words that read as negative in the domain.
    pub planted_to_negative: usize,
    pub sentences: usize,
    pub labeled: usize,
    /// Chance that a slot of a camp is filled by one of its planted words.
    pub planted_slot_prob: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            per_side: 30,
            planted_to_positive: 3,
            planted_to_negative: 2,
            sentences: 2000,
            labeled: 1000,
            planted_slot_prob: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub positive_list: String,
    pub negative_list: String,
    /// Raw corpus, one sentence per line.
    pub corpus: String,
    pub corpus_labels: Vec<Polarity>,
    /// Held-out labeled sentences as `text,label` CSV with a header.
    pub labeled_csv: String,
    pub planted: Vec<String>,
}

const OPENERS: &[&str] = &[
    "it is",
    "the item is",
    "this one was",
    "overall it is",
    "mine is",
];

/// Words by domain polarity, index 0 positive and 1 negative.
struct Camps {
    regular: [Vec<String>; 2],
    planted: [Vec<String>; 2],
}

impl Camps {
    fn pick(&self, side: usize, p_planted: f64, rng: &mut ChaCha8Rng) -> &str {
        let planted = &self.planted[side];
        if !planted.is_empty() && rng.gen_bool(p_planted) {
            planted.choose(rng).expect("non-empty")
        } else {
            self.regular[side].choose(rng).expect("non-empty camp")
        }
    }
}

fn side_of(p: Polarity) -> usize {
    match p {
        Polarity::Positive => 0,
        Polarity::Negative => 1,
    }
}

fn sentence(camps: &Camps, cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> (String, Polarity) {
    let label = if rng.gen_bool(0.5) {
        Polarity::Positive
    } else {
        Polarity::Negative
    };
    let side = side_of(label);
    let opener = OPENERS.choose(rng).expect("openers");
    let p = cfg.planted_slot_prob;
    let roll: f64 = rng.gen();
    let text = if roll < 0.30 {
        let (a, b) = (camps.pick(side, p, rng), camps.pick(side, p, rng));
        format!("{opener} {a} and {b}")
    } else if roll < 0.45 {
        let (a, b) = (camps.pick(side, p, rng), camps.pick(side, p, rng));
        format!("{opener} {a} or {b}")
    } else if roll < 0.65 {
        let (a, b) = (camps.pick(side, p, rng), camps.pick(side, p, rng));
        format!("{opener} {a} {b}")
    } else if roll < 0.80 {
        // The clause after `but` carries the sentence label.
        let a = camps.pick(1 - side, p, rng);
        let b = camps.pick(side, p, rng);
        format!("{opener} {a} but {b}")
    } else {
        format!("{opener} {}", camps.pick(side, p, rng))
    };
    (text, label)
}

pub fn generate(cfg: &GeneratorConfig) -> Fixture {
    assert!(cfg.planted_to_positive < cfg.per_side && cfg.planted_to_negative < cfg.per_side);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pos: Vec<String> = (0..cfg.per_side).map(|i| format!("pos{i:02}")).collect();
    let neg: Vec<String> = (0..cfg.per_side).map(|i| format!("neg{i:02}")).collect();

    let mut pos_shuffled = pos.clone();
    let mut neg_shuffled = neg.clone();
    pos_shuffled.shuffle(&mut rng);
    neg_shuffled.shuffle(&mut rng);
    let to_negative: Vec<String> = pos_shuffled[..cfg.planted_to_negative].to_vec();
    let to_positive: Vec<String> = neg_shuffled[..cfg.planted_to_positive].to_vec();

    let camps = Camps {
        regular: [
            pos.iter()
                .filter(|w| !to_negative.contains(w))
                .cloned()
                .collect(),
            neg.iter()
                .filter(|w| !to_positive.contains(w))
                .cloned()
                .collect(),
        ],
        planted: [to_positive.clone(), to_negative.clone()],
    };

    let mut corpus = String::new();
    let mut corpus_labels = Vec::with_capacity(cfg.sentences);
    for _ in 0..cfg.sentences {
        let (text, label) = sentence(&camps, cfg, &mut rng);
        corpus.push_str(&text);
        corpus.push('\n');
        corpus_labels.push(label);
    }
    let mut labeled_csv = String::from("text,label\n");
    for _ in 0..cfg.labeled {
        let (text, label) = sentence(&camps, cfg, &mut rng);
        labeled_csv.push_str(&format!("{text},{label}\n"));
    }

    let mut planted: Vec<String> = to_positive.into_iter().chain(to_negative).collect();
    planted.sort();
    Fixture {
        positive_list: pos.join("\n") + "\n",
        negative_list: neg.join("\n") + "\n",
        corpus,
        corpus_labels,
        labeled_csv,
        planted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shape_and_determinism() {
        let cfg = GeneratorConfig::default();
        let a = generate(&cfg);
        assert_eq!(a, generate(&cfg));
        assert_eq!(a.corpus.lines().count(), 2000);
        assert_eq!(a.labeled_csv.lines().count(), 1001);
        assert_eq!(a.planted.len(), 5);
        assert_eq!(
            a.positive_list.lines().count() + a.negative_list.lines().count(),
            60
        );
        let other = generate(&GeneratorConfig { seed: 1, ..cfg });
        assert_ne!(a.corpus, other.corpus);
    }
}
