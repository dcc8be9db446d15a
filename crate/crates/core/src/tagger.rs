//! Coarse part-of-speech tags and a deterministic rule-based tagger.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Tag {
    Adj,
    Adv,
    Noun,
    Verb,
    Other,
    Conj,
    Neg,
}

impl Tag {
    pub const ALL: [Tag; 7] = [
        Tag::Adj,
        Tag::Adv,
        Tag::Noun,
        Tag::Verb,
        Tag::Other,
        Tag::Conj,
        Tag::Neg,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Adj => "ADJ",
            Tag::Adv => "ADV",
            Tag::Noun => "NOUN",
            Tag::Verb => "VERB",
            Tag::Other => "OTHER",
            Tag::Conj => "CONJ",
            Tag::Neg => "NEG",
        }
    }

    /// Maps a coarse tag or any tag from the shipped Penn/UD table.
    pub fn from_external(tag: &str) -> Option<Tag> {
        tag.parse().ok().or_else(|| penn_table().get(tag).copied())
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL.into_iter().find(|t| t.as_str() == s).ok_or(())
    }
}

const PENN_TABLE: &str = include_str!("data/penn_tags.tsv");
const ADJECTIVE_SEEDS: &str = include_str!("data/adjectives.txt");

fn penn_table() -> &'static BTreeMap<String, Tag> {
    static TABLE: OnceLock<BTreeMap<String, Tag>> = OnceLock::new();
    TABLE.get_or_init(|| {
        PENN_TABLE
            .lines()
            .filter(|l| !l.is_empty() && !l.starts_with(';'))
            .filter_map(|l| {
                let (ext, coarse) = l.split_once('\t')?;
                Some((ext.to_string(), coarse.parse().ok()?))
            })
            .collect()
    })
}

/// Embedded list of frequent adjectives the suffix rules miss.
pub fn adjective_seeds() -> &'static BTreeSet<String> {
    static SEEDS: OnceLock<BTreeSet<String>> = OnceLock::new();
    SEEDS.get_or_init(|| {
        ADJECTIVE_SEEDS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with(';'))
            .map(str::to_string)
            .collect()
    })
}

const CONJUNCTIONS: &[&str] = &[
    "and", "or", "but", "however", "although", "though", "yet", "nor", "whereas", "while",
];

const DETERMINERS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "each", "every", "some", "any", "all",
    "both", "either", "neither", "another", "such", "my", "your", "his", "her", "its", "our",
    "their",
];

const PRONOUNS: &[&str] = &[
    "i",
    "me",
    "you",
    "he",
    "she",
    "it",
    "we",
    "they",
    "him",
    "them",
    "us",
    "myself",
    "yourself",
    "itself",
    "themselves",
    "everything",
    "something",
    "anything",
    "nothing",
    "everyone",
    "someone",
    "anyone",
    "who",
    "what",
    "which",
    "whom",
    "whose",
];

const FUNCTION_WORDS: &[&str] = &[
    "in", "on", "at", "of", "for", "with", "to", "from", "by", "as", "about", "into", "than",
    "then", "if", "because", "after", "before", "over", "under", "up", "down", "out", "off",
];

const COMMON_VERBS: &[&str] = &[
    "is", "am", "are", "was", "were", "be", "been", "being", "have", "has", "had", "do", "does",
    "did", "will", "would", "can", "could", "should", "may", "might", "must", "shall", "ca", "get",
    "gets", "got", "make", "makes", "made", "go", "goes", "went", "use", "uses", "work", "works",
    "worked", "buy", "bought", "seem", "seems", "look", "looks", "feel", "feels", "keep", "keeps",
    "run", "runs",
];

const COMMON_ADVERBS: &[&str] = &[
    "very", "really", "too", "also", "often", "always", "quite", "so", "just", "still", "even",
    "much", "more", "most", "rather", "almost", "already", "again", "ever", "here", "there", "now",
    "well", "somewhat", "soon", "once", "twice",
];

/// Words ending in -ly that are adjectives, not adverbs.
const LY_ADJECTIVES: &[&str] = &[
    "ugly",
    "silly",
    "lovely",
    "friendly",
    "costly",
    "likely",
    "lonely",
    "early",
    "daily",
    "elderly",
    "holy",
    "jolly",
    "smelly",
    "chilly",
    "curly",
    "oily",
    "lively",
    "deadly",
    "ghastly",
    "unlikely",
    "unfriendly",
    "homely",
    "cuddly",
];

const ADJECTIVE_SUFFIXES: &[&str] = &[
    "ous", "ful", "ive", "able", "ible", "ant", "ent", "al", "ic", "less",
];

fn has_suffix(form: &str, suffix: &str, min_stem: usize) -> bool {
    form.len() >= suffix.len() + min_stem && form.ends_with(suffix)
}

/// Tags one lowercase word form in isolation.
///
/// Priority: closed-class lists, suffix rules, the adjective seed list,
/// and finally `OTHER`.
pub fn tag_word(form: &str, negators: &BTreeSet<String>) -> Tag {
    if negators.contains(form) {
        return Tag::Neg;
    }
    if CONJUNCTIONS.contains(&form) {
        return Tag::Conj;
    }
    if DETERMINERS.contains(&form) || PRONOUNS.contains(&form) || FUNCTION_WORDS.contains(&form) {
        return Tag::Other;
    }
    if COMMON_VERBS.contains(&form) {
        return Tag::Verb;
    }
    if COMMON_ADVERBS.contains(&form) {
        return Tag::Adv;
    }
    if LY_ADJECTIVES.contains(&form) {
        return Tag::Adj;
    }
    if !form.chars().any(char::is_alphabetic) {
        return Tag::Other;
    }
    if has_suffix(form, "ly", 2) {
        return Tag::Adv;
    }
    if ADJECTIVE_SUFFIXES.iter().any(|s| has_suffix(form, s, 3)) {
        return Tag::Adj;
    }
    if adjective_seeds().contains(form) {
        return Tag::Adj;
    }
    Tag::Other
}

/// Tags a sequence of lowercase forms.
pub fn tag_heuristic<S: AsRef<str>>(forms: &[S], negators: &BTreeSet<String>) -> Vec<Tag> {
    forms
        .iter()
        .map(|f| tag_word(f.as_ref(), negators))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn negs() -> BTreeSet<String> {
        ["not", "no", "never"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    #[test]
    fn suffix_and_closed_class_rules() {
        let n = negs();
        assert_eq!(tag_word("quickly", &n), Tag::Adv);
        assert_eq!(tag_word("powerful", &n), Tag::Adj);
        assert_eq!(tag_word("and", &n), Tag::Conj);
        assert_eq!(tag_word("not", &n), Tag::Neg);
        assert_eq!(tag_word("efficient", &n), Tag::Adj);
        assert_eq!(tag_word("quiet", &n), Tag::Adj);
        assert_eq!(tag_word("is", &n), Tag::Verb);
        assert_eq!(tag_word("very", &n), Tag::Adv);
        assert_eq!(tag_word("machine", &n), Tag::Other);
        assert_eq!(tag_word(",", &n), Tag::Other);
        assert_eq!(tag_word("ugly", &n), Tag::Adj);
        assert_eq!(tag_word("table", &n), Tag::Other);
    }

    #[test]
    fn tagging_is_pure() {
        let n = negs();
        let forms = ["it", "is", "efficient", "and", "quiet"];
        assert_eq!(tag_heuristic(&forms, &n), tag_heuristic(&forms, &n));
    }

    #[test]
    fn penn_mapping() {
        assert_eq!(Tag::from_external("JJ"), Some(Tag::Adj));
        assert_eq!(Tag::from_external("JJS"), Some(Tag::Adj));
        assert_eq!(Tag::from_external("RB"), Some(Tag::Adv));
        assert_eq!(Tag::from_external("CC"), Some(Tag::Conj));
        assert_eq!(Tag::from_external("NNS"), Some(Tag::Noun));
        assert_eq!(Tag::from_external("VBZ"), Some(Tag::Verb));
        assert_eq!(Tag::from_external("PRP$"), Some(Tag::Other));
        assert_eq!(Tag::from_external("NEG"), Some(Tag::Neg));
        assert_eq!(Tag::from_external("jj"), None);
        assert_eq!(Tag::from_external("XYZ"), None);
    }
}
