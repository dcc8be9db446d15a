//! Pipeline configuration as a flat TOML document.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classifier::{default_intensifiers, ClassifierConfig, LabeledFormat};
use crate::collection::{CollectionConfig, PriorTable};
use crate::corpus::{InputFormat, DEFAULT_NEGATORS};
use crate::correlation::{CorrelationConfig, EpsilonTable};
use crate::detection::Selection;
use crate::error::{read_file, Error, Result};
use crate::inference::InferenceParams;
use crate::lexicon::Polarity;
use crate::mrf::{EdgeWeighting, GraphConfig};

pub const DEFAULT_CONFIG_TOML: &str = include_str!("data/default.toml");

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Baseline {
    #[default]
    Dsg,
    Lci,
}

impl std::str::FromStr for Baseline {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dsg" => Ok(Baseline::Dsg),
            "lci" => Ok(Baseline::Lci),
            other => Err(format!("unknown baseline {other:?} (expected dsg or lci)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectMode {
    #[default]
    TopN,
    Threshold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input_format: InputFormat,
    pub negators: Vec<String>,

    pub min_count: usize,
    pub prior_positive: f64,
    pub prior_nonlexical: f64,
    pub prior_negative: f64,

    pub conj_window: usize,

    pub epsilon_and: f64,
    pub epsilon_or: f64,
    pub epsilon_nb: f64,
    pub epsilon_alt: f64,
    pub epsilon_but: f64,
    pub min_edge_count: usize,
    pub edge_weighting: EdgeWeighting,

    pub max_iterations: usize,
    pub tolerance: f64,
    pub damping: f64,

    pub baseline: Baseline,
    pub detect_mode: DetectMode,
    pub top_n: usize,
    pub threshold: f64,

    pub labeled_format: LabeledFormat,
    pub negation_window: usize,
    pub tie_label: Polarity,
    pub intensifiers: BTreeMap<String, f64>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let priors = PriorTable::default();
        let eps = EpsilonTable::default();
        let graph = GraphConfig::default();
        let inference = InferenceParams::default();
        let classifier = ClassifierConfig::default();
        Self {
            input_format: InputFormat::Raw,
            negators: DEFAULT_NEGATORS.iter().map(|s| s.to_string()).collect(),
            min_count: CollectionConfig::default().min_count,
            prior_positive: priors.positive,
            prior_nonlexical: priors.nonlexical,
            prior_negative: priors.negative,
            conj_window: CorrelationConfig::default().conj_window,
            epsilon_and: eps.and,
            epsilon_or: eps.or,
            epsilon_nb: eps.nb,
            epsilon_alt: eps.alt,
            epsilon_but: eps.but,
            min_edge_count: graph.min_edge_count,
            edge_weighting: graph.weighting,
            max_iterations: inference.max_iterations,
            tolerance: inference.tolerance,
            damping: inference.damping,
            baseline: Baseline::Dsg,
            detect_mode: DetectMode::TopN,
            top_n: 20,
            threshold: 0.5,
            labeled_format: LabeledFormat::Csv,
            negation_window: classifier.negation_window,
            tie_label: classifier.tie_label,
            intensifiers: default_intensifiers(),
        }
    }
}

impl PipelineConfig {
    /// Parses and validates a config document. Missing keys take defaults.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&read_file(path.as_ref())?)
    }

    pub fn validate(&self) -> Result<()> {
        self.priors().validate()?;
        self.epsilons().validate()?;
        self.inference().validate()?;
        Selection::Threshold(self.threshold).validate()?;
        self.classifier().validate()?;
        if self.conj_window == 0 {
            return Err(Error::Config("conj_window must be at least 1".into()));
        }
        if self.negators.iter().any(|n| n.trim().is_empty()) {
            return Err(Error::Config("negators must be non-empty words".into()));
        }
        Ok(())
    }

    pub fn negator_set(&self) -> BTreeSet<String> {
        self.negators
            .iter()
            .map(|n| n.trim().to_lowercase())
            .collect()
    }

    pub fn priors(&self) -> PriorTable {
        PriorTable {
            positive: self.prior_positive,
            nonlexical: self.prior_nonlexical,
            negative: self.prior_negative,
        }
    }

    pub fn epsilons(&self) -> EpsilonTable {
        EpsilonTable {
            and: self.epsilon_and,
            or: self.epsilon_or,
            nb: self.epsilon_nb,
            alt: self.epsilon_alt,
            but: self.epsilon_but,
        }
    }

    pub fn collection(&self) -> CollectionConfig {
        CollectionConfig {
            min_count: self.min_count,
            priors: self.priors(),
        }
    }

    pub fn correlation(&self) -> CorrelationConfig {
        CorrelationConfig {
            conj_window: self.conj_window,
        }
    }

    pub fn graph(&self) -> GraphConfig {
        GraphConfig {
            epsilons: self.epsilons(),
            min_edge_count: self.min_edge_count,
            weighting: self.edge_weighting,
        }
    }

    pub fn inference(&self) -> InferenceParams {
        InferenceParams {
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            damping: self.damping,
        }
    }

    pub fn selection(&self) -> Selection {
        match self.detect_mode {
            DetectMode::TopN => Selection::TopN(self.top_n),
            DetectMode::Threshold => Selection::Threshold(self.threshold),
        }
    }

    pub fn classifier(&self) -> ClassifierConfig {
        ClassifierConfig {
            negators: self.negator_set(),
            negation_window: self.negation_window,
            intensifiers: self.intensifiers.clone(),
            tie_label: self.tie_label,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_default_matches_code_default() {
        let parsed = PipelineConfig::from_toml(DEFAULT_CONFIG_TOML).unwrap();
        assert_eq!(parsed, PipelineConfig::default());
        assert_eq!(
            PipelineConfig::from_toml("").unwrap(),
            PipelineConfig::default()
        );
        assert_eq!(parsed.classifier(), ClassifierConfig::default());
        assert_eq!(parsed.graph(), GraphConfig::default());
        assert_eq!(parsed.inference(), InferenceParams::default());
    }

    #[test]
    fn overrides_and_rejections() {
        let cfg =
            PipelineConfig::from_toml("epsilon_but = -0.3\ndetect_mode = \"threshold\"\n").unwrap();
        assert_eq!(cfg.epsilons().but, -0.3);
        assert_eq!(cfg.selection(), Selection::Threshold(0.5));

        for bad in [
            "no_such_key = 1",
            "epsilon_and = 0.5",
            "prior_positive = 1.0",
            "damping = 1.0",
            "tolerance = 0",
            "threshold = 2.0",
            "conj_window = 0",
            "intensifiers = { very = -1.0 }",
            "max_iterations = \"many\"",
        ] {
            let err = PipelineConfig::from_toml(bad).unwrap_err();
            assert_eq!(err.class(), crate::ErrorClass::Config, "{bad}: {err}");
        }
    }
}
