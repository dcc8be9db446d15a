//! Detection of sentiment-lexicon words whose polarity changes in a domain.
//!
//! The pipeline collects candidate sentiment words from a domain corpus,
//! extracts typed correlations between them (`and`, `or`, neighbors,
//! `although`, `but`), builds a pairwise Markov random field and runs loopy
//! belief propagation. Lexicon words are then ranked by how much of their
//! inferred belief sits on the polarity opposite to their lexicon entry.

pub mod classifier;
pub mod collection;
pub mod config;
pub mod corpus;
pub mod correlation;
pub mod detection;
pub mod error;
pub mod inference;
pub mod lexicon;
pub mod mrf;
pub mod pipeline;
pub mod synthetic;
pub mod tagger;

pub use error::{Error, ErrorClass, Result};
