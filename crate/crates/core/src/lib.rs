//! Information-theoretic analysis of noun plural inflection classes.
//!
//! The crate estimates how much a noun's written form (`W`), its etymology
//! (`E`) and its plural class (`C`) tell us about one another once grammatical
//! gender (`G`) is known. Quantities over the finite systems `C`, `E`, `G` are
//! computed exactly with plug-in estimates ([`infotheory`]). Anything that
//! conditions on the open-ended space of word forms is bounded from above by
//! the held-out cross-entropy of a character-level LSTM classifier
//! ([`neural`], [`experiment`]). [`report`] combines both into normalized
//! mutual information tables, accuracies, confusion matrices and per-class
//! pointwise mutual information.
//!
//! All information quantities are in bits.

pub mod cli;
pub mod experiment;
pub mod infotheory;
pub mod inventory;
pub mod lexicon;
pub mod neural;
pub mod oracle;
pub mod report;
pub mod synth;

pub use infotheory::{CategoricalDistribution, JointTable, MeasureValue, Unit};
pub use lexicon::{
    build_instances, distribution_table, parse_lexicon, prune_classes, Etymology, Gender, Instance,
    InstanceSet, LexicalEntry, Lexicon, Task,
};
pub use neural::{ClassifierModel, ModelConfig, Vocabulary};
