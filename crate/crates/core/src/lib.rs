//! Word vector spaces enriched with sememe knowledge and morphological
//! similarity, plus a log-linear sequence tagger that consumes them.
//!
//! The pipeline, bottom up:
//!
//! * [`corpus`]: pre-segmented text, tagged text, vocabularies and term frequencies.
//! * [`embedding`]: negative-sampling word2vec training, vector storage and the text vector format.
//! * [`sememe`]: sememe lexicon parsing, sememe-replacement corpora and sememe-sum word vectors.
//! * [`morphsim`]: string similarity measures, a perceptron that weights them, nearest-word search.
//! * [`revise`]: term-frequency bucketed revision of rare and unseen word vectors.
//! * [`tagger`]: feature assembly and multiclass L2 logistic regression over BI(+O) labels.
//! * [`eval`]: Spearman correlation, span precision/recall/F and fold splitting.

pub mod cli;
pub mod corpus;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod morphsim;
pub mod revise;
pub mod sememe;
pub mod synth;
pub mod tagger;

mod textio;

pub use error::{Error, Result};
