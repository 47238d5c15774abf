//! # strel
//!
//! Semantic textual relatedness pipelines for sentence pairs.
//!
//! Sentences are embedded by TF-IDF, by averaged PPMI word vectors, or by
//! vectors computed elsewhere (transformer encoders) and loaded from a TSV
//! file. Pairs are scored by cosine similarity, optionally passed through
//! least-squares or ElasticNet regressors, evaluated with Spearman rank
//! correlation, and combined with weighted or uniform ensembles.
//!
//! Three run protocols are provided in [`pipeline`]:
//!
//! - **track A** (supervised): fit both regressors on each embedding source
//!   and weight members by their dev Spearman;
//! - **track B** (unsupervised): raw cosine per source, averaged;
//! - **track C** (cross-lingual): train on other languages' merged training
//!   sets, average all members.
//!
//! ```no_run
//! use strel::pipeline::{run, RunConfig};
//!
//! let cfg = RunConfig::load("runs/eng_a.conf")?;
//! let report = run(&cfg)?;
//! println!("{}", report.to_json()?);
//! # Ok::<(), strel::Error>(())
//! ```

pub mod corpus;
pub mod ensemble;
mod error;
pub mod featurize;
pub mod metrics;
pub mod pairsim;
pub mod pipeline;
pub mod regress;
pub mod synthetic;
pub mod tokenize;

pub use error::{Error, Result};
