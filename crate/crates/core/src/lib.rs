//! Keyword search over relational data organised as *qunits*: parameterized
//! views paired with a presentation template, materialized one document per
//! anchor value and ranked with plain IR scoring.
//!
//! The crate is split along the pipeline:
//!
//! * [`store`] loads a schema and tab-separated tables and indexes values
//!   for entity matching.
//! * [`qunit`] holds the definition language, its evaluator and renderer.
//! * [`derive`] proposes definitions from the schema, a query log, or
//!   external documents.
//! * [`search`] segments keyword queries, matches them to definitions and
//!   ranks materialized instances.
//! * [`baselines`] implements spanning-tree, LCA and MLCA keyword search.
//! * [`bench`] builds query benchmarks and scores algorithms against gold
//!   specifications.
//!
//! Scoring code is generic over [`Scalar`]; the aliases below pin the
//! common instantiations.

pub mod baselines;
pub mod bench;
pub mod cli;
pub mod derive;
mod error;
mod num;
pub mod qunit;
pub mod search;
pub mod store;
pub mod text;

pub use error::{Error, Result};
pub use num::Scalar;

/// Ranked search result with `f64` scores.
pub type Ranked = search::RankedResult<f64>;
/// Ranked search result with `f32` scores.
pub type Ranked32 = search::RankedResult<f32>;
/// Search configuration with `f64` weights.
pub type SearchConfig = search::SearchConfig<f64>;
/// Queriability scores with `f64` values.
pub type Queriability = derive::QueriabilityScore<f64>;
/// Benchmark report with `f64` means.
pub type ScoreReport = bench::ScoreReport<f64>;
