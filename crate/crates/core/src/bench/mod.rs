//! Benchmarks built from query logs, and rubric scoring of each
//! algorithm's top result against per-template gold specifications.

mod adapters;
mod gold;
mod score;
pub mod synth;
mod templates;

pub use adapters::{banks_adapter, lca_adapter, mlca_adapter, qunit_adapter, Adapter};
pub use gold::{parse_gold_map, GoldEntry, GoldMap, GoldSpec};
pub use score::{run_comparison, score_result, Grade, ScoreReport, TopResult};
pub use templates::{extract_templates, make_benchmark, BenchQuery, Benchmark};
