//! Qunit definitions (base + conversion expression), their evaluation into
//! self-contained instances, and rendering for display and indexing.

mod definition;
mod eval;
mod render;

pub use definition::{
    parse_definitions, validate_definition, write_definitions, BaseExpression,
    ConversionExpression, ForEachGroup, JoinPredicate, Provenance, QunitDefinition,
};
pub use eval::{enumerate_instances, instantiate, GroupRows, QunitInstance};
pub use render::{render, Rendered};
