//! Embedded relational store: schema with its foreign-key graph, tuple
//! ingestion from tab-separated files, and the value index used for entity
//! matching.

mod dataset;
pub mod fixture;
mod schema;
mod value_index;

pub use dataset::{Dataset, DatasetBuilder, Row, Value};
pub use schema::{ColumnDef, ColumnKind, ColumnRef, FkEdge, Schema, SchemaElement, TableDef};
pub use value_index::{ValueIndex, ValueMatch};
