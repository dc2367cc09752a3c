//! Automatic qunit derivation from three kinds of evidence: schema and data
//! statistics, a keyword query log, and external documents.

mod evidence;
mod queriability;
mod rollup;
mod typing;

use crate::qunit::{ForEachGroup, JoinPredicate};
use crate::store::{FkEdge, Schema};

pub use evidence::{
    aggregate, derive_from_evidence, parse_documents, signature, DocNode, TypeSignature,
};
pub use queriability::{derive_from_schema, queriability, QueriabilityScore};
pub use rollup::{derive_from_log, parse_query_log, rollup, LogEntry, SchemaLinkWeights};
pub use typing::{type_query, TemplateItem, TypedQuery, TypedTemplate};

/// Longest FK path a derived qunit may join through.
pub const MAX_JOIN_PATH: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationConfig {
    /// Number of anchor tables taken from the queriability ranking.
    pub k1: usize,
    /// Neighbouring tables joined to each anchor.
    pub k2: usize,
    /// Minimum link count for a log-derived `foreach` group.
    pub min_template_frequency: u64,
    /// Minimum number of documents sharing a signature shape.
    pub min_signature_support: usize,
}

impl Default for DerivationConfig {
    fn default() -> Self {
        DerivationConfig {
            k1: 3,
            k2: 3,
            min_template_frequency: 1,
            min_signature_support: 1,
        }
    }
}

/// Definitions produced by one strategy, plus anything it had to skip.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Derivation {
    pub definitions: Vec<crate::qunit::QunitDefinition>,
    pub warnings: Vec<String>,
}

impl Derivation {
    fn warn(&mut self, message: String) {
        ::log::warn!("{message}");
        self.warnings.push(message);
    }
}

/// Accumulates the tables and joins of a definition grown outward from an
/// anchor table along FK paths.
struct JoinPlan {
    tables: Vec<String>,
    joins: Vec<JoinPredicate>,
    groups: Vec<ForEachGroup>,
}

impl JoinPlan {
    fn new(anchor_table: &str) -> Self {
        JoinPlan {
            tables: vec![anchor_table.to_string()],
            joins: Vec::new(),
            groups: Vec::new(),
        }
    }

    fn add_path(&mut self, path: &[FkEdge]) {
        for e in path {
            for t in [&e.from.table, &e.to.table] {
                if !self.tables.contains(t) {
                    self.tables.push(t.clone());
                }
            }
            let j = JoinPredicate {
                left: e.from.clone(),
                right: e.to.clone(),
            };
            if !self.joins.contains(&j) {
                self.joins.push(j);
            }
        }
    }

    /// Adds a group named after `table`, falling back to `table_column`
    /// when that name is taken.
    fn add_group(&mut self, table: &str, columns: Vec<crate::store::ColumnRef>) {
        let mut name = table.to_string();
        if self.groups.iter().any(|g| g.name == name) {
            name = columns
                .iter()
                .map(|c| format!("{}_{}", c.table, c.column))
                .collect::<Vec<_>>()
                .join("_");
        }
        self.groups.push(ForEachGroup { name, columns });
    }

    fn reach(&mut self, schema: &Schema, from: &str, to: &str) -> bool {
        match schema.fk_path(from, to, MAX_JOIN_PATH) {
            Some(path) => {
                self.add_path(&path);
                true
            }
            None => false,
        }
    }
}
