use std::cmp::Ordering;

use super::{Derivation, DerivationConfig, JoinPlan};
use crate::qunit::{BaseExpression, ConversionExpression, Provenance, QunitDefinition};
use crate::store::{ColumnRef, Dataset, Schema};
use crate::Scalar;

/// Per-table queriability `Q(T) = |T| / max|T'| * (1 + fk_degree(T))` and
/// per-column distinct-value ratios.
#[derive(Clone, Debug, PartialEq)]
pub struct QueriabilityScore<S> {
    /// In schema order.
    pub tables: Vec<(String, S)>,
    pub columns: Vec<(ColumnRef, S)>,
    // |T| * (1 + degree), kept exact for ranking.
    weights: Vec<usize>,
}

impl<S: Scalar> QueriabilityScore<S> {
    pub fn table(&self, name: &str) -> Option<S> {
        self.tables.iter().find(|(t, _)| t == name).map(|(_, s)| *s)
    }

    pub fn column(&self, c: &ColumnRef) -> Option<S> {
        self.columns.iter().find(|(x, _)| x == c).map(|(_, s)| *s)
    }

    /// Table names by descending score, ties by name.
    pub fn ranked_tables(&self) -> Vec<&str> {
        let mut idx: Vec<usize> = (0..self.tables.len()).collect();
        idx.sort_by(|&a, &b| {
            self.weights[b]
                .cmp(&self.weights[a])
                .then_with(|| self.tables[a].0.cmp(&self.tables[b].0))
        });
        idx.into_iter().map(|i| self.tables[i].0.as_str()).collect()
    }

    fn compare(&self, a: &str, b: &str) -> Ordering {
        let w = |t: &str| {
            self.tables
                .iter()
                .position(|(x, _)| x == t)
                .map(|i| self.weights[i])
                .unwrap_or(0)
        };
        w(b).cmp(&w(a)).then_with(|| a.cmp(b))
    }

    fn weight(&self, t: &str) -> usize {
        self.tables
            .iter()
            .position(|(x, _)| x == t)
            .map(|i| self.weights[i])
            .unwrap_or(0)
    }
}

pub fn queriability<S: Scalar>(dataset: &Dataset) -> QueriabilityScore<S> {
    let schema = dataset.schema();
    let max = schema
        .tables()
        .iter()
        .map(|t| dataset.cardinality(&t.name))
        .max()
        .unwrap_or(0);
    let weights: Vec<usize> = schema
        .tables()
        .iter()
        .map(|t| dataset.cardinality(&t.name) * (1 + schema.fk_degree(&t.name)))
        .collect();
    let tables = schema
        .tables()
        .iter()
        .zip(&weights)
        .map(|(t, &w)| {
            let q = if max == 0 {
                S::zero()
            } else {
                S::count(w) / S::count(max)
            };
            (t.name.clone(), q)
        })
        .collect();
    let columns = schema
        .tables()
        .iter()
        .flat_map(|t| {
            t.columns.iter().map(move |c| {
                let cref = ColumnRef::new(t.name.clone(), c.name.clone());
                let (distinct, card) = dataset.distinct_count(&cref);
                let ratio = if card == 0 {
                    S::zero()
                } else {
                    S::count(distinct) / S::count(card)
                };
                (cref, ratio)
            })
        })
        .collect();
    QueriabilityScore {
        tables,
        columns,
        weights,
    }
}

/// Text column with the highest distinct ratio; ties by name.
fn anchor_column(schema: &Schema, dataset: &Dataset, table: &str) -> Option<ColumnRef> {
    schema.text_columns(table).into_iter().max_by(|a, b| {
        let (da, ca) = dataset.distinct_count(a);
        let (db, cb) = dataset.distinct_count(b);
        (da * cb)
            .cmp(&(db * ca))
            .then_with(|| b.column.cmp(&a.column))
    })
}

/// Anchors one qunit at each of the `k1` most queriable tables and joins it
/// to that table's `k2` most queriable neighbours.
pub fn derive_from_schema(
    schema: &Schema,
    dataset: &Dataset,
    config: &DerivationConfig,
) -> Derivation {
    let q: QueriabilityScore<f64> = queriability(dataset);
    let mut out = Derivation::default();
    let mut picked: Vec<(&str, ColumnRef)> = Vec::new();
    for table in q.ranked_tables() {
        if picked.len() == config.k1 || q.weight(table) == 0 {
            break;
        }
        match anchor_column(schema, dataset, table) {
            Some(anchor) => picked.push((table, anchor)),
            None => out.warn(format!("table `{table}` has no text column to anchor on")),
        }
    }
    let max_weight = picked.iter().map(|(t, _)| q.weight(t)).max().unwrap_or(0);
    for (table, anchor) in picked {
        let mut neighbors: Vec<&str> = schema
            .neighbors(table)
            .into_iter()
            .filter(|n| q.weight(n) > 0 && !schema.text_columns(n).is_empty())
            .collect();
        neighbors.sort_by(|a, b| q.compare(a, b));
        neighbors.truncate(config.k2);
        let mut plan = JoinPlan::new(table);
        for n in neighbors {
            let edge = schema
                .fk_edges()
                .iter()
                .find(|e| e.other(table) == Some(n))
                .expect("neighbour shares an edge");
            plan.add_path(std::slice::from_ref(edge));
            plan.add_group(n, schema.text_columns(n));
        }
        out.definitions.push(QunitDefinition {
            id: format!("schema_{table}"),
            base: BaseExpression {
                tables: plan.tables,
                joins: plan.joins,
                anchor,
            },
            conversion: ConversionExpression {
                label: table.to_string(),
                groups: plan.groups,
            },
            utility: q.weight(table) as f64 / max_weight as f64,
            provenance: Provenance::SchemaData,
        });
    }
    out
}
