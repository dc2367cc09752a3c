use std::collections::{BTreeMap, BTreeSet};

use super::{Derivation, DerivationConfig, JoinPlan};
use crate::qunit::{BaseExpression, ConversionExpression, Provenance, QunitDefinition};
use crate::store::{ColumnKind, Dataset, SchemaElement, ValueIndex};
use crate::text::tokenize;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub query: String,
    pub frequency: u64,
}

/// Parses `query<TAB>frequency` lines. Blank lines are skipped.
pub fn parse_query_log(text: &str) -> Result<Vec<LogEntry>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let (q, f) = line.rsplit_once('\t').ok_or_else(|| {
                Error::parse("query log", i + 1, "expected `query<TAB>frequency`")
            })?;
            let frequency = f
                .trim()
                .parse::<u64>()
                .ok()
                .filter(|f| *f > 0)
                .ok_or_else(|| Error::parse("query log", i + 1, format!("bad frequency `{f}`")))?;
            Ok(LogEntry {
                query: q.to_string(),
                frequency,
            })
        })
        .collect()
}

/// Frequency-weighted links from one table's entities to the other elements
/// seen in the same queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaLinkWeights {
    /// The source table, as a bare table element.
    pub source: SchemaElement,
    /// Descending by count, ties by element name.
    pub weights: Vec<(SchemaElement, u64)>,
    /// How often each of the table's columns acted as the linking entity.
    pub entities: Vec<(SchemaElement, u64)>,
}

impl SchemaLinkWeights {
    pub fn total(&self) -> u64 {
        self.weights.iter().map(|(_, c)| c).sum()
    }

    pub fn count(&self, element: &SchemaElement) -> u64 {
        self.weights
            .iter()
            .find(|(e, _)| e == element)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }
}

fn sorted_desc(map: BTreeMap<SchemaElement, u64>) -> Vec<(SchemaElement, u64)> {
    let mut v: Vec<_> = map.into_iter().collect();
    v.sort_by(|(a, x), (b, y)| y.cmp(x).then_with(|| a.cmp(b)));
    v
}

/// Rolls typed log queries up into per-table link counts. Tables without
/// links are omitted; output is ordered by table name.
pub fn rollup(log: &[LogEntry], index: &ValueIndex) -> Vec<SchemaLinkWeights> {
    let mut links: BTreeMap<String, BTreeMap<SchemaElement, u64>> = BTreeMap::new();
    let mut entities: BTreeMap<String, BTreeMap<SchemaElement, u64>> = BTreeMap::new();
    for entry in log {
        let tokens = tokenize(&entry.query);
        let elements: BTreeSet<SchemaElement> = index
            .match_values(&tokens)
            .into_iter()
            .map(|m| m.element)
            .collect();
        for e in elements.iter().filter(|e| e.is_column()) {
            let own_table = SchemaElement::table(e.table.clone());
            let targets: Vec<&SchemaElement> = elements
                .iter()
                .filter(|m| *m != e && **m != own_table)
                .collect();
            if targets.is_empty() {
                continue;
            }
            *entities
                .entry(e.table.clone())
                .or_default()
                .entry(e.clone())
                .or_default() += entry.frequency;
            let slot = links.entry(e.table.clone()).or_default();
            for m in targets {
                *slot.entry(m.clone()).or_default() += entry.frequency;
            }
        }
    }
    links
        .into_iter()
        .map(|(table, weights)| SchemaLinkWeights {
            entities: sorted_desc(entities.remove(&table).unwrap_or_default()),
            source: SchemaElement::table(table),
            weights: sorted_desc(weights),
        })
        .collect()
}

/// Builds one qunit per table with log links: anchored at the table's most
/// frequent linking text column, with a `foreach` per sufficiently frequent
/// linked element in descending count order.
pub fn derive_from_log(
    log: &[LogEntry],
    dataset: &Dataset,
    config: &DerivationConfig,
) -> Derivation {
    let schema = dataset.schema();
    let index = ValueIndex::build(dataset);
    let rolled = rollup(log, &index);
    let mut out = Derivation::default();
    let max_total = rolled
        .iter()
        .map(SchemaLinkWeights::total)
        .max()
        .unwrap_or(0);
    for links in &rolled {
        let table = &links.source.table;
        let anchor = links.entities.iter().find_map(|(e, _)| {
            let c = e.as_column_ref()?;
            (schema.column_def(&c)?.kind == ColumnKind::Text).then_some(c)
        });
        let Some(anchor) = anchor else {
            out.warn(format!(
                "table `{table}` has no text entity column to anchor on"
            ));
            continue;
        };
        let mut plan = JoinPlan::new(table);
        for (target, count) in &links.weights {
            if *count < config.min_template_frequency {
                continue;
            }
            let columns: Vec<_> = match target.as_column_ref() {
                Some(c) => vec![c],
                None => schema.text_columns(&target.table),
            };
            if columns.is_empty() {
                out.warn(format!("`{target}` has no text columns to project"));
                continue;
            }
            // A table link and a value link can name the same column.
            let columns: Vec<_> = columns
                .into_iter()
                .filter(|c| !plan.groups.iter().any(|g| g.columns.contains(c)))
                .collect();
            if columns.is_empty() {
                continue;
            }
            if !plan.reach(schema, table, &target.table) {
                out.warn(format!(
                    "no FK path of length <= 2 from `{table}` to `{target}`; skipped"
                ));
                continue;
            }
            plan.add_group(&target.table, columns);
        }
        if plan.groups.is_empty() {
            out.warn(format!(
                "no links from `{table}` passed the frequency threshold"
            ));
            continue;
        }
        out.definitions.push(QunitDefinition {
            id: format!("log_{table}"),
            base: BaseExpression {
                tables: plan.tables,
                joins: plan.joins,
                anchor,
            },
            conversion: ConversionExpression {
                label: table.clone(),
                groups: plan.groups,
            },
            utility: links.total() as f64 / max_total as f64,
            provenance: Provenance::QueryLog,
        });
    }
    out
}
