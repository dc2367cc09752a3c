use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{ColumnRef, Dataset, SchemaElement};
use crate::text::tokenize;

/// A run of query tokens recognized as a stored value or a table name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValueMatch {
    pub start: usize,
    pub end: usize,
    pub element: SchemaElement,
    pub matched_text: String,
}

impl ValueMatch {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// Lookup from lowercase token sequences to the schema elements holding
/// them. Each entry's element list is in preference order: value columns
/// first (most distinctive column first, then by name), table names last.
#[derive(Clone, Debug, Default)]
pub struct ValueIndex {
    entries: HashMap<Vec<String>, Vec<SchemaElement>>,
    max_len: usize,
}

type ColumnStat = (ColumnRef, (usize, usize));

impl ValueIndex {
    pub fn build(dataset: &Dataset) -> Self {
        let schema = dataset.schema();
        // value tokens -> columns holding that value, with (distinct, cardinality)
        let mut columns: HashMap<Vec<String>, Vec<ColumnStat>> = HashMap::new();
        for table in schema.tables() {
            for col in &table.columns {
                let cref = ColumnRef::new(table.name.clone(), col.name.clone());
                if schema.is_key_column(&cref) {
                    continue;
                }
                let ratio = dataset.distinct_count(&cref);
                for v in dataset.column_values(&cref) {
                    let tokens = tokenize(&v.to_string());
                    if tokens.is_empty() {
                        continue;
                    }
                    let slot = columns.entry(tokens).or_default();
                    if !slot.iter().any(|(c, _)| c == &cref) {
                        slot.push((cref.clone(), ratio));
                    }
                }
            }
        }
        let mut entries: HashMap<Vec<String>, Vec<SchemaElement>> = columns
            .into_iter()
            .map(|(k, mut cols)| {
                cols.sort_by(|(a, ra), (b, rb)| by_ratio_desc(*ra, *rb).then_with(|| a.cmp(b)));
                (
                    k,
                    cols.iter().map(|(c, _)| SchemaElement::from(c)).collect(),
                )
            })
            .collect();
        for table in schema.tables() {
            for spelling in table_spellings(&table.name) {
                let tokens = tokenize(&spelling);
                if tokens.is_empty() {
                    continue;
                }
                let slot = entries.entry(tokens).or_default();
                let el = SchemaElement::table(table.name.clone());
                if !slot.contains(&el) {
                    slot.push(el);
                }
            }
        }
        let max_len = entries.keys().map(Vec::len).max().unwrap_or(0);
        ValueIndex { entries, max_len }
    }

    /// Elements whose values (or table names) equal `tokens`.
    pub fn lookup<S: AsRef<str>>(&self, tokens: &[S]) -> &[SchemaElement] {
        let key: Vec<String> = tokens.iter().map(|t| t.as_ref().to_string()).collect();
        self.entries.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_span(&self) -> usize {
        self.max_len
    }

    /// Leftmost-longest, non-overlapping matches ordered by start.
    pub fn match_values<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<ValueMatch> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            match self.longest_at(tokens, i) {
                Some(m) => {
                    i = m.end;
                    out.push(m);
                }
                None => i += 1,
            }
        }
        out
    }

    /// Every span of `tokens` present in the index, with its preferred
    /// element, ordered by (start, end).
    pub fn all_matches<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<ValueMatch> {
        let mut out = Vec::new();
        for start in 0..tokens.len() {
            let longest = self.max_len.min(tokens.len() - start);
            for len in 1..=longest {
                if let Some(m) = self.match_span(tokens, start, start + len) {
                    out.push(m);
                }
            }
        }
        out
    }

    fn longest_at<S: AsRef<str>>(&self, tokens: &[S], start: usize) -> Option<ValueMatch> {
        let longest = self.max_len.min(tokens.len() - start);
        (1..=longest)
            .rev()
            .find_map(|len| self.match_span(tokens, start, start + len))
    }

    fn match_span<S: AsRef<str>>(
        &self,
        tokens: &[S],
        start: usize,
        end: usize,
    ) -> Option<ValueMatch> {
        let span = &tokens[start..end];
        let element = self.lookup(span).first()?.clone();
        Some(ValueMatch {
            start,
            end,
            element,
            matched_text: span.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(" "),
        })
    }
}

fn by_ratio_desc(a: (usize, usize), b: (usize, usize)) -> Ordering {
    // a.0/a.1 vs b.0/b.1 without division; empty columns never reach here.
    (b.0 * a.1).cmp(&(a.0 * b.1))
}

/// A table name and a naive singular/plural variant ("movie" / "movies").
fn table_spellings(name: &str) -> Vec<String> {
    let variant = match name.strip_suffix('s') {
        Some(stem) if !stem.is_empty() => stem.to_string(),
        _ => format!("{name}s"),
    };
    vec![name.to_string(), variant]
}
