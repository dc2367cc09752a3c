use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::schema::{ColumnKind, ColumnRef, Schema};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Value {
    Int(i64),
    Text(String),
}

impl Value {
    pub fn as_text(&self) -> Option<&str> {
        match self {
            Value::Text(s) => Some(s),
            Value::Int(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

pub type Row = Vec<Value>;

/// Finalized relational data: immutable, referentially intact.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    schema: Schema,
    rows: Vec<Vec<Row>>,
}

impl Dataset {
    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Rows of `table`; empty for unknown tables.
    pub fn rows(&self, table: &str) -> &[Row] {
        self.schema
            .table_index(table)
            .map(|i| self.rows[i].as_slice())
            .unwrap_or(&[])
    }

    pub fn cardinality(&self, table: &str) -> usize {
        self.rows(table).len()
    }

    pub fn total_rows(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Values of one column, in row order.
    pub fn column_values<'a>(&'a self, c: &ColumnRef) -> impl Iterator<Item = &'a Value> + 'a {
        let idx = self
            .schema
            .table(&c.table)
            .and_then(|t| t.column_index(&c.column));
        self.rows(&c.table)
            .iter()
            .filter_map(move |r| idx.map(|i| &r[i]))
    }

    /// `(distinct values, cardinality)` of a column.
    pub fn distinct_count(&self, c: &ColumnRef) -> (usize, usize) {
        let distinct: HashSet<&Value> = self.column_values(c).collect();
        (distinct.len(), self.cardinality(&c.table))
    }

    /// Loads `<table>.tsv` for every table of the schema from `dir`.
    pub fn load_dir(schema: Schema, dir: &Path) -> Result<Dataset> {
        let mut builder = DatasetBuilder::new(schema);
        let names: Vec<String> = builder
            .schema
            .tables()
            .iter()
            .map(|t| t.name.clone())
            .collect();
        for name in names {
            let path = dir.join(format!("{name}.tsv"));
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            builder.ingest_table(&name, &text)?;
        }
        builder.finalize()
    }
}

/// Single-writer ingestion; integrity is checked by [`DatasetBuilder::finalize`].
#[derive(Debug)]
pub struct DatasetBuilder {
    schema: Schema,
    rows: Vec<Vec<Row>>,
    seen_keys: Vec<HashSet<Value>>,
}

impl DatasetBuilder {
    pub fn new(schema: Schema) -> Self {
        let n = schema.tables().len();
        DatasetBuilder {
            schema,
            rows: vec![Vec::new(); n],
            seen_keys: vec![HashSet::new(); n],
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Parses tab-separated rows (header line first) and appends them to
    /// `table`. Returns the number of rows added.
    pub fn ingest_table(&mut self, table: &str, text: &str) -> Result<usize> {
        let ti = self
            .schema
            .table_index(table)
            .ok_or_else(|| Error::NotFound(format!("table `{table}`")))?;
        let def = self.schema.tables()[ti].clone();
        let mut lines = text.lines().enumerate();
        let header: Vec<&str> = match lines.next() {
            Some((_, h)) => h.split('\t').collect(),
            None => return Err(Error::parse(table, 1, "missing header row")),
        };
        let expected: Vec<&str> = def.columns.iter().map(|c| c.name.as_str()).collect();
        if header != expected {
            return Err(Error::parse(
                table,
                1,
                format!("header {header:?} does not match columns {expected:?}"),
            ));
        }
        let mut added = 0;
        for (i, line) in lines {
            let line_no = i + 1;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != def.columns.len() {
                return Err(Error::parse(
                    table,
                    line_no,
                    format!(
                        "expected {} fields, found {}",
                        def.columns.len(),
                        fields.len()
                    ),
                ));
            }
            let row = def
                .columns
                .iter()
                .zip(&fields)
                .map(|(c, f)| match c.kind {
                    ColumnKind::Integer => f.trim().parse::<i64>().map(Value::Int).map_err(|_| {
                        Error::parse(
                            table,
                            line_no,
                            format!("`{f}` is not an integer ({})", c.name),
                        )
                    }),
                    ColumnKind::Text => Ok(Value::Text(f.to_string())),
                })
                .collect::<Result<Row>>()?;
            self.push_row(ti, row)
                .map_err(|e| Error::parse(table, line_no, e.to_string()))?;
            added += 1;
        }
        Ok(added)
    }

    /// Appends an already-typed row.
    pub fn insert(&mut self, table: &str, row: Row) -> Result<()> {
        let ti = self
            .schema
            .table_index(table)
            .ok_or_else(|| Error::NotFound(format!("table `{table}`")))?;
        let def = &self.schema.tables()[ti];
        if row.len() != def.columns.len() {
            return Err(Error::Integrity(format!(
                "`{table}` row has {} values, expected {}",
                row.len(),
                def.columns.len()
            )));
        }
        for (v, c) in row.iter().zip(&def.columns) {
            let ok = matches!(
                (v, c.kind),
                (Value::Int(_), ColumnKind::Integer) | (Value::Text(_), ColumnKind::Text)
            );
            if !ok {
                return Err(Error::Integrity(format!(
                    "`{table}.{}`: wrong value kind",
                    c.name
                )));
            }
        }
        self.push_row(ti, row)
    }

    fn push_row(&mut self, ti: usize, row: Row) -> Result<()> {
        let def = &self.schema.tables()[ti];
        let key = row[def.pk_index()].clone();
        if !self.seen_keys[ti].insert(key.clone()) {
            return Err(Error::Integrity(format!(
                "duplicate primary key {}.{} = {key}",
                def.name, def.primary_key
            )));
        }
        self.rows[ti].push(row);
        Ok(())
    }

    /// Checks referential integrity and freezes the data.
    pub fn finalize(self) -> Result<Dataset> {
        let pk_sets: HashMap<&str, &HashSet<Value>> = self
            .schema
            .tables()
            .iter()
            .zip(&self.seen_keys)
            .map(|(t, keys)| (t.name.as_str(), keys))
            .collect();
        for e in self.schema.fk_edges() {
            let ti = self.schema.table_index(&e.from.table).expect("validated");
            let ci = self.schema.tables()[ti]
                .column_index(&e.from.column)
                .expect("validated");
            let targets = pk_sets[e.to.table.as_str()];
            for row in &self.rows[ti] {
                if !targets.contains(&row[ci]) {
                    return Err(Error::Integrity(format!(
                        "dangling foreign key {} = {} (no matching {})",
                        e.from, row[ci], e.to
                    )));
                }
            }
        }
        Ok(Dataset {
            schema: self.schema,
            rows: self.rows,
        })
    }
}
