use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ColumnKind {
    Integer,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnDef {
    pub name: String,
    pub kind: ColumnKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDef {
    pub name: String,
    pub columns: Vec<ColumnDef>,
    pub primary_key: String,
}

impl TableDef {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn pk_index(&self) -> usize {
        self.column_index(&self.primary_key)
            .expect("validated table has its primary key column")
    }
}

/// A `table.column` reference.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColumnRef {
    pub table: String,
    pub column: String,
}

impl ColumnRef {
    pub fn new(table: impl Into<String>, column: impl Into<String>) -> Self {
        ColumnRef {
            table: table.into(),
            column: column.into(),
        }
    }
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.table, self.column)
    }
}

impl FromStr for ColumnRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('.') {
            Some((t, c)) if is_identifier(t) && is_identifier(c) => Ok(ColumnRef::new(t, c)),
            _ => Err(Error::Invalid(format!(
                "expected `table.column`, got `{s}`"
            ))),
        }
    }
}

/// Foreign key: `from` holds values of the referenced primary key `to`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FkEdge {
    pub from: ColumnRef,
    pub to: ColumnRef,
}

impl FkEdge {
    /// Whether the edge joins `a` and `b`, in either direction.
    pub fn connects(&self, a: &ColumnRef, b: &ColumnRef) -> bool {
        (&self.from == a && &self.to == b) || (&self.from == b && &self.to == a)
    }

    pub fn touches(&self, table: &str) -> bool {
        self.from.table == table || self.to.table == table
    }

    /// The table on the other side of `table`, if the edge touches it.
    pub fn other(&self, table: &str) -> Option<&str> {
        if self.from.table == table {
            Some(&self.to.table)
        } else if self.to.table == table {
            Some(&self.from.table)
        } else {
            None
        }
    }
}

impl fmt::Display for FkEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

/// A schema element as it appears in typed queries: a column, or a bare
/// table name. Ordering matches the `table.column` spelling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchemaElement {
    pub table: String,
    pub column: Option<String>,
}

impl SchemaElement {
    pub fn table(table: impl Into<String>) -> Self {
        SchemaElement {
            table: table.into(),
            column: None,
        }
    }

    pub fn column(table: impl Into<String>, column: impl Into<String>) -> Self {
        SchemaElement {
            table: table.into(),
            column: Some(column.into()),
        }
    }

    pub fn is_column(&self) -> bool {
        self.column.is_some()
    }

    pub fn as_column_ref(&self) -> Option<ColumnRef> {
        self.column
            .as_ref()
            .map(|c| ColumnRef::new(self.table.clone(), c.clone()))
    }
}

impl From<&ColumnRef> for SchemaElement {
    fn from(c: &ColumnRef) -> Self {
        SchemaElement::column(c.table.clone(), c.column.clone())
    }
}

impl fmt::Display for SchemaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.column {
            Some(c) => write!(f, "{}.{}", self.table, c),
            None => f.write_str(&self.table),
        }
    }
}

impl FromStr for SchemaElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.contains('.') {
            let c: ColumnRef = s.parse()?;
            Ok(SchemaElement::from(&c))
        } else if is_identifier(s) {
            Ok(SchemaElement::table(s))
        } else {
            Err(Error::Invalid(format!("bad schema element `{s}`")))
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Validated schema. Tables keep declaration order; that order is used
/// wherever a deterministic table order is needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    tables: Vec<TableDef>,
    fk_edges: Vec<FkEdge>,
}

impl Schema {
    pub fn new(tables: Vec<TableDef>, fk_edges: Vec<FkEdge>) -> Result<Self> {
        if tables.is_empty() {
            return Err(Error::Schema("no tables".into()));
        }
        let mut names = HashSet::new();
        for t in &tables {
            if !is_identifier(&t.name) {
                return Err(Error::Schema(format!("bad table name `{}`", t.name)));
            }
            if !names.insert(t.name.as_str()) {
                return Err(Error::Schema(format!("duplicate table `{}`", t.name)));
            }
            if t.columns.is_empty() {
                return Err(Error::Schema(format!("table `{}` has no columns", t.name)));
            }
            let mut cols = HashSet::new();
            for c in &t.columns {
                if !is_identifier(&c.name) {
                    return Err(Error::Schema(format!(
                        "bad column name `{}.{}`",
                        t.name, c.name
                    )));
                }
                if !cols.insert(c.name.as_str()) {
                    return Err(Error::Schema(format!(
                        "duplicate column `{}.{}`",
                        t.name, c.name
                    )));
                }
            }
            if t.column_index(&t.primary_key).is_none() {
                return Err(Error::Schema(format!(
                    "table `{}`: primary key `{}` is not a column",
                    t.name, t.primary_key
                )));
            }
        }
        let schema = Schema { tables, fk_edges };
        for e in &schema.fk_edges {
            for end in [&e.from, &e.to] {
                if schema.column_def(end).is_none() {
                    return Err(Error::Schema(format!("unknown FK target `{end}` in `{e}`")));
                }
            }
            let target = schema.table(&e.to.table).expect("checked above");
            if target.primary_key != e.to.column {
                return Err(Error::Schema(format!(
                    "FK `{e}` must reference the primary key of `{}`",
                    e.to.table
                )));
            }
            let (fk, pk) = (
                schema.column_def(&e.from).unwrap().kind,
                schema.column_def(&e.to).unwrap().kind,
            );
            if fk != pk {
                return Err(Error::Schema(format!(
                    "FK `{e}` joins columns of different kinds"
                )));
            }
        }
        Ok(schema)
    }

    /// Parses the line-oriented schema format:
    ///
    /// ```text
    /// table person
    /// col id int pk
    /// col name text
    /// fk cast.person_id -> person.id
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        const SRC: &str = "schema";
        let mut tables: Vec<TableDef> = Vec::new();
        let mut edges = Vec::new();
        let mut pks: Vec<Vec<String>> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["table", name] => {
                    tables.push(TableDef {
                        name: name.to_string(),
                        columns: Vec::new(),
                        primary_key: String::new(),
                    });
                    pks.push(Vec::new());
                }
                ["col", name, kind, rest @ ..] => {
                    let table = tables
                        .last_mut()
                        .ok_or_else(|| Error::parse(SRC, line_no, "`col` before any `table`"))?;
                    let kind = match *kind {
                        "int" | "integer" => ColumnKind::Integer,
                        "text" => ColumnKind::Text,
                        other => {
                            return Err(Error::parse(
                                SRC,
                                line_no,
                                format!("unknown column kind `{other}`"),
                            ))
                        }
                    };
                    match rest {
                        [] => {}
                        ["pk"] => pks.last_mut().unwrap().push(name.to_string()),
                        _ => {
                            return Err(Error::parse(
                                SRC,
                                line_no,
                                "expected `col <name> <int|text> [pk]`",
                            ))
                        }
                    }
                    table.columns.push(ColumnDef {
                        name: name.to_string(),
                        kind,
                    });
                }
                ["fk", from, "->", to] => {
                    let from = from
                        .parse()
                        .map_err(|e: Error| Error::parse(SRC, line_no, e.to_string()))?;
                    let to = to
                        .parse()
                        .map_err(|e: Error| Error::parse(SRC, line_no, e.to_string()))?;
                    edges.push(FkEdge { from, to });
                }
                _ => {
                    return Err(Error::parse(
                        SRC,
                        line_no,
                        format!("unrecognized line `{line}`"),
                    ))
                }
            }
        }
        for (t, pk) in tables.iter_mut().zip(pks) {
            match pk.as_slice() {
                [one] => t.primary_key = one.clone(),
                [] => {
                    return Err(Error::Schema(format!(
                        "table `{}` has no primary key",
                        t.name
                    )))
                }
                _ => {
                    return Err(Error::Schema(format!(
                        "table `{}` has several primary keys",
                        t.name
                    )))
                }
            }
        }
        Schema::new(tables, edges)
    }

    pub fn tables(&self) -> &[TableDef] {
        &self.tables
    }

    pub fn fk_edges(&self) -> &[FkEdge] {
        &self.fk_edges
    }

    pub fn table(&self, name: &str) -> Option<&TableDef> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn table_index(&self, name: &str) -> Option<usize> {
        self.tables.iter().position(|t| t.name == name)
    }

    pub fn column_def(&self, c: &ColumnRef) -> Option<&ColumnDef> {
        self.table(&c.table)?
            .columns
            .iter()
            .find(|d| d.name == c.column)
    }

    /// Primary-key and foreign-key columns: internal identifiers that are
    /// never matched, anchored on, or projected by derived qunits.
    pub fn is_key_column(&self, c: &ColumnRef) -> bool {
        self.table(&c.table)
            .is_some_and(|t| t.primary_key == c.column)
            || self.fk_edges.iter().any(|e| &e.from == c)
    }

    /// Non-key text columns of a table, in declaration order.
    pub fn text_columns(&self, table: &str) -> Vec<ColumnRef> {
        self.table(table)
            .map(|t| {
                t.columns
                    .iter()
                    .filter(|c| c.kind == ColumnKind::Text)
                    .map(|c| ColumnRef::new(table, c.name.clone()))
                    .filter(|c| !self.is_key_column(c))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn fk_degree(&self, table: &str) -> usize {
        self.fk_edges.iter().filter(|e| e.touches(table)).count()
    }

    pub fn has_fk(&self, a: &ColumnRef, b: &ColumnRef) -> bool {
        self.fk_edges.iter().any(|e| e.connects(a, b))
    }

    /// Tables adjacent to `table` through at least one FK edge, sorted.
    pub fn neighbors(&self, table: &str) -> BTreeSet<&str> {
        self.fk_edges
            .iter()
            .filter_map(|e| e.other(table))
            .filter(|t| *t != table)
            .collect()
    }

    /// Shortest FK path between two tables with at most `max_edges` edges.
    /// Breadth-first over tables; among equal-length paths the one using
    /// earlier-declared edges wins.
    pub fn fk_path(&self, from: &str, to: &str, max_edges: usize) -> Option<Vec<FkEdge>> {
        if from == to {
            return Some(Vec::new());
        }
        self.table(from)?;
        self.table(to)?;
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.tables.len()];
        let start = self.table_index(from)?;
        let goal = self.table_index(to)?;
        let mut seen = vec![false; self.tables.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([(start, 0usize)]);
        while let Some((t, depth)) = queue.pop_front() {
            if t == goal {
                break;
            }
            if depth == max_edges {
                continue;
            }
            let name = &self.tables[t].name;
            for (ei, e) in self.fk_edges.iter().enumerate() {
                let Some(other) = e.other(name) else { continue };
                let o = self.table_index(other).expect("validated");
                if !seen[o] {
                    seen[o] = true;
                    prev[o] = Some((t, ei));
                    queue.push_back((o, depth + 1));
                }
            }
        }
        if !seen[goal] {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = goal;
        while let Some((p, ei)) = prev[cur] {
            path.push(self.fk_edges[ei].clone());
            cur = p;
        }
        path.reverse();
        (path.len() <= max_edges).then_some(path)
    }
}
