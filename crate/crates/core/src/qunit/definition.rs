use std::collections::{BTreeSet, HashSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::store::{ColumnKind, ColumnRef, Schema, SchemaElement};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    Manual,
    SchemaData,
    QueryLog,
    ExternalEvidence,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Manual => "manual",
            Provenance::SchemaData => "schema_data",
            Provenance::QueryLog => "query_log",
            Provenance::ExternalEvidence => "external_evidence",
        })
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "manual" => Provenance::Manual,
            "schema_data" => Provenance::SchemaData,
            "query_log" => Provenance::QueryLog,
            "external_evidence" => Provenance::ExternalEvidence,
            _ => return Err(Error::Invalid(format!("unknown provenance `{s}`"))),
        })
    }
}

/// Equi-join `left = right`; must coincide with an FK edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JoinPredicate {
    pub left: ColumnRef,
    pub right: ColumnRef,
}

/// Conjunctive query over FK joins with a single `column = $x` anchor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseExpression {
    pub tables: Vec<String>,
    pub joins: Vec<JoinPredicate>,
    pub anchor: ColumnRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForEachGroup {
    pub name: String,
    pub columns: Vec<ColumnRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversionExpression {
    pub label: String,
    pub groups: Vec<ForEachGroup>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QunitDefinition {
    pub id: String,
    pub base: BaseExpression,
    pub conversion: ConversionExpression,
    pub utility: f64,
    pub provenance: Provenance,
}

impl QunitDefinition {
    /// Checks the definition against `schema`.
    pub fn validate(&self, schema: &Schema) -> Result<()> {
        let fail = |m: String| Err(Error::definition(&self.id, m));
        if self.id.is_empty() || self.id.chars().any(char::is_whitespace) {
            return fail("id must be a non-empty word".into());
        }
        if !(self.utility.is_finite() && self.utility >= 0.0) {
            return fail(format!(
                "utility {} is not a non-negative number",
                self.utility
            ));
        }
        let base = &self.base;
        if base.tables.is_empty() {
            return fail("no tables".into());
        }
        let mut seen = HashSet::new();
        for t in &base.tables {
            if schema.table(t).is_none() {
                return fail(format!("unknown table `{t}`"));
            }
            if !seen.insert(t.as_str()) {
                return fail(format!("table `{t}` listed twice"));
            }
        }
        let in_base = |c: &ColumnRef| -> Result<()> {
            if schema.column_def(c).is_none() {
                return Err(Error::definition(&self.id, format!("unknown column `{c}`")));
            }
            if !seen.contains(c.table.as_str()) {
                return Err(Error::definition(
                    &self.id,
                    format!("`{c}` is not from a joined table"),
                ));
            }
            Ok(())
        };
        for j in &base.joins {
            in_base(&j.left)?;
            in_base(&j.right)?;
            if !schema.has_fk(&j.left, &j.right) {
                return fail(format!(
                    "join `{} = {}` is not along an FK edge",
                    j.left, j.right
                ));
            }
        }
        if !self.joins_connected() {
            return fail("join graph is disconnected".into());
        }
        in_base(&base.anchor)?;
        if schema.column_def(&base.anchor).map(|c| c.kind) != Some(ColumnKind::Text) {
            return fail(format!("anchor `{}` is not a text column", base.anchor));
        }
        let conv = &self.conversion;
        if conv.label.is_empty() {
            return fail("missing label".into());
        }
        let mut names = HashSet::new();
        for g in &conv.groups {
            if g.columns.is_empty() {
                return fail(format!("foreach `{}` projects nothing", g.name));
            }
            if !names.insert(g.name.as_str()) {
                return fail(format!("foreach `{}` declared twice", g.name));
            }
            for c in &g.columns {
                in_base(c)?;
            }
        }
        Ok(())
    }

    fn joins_connected(&self) -> bool {
        let tables = &self.base.tables;
        let mut reached = vec![false; tables.len()];
        reached[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for j in &self.base.joins {
                let a = tables.iter().position(|t| *t == j.left.table);
                let b = tables.iter().position(|t| *t == j.right.table);
                if let (Some(a), Some(b)) = (a, b) {
                    if reached[a] != reached[b] {
                        reached[a] = true;
                        reached[b] = true;
                        changed = true;
                    }
                }
            }
        }
        reached.into_iter().all(|r| r)
    }

    /// Schema elements the definition covers: the anchor column, every
    /// joined table, and every projected column.
    pub fn elements(&self) -> BTreeSet<SchemaElement> {
        let mut out = BTreeSet::new();
        out.insert(SchemaElement::from(&self.base.anchor));
        out.extend(self.base.tables.iter().map(SchemaElement::table));
        for g in &self.conversion.groups {
            out.extend(g.columns.iter().map(SchemaElement::from));
        }
        out
    }

    /// Writes the definition in the line-oriented definition format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "qunit {} utility {}", self.id, self.utility);
        if self.provenance != Provenance::Manual {
            let _ = writeln!(s, "provenance {}", self.provenance);
        }
        let _ = writeln!(s, "from {}", self.base.tables.join(" "));
        for j in &self.base.joins {
            let _ = writeln!(s, "join {} = {}", j.left, j.right);
        }
        let _ = writeln!(s, "anchor {}", self.base.anchor);
        let _ = writeln!(s, "label {}", self.conversion.label);
        for g in &self.conversion.groups {
            let cols: Vec<String> = g.columns.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "foreach {}: {}", g.name, cols.join(","));
        }
        s
    }
}

/// Validates and returns the definition.
pub fn validate_definition(def: QunitDefinition, schema: &Schema) -> Result<QunitDefinition> {
    def.validate(schema)?;
    Ok(def)
}

pub fn write_definitions(defs: &[QunitDefinition]) -> String {
    defs.iter()
        .map(QunitDefinition::to_text)
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Default)]
struct Draft {
    id: String,
    line: usize,
    utility: f64,
    provenance: Option<Provenance>,
    tables: Option<Vec<String>>,
    joins: Vec<JoinPredicate>,
    anchors: Vec<ColumnRef>,
    label: Option<String>,
    groups: Vec<ForEachGroup>,
}

impl Draft {
    fn finish(self) -> Result<QunitDefinition> {
        let err = |m: &str| Error::parse("qunits", self.line, format!("qunit `{}`: {m}", self.id));
        let anchor = match self.anchors.as_slice() {
            [one] => one.clone(),
            [] => return Err(err("no anchor predicate")),
            _ => return Err(err("multiple anchor predicates")),
        };
        Ok(QunitDefinition {
            base: BaseExpression {
                tables: self.tables.ok_or_else(|| err("missing `from` line"))?,
                joins: self.joins,
                anchor,
            },
            conversion: ConversionExpression {
                label: self.label.ok_or_else(|| err("missing `label` line"))?,
                groups: self.groups,
            },
            utility: self.utility,
            provenance: self.provenance.unwrap_or(Provenance::Manual),
            id: self.id,
        })
    }
}

/// Parses a definition file: each definition starts with
/// `qunit <id> utility <real>` followed by `from`, `join`, `anchor`,
/// `label` and `foreach` lines.
pub fn parse_definitions(text: &str) -> Result<Vec<QunitDefinition>> {
    const SRC: &str = "qunits";
    let mut defs = Vec::new();
    let mut cur: Option<Draft> = None;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let col = |s: &str| {
            s.trim()
                .parse::<ColumnRef>()
                .map_err(|e| Error::parse(SRC, n, e.to_string()))
        };
        if keyword == "qunit" {
            if let Some(d) = cur.take() {
                defs.push(d.finish()?);
            }
            let words: Vec<&str> = rest.split_whitespace().collect();
            let (id, utility) = match words.as_slice() {
                [id, "utility", u] => (
                    id.to_string(),
                    u.parse::<f64>()
                        .map_err(|_| Error::parse(SRC, n, format!("bad utility `{u}`")))?,
                ),
                [id] => (id.to_string(), 1.0),
                _ => return Err(Error::parse(SRC, n, "expected `qunit <id> utility <real>`")),
            };
            cur = Some(Draft {
                id,
                line: n,
                utility,
                ..Draft::default()
            });
            continue;
        }
        let d = cur
            .as_mut()
            .ok_or_else(|| Error::parse(SRC, n, format!("`{keyword}` outside a qunit block")))?;
        match keyword {
            "provenance" => {
                d.provenance = Some(
                    rest.parse()
                        .map_err(|e: Error| Error::parse(SRC, n, e.to_string()))?,
                )
            }
            "from" => d.tables = Some(rest.split_whitespace().map(str::to_string).collect()),
            "join" => {
                let (l, r) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::parse(SRC, n, "expected `join <t.c> = <t.c>`"))?;
                d.joins.push(JoinPredicate {
                    left: col(l)?,
                    right: col(r)?,
                });
            }
            "anchor" => d.anchors.push(col(rest)?),
            "label" if !rest.is_empty() => d.label = Some(rest.to_string()),
            "foreach" => {
                let (name, cols) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(SRC, n, "expected `foreach <name>: <t.c>,...`"))?;
                let columns = cols
                    .split(',')
                    .filter(|c| !c.trim().is_empty())
                    .map(col)
                    .collect::<Result<Vec<_>>>()?;
                d.groups.push(ForEachGroup {
                    name: name.trim().to_string(),
                    columns,
                });
            }
            _ => return Err(Error::parse(SRC, n, format!("unrecognized line `{line}`"))),
        }
    }
    if let Some(d) = cur {
        defs.push(d.finish()?);
    }
    Ok(defs)
}
