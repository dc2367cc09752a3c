use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::store::{ColumnRef, Dataset, Schema, Value};
use crate::text::tokenize;
use crate::{Error, Result};

/// Which tables nest under which, and which referenced tables are inlined
/// as text under each row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nesting {
    pub table: String,
    /// Tables referenced by this table's foreign keys whose text columns are
    /// copied under each row.
    pub inline: Vec<String>,
    /// Tables whose rows reference this table's primary key.
    pub children: Vec<Nesting>,
}

impl Nesting {
    pub fn leaf(table: &str) -> Self {
        Nesting {
            table: table.to_string(),
            inline: Vec::new(),
            children: Vec::new(),
        }
    }

    /// movie -> {cast (person inlined), genre, locations, info}
    pub fn movie_centric() -> Self {
        Nesting {
            table: "movie".into(),
            inline: Vec::new(),
            children: vec![
                Nesting {
                    table: "cast".into(),
                    inline: vec!["person".into()],
                    children: Vec::new(),
                },
                Nesting::leaf("genre"),
                Nesting::leaf("locations"),
                Nesting::leaf("info"),
            ],
        }
    }

    fn check(
        &self,
        schema: &Schema,
        parent: Option<&str>,
        seen: &mut BTreeSet<String>,
    ) -> Result<()> {
        if schema.table(&self.table).is_none() {
            return Err(Error::NotFound(format!("nesting table `{}`", self.table)));
        }
        if !seen.insert(self.table.clone()) {
            return Err(Error::Invalid(format!(
                "nesting is not a tree: `{}` appears twice",
                self.table
            )));
        }
        if let Some(p) = parent {
            if fk_to(schema, &self.table, p).is_none() {
                return Err(Error::Invalid(format!(
                    "no FK from `{}` to its nesting parent `{p}`",
                    self.table
                )));
            }
        }
        for i in &self.inline {
            if fk_to(schema, &self.table, i).is_none() {
                return Err(Error::Invalid(format!(
                    "no FK from `{}` to inlined `{i}`",
                    self.table
                )));
            }
        }
        self.children
            .iter()
            .try_for_each(|c| c.check(schema, Some(&self.table), seen))
    }
}

fn fk_to(schema: &Schema, from: &str, to: &str) -> Option<ColumnRef> {
    schema
        .fk_edges()
        .iter()
        .find(|e| e.from.table == from && e.to.table == to)
        .map(|e| e.from.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XmlKind {
    Element(String),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XmlNode {
    pub kind: XmlKind,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
    /// Row elements: the table of the row.
    pub table: Option<String>,
    /// Column elements and their text: the column they render.
    pub column: Option<ColumnRef>,
    pub tokens: BTreeSet<String>,
}

/// Rooted ordered tree; node ids are preorder (document) positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XmlTree {
    nodes: Vec<XmlNode>,
}

impl XmlTree {
    pub fn nodes(&self) -> &[XmlNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &XmlNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Whether `a` is a proper ancestor of `b`.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut cur = self.nodes[b].parent;
        while let Some(p) = cur {
            if p == a {
                return true;
            }
            cur = self.nodes[p].parent;
        }
        false
    }

    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.nodes[a].depth > self.nodes[b].depth {
            a = self.nodes[a].parent.expect("deeper node has a parent");
        }
        while self.nodes[b].depth > self.nodes[a].depth {
            b = self.nodes[b].parent.expect("deeper node has a parent");
        }
        while a != b {
            a = self.nodes[a].parent.expect("same tree");
            b = self.nodes[b].parent.expect("same tree");
        }
        a
    }

    /// Node ids in the subtree of `root`, including it; preorder.
    pub fn subtree(&self, root: usize) -> Vec<usize> {
        let mut out = vec![root];
        let mut i = 0;
        while i < out.len() {
            let n = out[i];
            out.extend(self.nodes[n].children.iter().copied());
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Indented `element` / `#text value` lines.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let pad = "  ".repeat(n.depth);
            let _ = match &n.kind {
                XmlKind::Element(name) => writeln!(out, "{pad}{name}"),
                XmlKind::Text(t) => writeln!(out, "{pad}#text {t}"),
            };
        }
        out
    }

    fn push(
        &mut self,
        parent: Option<usize>,
        kind: XmlKind,
        table: Option<String>,
        column: Option<ColumnRef>,
    ) -> usize {
        let depth = parent.map_or(0, |p| self.nodes[p].depth + 1);
        let tokens = match &kind {
            XmlKind::Element(name) | XmlKind::Text(name) => tokenize(name).into_iter().collect(),
        };
        let id = self.nodes.len();
        self.nodes.push(XmlNode {
            kind,
            parent,
            children: Vec::new(),
            depth,
            table,
            column,
            tokens,
        });
        if let Some(p) = parent {
            self.nodes[p].children.push(id);
        }
        id
    }
}

/// Root name of every generated tree.
pub const XML_ROOT: &str = "db";

pub fn to_xml_tree(dataset: &Dataset, nesting: &Nesting) -> Result<XmlTree> {
    let schema = dataset.schema();
    nesting.check(schema, None, &mut BTreeSet::new())?;
    let mut tree = XmlTree { nodes: Vec::new() };
    let root = tree.push(None, XmlKind::Element(XML_ROOT.into()), None, None);
    let pk = schema.table(&nesting.table).expect("checked").pk_index();
    let mut rows: Vec<&Vec<Value>> = dataset.rows(&nesting.table).iter().collect();
    rows.sort_by(|a, b| a[pk].cmp(&b[pk]));
    for row in rows {
        emit_row(dataset, nesting, row, root, &mut tree);
    }
    Ok(tree)
}

fn emit_columns(dataset: &Dataset, table: &str, row: &[Value], parent: usize, tree: &mut XmlTree) {
    let schema = dataset.schema();
    let def = schema.table(table).expect("checked");
    for (c, v) in def.columns.iter().zip(row) {
        let cref = ColumnRef::new(table, c.name.clone());
        if schema.is_key_column(&cref) {
            continue;
        }
        let el = tree.push(
            Some(parent),
            XmlKind::Element(c.name.clone()),
            None,
            Some(cref.clone()),
        );
        tree.push(Some(el), XmlKind::Text(v.to_string()), None, Some(cref));
    }
}

fn emit_row(
    dataset: &Dataset,
    nesting: &Nesting,
    row: &[Value],
    parent: usize,
    tree: &mut XmlTree,
) {
    let schema = dataset.schema();
    let table = &nesting.table;
    let def = schema.table(table).expect("checked");
    let el = tree.push(
        Some(parent),
        XmlKind::Element(table.clone()),
        Some(table.clone()),
        None,
    );
    emit_columns(dataset, table, row, el, tree);
    for inline in &nesting.inline {
        let fk = fk_to(schema, table, inline).expect("checked");
        let key = &row[def.column_index(&fk.column).expect("checked")];
        let target = schema.table(inline).expect("checked");
        if let Some(r) = dataset
            .rows(inline)
            .iter()
            .find(|r| &r[target.pk_index()] == key)
        {
            let holder = tree.push(
                Some(el),
                XmlKind::Element(inline.clone()),
                Some(inline.clone()),
                None,
            );
            emit_columns(dataset, inline, r, holder, tree);
        }
    }
    let pk = &row[def.pk_index()];
    for child in &nesting.children {
        let fk = fk_to(schema, &child.table, table).expect("checked");
        let cdef = schema.table(&child.table).expect("checked");
        let ci = cdef.column_index(&fk.column).expect("checked");
        let mut rows: Vec<&Vec<Value>> = dataset
            .rows(&child.table)
            .iter()
            .filter(|r| &r[ci] == pk)
            .collect();
        rows.sort_by(|a, b| a[cdef.pk_index()].cmp(&b[cdef.pk_index()]));
        for r in rows {
            emit_row(dataset, child, r, el, tree);
        }
    }
}
