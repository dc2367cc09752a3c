use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Derivation, DerivationConfig, JoinPlan};
use crate::qunit::{BaseExpression, ConversionExpression, Provenance, QunitDefinition};
use crate::store::{ColumnKind, Dataset, SchemaElement, ValueIndex};
use crate::text::tokenize;
use crate::{Error, Result};

/// A node of an external document: element name, text, children.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DocNode {
    pub name: String,
    pub text: String,
    pub children: Vec<DocNode>,
}

impl DocNode {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        DocNode {
            name: name.into(),
            text: text.into(),
            children: Vec::new(),
        }
    }

    pub fn with_children(mut self, children: Vec<DocNode>) -> Self {
        self.children = children;
        self
    }

    fn walk<'a>(&'a self, out: &mut Vec<&'a DocNode>) {
        out.push(self);
        for c in &self.children {
            c.walk(out);
        }
    }
}

/// Parses indented `element-name: text` lines (two spaces per level).
/// Every unindented line starts a new document.
pub fn parse_documents(text: &str) -> Result<Vec<DocNode>> {
    const SRC: &str = "documents";
    let mut docs: Vec<DocNode> = Vec::new();
    // path of child indices from the current document root
    let mut path: Vec<usize> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let indent = raw.len() - raw.trim_start_matches(' ').len();
        if indent % 2 != 0 {
            return Err(Error::parse(
                SRC,
                n,
                "indentation must be a multiple of two spaces",
            ));
        }
        let depth = indent / 2;
        let (name, body) = raw
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::parse(SRC, n, "expected `element-name: text`"))?;
        let node = DocNode::new(name.trim(), body.trim());
        if depth == 0 {
            docs.push(node);
            path.clear();
            continue;
        }
        if docs.is_empty() || depth > path.len() + 1 {
            return Err(Error::parse(SRC, n, "indentation skips a level"));
        }
        path.truncate(depth - 1);
        let mut parent = docs.last_mut().expect("checked");
        for &c in &path {
            parent = &mut parent.children[c];
        }
        parent.children.push(node);
        path.push(parent.children.len() - 1);
    }
    Ok(docs)
}

/// Occurrence counts of schema elements recognized in one document.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TypeSignature(pub BTreeMap<SchemaElement, u64>);

impl TypeSignature {
    pub fn get(&self, e: &SchemaElement) -> u64 {
        self.0.get(e).copied().unwrap_or(0)
    }

    pub fn elements(&self) -> BTreeSet<SchemaElement> {
        self.0.keys().cloned().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Rarest element first, so the would-be label leads.
impl fmt::Display for TypeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut entries: Vec<(&SchemaElement, &u64)> = self.0.iter().collect();
        entries.sort_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0)));
        for (e, c) in entries {
            write!(f, "({e}:{c})")?;
        }
        Ok(())
    }
}

/// Counts value matches per column element over every text node.
pub fn signature(document: &DocNode, index: &ValueIndex) -> TypeSignature {
    let mut nodes = Vec::new();
    document.walk(&mut nodes);
    let mut counts = BTreeMap::new();
    for node in nodes {
        for m in index.match_values(&tokenize(&node.text)) {
            if m.element.is_column() {
                *counts.entry(m.element).or_insert(0) += 1;
            }
        }
    }
    TypeSignature(counts)
}

/// Element-wise sum.
pub fn aggregate<'a>(signatures: impl IntoIterator<Item = &'a TypeSignature>) -> TypeSignature {
    let mut total = BTreeMap::new();
    for s in signatures {
        for (e, c) in &s.0 {
            *total.entry(e.clone()).or_insert(0) += c;
        }
    }
    TypeSignature(total)
}

/// Groups documents by the set of elements in their signature and turns each
/// large-enough group into a qunit: the rarest element labels it, elements
/// at least twice as frequent become `foreach` groups.
pub fn derive_from_evidence(
    documents: &[DocNode],
    dataset: &Dataset,
    config: &DerivationConfig,
) -> Derivation {
    let schema = dataset.schema();
    let index = ValueIndex::build(dataset);
    let mut clusters: BTreeMap<BTreeSet<SchemaElement>, Vec<TypeSignature>> = BTreeMap::new();
    for doc in documents {
        let sig = signature(doc, &index);
        if !sig.is_empty() {
            clusters.entry(sig.elements()).or_default().push(sig);
        }
    }
    let mut ordered: Vec<(BTreeSet<SchemaElement>, Vec<TypeSignature>)> =
        clusters.into_iter().collect();
    // larger clusters first; BTreeMap order breaks ties
    ordered.sort_by_key(|c| std::cmp::Reverse(c.1.len()));

    let mut out = Derivation::default();
    let mut used_ids: BTreeMap<String, usize> = BTreeMap::new();
    for (elements, sigs) in ordered {
        if sigs.len() < config.min_signature_support {
            continue;
        }
        // Sums stand in for means: every document of a cluster has the same elements.
        let sums = aggregate(&sigs);
        let label = elements
            .iter()
            .filter(|e| {
                e.as_column_ref()
                    .and_then(|c| schema.column_def(&c))
                    .is_some_and(|c| c.kind == ColumnKind::Text)
            })
            .min_by(|a, b| sums.get(a).cmp(&sums.get(b)).then_with(|| a.cmp(b)));
        let Some(label) = label else {
            out.warn(format!(
                "signature cluster {sums} has no text element to label with"
            ));
            continue;
        };
        let label_sum = sums.get(label);
        let mut members: Vec<&SchemaElement> = elements
            .iter()
            .filter(|e| *e != label && sums.get(e) >= 2 * label_sum)
            .collect();
        members.sort_by(|a, b| sums.get(b).cmp(&sums.get(a)).then_with(|| a.cmp(b)));

        let anchor = label.as_column_ref().expect("label is a column");
        let mut plan = JoinPlan::new(&anchor.table);
        let mut unreachable = None;
        for m in &members {
            if !plan.reach(schema, &anchor.table, &m.table) {
                unreachable = Some(*m);
                break;
            }
            plan.add_group(
                &m.table,
                vec![m.as_column_ref().expect("signature holds columns")],
            );
        }
        if let Some(m) = unreachable {
            out.warn(format!(
                "no FK path of length <= 2 between `{label}` and `{m}`; cluster {sums} skipped"
            ));
            continue;
        }
        let base_id = format!("evidence_{}", anchor.table);
        let seen = used_ids.entry(base_id.clone()).or_insert(0);
        *seen += 1;
        let id = if *seen == 1 {
            base_id
        } else {
            format!("{base_id}_{seen}")
        };
        out.definitions.push(QunitDefinition {
            id,
            base: BaseExpression {
                tables: plan.tables,
                joins: plan.joins,
                anchor: anchor.clone(),
            },
            conversion: ConversionExpression {
                label: anchor.table.clone(),
                groups: plan.groups,
            },
            utility: sigs.len() as f64 / documents.len() as f64,
            provenance: Provenance::ExternalEvidence,
        });
    }
    out
}
