use std::collections::BTreeSet;

use super::TopResult;
use crate::baselines::{
    lca_search, mlca_search, spanning_tree_search, DataGraph, XmlKind, XmlTree,
};
use crate::search::{Engine, SearchConfig};
use crate::store::{ColumnRef, SchemaElement, ValueIndex};
use crate::text::{normalize, tokenize};
use crate::Result;

/// Maps a query to its top result, if any.
pub type Adapter<'a> = dyn Fn(&str) -> Result<Option<TopResult>> + 'a;

/// The value in `shown` that the query's leftmost typed span refers to.
/// Baseline results carry no anchor of their own, so this is the only way
/// to say which entity they are about.
fn anchor_of(query: &str, values: &ValueIndex, shown: &[(ColumnRef, String)]) -> Option<String> {
    let tokens = tokenize(query);
    let m = values
        .match_values(&tokens)
        .into_iter()
        .find(|m| m.element.is_column())?;
    let col = m.element.as_column_ref()?;
    shown
        .iter()
        .find(|(c, v)| *c == col && normalize(v) == m.matched_text)
        .map(|(_, v)| v.clone())
}

fn flatten(query: &str, values: &ValueIndex, shown: Vec<(ColumnRef, String)>) -> TopResult {
    let elements: BTreeSet<SchemaElement> = shown
        .iter()
        .map(|(c, _)| SchemaElement::column(c.table.clone(), c.column.clone()))
        .collect();
    TopResult {
        anchor: anchor_of(query, values, &shown),
        elements,
    }
}

pub fn qunit_adapter<'a>(
    engine: &'a Engine,
    config: &'a SearchConfig<f64>,
) -> impl Fn(&str) -> Result<Option<TopResult>> + 'a {
    move |query| {
        let Some(top) = engine.search(query, config).into_iter().next() else {
            return Ok(None);
        };
        let doc = engine
            .index
            .doc_by_id(&top.instance_id)
            .expect("ranked results come from the index");
        Ok(Some(TopResult {
            anchor: Some(doc.anchor_value.clone()),
            elements: doc.elements.clone(),
        }))
    }
}

pub fn banks_adapter<'a>(
    graph: &'a DataGraph,
    values: &'a ValueIndex,
) -> impl Fn(&str) -> Result<Option<TopResult>> + 'a {
    move |query| {
        let Some(tree) = spanning_tree_search(query, graph, 1).into_iter().next() else {
            return Ok(None);
        };
        let shown = tree
            .nodes
            .iter()
            .flat_map(|&n| graph.node(n).values.iter())
            .map(|(c, v)| (c.clone(), v.to_string()))
            .collect();
        Ok(Some(flatten(query, values, shown)))
    }
}

fn subtree_values(tree: &XmlTree, root: usize) -> Vec<(ColumnRef, String)> {
    tree.subtree(root)
        .into_iter()
        .filter_map(|n| {
            let node = tree.node(n);
            match (&node.kind, &node.column) {
                (XmlKind::Text(t), Some(c)) => Some((c.clone(), t.clone())),
                _ => None,
            }
        })
        .collect()
}

fn xml_adapter<'a>(
    tree: &'a XmlTree,
    values: &'a ValueIndex,
    find: fn(&str, &XmlTree) -> Vec<usize>,
) -> impl Fn(&str) -> Result<Option<TopResult>> + 'a {
    move |query| {
        let Some(&root) = find(query, tree).first() else {
            return Ok(None);
        };
        Ok(Some(flatten(query, values, subtree_values(tree, root))))
    }
}

pub fn lca_adapter<'a>(
    tree: &'a XmlTree,
    values: &'a ValueIndex,
) -> impl Fn(&str) -> Result<Option<TopResult>> + 'a {
    xml_adapter(tree, values, lca_search)
}

pub fn mlca_adapter<'a>(
    tree: &'a XmlTree,
    values: &'a ValueIndex,
) -> impl Fn(&str) -> Result<Option<TopResult>> + 'a {
    xml_adapter(tree, values, mlca_search)
}
