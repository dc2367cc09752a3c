//! Competing keyword-search algorithms: minimal connected tuple trees over
//! the foreign-key data graph, and LCA / MLCA over an XML nesting of the
//! data.

mod graph;
mod lca;
mod xml;

pub use graph::{spanning_tree_search, to_data_graph, ConnectedTree, DataGraph, GraphNode};
pub use lca::{lca_search, mlca_search};
pub use xml::{to_xml_tree, Nesting, XmlKind, XmlNode, XmlTree};

use std::collections::BTreeSet;

use crate::text::tokenize;

/// Distinct query tokens in first-occurrence order.
pub fn keywords(query: &str) -> Vec<String> {
    let mut seen = BTreeSet::new();
    tokenize(query)
        .into_iter()
        .filter(|t| seen.insert(t.clone()))
        .collect()
}
