use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::keywords;
use crate::store::{ColumnRef, Dataset, Value};
use crate::text::tokenize;

/// One tuple of the dataset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphNode {
    pub table: String,
    pub key: Value,
    /// Non-key columns and their values.
    pub values: Vec<(ColumnRef, Value)>,
    /// Table-name tokens plus tokens of every non-key value.
    pub tokens: BTreeSet<String>,
}

/// Tuples as nodes, FK-linked tuple pairs as undirected edges. Node ids
/// follow (schema table order, primary key).
#[derive(Clone, Debug, Default)]
pub struct DataGraph {
    nodes: Vec<GraphNode>,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl DataGraph {
    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &GraphNode {
        &self.nodes[id]
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adjacency[id]
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Node ids whose tokens contain `keyword`.
    pub fn matching(&self, keyword: &str) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&n| self.nodes[n].tokens.contains(keyword))
            .collect()
    }
}

pub fn to_data_graph(dataset: &Dataset) -> DataGraph {
    let schema = dataset.schema();
    let mut nodes = Vec::new();
    let mut by_key: HashMap<(&str, &Value), usize> = HashMap::new();
    for t in schema.tables() {
        let pk = t.pk_index();
        let mut rows: Vec<&Vec<Value>> = dataset.rows(&t.name).iter().collect();
        rows.sort_by(|a, b| a[pk].cmp(&b[pk]));
        for row in rows {
            let mut tokens: BTreeSet<String> = tokenize(&t.name).into_iter().collect();
            let mut values = Vec::new();
            for (c, v) in t.columns.iter().zip(row) {
                let cref = ColumnRef::new(t.name.clone(), c.name.clone());
                if schema.is_key_column(&cref) {
                    continue;
                }
                tokens.extend(tokenize(&v.to_string()));
                values.push((cref, v.clone()));
            }
            by_key.insert((t.name.as_str(), &row[pk]), nodes.len());
            nodes.push(GraphNode {
                table: t.name.clone(),
                key: row[pk].clone(),
                values,
                tokens,
            });
        }
    }
    let mut adjacency = vec![BTreeSet::new(); nodes.len()];
    let mut edges = HashSet::new();
    for e in schema.fk_edges() {
        let t = schema.table(&e.from.table).expect("validated");
        let (pk, fk) = (
            t.pk_index(),
            t.column_index(&e.from.column).expect("validated"),
        );
        for row in dataset.rows(&e.from.table) {
            let a = by_key[&(e.from.table.as_str(), &row[pk])];
            let b = by_key[&(e.to.table.as_str(), &row[fk])];
            if a != b {
                adjacency[a].insert(b);
                adjacency[b].insert(a);
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }
    DataGraph {
        nodes,
        adjacency: adjacency
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect(),
        edge_count: edges.len(),
    }
}

/// A connected set of tuples with a spanning tree over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedTree {
    /// Sorted node ids.
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl ConnectedTree {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }
}

fn covers(graph: &DataGraph, set: &[usize], keywords: &[String]) -> bool {
    keywords
        .iter()
        .all(|k| set.iter().any(|&n| graph.nodes[n].tokens.contains(k)))
}

fn connected_without(graph: &DataGraph, set: &[usize], skip: usize) -> bool {
    let members: Vec<usize> = set.iter().copied().filter(|&n| n != skip).collect();
    let Some(&start) = members.first() else {
        return true;
    };
    let inside: HashSet<usize> = members.iter().copied().collect();
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        for &m in graph.neighbors(n) {
            if inside.contains(&m) && seen.insert(m) {
                queue.push_back(m);
            }
        }
    }
    seen.len() == members.len()
}

/// Minimal when no single node can be dropped while staying connected and
/// covering; any smaller connected cover implies such a node exists.
fn is_minimal(graph: &DataGraph, set: &[usize], keywords: &[String]) -> bool {
    set.iter().all(|&n| {
        let rest: Vec<usize> = set.iter().copied().filter(|&m| m != n).collect();
        !(connected_without(graph, set, n) && covers(graph, &rest, keywords))
    })
}

fn spanning_edges(graph: &DataGraph, set: &[usize]) -> Vec<(usize, usize)> {
    let inside: HashSet<usize> = set.iter().copied().collect();
    let mut seen = HashSet::from([set[0]]);
    let mut queue = VecDeque::from([set[0]]);
    let mut edges = Vec::new();
    while let Some(n) = queue.pop_front() {
        for &m in graph.neighbors(n) {
            if inside.contains(&m) && seen.insert(m) {
                edges.push((n.min(m), n.max(m)));
                queue.push_back(m);
            }
        }
    }
    edges.sort();
    edges
}

/// Minimal connected tuple sets containing every query keyword, smallest
/// first (ties by node ids), at most `limit` of them.
///
/// Grows connected sets level by level from keyword nodes; covering sets
/// are not grown further since their supersets cannot be minimal.
pub fn spanning_tree_search(query: &str, graph: &DataGraph, limit: usize) -> Vec<ConnectedTree> {
    let keywords = keywords(query);
    if keywords.is_empty() || limit == 0 {
        return Vec::new();
    }
    let seeds: BTreeSet<usize> = keywords.iter().flat_map(|k| graph.matching(k)).collect();
    if keywords.iter().any(|k| graph.matching(k).is_empty()) {
        return Vec::new();
    }
    let mut results = Vec::new();
    let mut level: BTreeSet<Vec<usize>> = seeds.into_iter().map(|n| vec![n]).collect();
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        for set in &level {
            if covers(graph, set, &keywords) {
                if is_minimal(graph, set, &keywords) {
                    results.push(ConnectedTree {
                        nodes: set.clone(),
                        edges: spanning_edges(graph, set),
                    });
                }
                continue;
            }
            for &n in set {
                for &m in graph.neighbors(n) {
                    if let Err(pos) = set.binary_search(&m) {
                        let mut grown = set.clone();
                        grown.insert(pos, m);
                        next.insert(grown);
                    }
                }
            }
        }
        if results.len() >= limit {
            break;
        }
        level = next;
    }
    results.truncate(limit);
    results
}
