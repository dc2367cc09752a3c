//! Helpers shared by the integration suites: seeded random datasets over
//! the fixture schema and brute-force reference implementations.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use qunits::baselines::{keywords, DataGraph, XmlTree};
use qunits::qunit::QunitDefinition;
use qunits::store::{fixture, Dataset, DatasetBuilder, Value};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const WORDS: [&str; 8] = ["red", "blue", "star", "night", "day", "war", "love", "gold"];

fn phrase(rng: &mut ChaCha8Rng) -> String {
    let n = rng.gen_range(1..=2);
    (0..n)
        .map(|_| *WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

/// A dataset over the fixture schema with at most 18 tuples and a small,
/// overlapping vocabulary.
pub fn random_dataset(rng: &mut ChaCha8Rng) -> Dataset {
    let mut b = DatasetBuilder::new(fixture::schema());
    let persons = rng.gen_range(1..=4i64);
    let movies = rng.gen_range(1..=3i64);
    for id in 1..=persons {
        b.insert("person", vec![Value::Int(id), Value::Text(phrase(rng))])
            .unwrap();
    }
    for id in 1..=movies {
        let year = rng.gen_range(1990..1993);
        b.insert(
            "movie",
            vec![Value::Int(id), Value::Text(phrase(rng)), Value::Int(year)],
        )
        .unwrap();
    }
    for id in 1..=rng.gen_range(0..=4i64) {
        let row = vec![
            Value::Int(id),
            Value::Int(rng.gen_range(1..=movies)),
            Value::Int(rng.gen_range(1..=persons)),
            Value::Text(phrase(rng)),
        ];
        b.insert("cast", row).unwrap();
    }
    for (table, max) in [("genre", 3), ("locations", 2), ("info", 2)] {
        for id in 1..=rng.gen_range(0..=max as i64) {
            let row = vec![
                Value::Int(id),
                Value::Int(rng.gen_range(1..=movies)),
                Value::Text(phrase(rng)),
            ];
            b.insert(table, row).unwrap();
        }
    }
    b.finalize().unwrap()
}

/// Groups of one instance by full cross product and filter:
/// `(group name, tuples)` with tuples distinct by the primary keys of the
/// tables owning the projected columns, ordered by those keys.
pub fn oracle_groups(
    def: &QunitDefinition,
    ds: &Dataset,
    anchor: &str,
) -> Vec<(String, Vec<Vec<Value>>)> {
    let schema = ds.schema();
    let tables = &def.base.tables;
    let rows: Vec<&[Vec<Value>]> = tables.iter().map(|t| ds.rows(t)).collect();
    let pos = |t: &str| tables.iter().position(|x| x == t).unwrap();
    let col = |t: &str, c: &str| schema.table(t).unwrap().column_index(c).unwrap();
    let mut combos: Vec<Vec<usize>> = Vec::new();
    if rows.iter().all(|r| !r.is_empty()) {
        let mut odo = vec![0usize; tables.len()];
        'outer: loop {
            combos.push(odo.clone());
            for i in (0..odo.len()).rev() {
                odo[i] += 1;
                if odo[i] < rows[i].len() {
                    continue 'outer;
                }
                odo[i] = 0;
            }
            break;
        }
    }
    let a = &def.base.anchor;
    let keep: Vec<&Vec<usize>> = combos
        .iter()
        .filter(|c| {
            let at = pos(&a.table);
            rows[at][c[at]][col(&a.table, &a.column)] == Value::Text(anchor.to_string())
                && def.base.joins.iter().all(|j| {
                    let (l, r) = (pos(&j.left.table), pos(&j.right.table));
                    rows[l][c[l]][col(&j.left.table, &j.left.column)]
                        == rows[r][c[r]][col(&j.right.table, &j.right.column)]
                })
        })
        .collect();
    def.conversion
        .groups
        .iter()
        .map(|g| {
            let owners: BTreeSet<usize> = g.columns.iter().map(|c| pos(&c.table)).collect();
            let mut out: BTreeMap<Vec<Value>, Vec<Value>> = BTreeMap::new();
            for c in &keep {
                let key = owners
                    .iter()
                    .map(|&t| rows[t][c[t]][schema.table(&tables[t]).unwrap().pk_index()].clone())
                    .collect();
                let vals = g
                    .columns
                    .iter()
                    .map(|x| {
                        rows[pos(&x.table)][c[pos(&x.table)]][col(&x.table, &x.column)].clone()
                    })
                    .collect();
                out.insert(key, vals);
            }
            (g.name.clone(), out.into_values().collect())
        })
        .collect()
}

/// Every minimal connected keyword cover, by enumerating all node subsets
/// of each connected component. Ordered by size, then node ids.
pub fn oracle_spanning(query: &str, graph: &DataGraph) -> Vec<Vec<usize>> {
    let kws = keywords(query);
    if kws.is_empty() {
        return Vec::new();
    }
    let n = graph.nodes().len();
    let mut comp = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut members = vec![s];
        comp[s] = components.len();
        let mut i = 0;
        while i < members.len() {
            for &m in graph.neighbors(members[i]) {
                if comp[m] == usize::MAX {
                    comp[m] = components.len();
                    members.push(m);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        components.push(members);
    }
    let mut found = Vec::new();
    for members in &components {
        assert!(
            members.len() <= 20,
            "component too large for exhaustive search"
        );
        let k = members.len();
        let adj: Vec<u32> = members
            .iter()
            .map(|&v| {
                graph
                    .neighbors(v)
                    .iter()
                    .map(|m| 1u32 << members.iter().position(|x| x == m).unwrap())
                    .fold(0, |a, b| a | b)
            })
            .collect();
        let kw_mask: Vec<u32> = kws
            .iter()
            .map(|w| {
                (0..k)
                    .filter(|&i| graph.node(members[i]).tokens.contains(w))
                    .map(|i| 1u32 << i)
                    .fold(0, |a, b| a | b)
            })
            .collect();
        let connected = |mask: u32| {
            let start = mask.trailing_zeros();
            let mut seen = 1u32 << start;
            loop {
                let mut grow = seen;
                for (i, a) in adj.iter().enumerate() {
                    if seen & (1 << i) != 0 {
                        grow |= a & mask;
                    }
                }
                if grow == seen {
                    return seen == mask;
                }
                seen = grow;
            }
        };
        let good = |mask: u32| kw_mask.iter().all(|m| m & mask != 0) && connected(mask);
        let covers: Vec<u32> = (1..(1u32 << k)).filter(|&m| good(m)).collect();
        for &m in &covers {
            // minimal: no proper subset that is itself a connected cover
            let mut sub = (m - 1) & m;
            let mut minimal = true;
            while sub != 0 {
                if good(sub) {
                    minimal = false;
                    break;
                }
                sub = (sub - 1) & m;
            }
            if minimal {
                let mut nodes: Vec<usize> = (0..k)
                    .filter(|&i| m & (1 << i) != 0)
                    .map(|i| members[i])
                    .collect();
                nodes.sort_unstable();
                found.push(nodes);
            }
        }
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found
}

fn ancestors_or_self(tree: &XmlTree, mut v: usize) -> Vec<usize> {
    let mut out = vec![v];
    while let Some(p) = tree.node(v).parent {
        out.push(p);
        v = p;
    }
    out
}

fn oracle_lca_pair(tree: &XmlTree, a: usize, b: usize) -> usize {
    let up: BTreeSet<usize> = ancestors_or_self(tree, a).into_iter().collect();
    ancestors_or_self(tree, b)
        .into_iter()
        .find(|x| up.contains(x))
        .unwrap()
}

fn matches(tree: &XmlTree, kw: &str) -> Vec<usize> {
    (0..tree.len())
        .filter(|&n| tree.node(n).tokens.contains(kw))
        .collect()
}

fn strictly_below(tree: &XmlTree, v: usize, u: usize) -> bool {
    u != v && ancestors_or_self(tree, u).contains(&v)
}

/// Nodes whose subtree holds every keyword and none of whose descendants do.
pub fn oracle_lca(query: &str, tree: &XmlTree) -> Vec<usize> {
    let kws = keywords(query);
    if kws.is_empty() {
        return Vec::new();
    }
    let per: Vec<Vec<usize>> = kws.iter().map(|k| matches(tree, k)).collect();
    let contains_all = |v: usize| {
        per.iter()
            .all(|ms| ms.iter().any(|&u| u == v || strictly_below(tree, v, u)))
    };
    let full: Vec<usize> = (0..tree.len()).filter(|&v| contains_all(v)).collect();
    full.iter()
        .copied()
        .filter(|&v| !full.iter().any(|&u| strictly_below(tree, v, u)))
        .collect()
}

/// LCAs of every keyword-match combination whose members pairwise pick each
/// other as nearest, reduced to the lowest ones.
pub fn oracle_mlca(query: &str, tree: &XmlTree) -> Vec<usize> {
    let kws = keywords(query);
    if kws.is_empty() {
        return Vec::new();
    }
    let per: Vec<Vec<usize>> = kws.iter().map(|k| matches(tree, k)).collect();
    if per.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let depth = |v: usize| tree.node(v).depth;
    let nearest = |x: usize, j: usize| {
        per[j]
            .iter()
            .map(|&m| depth(oracle_lca_pair(tree, x, m)))
            .max()
            .unwrap()
    };
    let total: usize = per.iter().map(Vec::len).product();
    let mut roots = BTreeSet::new();
    for mut code in 0..total {
        let combo: Vec<usize> = per
            .iter()
            .map(|ms| {
                let m = ms[code % ms.len()];
                code /= ms.len();
                m
            })
            .collect();
        let meaningful = (0..combo.len()).all(|i| {
            (0..combo.len()).all(|j| {
                i == j || depth(oracle_lca_pair(tree, combo[i], combo[j])) == nearest(combo[i], j)
            })
        });
        if meaningful {
            roots.insert(
                combo
                    .iter()
                    .skip(1)
                    .fold(combo[0], |acc, &m| oracle_lca_pair(tree, acc, m)),
            );
        }
    }
    let roots: Vec<usize> = roots.into_iter().collect();
    roots
        .iter()
        .copied()
        .filter(|&v| !roots.iter().any(|&u| strictly_below(tree, v, u)))
        .collect()
}

/// Every token a query could use on `ds`: value tokens, table names, and
/// column names.
pub fn vocabulary(ds: &Dataset) -> Vec<String> {
    let mut v = BTreeSet::new();
    for t in ds.schema().tables() {
        v.insert(t.name.clone());
        for c in &t.columns {
            v.insert(c.name.clone());
        }
        for r in ds.rows(&t.name) {
            for x in r {
                v.extend(qunits::text::tokenize(&x.to_string()));
            }
        }
    }
    v.into_iter().collect()
}
