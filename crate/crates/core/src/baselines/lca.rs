use std::collections::BTreeSet;

use super::{keywords, XmlTree};

fn matches(tree: &XmlTree, keyword: &str) -> Vec<usize> {
    (0..tree.len())
        .filter(|&n| tree.node(n).tokens.contains(keyword))
        .collect()
}

/// Smallest elements whose subtree holds every keyword, in document order.
pub fn lca_search(query: &str, tree: &XmlTree) -> Vec<usize> {
    let keywords = keywords(query);
    if keywords.is_empty() {
        return Vec::new();
    }
    let words = keywords.len().div_ceil(64);
    let mut masks = vec![vec![0u64; words]; tree.len()];
    for (k, kw) in keywords.iter().enumerate() {
        for n in matches(tree, kw) {
            masks[n][k / 64] |= 1 << (k % 64);
        }
    }
    let full: Vec<u64> = (0..words)
        .map(|w| {
            let bits = (keywords.len() - w * 64).min(64);
            if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            }
        })
        .collect();
    // Children come after their parent in preorder, so a reverse sweep sees
    // every subtree complete before its root.
    let mut complete = vec![false; tree.len()];
    let mut result = vec![false; tree.len()];
    for n in (0..tree.len()).rev() {
        let mut acc = masks[n].clone();
        let mut child_complete = false;
        for &c in &tree.node(n).children {
            for (a, m) in acc.iter_mut().zip(&masks[c]) {
                *a |= m;
            }
            child_complete |= complete[c];
        }
        masks[n] = acc;
        complete[n] = masks[n] == full;
        result[n] = complete[n] && !child_complete;
    }
    (0..tree.len()).filter(|&n| result[n]).collect()
}

/// LCAs of keyword-match combinations in which every match is as close to
/// each partner as any other match of its keyword, reduced to the smallest
/// such elements, in document order.
pub fn mlca_search(query: &str, tree: &XmlTree) -> Vec<usize> {
    let keywords = keywords(query);
    if keywords.is_empty() {
        return Vec::new();
    }
    let per_kw: Vec<Vec<usize>> = keywords.iter().map(|k| matches(tree, k)).collect();
    if per_kw.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    // closest[j][x]: deepest LCA depth between node x and any match of keyword j
    let closest: Vec<Vec<usize>> = per_kw
        .iter()
        .map(|ms| {
            (0..tree.len())
                .map(|x| {
                    ms.iter()
                        .map(|&m| tree.node(tree.lca(x, m)).depth)
                        .max()
                        .unwrap_or(0)
                })
                .collect()
        })
        .collect();
    let mut found = BTreeSet::new();
    let mut chosen = Vec::with_capacity(keywords.len());
    extend(tree, &per_kw, &closest, &mut chosen, &mut found);
    let found: Vec<usize> = found.into_iter().collect();
    found
        .iter()
        .copied()
        .filter(|&v| !found.iter().any(|&u| tree.is_ancestor(v, u)))
        .collect()
}

fn extend(
    tree: &XmlTree,
    per_kw: &[Vec<usize>],
    closest: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    found: &mut BTreeSet<usize>,
) {
    let j = chosen.len();
    if j == per_kw.len() {
        let lca = chosen[1..]
            .iter()
            .fold(chosen[0], |acc, &m| tree.lca(acc, m));
        found.insert(lca);
        return;
    }
    for &m in &per_kw[j] {
        let meaningful = chosen.iter().enumerate().all(|(i, &c)| {
            let d = tree.node(tree.lca(c, m)).depth;
            d == closest[j][c] && d == closest[i][m]
        });
        if meaningful {
            chosen.push(m);
            extend(tree, per_kw, closest, chosen, found);
            chosen.pop();
        }
    }
}
