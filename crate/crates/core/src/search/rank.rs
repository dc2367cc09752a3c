use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use super::{segment, InvertedIndex, Segmentation};
use crate::qunit::QunitDefinition;
use crate::store::ValueIndex;
use crate::text::tokenize;
use crate::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig<S> {
    /// Weight of the definition match against the instance text score.
    pub alpha: S,
    pub top_k: usize,
    /// How many best-matching definitions contribute candidates.
    pub max_definitions: usize,
}

impl<S: Scalar> Default for SearchConfig<S> {
    fn default() -> Self {
        SearchConfig {
            alpha: S::half(),
            top_k: 10,
            max_definitions: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DefinitionMatch<S> {
    pub definition_id: String,
    pub jaccard: S,
    /// `jaccard * (1 + utility) / 2`.
    pub score: S,
}

/// Scores every definition against the schema elements of a segmentation.
pub fn match_definitions<S: Scalar>(
    seg: &Segmentation,
    defs: &[QunitDefinition],
) -> Vec<DefinitionMatch<S>> {
    let query = seg.elements();
    let mut out: Vec<DefinitionMatch<S>> = defs
        .iter()
        .map(|d| {
            let own = d.elements();
            let inter = query.intersection(&own).count();
            let union = query.union(&own).count();
            let jaccard = if union == 0 {
                S::zero()
            } else {
                S::count(inter) / S::count(union)
            };
            let prior = (S::one() + S::from_f64_lossy(d.utility)) * S::half();
            DefinitionMatch {
                definition_id: d.id.clone(),
                jaccard,
                score: jaccard * prior,
            }
        })
        .collect();
    out.sort_by(|a, b| desc(a.score, b.score).then_with(|| a.definition_id.cmp(&b.definition_id)));
    out
}

fn desc<S: Scalar>(a: S, b: S) -> Ordering {
    b.partial_cmp(&a).unwrap_or(Ordering::Equal)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankedResult<S> {
    pub instance_id: String,
    pub definition_id: String,
    pub anchor_value: String,
    pub combined: S,
    pub defmatch: S,
    pub tfidf: S,
}

/// Intermediate state of one query, as printed by `explain`.
#[derive(Clone, Debug, PartialEq)]
pub struct Explanation<S> {
    pub tokens: Vec<String>,
    pub segmentations: Vec<Segmentation>,
    pub matches: Vec<DefinitionMatch<S>>,
    pub selected: Vec<String>,
    pub results: Vec<RankedResult<S>>,
}

/// Runs the full pipeline and keeps every intermediate result.
pub fn explain<S: Scalar>(
    query: &str,
    values: &ValueIndex,
    index: &InvertedIndex,
    defs: &[QunitDefinition],
    config: &SearchConfig<S>,
) -> Explanation<S> {
    let tokens = tokenize(query);
    let segmentations = segment(query, values);
    let top = segmentations
        .first()
        .expect("segment always yields one segmentation");
    let matches: Vec<DefinitionMatch<S>> = match_definitions(top, defs);
    // A query with no recognized elements matches every definition equally
    // (at zero), so all of them stay candidates.
    let selected: Vec<String> = if matches.iter().all(|m| m.score == S::zero()) {
        matches.iter().map(|m| m.definition_id.clone()).collect()
    } else {
        matches
            .iter()
            .take(config.max_definitions)
            .map(|m| m.definition_id.clone())
            .collect()
    };
    let results = if index.doc_count() == 0 {
        Vec::new()
    } else {
        rank_instances(&tokens, index, &matches, &selected, config)
    };
    Explanation {
        tokens,
        segmentations,
        matches,
        selected,
        results,
    }
}

fn rank_instances<S: Scalar>(
    tokens: &[String],
    index: &InvertedIndex,
    matches: &[DefinitionMatch<S>],
    selected: &[String],
    config: &SearchConfig<S>,
) -> Vec<RankedResult<S>> {
    let wanted: BTreeSet<&str> = selected.iter().map(String::as_str).collect();
    let defmatch: HashMap<&str, S> = matches
        .iter()
        .map(|m| (m.definition_id.as_str(), m.score))
        .collect();
    let mut tfidf: HashMap<usize, S> = HashMap::new();
    for t in tokens {
        let idf: S = index.idf(t);
        for &(doc, tf) in index.postings(t) {
            *tfidf.entry(doc).or_insert_with(S::zero) += S::count(tf as usize) * idf;
        }
    }
    let mut out: Vec<RankedResult<S>> = index
        .docs()
        .iter()
        .enumerate()
        .filter(|(_, d)| wanted.contains(d.definition_id.as_str()))
        .map(|(n, d)| {
            let t = tfidf.get(&n).copied().unwrap_or_else(S::zero);
            let m = defmatch[d.definition_id.as_str()];
            RankedResult {
                instance_id: d.id.clone(),
                definition_id: d.definition_id.clone(),
                anchor_value: d.anchor_value.clone(),
                combined: config.alpha * m + (S::one() - config.alpha) * (t / (t + S::one())),
                defmatch: m,
                tfidf: t,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        desc(a.combined, b.combined)
            .then_with(|| a.definition_id.cmp(&b.definition_id))
            .then_with(|| a.instance_id.cmp(&b.instance_id))
    });
    out.truncate(config.top_k);
    out
}

/// Ranked qunit instances for a keyword query.
pub fn search<S: Scalar>(
    query: &str,
    values: &ValueIndex,
    index: &InvertedIndex,
    defs: &[QunitDefinition],
    config: &SearchConfig<S>,
) -> Vec<RankedResult<S>> {
    explain(query, values, index, defs, config).results
}
