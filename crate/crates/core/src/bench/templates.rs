use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GoldMap, GoldSpec};
use crate::derive::{type_query, LogEntry, TypedTemplate};
use crate::store::ValueIndex;
use crate::text::normalize;
use crate::{Error, Result};

/// Types every log query and sums frequencies per pattern. Sorted by
/// frequency descending, ties by pattern.
pub fn extract_templates(log: &[LogEntry], index: &ValueIndex) -> Vec<TypedTemplate> {
    let mut by_pattern: BTreeMap<String, TypedTemplate> = BTreeMap::new();
    for entry in log {
        let typed = type_query(&entry.query, index);
        by_pattern
            .entry(typed.template.pattern())
            .or_insert_with(|| TypedTemplate {
                items: typed.template.items.clone(),
                frequency: 0,
            })
            .frequency += entry.frequency;
    }
    let mut out: Vec<(String, TypedTemplate)> = by_pattern.into_iter().collect();
    out.sort_by(|a, b| {
        b.1.frequency
            .cmp(&a.1.frequency)
            .then_with(|| a.0.cmp(&b.0))
    });
    out.into_iter().map(|(_, t)| t).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchQuery {
    pub query: String,
    pub template: String,
    pub gold: Option<GoldSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Benchmark {
    pub queries: Vec<BenchQuery>,
    pub seed: u64,
    pub warnings: Vec<String>,
}

/// Samples `per_template` distinct log queries for each of the
/// `top_templates` most frequent templates. Candidates are taken in sorted
/// order before sampling so the result depends only on the inputs and seed.
pub fn make_benchmark(
    templates: &[TypedTemplate],
    log: &[LogEntry],
    index: &ValueIndex,
    top_templates: usize,
    per_template: usize,
    seed: u64,
    gold: Option<&GoldMap>,
) -> Result<Benchmark> {
    if per_template == 0 {
        return Err(Error::Invalid("per_template must be at least 1".into()));
    }
    let mut by_pattern: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for entry in log {
        let q = normalize(&entry.query);
        let pattern = type_query(&q, index).template.pattern();
        by_pattern.entry(pattern).or_default().insert(q);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut queries = Vec::new();
    let mut warnings = Vec::new();
    for template in templates.iter().take(top_templates) {
        let pattern = template.pattern();
        let candidates: Vec<&String> = by_pattern
            .get(&pattern)
            .map(|s| s.iter().collect())
            .unwrap_or_default();
        if candidates.is_empty() {
            let w = format!("template `{pattern}` has no matching log queries; skipped");
            log::warn!("{w}");
            warnings.push(w);
            continue;
        }
        let entry = gold.and_then(|g| g.get(&pattern));
        if gold.is_some() && entry.is_none() {
            let w = format!("template `{pattern}` has no gold entry");
            log::warn!("{w}");
            warnings.push(w);
        }
        let amount = per_template.min(candidates.len());
        let mut picked: Vec<usize> = sample(&mut rng, candidates.len(), amount).into_vec();
        picked.sort_unstable();
        for i in picked {
            let query = candidates[i].clone();
            let spec = entry.map(|e| {
                let typed = type_query(&query, index);
                let anchor = typed.value_matches().next();
                e.spec(
                    anchor.map(|m| m.matched_text.as_str()).unwrap_or(""),
                    anchor.and_then(|m| m.element.as_column_ref()),
                )
            });
            queries.push(BenchQuery {
                query,
                template: pattern.clone(),
                gold: spec,
            });
        }
    }
    Ok(Benchmark {
        queries,
        seed,
        warnings,
    })
}
