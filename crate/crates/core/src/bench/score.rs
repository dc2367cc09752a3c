use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Adapter, Benchmark, GoldSpec};
use crate::store::SchemaElement;
use crate::text::normalize;
use crate::Scalar;

/// An algorithm's top result, flattened for grading.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TopResult {
    /// Entity the result is about, if one could be identified.
    pub anchor: Option<String>,
    /// Schema columns whose values the result shows.
    pub elements: BTreeSet<SchemaElement>,
}

/// Which rubric branch fired. Both half-credit branches are kept apart so
/// reports can tell them apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grade {
    Correct,
    Incomplete,
    Excessive,
    Incorrect,
    NoInformation,
}

impl Grade {
    pub fn value<S: Scalar>(self) -> S {
        match self {
            Grade::Correct => S::one(),
            Grade::Incomplete | Grade::Excessive => S::half(),
            Grade::Incorrect | Grade::NoInformation => S::zero(),
        }
    }
}

pub fn score_result(result: Option<&TopResult>, gold: &GoldSpec) -> Grade {
    let Some(result) = result else {
        return Grade::NoInformation;
    };
    let anchor_ok = result
        .anchor
        .as_deref()
        .is_some_and(|a| normalize(a) == normalize(&gold.anchor_value));
    if !anchor_ok {
        return Grade::Incorrect;
    }
    let covered = gold.required.intersection(&result.elements).count();
    if covered == 0 && !gold.required.is_empty() {
        return Grade::NoInformation;
    }
    if covered < gold.required.len() {
        return Grade::Incomplete;
    }
    if gold.forbidden.is_disjoint(&result.elements) {
        Grade::Correct
    } else {
        Grade::Excessive
    }
}

/// Per-query grades for every algorithm, with per-algorithm means.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreReport<S> {
    pub algorithms: Vec<String>,
    pub queries: Vec<String>,
    /// `grades[q][a]` for query `q` and algorithm `a`.
    pub grades: Vec<Vec<Grade>>,
    pub means: Vec<S>,
}

impl<S: Scalar> ScoreReport<S> {
    pub fn mean(&self, algorithm: &str) -> Option<S> {
        let i = self.algorithms.iter().position(|a| a == algorithm)?;
        Some(self.means[i])
    }

    pub fn score(&self, query: usize, algorithm: usize) -> S {
        self.grades[query][algorithm].value()
    }

    /// Tab-separated matrix: header, one row per query, then the means.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("query");
        for a in &self.algorithms {
            out.push('\t');
            out.push_str(a);
        }
        out.push('\n');
        for (q, row) in self.queries.iter().zip(&self.grades) {
            out.push_str(q);
            for g in row {
                let _ = write!(out, "\t{:.1}", g.value::<S>().to_f64().unwrap_or(0.0));
            }
            out.push('\n');
        }
        out.push_str("mean");
        for m in &self.means {
            let _ = write!(out, "\t{:.3}", m.to_f64().unwrap_or(0.0));
        }
        out.push('\n');
        out
    }
}

/// Grades every algorithm's top result on every query that has a gold
/// spec. A failing adapter scores zero for that query.
pub fn run_comparison<S: Scalar>(
    benchmark: &Benchmark,
    algorithms: &[(&str, &Adapter<'_>)],
) -> ScoreReport<S> {
    let mut queries = Vec::new();
    let mut grades = Vec::new();
    for bq in &benchmark.queries {
        let Some(gold) = &bq.gold else {
            log::warn!("query `{}` has no gold spec; not scored", bq.query);
            continue;
        };
        let row = algorithms
            .iter()
            .map(|(name, adapter)| match adapter(&bq.query) {
                Ok(top) => score_result(top.as_ref(), gold),
                Err(e) => {
                    log::warn!("{name} failed on `{}`: {e}", bq.query);
                    Grade::NoInformation
                }
            })
            .collect();
        queries.push(bq.query.clone());
        grades.push(row);
    }
    let means = (0..algorithms.len())
        .map(|a| {
            if grades.is_empty() {
                return S::zero();
            }
            let total = grades
                .iter()
                .fold(S::zero(), |acc, row: &Vec<Grade>| acc + row[a].value::<S>());
            total / S::count(grades.len())
        })
        .collect();
    ScoreReport {
        algorithms: algorithms.iter().map(|(n, _)| n.to_string()).collect(),
        queries,
        grades,
        means,
    }
}
