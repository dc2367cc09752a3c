use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::store::{SchemaElement, ValueIndex, ValueMatch};
use crate::text::tokenize;
use crate::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Segment {
    Value(ValueMatch),
    Free {
        start: usize,
        end: usize,
        tokens: Vec<String>,
    },
}

impl Segment {
    pub fn span(&self) -> (usize, usize) {
        match self {
            Segment::Value(m) => (m.start, m.end),
            Segment::Free { start, end, .. } => (*start, *end),
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Value(m) => write!(f, "[{}]", m.element),
            Segment::Free { tokens, .. } => write!(f, "\"{}\"", tokens.join(" ")),
        }
    }
}

/// An order-preserving partition of the query tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segmentation {
    pub segments: Vec<Segment>,
    pub covered: usize,
    pub total: usize,
}

impl Segmentation {
    /// Fraction of tokens covered by recognized values; 0 for an empty query.
    pub fn score<S: Scalar>(&self) -> S {
        if self.total == 0 {
            S::zero()
        } else {
            S::count(self.covered) / S::count(self.total)
        }
    }

    pub fn elements(&self) -> BTreeSet<SchemaElement> {
        self.segments
            .iter()
            .filter_map(|s| match s {
                Segment::Value(m) => Some(m.element.clone()),
                Segment::Free { .. } => None,
            })
            .collect()
    }

    fn from_matches(tokens: &[String], chosen: &[&ValueMatch]) -> Self {
        let mut segments = Vec::new();
        let mut pos = 0;
        let free = |from: usize, to: usize, segments: &mut Vec<Segment>| {
            if from < to {
                segments.push(Segment::Free {
                    start: from,
                    end: to,
                    tokens: tokens[from..to].to_vec(),
                });
            }
        };
        for m in chosen {
            free(pos, m.start, &mut segments);
            segments.push(Segment::Value((*m).clone()));
            pos = m.end;
        }
        free(pos, tokens.len(), &mut segments);
        Segmentation {
            segments,
            covered: chosen.iter().map(|m| m.len()).sum(),
            total: tokens.len(),
        }
    }

    fn rank(&self, other: &Self) -> Ordering {
        // equal totals: compare coverage directly
        other
            .covered
            .cmp(&self.covered)
            .then_with(|| self.segments.len().cmp(&other.segments.len()))
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

impl fmt::Display for Segmentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.segments {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Enumerates every maximal set of non-overlapping matches.
fn maximal_sets<'a>(
    matches: &'a [ValueMatch],
    from: usize,
    chosen: &mut Vec<&'a ValueMatch>,
    out: &mut Vec<Vec<&'a ValueMatch>>,
) {
    let candidates: Vec<&ValueMatch> = matches.iter().filter(|m| m.start >= from).collect();
    let Some(first_end) = candidates.iter().map(|m| m.end).min() else {
        out.push(chosen.clone());
        return;
    };
    // Any match starting at or after `first_end` could still be added after
    // the one ending at `first_end`, so it cannot come next.
    for m in candidates.into_iter().filter(|m| m.start < first_end) {
        chosen.push(m);
        maximal_sets(matches, m.end, chosen, out);
        chosen.pop();
    }
}

/// All segmentations built from maximal match sets, best first: most
/// covered tokens, then fewest segments, then lexicographic.
pub fn segment(query: &str, index: &ValueIndex) -> Vec<Segmentation> {
    let tokens = tokenize(query);
    let matches = index.all_matches(&tokens);
    let mut sets = Vec::new();
    maximal_sets(&matches, 0, &mut Vec::new(), &mut sets);
    let mut out: Vec<Segmentation> = sets
        .iter()
        .map(|s| Segmentation::from_matches(&tokens, s))
        .collect();
    out.sort_by(Segmentation::rank);
    out.dedup();
    out
}
