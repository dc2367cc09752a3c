use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::qunit::{render, QunitInstance};
use crate::store::SchemaElement;
use crate::{Error, Result, Scalar};

/// Stored form of one indexed instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedDoc {
    pub id: String,
    pub definition_id: String,
    pub anchor_value: String,
    pub display: String,
    pub elements: BTreeSet<SchemaElement>,
}

/// Token postings over instance documents. Document numbers follow
/// instance-id order, so postings are sorted by instance id.
#[derive(Clone, Debug, Default)]
pub struct InvertedIndex {
    docs: Vec<IndexedDoc>,
    postings: BTreeMap<String, Vec<(usize, u32)>>,
}

pub fn build_index(instances: &[QunitInstance]) -> Result<InvertedIndex> {
    let mut order: Vec<(String, &QunitInstance)> = instances.iter().map(|i| (i.id(), i)).collect();
    order.sort_by(|a, b| a.0.cmp(&b.0));
    let mut seen = HashSet::new();
    let mut docs = Vec::with_capacity(order.len());
    let mut postings: BTreeMap<String, Vec<(usize, u32)>> = BTreeMap::new();
    for (n, (id, inst)) in order.into_iter().enumerate() {
        if !seen.insert(id.clone()) {
            return Err(Error::Invalid(format!("duplicate instance id `{id}`")));
        }
        let rendered = render(inst);
        let mut tf: BTreeMap<String, u32> = BTreeMap::new();
        for t in rendered.index_tokens {
            *tf.entry(t).or_default() += 1;
        }
        for (t, f) in tf {
            postings.entry(t).or_default().push((n, f));
        }
        docs.push(IndexedDoc {
            id,
            definition_id: inst.definition_id.clone(),
            anchor_value: inst.anchor_value.clone(),
            display: rendered.display,
            elements: inst.elements(),
        });
    }
    Ok(InvertedIndex { docs, postings })
}

impl InvertedIndex {
    pub fn doc_count(&self) -> usize {
        self.docs.len()
    }

    pub fn docs(&self) -> &[IndexedDoc] {
        &self.docs
    }

    pub fn doc(&self, n: usize) -> &IndexedDoc {
        &self.docs[n]
    }

    pub fn doc_by_id(&self, id: &str) -> Option<&IndexedDoc> {
        self.docs
            .binary_search_by(|d| d.id.as_str().cmp(id))
            .ok()
            .map(|n| &self.docs[n])
    }

    pub fn postings(&self, token: &str) -> &[(usize, u32)] {
        self.postings.get(token).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn df(&self, token: &str) -> usize {
        self.postings(token).len()
    }

    pub fn tf(&self, token: &str, doc: usize) -> u32 {
        let p = self.postings(token);
        p.binary_search_by_key(&doc, |(d, _)| *d)
            .map(|i| p[i].1)
            .unwrap_or(0)
    }

    /// `ln(1 + N / df)`, zero for unseen tokens.
    pub fn idf<S: Scalar>(&self, token: &str) -> S {
        match self.df(token) {
            0 => S::zero(),
            df => (S::one() + S::count(self.doc_count()) / S::count(df)).ln(),
        }
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    /// `token<TAB>df<TAB>postings` lines sorted by token; postings are
    /// `instance-id=tf` joined by `|`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (t, p) in &self.postings {
            let list: Vec<String> = p
                .iter()
                .map(|(d, f)| format!("{}={f}", self.docs[*d].id))
                .collect();
            let _ = writeln!(out, "{t}\t{}\t{}", p.len(), list.join("|"));
        }
        out
    }
}
