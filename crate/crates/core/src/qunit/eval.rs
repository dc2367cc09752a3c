use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::QunitDefinition;
use crate::store::{ColumnRef, Dataset, SchemaElement, Value};
use crate::{Error, Result};

/// Projected rows of one `foreach` group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRows {
    pub name: String,
    pub columns: Vec<ColumnRef>,
    pub tuples: Vec<Vec<Value>>,
}

/// One materialized qunit: the header (label, anchor value) and the rows
/// of every group. Holds no references to other instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QunitInstance {
    pub definition_id: String,
    pub label: String,
    pub anchor: ColumnRef,
    pub anchor_value: String,
    pub groups: Vec<GroupRows>,
}

impl QunitInstance {
    pub fn id(&self) -> String {
        format!("{}:{}", self.definition_id, self.anchor_value)
    }

    /// Columns that actually carry values in this instance: the anchor plus
    /// the columns of every non-empty group.
    pub fn elements(&self) -> BTreeSet<SchemaElement> {
        let mut out = BTreeSet::from([SchemaElement::from(&self.anchor)]);
        for g in self.groups.iter().filter(|g| !g.tuples.is_empty()) {
            out.extend(g.columns.iter().map(SchemaElement::from));
        }
        out
    }
}

/// Row indices, one per base table (in `base.tables` order).
type Binding = Vec<usize>;

/// Evaluates the base expression, optionally restricted to one anchor value.
fn evaluate(def: &QunitDefinition, dataset: &Dataset, anchor: Option<&str>) -> Vec<Binding> {
    let schema = dataset.schema();
    let tables = &def.base.tables;
    let col_idx = |c: &ColumnRef| -> (usize, usize) {
        let t = tables
            .iter()
            .position(|t| *t == c.table)
            .expect("validated");
        let ci = schema
            .table(&c.table)
            .and_then(|d| d.column_index(&c.column))
            .expect("validated");
        (t, ci)
    };
    let rows = |t: usize| dataset.rows(&tables[t]);

    let (at, ac) = col_idx(&def.base.anchor);
    let mut bound = vec![false; tables.len()];
    bound[at] = true;
    let mut partial: Vec<Vec<Option<usize>>> = rows(at)
        .iter()
        .enumerate()
        .filter(|(_, r)| anchor.is_none_or(|a| r[ac].as_text() == Some(a)))
        .map(|(i, _)| {
            let mut b = vec![None; tables.len()];
            b[at] = Some(i);
            b
        })
        .collect();

    // Extend along joins that connect a bound table to an unbound one.
    while bound.iter().any(|b| !b) {
        let step = def.base.joins.iter().find_map(|j| {
            let (l, r) = (col_idx(&j.left), col_idx(&j.right));
            match (bound[l.0], bound[r.0]) {
                (true, false) => Some((l, r)),
                (false, true) => Some((r, l)),
                _ => None,
            }
        });
        let Some(((bt, bc), (nt, nc))) = step else {
            unreachable!("validated join graph is connected")
        };
        let mut by_value: HashMap<&Value, Vec<usize>> = HashMap::new();
        for (i, r) in rows(nt).iter().enumerate() {
            by_value.entry(&r[nc]).or_default().push(i);
        }
        partial = partial
            .into_iter()
            .flat_map(|b| {
                let v = &rows(bt)[b[bt].expect("bound")][bc];
                let matches = by_value.get(v).cloned().unwrap_or_default();
                matches.into_iter().map(move |m| {
                    let mut nb = b.clone();
                    nb[nt] = Some(m);
                    nb
                })
            })
            .collect();
        bound[nt] = true;
    }

    // Re-check every predicate; joins that closed a cycle are only enforced here.
    partial
        .into_iter()
        .map(|b| {
            b.into_iter()
                .map(|x| x.expect("all bound"))
                .collect::<Binding>()
        })
        .filter(|b| {
            def.base.joins.iter().all(|j| {
                let (l, r) = (col_idx(&j.left), col_idx(&j.right));
                rows(l.0)[b[l.0]][l.1] == rows(r.0)[b[r.0]][r.1]
            })
        })
        .collect()
}

fn build_instance(
    def: &QunitDefinition,
    dataset: &Dataset,
    anchor_value: &str,
    bindings: &[Binding],
) -> QunitInstance {
    let schema = dataset.schema();
    let tables = &def.base.tables;
    let groups = def
        .conversion
        .groups
        .iter()
        .map(|g| {
            // Tables owning the projected columns, in base order; a group row
            // is one distinct combination of their rows.
            let owners: BTreeSet<usize> = g
                .columns
                .iter()
                .map(|c| {
                    tables
                        .iter()
                        .position(|t| *t == c.table)
                        .expect("validated")
                })
                .collect();
            let mut distinct: BTreeMap<Vec<Value>, Vec<Value>> = BTreeMap::new();
            for b in bindings {
                let key = owners
                    .iter()
                    .map(|&t| {
                        let def_t = schema.table(&tables[t]).expect("validated");
                        dataset.rows(&tables[t])[b[t]][def_t.pk_index()].clone()
                    })
                    .collect();
                distinct.entry(key).or_insert_with(|| {
                    g.columns
                        .iter()
                        .map(|c| {
                            let t = tables
                                .iter()
                                .position(|x| *x == c.table)
                                .expect("validated");
                            let ci = schema
                                .table(&c.table)
                                .and_then(|d| d.column_index(&c.column))
                                .expect("validated");
                            dataset.rows(&c.table)[b[t]][ci].clone()
                        })
                        .collect()
                });
            }
            GroupRows {
                name: g.name.clone(),
                columns: g.columns.clone(),
                tuples: distinct.into_values().collect(),
            }
        })
        .collect();
    QunitInstance {
        definition_id: def.id.clone(),
        label: def.conversion.label.clone(),
        anchor: def.base.anchor.clone(),
        anchor_value: anchor_value.to_string(),
        groups,
    }
}

/// Binds the anchor to `value` and evaluates the definition.
pub fn instantiate(def: &QunitDefinition, value: &str, dataset: &Dataset) -> Result<QunitInstance> {
    let exists = dataset
        .column_values(&def.base.anchor)
        .any(|v| v.as_text() == Some(value));
    if !exists {
        return Err(Error::NotFound(format!(
            "no {} = \"{value}\" for qunit `{}`",
            def.base.anchor, def.id
        )));
    }
    let bindings = evaluate(def, dataset, Some(value));
    Ok(build_instance(def, dataset, value, &bindings))
}

/// One instance per distinct anchor value, ordered by anchor value. Anchors
/// without joined rows still produce a header-only instance.
pub fn enumerate_instances(def: &QunitDefinition, dataset: &Dataset) -> Vec<QunitInstance> {
    let mut by_anchor: BTreeMap<String, Vec<Binding>> = dataset
        .column_values(&def.base.anchor)
        .filter_map(|v| v.as_text().map(|s| (s.to_string(), Vec::new())))
        .collect();
    let tables = &def.base.tables;
    let at = tables
        .iter()
        .position(|t| *t == def.base.anchor.table)
        .expect("validated");
    let ac = dataset
        .schema()
        .table(&def.base.anchor.table)
        .and_then(|t| t.column_index(&def.base.anchor.column))
        .expect("validated");
    for b in evaluate(def, dataset, None) {
        if let Some(v) = dataset.rows(&tables[at])[b[at]][ac].as_text() {
            by_anchor
                .get_mut(v)
                .expect("anchor value collected")
                .push(b);
        }
    }
    by_anchor
        .iter()
        .map(|(value, bindings)| build_instance(def, dataset, value, bindings))
        .collect()
}
