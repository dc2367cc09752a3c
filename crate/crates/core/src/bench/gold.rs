use std::collections::{BTreeMap, BTreeSet};

use crate::store::{ColumnRef, SchemaElement};
use crate::{Error, Result};

/// What a correct answer to one benchmark query looks like.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldSpec {
    pub definition_id: String,
    pub anchor_value: String,
    /// Column the anchor value was typed as in the query.
    pub anchor_element: Option<ColumnRef>,
    pub required: BTreeSet<SchemaElement>,
    pub forbidden: BTreeSet<SchemaElement>,
}

/// Gold information authored per template; the anchor comes from each query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldEntry {
    pub definition_id: String,
    pub required: BTreeSet<SchemaElement>,
    pub forbidden: BTreeSet<SchemaElement>,
}

impl GoldEntry {
    pub fn spec(&self, anchor_value: &str, anchor_element: Option<ColumnRef>) -> GoldSpec {
        GoldSpec {
            definition_id: self.definition_id.clone(),
            anchor_value: anchor_value.to_string(),
            anchor_element,
            required: self.required.clone(),
            forbidden: self.forbidden.clone(),
        }
    }
}

/// Template pattern to gold entry.
pub type GoldMap = BTreeMap<String, GoldEntry>;

fn element_list(
    source: &str,
    line: usize,
    field: &str,
    prefix: &str,
) -> Result<BTreeSet<SchemaElement>> {
    let rest = field.strip_prefix(prefix).ok_or_else(|| {
        Error::parse(
            source,
            line,
            format!("expected `{prefix}...`, found `{field}`"),
        )
    })?;
    rest.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<SchemaElement>()
                .map_err(|e| Error::parse(source, line, e.to_string()))
        })
        .collect()
}

/// Parses `template<TAB>definition-id<TAB>required:a,b<TAB>forbidden:c,d`
/// lines. Blank lines and `#` comments are skipped.
pub fn parse_gold_map(text: &str) -> Result<GoldMap> {
    const SOURCE: &str = "gold map";
    let mut map = GoldMap::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                SOURCE,
                n,
                format!("expected 4 fields, found {}", fields.len()),
            ));
        }
        let required = element_list(SOURCE, n, fields[2], "required:")?;
        let forbidden = element_list(SOURCE, n, fields[3], "forbidden:")?;
        if let Some(both) = required.intersection(&forbidden).next() {
            return Err(Error::parse(
                SOURCE,
                n,
                format!("`{both}` is both required and forbidden"),
            ));
        }
        let template = fields[0].trim().to_string();
        let entry = GoldEntry {
            definition_id: fields[1].trim().to_string(),
            required,
            forbidden,
        };
        if map.insert(template.clone(), entry).is_some() {
            return Err(Error::parse(
                SOURCE,
                n,
                format!("duplicate template `{template}`"),
            ));
        }
    }
    Ok(map)
}
