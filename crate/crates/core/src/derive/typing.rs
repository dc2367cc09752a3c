use std::fmt;

use serde::{Deserialize, Serialize};

use crate::store::{SchemaElement, ValueIndex, ValueMatch};
use crate::text::tokenize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TemplateItem {
    Slot(SchemaElement),
    Literal(String),
}

/// A query shape with recognized values replaced by their schema element,
/// e.g. `[person.name] movies`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypedTemplate {
    pub items: Vec<TemplateItem>,
    pub frequency: u64,
}

impl TypedTemplate {
    pub fn pattern(&self) -> String {
        self.items
            .iter()
            .map(|i| match i {
                TemplateItem::Slot(e) => format!("[{e}]"),
                TemplateItem::Literal(t) => t.clone(),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn slots(&self) -> impl Iterator<Item = &SchemaElement> {
        self.items.iter().filter_map(|i| match i {
            TemplateItem::Slot(e) => Some(e),
            TemplateItem::Literal(_) => None,
        })
    }
}

impl fmt::Display for TypedTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pattern())
    }
}

/// A query with its tokens, value matches and resulting template.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedQuery {
    pub tokens: Vec<String>,
    pub matches: Vec<ValueMatch>,
    pub template: TypedTemplate,
}

impl TypedQuery {
    /// Matches that became slots (column values, not table names).
    pub fn value_matches(&self) -> impl Iterator<Item = &ValueMatch> {
        self.matches.iter().filter(|m| m.element.is_column())
    }

    /// Number of tokens covered by slots.
    pub fn slot_tokens(&self) -> usize {
        self.value_matches().map(ValueMatch::len).sum()
    }
}

/// Replaces recognized values with `[table.column]` slots. Tokens matching
/// only a table name stay literal, as does everything unmatched.
pub fn type_query(query: &str, index: &ValueIndex) -> TypedQuery {
    let tokens = tokenize(query);
    let matches = index.match_values(&tokens);
    let mut items = Vec::new();
    let mut i = 0;
    for m in matches.iter().filter(|m| m.element.is_column()) {
        items.extend(
            tokens[i..m.start]
                .iter()
                .cloned()
                .map(TemplateItem::Literal),
        );
        items.push(TemplateItem::Slot(m.element.clone()));
        i = m.end;
    }
    items.extend(tokens[i..].iter().cloned().map(TemplateItem::Literal));
    TypedQuery {
        tokens,
        matches,
        template: TypedTemplate {
            items,
            frequency: 1,
        },
    }
}
