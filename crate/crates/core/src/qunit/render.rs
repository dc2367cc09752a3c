use std::fmt::Write as _;

use super::QunitInstance;
use crate::text::tokenize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rendered {
    /// Header line followed by one indented line per group tuple.
    pub display: String,
    /// Tokens of the anchor value, the label and every projected value.
    pub index_tokens: Vec<String>,
}

fn escape(value: &str) -> String {
    value.replace('\\', "\\\\").replace('|', "\\|")
}

pub fn render(instance: &QunitInstance) -> Rendered {
    let mut display = format!(
        "{} {}={}",
        instance.label,
        instance.anchor.table,
        escape(&instance.anchor_value)
    );
    let mut index_tokens = tokenize(&instance.anchor_value);
    index_tokens.extend(tokenize(&instance.label));
    for g in &instance.groups {
        for t in &g.tuples {
            let cells: Vec<String> = t.iter().map(|v| escape(&v.to_string())).collect();
            let _ = write!(display, "\n  {}: {}", g.name, cells.join(" | "));
            for v in t {
                index_tokens.extend(tokenize(&v.to_string()));
            }
        }
    }
    Rendered {
        display,
        index_tokens,
    }
}
