//! Tokenization shared by value matching, rendering and indexing.

/// Lowercase alphanumeric tokens; every other character separates tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Tokens re-joined with single spaces, used to compare values loosely.
pub fn normalize(text: &str) -> String {
    tokenize(text).join(" ")
}
