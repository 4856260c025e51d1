use std::fmt;

/// A lowercase, non-empty run of alphanumeric characters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

impl Token {
    pub fn new(surface: &str) -> Option<Self> {
        let lower = surface.to_lowercase();
        (!lower.is_empty() && lower.chars().all(char::is_alphanumeric)).then_some(Token(lower))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Splits on every non-alphanumeric character and lowercases. Digits are
/// kept; there is no stopword list and no stemming.
pub fn tokenize(text: &str) -> Vec<Token> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .map(|s| Token(s.to_lowercase()))
        .collect()
}
