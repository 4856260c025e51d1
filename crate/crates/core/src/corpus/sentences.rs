//! Rule-based sentence splitting.
//!
//! A boundary is a terminator (`.`, `;`, `?`, `!`) followed by whitespace,
//! unless the word ending in `.` is one of [`ABBREVIATIONS`]. The
//! terminator stays with the sentence it closes.

/// Words that end in a period without closing a sentence. Compared
/// case-insensitively against the whole whitespace-delimited word.
pub const ABBREVIATIONS: &[&str] = &["art.", "no.", "e.g.", "i.e.", "par."];

const TERMINATORS: &[char] = &['.', ';', '?', '!'];

/// Collapses every whitespace run to one space and trims both ends.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Splits `text` into sentences.
///
/// Total and deterministic: whitespace-only input yields an empty list, a
/// text with no boundary yields itself (normalized) as the only sentence,
/// and no returned sentence is empty. Joining the output with single
/// spaces reproduces the whitespace-normalized input.
pub fn split_sentences(text: &str) -> Vec<String> {
    let text = normalize_whitespace(text);
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();

    while let Some((i, c)) = chars.next() {
        if !TERMINATORS.contains(&c) {
            continue;
        }
        // Normalized text only ever has a single ' ' between words.
        if !matches!(chars.peek(), Some((_, ' '))) {
            continue;
        }
        let end = i + c.len_utf8();
        if c == '.' && is_abbreviation(&text[start..end]) {
            continue;
        }
        sentences.push(text[start..end].to_string());
        start = end + 1;
    }
    if start < text.len() {
        sentences.push(text[start..].to_string());
    }
    sentences
}

fn is_abbreviation(head: &str) -> bool {
    let word = head.rsplit(' ').next().unwrap_or(head);
    let word = word.trim_start_matches(['(', '[', '"', '\'']);
    ABBREVIATIONS.iter().any(|a| word.eq_ignore_ascii_case(a))
}
