//! The tab-separated recital record file.
//!
//! ```text
//! chapter<TAB>section<TAB>article<TAB>recital<TAB>title<TAB>text
//! 1<TAB><TAB>4<TAB>1<TAB>Definitions<TAB>Personal data means ...
//! ```
//!
//! The header line is required. `section` may be empty. `\t`, `\n` and
//! `\\` escapes inside `title` and `text` are decoded.

use super::CorpusError;

pub const HEADER: [&str; 6] = ["chapter", "section", "article", "recital", "title", "text"];

/// One recital as it appears in a record file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordRow {
    pub chapter: u32,
    pub section: Option<u32>,
    pub article: u32,
    pub recital: u32,
    pub title: String,
    pub text: String,
    /// 1-based source line, when the row came from a file.
    pub line: Option<usize>,
}

impl RecordRow {
    pub fn new(
        chapter: u32,
        section: Option<u32>,
        article: u32,
        recital: u32,
        text: impl Into<String>,
    ) -> Self {
        Self {
            chapter,
            section,
            article,
            recital,
            title: String::new(),
            text: text.into(),
            line: None,
        }
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = title.into();
        self
    }
}

pub fn read_records(input: &str) -> Result<Vec<RecordRow>, CorpusError> {
    let mut lines = input.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((_, l)) => break l,
            None => return Err(CorpusError::MissingHeader),
        }
    };
    let fields: Vec<&str> = header.trim_end_matches('\r').split('\t').collect();
    if fields != HEADER {
        return Err(CorpusError::MissingHeader);
    }

    let mut rows = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        if cols.len() != HEADER.len() {
            return Err(CorpusError::Malformed {
                line,
                reason: format!(
                    "expected {} tab-separated fields, found {}",
                    HEADER.len(),
                    cols.len()
                ),
            });
        }
        let section = match cols[1].trim() {
            "" => None,
            s => Some(parse_index(s, "section", line)?),
        };
        rows.push(RecordRow {
            chapter: parse_index(cols[0], "chapter", line)?,
            section,
            article: parse_index(cols[2], "article", line)?,
            recital: parse_index(cols[3], "recital", line)?,
            title: unescape(cols[4]),
            text: unescape(cols[5]),
            line: Some(line),
        });
    }
    Ok(rows)
}

pub fn write_records(rows: &[RecordRow]) -> String {
    let mut out = HEADER.join("\t");
    out.push('\n');
    for r in rows {
        let section = r.section.map(|s| s.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            r.chapter,
            section,
            r.article,
            r.recital,
            escape(&r.title),
            escape(&r.text)
        ));
    }
    out
}

fn parse_index(field: &str, name: &str, line: usize) -> Result<u32, CorpusError> {
    let field = field.trim();
    if field.is_empty() {
        return Err(CorpusError::Malformed {
            line,
            reason: format!("missing {name} designation"),
        });
    }
    field.parse().map_err(|_| CorpusError::Malformed {
        line,
        reason: format!("{name} index {field:?} is not a non-negative integer"),
    })
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\")
        .replace('\t', "\\t")
        .replace('\n', "\\n")
}
