//! Canonical four-level corpus model.
//!
//! A law is a tree of chapters, sections, articles and recitals. Here a
//! "recital" is any numbered item under an article (a paragraph or
//! point), which is the smallest span that carries legal meaning on its
//! own. Chapters without sections get a synthetic section numbered 0.
//!
//! Every node has a hierarchical id (`c3.s1.a7.r2`); articles and recitals
//! also have a flat alias (`a7`, `a7.r2`) that is unique per corpus and is
//! used as the unit id everywhere downstream.

mod records;
mod sentences;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use records::{read_records, write_records, RecordRow, HEADER};
pub use sentences::{normalize_whitespace, split_sentences, ABBREVIATIONS};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("missing or malformed header line; expected `{}`", HEADER.join("\\t"))]
    MissingHeader,
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("{}: recital {id} has blank text", at(*.line))]
    EmptyText { id: String, line: Option<usize> },
    #[error("{}: duplicate recital {id}", at(*.line))]
    DuplicateRecitalId { id: String, line: Option<usize> },
    #[error("{}: article {alias} appears under both {first} and {second}", at(*.line))]
    DuplicateArticle {
        alias: String,
        first: String,
        second: String,
        line: Option<usize>,
    },
    #[error("corpus has no recitals")]
    EmptyCorpus,
    #[error("invalid corpus: {0}")]
    Invalid(String),
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("canonical corpus: {0}")]
    Json(#[from] serde_json::Error),
}

fn at(line: Option<usize>) -> String {
    match line {
        Some(l) => format!("line {l}"),
        None => "input".to_string(),
    }
}

/// Comparison granularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Recital,
    Article,
}

impl Level {
    pub const ALL: [Level; 2] = [Level::Recital, Level::Article];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Recital => "recital",
            Level::Article => "article",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "recital" => Ok(Level::Recital),
            "article" => Ok(Level::Article),
            other => Err(format!(
                "unknown level {other:?} (expected recital or article)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    law_id: String,
    language: String,
    chapters: Vec<Chapter>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chapter {
    pub id: String,
    pub number: u32,
    pub title: String,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub id: String,
    /// 0 for the synthetic section of a chapter that has none.
    pub number: u32,
    pub title: String,
    pub articles: Vec<Article>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub id: String,
    pub alias: String,
    pub number: u32,
    pub title: String,
    pub recitals: Vec<Recital>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recital {
    pub id: String,
    pub alias: String,
    pub number: u32,
    pub title: String,
    pub text: String,
}

/// A recital's contribution to a unit: which recital, and how many of the
/// unit's sentences came from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub recital_id: String,
    pub sentence_count: usize,
}

/// A comparable span of text: one recital, or one article as the
/// concatenation of its recitals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    unit_id: String,
    level: Level,
    text: String,
    sentences: Vec<String>,
    segments: Vec<Segment>,
}

impl Unit {
    /// A recital-level unit; `text` is whitespace-normalized and split.
    pub fn recital(unit_id: impl Into<String>, text: &str) -> Self {
        let unit_id = unit_id.into();
        let sentences = split_sentences(text);
        Self {
            segments: vec![Segment {
                recital_id: unit_id.clone(),
                sentence_count: sentences.len(),
            }],
            unit_id,
            level: Level::Recital,
            text: normalize_whitespace(text),
            sentences,
        }
    }

    /// An article-level unit over recital units, in the given order.
    ///
    /// Sentences are the concatenation of each recital's sentences, so a
    /// recital that lacks a final terminator never merges with the next.
    pub fn article<'a>(
        unit_id: impl Into<String>,
        recitals: impl IntoIterator<Item = &'a Unit>,
    ) -> Self {
        let mut texts = Vec::new();
        let mut sentences = Vec::new();
        let mut segments = Vec::new();
        for r in recitals {
            texts.push(r.text.as_str());
            sentences.extend(r.sentences.iter().cloned());
            segments.extend(r.segments.iter().cloned());
        }
        Self {
            unit_id: unit_id.into(),
            level: Level::Article,
            text: texts.join(" "),
            sentences,
            segments,
        }
    }

    pub fn unit_id(&self) -> &str {
        &self.unit_id
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn sentences(&self) -> &[String] {
        &self.sentences
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Embedding-store keys (`recital_id#index`) of every sentence, in order.
    pub fn sentence_keys(&self) -> impl Iterator<Item = String> + '_ {
        self.segments
            .iter()
            .flat_map(|s| (0..s.sentence_count).map(move |i| format!("{}#{}", s.recital_id, i)))
    }
}

type RowKey = (u32, u32, u32, u32);

/// Builds a corpus from recital rows.
///
/// Order comes from the numeric indices, never from row order, so any
/// permutation of the same rows yields the same corpus.
pub fn parse_tabular(
    law_id: &str,
    language: &str,
    rows: &[RecordRow],
) -> Result<Corpus, CorpusError> {
    if rows.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut sorted: BTreeMap<RowKey, &RecordRow> = BTreeMap::new();
    let mut article_home: BTreeMap<u32, (u32, u32)> = BTreeMap::new();

    for row in rows {
        let sec = row.section.unwrap_or(0);
        let id = recital_id(row.chapter, sec, row.article, row.recital);
        if normalize_whitespace(&row.text).is_empty() {
            return Err(CorpusError::EmptyText { id, line: row.line });
        }
        let home = *article_home
            .entry(row.article)
            .or_insert((row.chapter, sec));
        if home != (row.chapter, sec) {
            return Err(CorpusError::DuplicateArticle {
                alias: format!("a{}", row.article),
                first: section_id(home.0, home.1),
                second: section_id(row.chapter, sec),
                line: row.line,
            });
        }
        if sorted
            .insert((row.chapter, sec, row.article, row.recital), row)
            .is_some()
        {
            return Err(CorpusError::DuplicateRecitalId { id, line: row.line });
        }
    }

    let mut chapters: Vec<Chapter> = Vec::new();
    for (&(c, s, a, r), row) in &sorted {
        if chapters.last().map(|ch| ch.number) != Some(c) {
            chapters.push(Chapter {
                id: format!("c{c}"),
                number: c,
                title: String::new(),
                sections: Vec::new(),
            });
        }
        let chapter = chapters.last_mut().expect("pushed above");
        if chapter.sections.last().map(|x| x.number) != Some(s) {
            chapter.sections.push(Section {
                id: section_id(c, s),
                number: s,
                title: String::new(),
                articles: Vec::new(),
            });
        }
        let section = chapter.sections.last_mut().expect("pushed above");
        if section.articles.last().map(|x| x.number) != Some(a) {
            section.articles.push(Article {
                id: format!("{}.a{a}", section.id),
                alias: format!("a{a}"),
                number: a,
                title: String::new(),
                recitals: Vec::new(),
            });
        }
        let article = section.articles.last_mut().expect("pushed above");
        let title = normalize_whitespace(&row.title);
        if article.title.is_empty() {
            article.title = title;
        }
        article.recitals.push(Recital {
            id: recital_id(c, s, a, r),
            alias: format!("a{a}.r{r}"),
            number: r,
            title: String::new(),
            text: normalize_whitespace(&row.text),
        });
    }

    let corpus = Corpus {
        law_id: law_id.to_string(),
        language: language.to_string(),
        chapters,
    };
    debug_assert!(corpus.validate().is_ok());
    Ok(corpus)
}

/// Parses a record file held in memory.
pub fn parse_records_str(input: &str, law_id: &str, language: &str) -> Result<Corpus, CorpusError> {
    parse_tabular(law_id, language, &read_records(input)?)
}

/// Loads a corpus from either a record file or a canonical JSON document.
/// Record files take their law id from the file stem.
pub fn load_corpus(path: &Path, language: &str) -> Result<Corpus, CorpusError> {
    let input = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if input.trim_start().starts_with('{') {
        return Corpus::from_canonical_json(&input);
    }
    let law_id = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("corpus");
    parse_records_str(&input, law_id, language)
}

fn section_id(c: u32, s: u32) -> String {
    format!("c{c}.s{s}")
}

fn recital_id(c: u32, s: u32, a: u32, r: u32) -> String {
    format!("c{c}.s{s}.a{a}.r{r}")
}

impl Corpus {
    pub fn law_id(&self) -> &str {
        &self.law_id
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn chapters(&self) -> &[Chapter] {
        &self.chapters
    }

    pub fn articles(&self) -> impl Iterator<Item = &Article> {
        self.chapters
            .iter()
            .flat_map(|c| &c.sections)
            .flat_map(|s| &s.articles)
    }

    pub fn recitals(&self) -> impl Iterator<Item = &Recital> {
        self.articles().flat_map(|a| &a.recitals)
    }

    pub fn article_count(&self) -> usize {
        self.articles().count()
    }

    pub fn recital_count(&self) -> usize {
        self.recitals().count()
    }

    /// Units in document order.
    pub fn units(&self, level: Level) -> Vec<Unit> {
        match level {
            Level::Recital => self
                .recitals()
                .map(|r| Unit::recital(&r.alias, &r.text))
                .collect(),
            Level::Article => self
                .articles()
                .map(|a| {
                    let parts: Vec<Unit> = a
                        .recitals
                        .iter()
                        .map(|r| Unit::recital(&r.alias, &r.text))
                        .collect();
                    Unit::article(&a.alias, &parts)
                })
                .collect(),
        }
    }

    /// Flattens the tree back into record rows, in document order.
    pub fn to_records(&self) -> Vec<RecordRow> {
        let mut rows = Vec::new();
        for c in &self.chapters {
            for s in &c.sections {
                for a in &s.articles {
                    for r in &a.recitals {
                        rows.push(RecordRow {
                            chapter: c.number,
                            section: (s.number != 0).then_some(s.number),
                            article: a.number,
                            recital: r.number,
                            title: a.title.clone(),
                            text: r.text.clone(),
                            line: None,
                        });
                    }
                }
            }
        }
        rows
    }

    /// Pretty JSON with fixed field order and a trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("corpus serializes");
        s.push('\n');
        s
    }

    pub fn from_canonical_json(input: &str) -> Result<Self, CorpusError> {
        let corpus: Corpus = serde_json::from_str(input)?;
        corpus.validate()?;
        Ok(corpus)
    }

    /// Checks the structural invariants of the tree.
    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |msg: String| Err(CorpusError::Invalid(msg));
        let mut ids = HashSet::new();
        let mut aliases = HashSet::new();
        let mut recitals = 0usize;

        for (ci, c) in self.chapters.iter().enumerate() {
            if ci > 0 && self.chapters[ci - 1].number >= c.number {
                return bad(format!("chapter {} out of order", c.id));
            }
            if c.sections.is_empty() {
                return bad(format!("chapter {} has no sections", c.id));
            }
            for (si, s) in c.sections.iter().enumerate() {
                if si > 0 && c.sections[si - 1].number >= s.number {
                    return bad(format!("section {} out of order", s.id));
                }
                if !is_child_id(&c.id, &s.id) {
                    return bad(format!("section {} is not under {}", s.id, c.id));
                }
                if s.articles.is_empty() {
                    return bad(format!("section {} has no articles", s.id));
                }
                for (ai, a) in s.articles.iter().enumerate() {
                    if ai > 0 && s.articles[ai - 1].number >= a.number {
                        return bad(format!("article {} out of order", a.id));
                    }
                    if !is_child_id(&s.id, &a.id) {
                        return bad(format!("article {} is not under {}", a.id, s.id));
                    }
                    if a.recitals.is_empty() {
                        return bad(format!("article {} has no recitals", a.id));
                    }
                    for (ri, r) in a.recitals.iter().enumerate() {
                        if ri > 0 && a.recitals[ri - 1].number >= r.number {
                            return bad(format!("recital {} out of order", r.id));
                        }
                        if !is_child_id(&a.id, &r.id) {
                            return bad(format!("recital {} is not under {}", r.id, a.id));
                        }
                        if normalize_whitespace(&r.text).is_empty() {
                            return bad(format!("recital {} has blank text", r.id));
                        }
                        if !aliases.insert(r.alias.as_str()) {
                            return bad(format!("duplicate alias {}", r.alias));
                        }
                        recitals += 1;
                    }
                    if !aliases.insert(a.alias.as_str()) {
                        return bad(format!("duplicate alias {}", a.alias));
                    }
                    for id in std::iter::once(&a.id).chain(a.recitals.iter().map(|r| &r.id)) {
                        if !ids.insert(id.as_str()) {
                            return bad(format!("duplicate id {id}"));
                        }
                    }
                }
                if !ids.insert(s.id.as_str()) {
                    return bad(format!("duplicate id {}", s.id));
                }
            }
            if !ids.insert(c.id.as_str()) {
                return bad(format!("duplicate id {}", c.id));
            }
        }
        if recitals == 0 {
            return Err(CorpusError::EmptyCorpus);
        }
        Ok(())
    }
}

fn is_child_id(parent: &str, child: &str) -> bool {
    child
        .strip_prefix(parent)
        .is_some_and(|rest| rest.starts_with('.') && rest.len() > 1)
}
