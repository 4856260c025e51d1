//! Gold labels and HIT@K.
//!
//! A source scores a hit when any of its top `k` ranked targets is in its
//! gold set. Accuracy is the mean hit over the labeled sources only, so
//! unlabeled units of the source corpus never enter the denominator.
//!
//! Gold-label file: one labeled source per line,
//! `source_id<TAB>target_1,target_2,...[<TAB>note]`; blank lines and lines
//! starting with `#` are ignored.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{Level, Unit};
use crate::similarity::RankedMatches;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("gold-label file has no entries")]
    EmptyGold,
    #[error("line {line}: source id {id} is not a {level} of the source corpus")]
    UnknownSourceId {
        id: String,
        line: usize,
        level: Level,
    },
    #[error("line {line}: target id {id} is not a {level} of the target corpus")]
    UnknownTargetId {
        id: String,
        line: usize,
        level: Level,
    },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: source {id} is labeled twice")]
    DuplicateSource { id: String, line: usize },
    #[error("source {0} has no gold label")]
    UnlabeledSource(String),
    #[error("labeled source {0} has no ranking")]
    MissingRanking(String),
    #[error("k must be at least 1")]
    InvalidK,
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldEntry {
    pub targets: BTreeSet<String>,
    pub note: Option<String>,
}

/// Accepted target ids per labeled source, at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldLabelSet {
    level: Level,
    entries: BTreeMap<String, GoldEntry>,
}

impl GoldLabelSet {
    pub fn new(level: Level) -> Self {
        Self {
            level,
            entries: BTreeMap::new(),
        }
    }

    /// Adds a labeled source. The target set must be non-empty and the
    /// source not yet labeled.
    pub fn insert<I, S>(
        &mut self,
        source: &str,
        targets: I,
        note: Option<String>,
    ) -> Result<(), EvalError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.insert_at(
            0,
            source,
            targets.into_iter().map(Into::into).collect(),
            note,
        )
    }

    fn insert_at(
        &mut self,
        line: usize,
        source: &str,
        targets: BTreeSet<String>,
        note: Option<String>,
    ) -> Result<(), EvalError> {
        if targets.is_empty() {
            return Err(EvalError::Malformed {
                line,
                reason: format!("source {source} has no targets"),
            });
        }
        if self.entries.contains_key(source) {
            return Err(EvalError::DuplicateSource {
                id: source.to_string(),
                line,
            });
        }
        self.entries
            .insert(source.to_string(), GoldEntry { targets, note });
        Ok(())
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, source: &str) -> Option<&GoldEntry> {
        self.entries.get(source)
    }

    pub fn sources(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Parses a gold file, resolving every id against the given units.
    pub fn parse(
        input: &str,
        level: Level,
        units_a: &[Unit],
        units_b: &[Unit],
    ) -> Result<Self, EvalError> {
        let known_a: HashSet<&str> = units_a.iter().map(Unit::unit_id).collect();
        let known_b: HashSet<&str> = units_b.iter().map(Unit::unit_id).collect();
        let mut gold = Self::new(level);

        for (idx, raw) in input.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            if !(2..=3).contains(&fields.len()) {
                return Err(EvalError::Malformed {
                    line,
                    reason: format!(
                        "expected 2 or 3 tab-separated fields, found {}",
                        fields.len()
                    ),
                });
            }
            let source = fields[0].trim();
            if !known_a.contains(source) {
                return Err(EvalError::UnknownSourceId {
                    id: source.to_string(),
                    line,
                    level,
                });
            }
            let mut targets = BTreeSet::new();
            for t in fields[1]
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
            {
                if !known_b.contains(t) {
                    return Err(EvalError::UnknownTargetId {
                        id: t.to_string(),
                        line,
                        level,
                    });
                }
                targets.insert(t.to_string());
            }
            let note = fields
                .get(2)
                .map(|n| n.trim().to_string())
                .filter(|n| !n.is_empty());
            gold.insert_at(line, source, targets, note)?;
        }
        if gold.is_empty() {
            return Err(EvalError::EmptyGold);
        }
        Ok(gold)
    }
}

pub fn load_gold(
    path: impl AsRef<Path>,
    level: Level,
    units_a: &[Unit],
    units_b: &[Unit],
) -> Result<GoldLabelSet, EvalError> {
    let path = path.as_ref();
    let input = std::fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    GoldLabelSet::parse(&input, level, units_a, units_b)
}

/// Guesses the level of a gold file from its first source id: recital
/// aliases contain `.r`, article aliases do not.
pub fn detect_gold_level(input: &str) -> Option<Level> {
    let first = input
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))?;
    let source = first.split('\t').next()?.trim();
    Some(if source.contains(".r") {
        Level::Recital
    } else {
        Level::Article
    })
}

pub fn is_match(source_id: &str, target_id: &str, gold: &GoldLabelSet) -> Result<u8, EvalError> {
    let entry = gold
        .get(source_id)
        .ok_or_else(|| EvalError::UnlabeledSource(source_id.to_string()))?;
    Ok(u8::from(entry.targets.contains(target_id)))
}

/// 1 iff any of the top `min(k, |candidates|)` targets is a gold match.
/// A ranking with no candidates scores 0.
pub fn hit_at_k(ranked: &RankedMatches, gold: &GoldLabelSet, k: usize) -> Result<u8, EvalError> {
    let entry = gold
        .get(&ranked.source_id)
        .ok_or_else(|| EvalError::UnlabeledSource(ranked.source_id.clone()))?;
    Ok(u8::from(
        ranked
            .top_k(k)
            .iter()
            .any(|c| entry.targets.contains(&c.target_id)),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    k: usize,
}

impl EvalConfig {
    pub fn new(k: usize) -> Result<Self, EvalError> {
        if k == 0 {
            return Err(EvalError::InvalidK);
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Why a labeled source could not score normally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeFlag {
    /// The source unit has a zero vector, so nothing was ranked.
    SourceWithoutVector,
    /// Every gold target was skipped as a zero vector.
    GoldTargetsSkipped,
}

impl OutcomeFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeFlag::SourceWithoutVector => "source_without_vector",
            OutcomeFlag::GoldTargetsSkipped => "gold_targets_skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceOutcome {
    pub hit: u8,
    pub top_k: Vec<String>,
    pub flag: Option<OutcomeFlag>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub backend_name: String,
    pub level: Level,
    pub k: usize,
    pub per_source: BTreeMap<String, SourceOutcome>,
    pub accuracy: f64,
}

impl EvalReport {
    pub fn hits(&self) -> usize {
        self.per_source.values().map(|o| o.hit as usize).sum()
    }

    pub fn flagged(&self) -> impl Iterator<Item = (&str, OutcomeFlag)> {
        self.per_source
            .iter()
            .filter_map(|(s, o)| o.flag.map(|f| (s.as_str(), f)))
    }
}

/// Scores every labeled source; rankings of unlabeled sources are ignored.
pub fn evaluate(
    backend_name: &str,
    matches: &[RankedMatches],
    gold: &GoldLabelSet,
    config: &EvalConfig,
) -> Result<EvalReport, EvalError> {
    if gold.is_empty() {
        return Err(EvalError::EmptyGold);
    }
    let by_source: HashMap<&str, &RankedMatches> =
        matches.iter().map(|m| (m.source_id.as_str(), m)).collect();
    let mut per_source = BTreeMap::new();

    for (source, entry) in &gold.entries {
        let ranked = by_source
            .get(source.as_str())
            .ok_or_else(|| EvalError::MissingRanking(source.clone()))?;
        let hit = hit_at_k(ranked, gold, config.k)?;
        let flag = if !ranked.source_has_vector {
            Some(OutcomeFlag::SourceWithoutVector)
        } else if entry
            .targets
            .iter()
            .all(|t| ranked.skipped.binary_search(t).is_ok())
        {
            Some(OutcomeFlag::GoldTargetsSkipped)
        } else {
            None
        };
        let top_k = ranked
            .top_k(config.k)
            .iter()
            .map(|c| c.target_id.clone())
            .collect();
        per_source.insert(source.clone(), SourceOutcome { hit, top_k, flag });
    }

    let hits: usize = per_source
        .values()
        .map(|o: &SourceOutcome| o.hit as usize)
        .sum();
    Ok(EvalReport {
        backend_name: backend_name.to_string(),
        level: gold.level,
        k: config.k,
        accuracy: hits as f64 / per_source.len() as f64,
        per_source,
    })
}
