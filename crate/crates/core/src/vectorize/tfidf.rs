//! TF-IDF weighting.
//!
//! `tf(t, s) = count(t, s) / |s|` is computed per sentence and
//! `idf(t) = ln(N / df(t))` over the units the model was fitted on. A unit
//! vector is the componentwise sum of its sentence vectors.

use std::collections::{BTreeMap, BTreeSet};

use super::tokenize::{tokenize, Token};
use super::{SparseVector, VectorizeError};
use crate::corpus::{Level, Unit};

#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfModel {
    doc_count: usize,
    doc_freq: BTreeMap<String, usize>,
    fitted_level: Level,
    fitted_scope: Vec<String>,
}

impl TfIdfModel {
    /// Builds a model from precomputed counts. Fails unless `doc_count >= 1`
    /// and every `df` lies in `1..=doc_count`.
    pub fn from_counts(
        level: Level,
        doc_count: usize,
        doc_freq: impl IntoIterator<Item = (String, usize)>,
    ) -> Result<Self, VectorizeError> {
        if doc_count == 0 {
            return Err(VectorizeError::EmptyCorpus);
        }
        let doc_freq: BTreeMap<String, usize> = doc_freq.into_iter().collect();
        if let Some((t, df)) = doc_freq.iter().find(|(_, &df)| df == 0 || df > doc_count) {
            return Err(VectorizeError::InvalidModel(format!(
                "df({t}) = {df} outside 1..={doc_count}"
            )));
        }
        Ok(Self {
            doc_count,
            doc_freq,
            fitted_level: level,
            fitted_scope: Vec::new(),
        })
    }

    /// Records which corpora contributed to the fit.
    pub fn with_scope(mut self, scope: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.fitted_scope = scope.into_iter().map(Into::into).collect();
        self
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn doc_freq(&self, term: &str) -> usize {
        self.doc_freq.get(term).copied().unwrap_or(0)
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = (&str, usize)> {
        self.doc_freq.iter().map(|(t, &df)| (t.as_str(), df))
    }

    pub fn fitted_level(&self) -> Level {
        self.fitted_level
    }

    pub fn fitted_scope(&self) -> &[String] {
        &self.fitted_scope
    }
}

/// Fits document frequencies over `units`, each unit counting as one
/// document. The result does not depend on the order of `units`.
pub fn fit_tfidf(units: &[Unit]) -> Result<TfIdfModel, VectorizeError> {
    let level = units.first().ok_or(VectorizeError::EmptyCorpus)?.level();
    let mut doc_freq: BTreeMap<String, usize> = BTreeMap::new();
    for unit in units {
        if unit.level() != level {
            return Err(VectorizeError::MixedLevels);
        }
        let terms: BTreeSet<String> = tokenize(unit.text())
            .into_iter()
            .map(|t| t.as_str().to_owned())
            .collect();
        for t in terms {
            *doc_freq.entry(t).or_insert(0) += 1;
        }
    }
    TfIdfModel::from_counts(level, units.len(), doc_freq)
}

pub fn tf(term: &Token, sentence_tokens: &[Token]) -> Result<f64, VectorizeError> {
    if sentence_tokens.is_empty() {
        return Err(VectorizeError::EmptySentence);
    }
    let count = sentence_tokens.iter().filter(|t| *t == term).count();
    Ok(count as f64 / sentence_tokens.len() as f64)
}

/// `ln(N / df)`; 0 for terms the model has never seen.
pub fn idf(term: &Token, model: &TfIdfModel) -> f64 {
    idf_str(term.as_str(), model)
}

fn idf_str(term: &str, model: &TfIdfModel) -> f64 {
    match model.doc_freq.get(term) {
        Some(&df) => (model.doc_count as f64 / df as f64).ln(),
        None => 0.0,
    }
}

/// Sum of the unit's per-sentence tf-idf vectors. Sentences without
/// tokens contribute nothing; a unit without any token is an error.
pub fn tfidf_vector(unit: &Unit, model: &TfIdfModel) -> Result<SparseVector, VectorizeError> {
    if unit.level() != model.fitted_level {
        return Err(VectorizeError::LevelMismatch {
            unit_id: unit.unit_id().to_string(),
            model: model.fitted_level,
            unit: unit.level(),
        });
    }
    let mut out = SparseVector::new();
    let mut any_tokens = false;
    for sentence in unit.sentences() {
        let tokens = tokenize(sentence);
        if tokens.is_empty() {
            continue;
        }
        any_tokens = true;
        let len = tokens.len() as f64;
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for t in &tokens {
            *counts.entry(t.as_str()).or_insert(0) += 1;
        }
        for (term, count) in counts {
            let w = (count as f64 / len) * idf_str(term, model);
            if w != 0.0 {
                out.add(term, w);
            }
        }
    }
    if !any_tokens {
        return Err(VectorizeError::EmptyUnit(unit.unit_id().to_string()));
    }
    Ok(out)
}
