//! Unit vectorization backends.
//!
//! Every backend represents a unit as the sum of per-sentence vectors:
//! tf-idf weights for [`tfidf`], summed word vectors for [`wordvec`], and
//! precomputed sentence embeddings for [`store`].

pub mod store;
pub mod tfidf;
pub mod tokenize;
pub mod wordvec;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use thiserror::Error;

use crate::corpus::{Level, Unit};

pub use store::{load_embedding_store, store_vector, EmbeddingStore, SentenceKey};
pub use tfidf::{fit_tfidf, idf, tf, tfidf_vector, TfIdfModel};
pub use tokenize::{tokenize, Token};
pub use wordvec::{embedding_sum_vector, load_embedding_table, EmbeddingSum, EmbeddingTable};

#[derive(Debug, Error)]
pub enum VectorizeError {
    #[error("cannot fit a model on zero units")]
    EmptyCorpus,
    #[error("units mix recital and article levels")]
    MixedLevels,
    #[error("model was fitted at {model} level but unit {unit_id} is at {unit} level")]
    LevelMismatch {
        unit_id: String,
        model: Level,
        unit: Level,
    },
    #[error("invalid tf-idf model: {0}")]
    InvalidModel(String),
    #[error("term frequency of an empty sentence")]
    EmptySentence,
    #[error("unit {0} has no tokens")]
    EmptyUnit(String),
    #[error("line {line}: expected {expected} values, found {found}")]
    DimMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("bad embedding-store header: {0}")]
    BadHeader(String),
    #[error("line {line}: bad sentence key {key:?} (expected <unit_id>#<index>)")]
    BadKey { line: usize, key: String },
    #[error("line {line}: duplicate sentence key {key}")]
    DuplicateKey { line: usize, key: String },
    #[error("embedding store has no vector for sentence {0}")]
    MissingSentence(String),
    #[error("source store ({source_name}, dim {source_dim}) and target store ({target_name}, dim {target_dim}) do not match")]
    StorePairMismatch {
        source_name: String,
        source_dim: usize,
        target_name: String,
        target_dim: usize,
    },
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Term-weight map. Zero and non-finite weights are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    weights: BTreeMap<String, f64>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `w` to `term`, dropping the entry if the sum is zero.
    pub fn add(&mut self, term: &str, w: f64) {
        assert!(w.is_finite(), "non-finite weight for {term:?}");
        let entry = self.weights.entry(term.to_string()).or_insert(0.0);
        *entry += w;
        if *entry == 0.0 {
            self.weights.remove(term);
        }
    }

    pub fn get(&self, term: &str) -> f64 {
        self.weights.get(term).copied().unwrap_or(0.0)
    }

    /// Entries in ascending term order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(t, &w)| (t.as_str(), w))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = Self::new();
        for (t, w) in self.iter() {
            out.add(t, w * factor);
        }
        out
    }
}

impl<S: AsRef<str>> FromIterator<(S, f64)> for SparseVector {
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        let mut v = Self::new();
        for (t, w) in iter {
            v.add(t.as_ref(), w);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    values: Vec<f64>,
}

impl DenseVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            values: vec![0.0; dim],
        }
    }

    /// Panics on non-finite values.
    pub fn from_values(values: Vec<f64>) -> Self {
        assert!(
            values.iter().all(|v| v.is_finite()),
            "non-finite dense value"
        );
        Self { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn add_assign(&mut self, other: &[f64]) {
        debug_assert_eq!(self.values.len(), other.len());
        for (a, b) in self.values.iter_mut().zip(other) {
            *a += b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_values(self.values.iter().map(|v| v * factor).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Vector {
    Sparse(SparseVector),
    Dense(DenseVector),
}

impl Vector {
    /// True when the vector has no direction (cosine is undefined).
    pub fn is_zero(&self) -> bool {
        match self {
            Vector::Sparse(v) => v.is_empty(),
            Vector::Dense(v) => v.is_zero(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        match self {
            Vector::Sparse(v) => Vector::Sparse(v.scale(factor)),
            Vector::Dense(v) => Vector::Dense(v.scale(factor)),
        }
    }
}

/// Which corpus a unit belongs to. Only the store backend cares: unit ids
/// are per-corpus aliases, so each corpus has its own sentence store.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

/// A prepared vectorization strategy. All variants are read-only after
/// construction and can be shared across threads.
#[derive(Debug, Clone)]
pub enum Backend {
    TfIdf(TfIdfModel),
    WordVec(EmbeddingTable),
    Store {
        source: Arc<EmbeddingStore>,
        target: Arc<EmbeddingStore>,
    },
}

impl Backend {
    /// One store serving both sides.
    pub fn store(store: EmbeddingStore) -> Self {
        let store = Arc::new(store);
        Backend::Store {
            source: Arc::clone(&store),
            target: store,
        }
    }

    /// Separate stores for the source and target corpora. Both must come
    /// from the same encoder: same backend name and dimension.
    pub fn store_pair(
        source: EmbeddingStore,
        target: EmbeddingStore,
    ) -> Result<Self, VectorizeError> {
        if source.backend_name() != target.backend_name() || source.dim() != target.dim() {
            return Err(VectorizeError::StorePairMismatch {
                source_name: source.backend_name().to_string(),
                source_dim: source.dim(),
                target_name: target.backend_name().to_string(),
                target_dim: target.dim(),
            });
        }
        Ok(Backend::Store {
            source: Arc::new(source),
            target: Arc::new(target),
        })
    }

    /// Name used in reports: `tfidf`, `wordvec`, or the store's backend name.
    pub fn name(&self) -> &str {
        match self {
            Backend::TfIdf(_) => "tfidf",
            Backend::WordVec(_) => "wordvec",
            Backend::Store { source, .. } => source.backend_name(),
        }
    }

    /// Vectorizes a source-side unit.
    pub fn vectorize(&self, unit: &Unit) -> Result<Vector, VectorizeError> {
        self.vectorize_as(unit, Side::Source)
    }

    /// Vectorizes a unit. Units with nothing to represent (no tokens, all
    /// out-of-vocabulary) come back as zero vectors, which rankings skip.
    pub fn vectorize_as(&self, unit: &Unit, side: Side) -> Result<Vector, VectorizeError> {
        match self {
            Backend::TfIdf(model) => match tfidf_vector(unit, model) {
                Ok(v) => Ok(Vector::Sparse(v)),
                Err(VectorizeError::EmptyUnit(_)) => Ok(Vector::Sparse(SparseVector::new())),
                Err(e) => Err(e),
            },
            Backend::WordVec(table) => Ok(Vector::Dense(embedding_sum_vector(unit, table).vector)),
            Backend::Store { source, target } => {
                let store = match side {
                    Side::Source => source,
                    Side::Target => target,
                };
                store_vector(unit, store).map(Vector::Dense)
            }
        }
    }
}
