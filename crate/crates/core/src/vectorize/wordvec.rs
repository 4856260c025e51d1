//! Static word-embedding tables in the plain `token v1 v2 ... vd` format.

use std::collections::HashMap;
use std::path::Path;

use super::tokenize::tokenize;
use super::{DenseVector, VectorizeError};
use crate::corpus::Unit;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    entries: HashMap<String, DenseVector>,
}

impl EmbeddingTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&DenseVector> {
        self.entries.get(token)
    }

    /// Parses a header-less word-vector file. The first vector fixes the
    /// dimension. A repeated token replaces the earlier vector.
    pub fn parse(input: &str) -> Result<Self, VectorizeError> {
        let mut dim = None;
        let mut entries = HashMap::new();
        for (idx, raw) in input.lines().enumerate() {
            let line = idx + 1;
            let mut fields = raw.split_whitespace();
            let Some(token) = fields.next() else { continue };
            let values = fields
                .map(|f| {
                    f.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| VectorizeError::MalformedLine {
                            line,
                            reason: format!("{f:?} is not a finite number"),
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if values.is_empty() {
                return Err(VectorizeError::MalformedLine {
                    line,
                    reason: format!("token {token:?} has no vector"),
                });
            }
            let expected = *dim.get_or_insert(values.len());
            if values.len() != expected {
                return Err(VectorizeError::DimMismatch {
                    line,
                    expected,
                    found: values.len(),
                });
            }
            let key = token.to_lowercase();
            if entries
                .insert(key, DenseVector::from_values(values))
                .is_some()
            {
                log::warn!(
                    "word-vector line {line}: duplicate token {token:?}, keeping the later vector"
                );
            }
        }
        Ok(Self {
            dim: dim.unwrap_or(0),
            entries,
        })
    }
}

pub fn load_embedding_table(path: impl AsRef<Path>) -> Result<EmbeddingTable, VectorizeError> {
    let path = path.as_ref();
    let input = std::fs::read_to_string(path).map_err(|source| VectorizeError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    EmbeddingTable::parse(&input)
}

/// Result of summing word vectors over a unit.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSum {
    pub vector: DenseVector,
    /// Tokens skipped because the table has no vector for them.
    pub oov: usize,
    /// Every token was out of vocabulary (or there were none); `vector`
    /// is then all zeros.
    pub all_oov: bool,
}

/// Sums the table vectors of every token of the unit, in token order.
pub fn embedding_sum_vector(unit: &Unit, table: &EmbeddingTable) -> EmbeddingSum {
    let mut vector = DenseVector::zeros(table.dim);
    let mut oov = 0;
    let mut hits = 0;
    for sentence in unit.sentences() {
        for token in tokenize(sentence) {
            match table.get(token.as_str()) {
                Some(v) => {
                    vector.add_assign(v.values());
                    hits += 1;
                }
                None => oov += 1,
            }
        }
    }
    EmbeddingSum {
        vector,
        oov,
        all_oov: hits == 0,
    }
}
