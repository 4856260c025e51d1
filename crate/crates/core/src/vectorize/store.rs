//! Precomputed sentence embeddings.
//!
//! File format (UTF-8):
//!
//! ```text
//! #dim=<d> backend=<name>
//! <unit_id>#<sentence_index><TAB><v1> <v2> ... <vd>
//! ```
//!
//! One line per recital sentence. Article vectors are not stored; they
//! are the sum of their recitals' sentence vectors.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::{DenseVector, VectorizeError};
use crate::corpus::Unit;

/// `<unit_id>#<index>`, e.g. `a7.r2#0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SentenceKey {
    pub unit_id: String,
    pub index: usize,
}

impl SentenceKey {
    pub fn new(unit_id: impl Into<String>, index: usize) -> Self {
        Self {
            unit_id: unit_id.into(),
            index,
        }
    }
}

impl fmt::Display for SentenceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.unit_id, self.index)
    }
}

impl FromStr for SentenceKey {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let (unit_id, index) = s.rsplit_once('#').ok_or(())?;
        let unit_id_ok =
            !unit_id.is_empty() && !unit_id.contains('#') && !unit_id.contains(char::is_whitespace);
        let index_ok = !index.is_empty()
            && index.bytes().all(|b| b.is_ascii_digit())
            && (index == "0" || !index.starts_with('0'));
        if !unit_id_ok || !index_ok {
            return Err(());
        }
        Ok(Self::new(unit_id, index.parse().map_err(|_| ())?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    backend_name: String,
    dim: usize,
    order: Vec<SentenceKey>,
    entries: HashMap<SentenceKey, DenseVector>,
}

impl EmbeddingStore {
    pub fn new(backend_name: impl Into<String>, dim: usize) -> Self {
        Self {
            backend_name: backend_name.into(),
            dim,
            order: Vec::new(),
            entries: HashMap::new(),
        }
    }

    pub fn backend_name(&self) -> &str {
        &self.backend_name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn get(&self, key: &SentenceKey) -> Option<&DenseVector> {
        self.entries.get(key)
    }

    /// Keys in file order.
    pub fn keys(&self) -> impl Iterator<Item = &SentenceKey> {
        self.order.iter()
    }

    /// Appends an entry; fails on a wrong-length vector or a repeated key.
    pub fn insert(&mut self, key: SentenceKey, values: Vec<f64>) -> Result<(), VectorizeError> {
        self.insert_at(0, key, values)
    }

    fn insert_at(
        &mut self,
        line: usize,
        key: SentenceKey,
        values: Vec<f64>,
    ) -> Result<(), VectorizeError> {
        if values.len() != self.dim {
            return Err(VectorizeError::DimMismatch {
                line,
                expected: self.dim,
                found: values.len(),
            });
        }
        if self.entries.contains_key(&key) {
            return Err(VectorizeError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
        self.order.push(key.clone());
        self.entries.insert(key, DenseVector::from_values(values));
        Ok(())
    }

    pub fn parse(input: &str) -> Result<Self, VectorizeError> {
        let mut lines = input
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| VectorizeError::BadHeader("empty file".into()))?;
        let mut store = parse_header(header)?;

        for (idx, raw) in lines {
            let line = idx + 1;
            let raw = raw.trim_end_matches('\r');
            let (key, values) =
                raw.split_once('\t')
                    .ok_or_else(|| VectorizeError::MalformedLine {
                        line,
                        reason: "expected <key><TAB><values>".into(),
                    })?;
            let key: SentenceKey = key.parse().map_err(|_| VectorizeError::BadKey {
                line,
                key: key.to_string(),
            })?;
            let values = values
                .split_whitespace()
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
            store.insert_at(line, key, values)?;
        }
        Ok(store)
    }

    /// Serializes in file order. Values use the shortest decimal form that
    /// reads back to the same `f64`.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("#dim={} backend={}\n", self.dim, self.backend_name);
        for key in &self.order {
            let values: Vec<String> = self.entries[key]
                .values()
                .iter()
                .map(|v| v.to_string())
                .collect();
            out.push_str(&format!("{key}\t{}\n", values.join(" ")));
        }
        out
    }
}

fn parse_header(header: &str) -> Result<EmbeddingStore, VectorizeError> {
    let bad = |why: &str| VectorizeError::BadHeader(format!("{why} in {header:?}"));
    let body = header
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| bad("missing leading '#'"))?;
    let mut dim = None;
    let mut backend = None;
    for field in body.split_whitespace() {
        match field.split_once('=') {
            Some(("dim", d)) => dim = Some(d.parse::<usize>().map_err(|_| bad("bad dim"))?),
            Some(("backend", b)) if !b.is_empty() => backend = Some(b.to_string()),
            _ => return Err(bad(&format!("unexpected field {field:?}"))),
        }
    }
    match (dim, backend) {
        (Some(0), _) => Err(bad("dim must be positive")),
        (Some(d), Some(b)) => Ok(EmbeddingStore::new(b, d)),
        _ => Err(bad("dim and backend are required")),
    }
}

pub fn load_embedding_store(path: impl AsRef<Path>) -> Result<EmbeddingStore, VectorizeError> {
    let path = path.as_ref();
    let input = std::fs::read_to_string(path).map_err(|source| VectorizeError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    EmbeddingStore::parse(&input)
}

/// Componentwise sum of the stored vectors of every sentence in the unit.
/// Article units sum over all sentences of all their recitals.
pub fn store_vector(unit: &Unit, store: &EmbeddingStore) -> Result<DenseVector, VectorizeError> {
    let mut out = DenseVector::zeros(store.dim);
    for seg in unit.segments() {
        for i in 0..seg.sentence_count {
            let key = SentenceKey::new(seg.recital_id.as_str(), i);
            let v = store
                .get(&key)
                .ok_or_else(|| VectorizeError::MissingSentence(key.to_string()))?;
            out.add_assign(v.values());
        }
    }
    Ok(out)
}
