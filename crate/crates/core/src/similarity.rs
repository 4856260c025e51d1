//! Cosine similarity and exhaustive cross-corpus ranking.
//!
//! Rankings sort by score descending and break exact ties by ascending
//! target id. Units whose vector is zero have no cosine with anything and
//! are listed in [`RankedMatches::skipped`] instead of being ranked.

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::Unit;
use crate::vectorize::{Backend, DenseVector, Side, SparseVector, Vector, VectorizeError};

#[derive(Debug, Error)]
pub enum SimilarityError {
    #[error("cannot compare a sparse vector with a dense one")]
    KindMismatch,
    #[error("dense vectors differ in dimension ({left} vs {right})")]
    DimMismatch { left: usize, right: usize },
    #[error("unit {unit_id}: {source}")]
    Vectorize {
        unit_id: String,
        #[source]
        source: VectorizeError,
    },
    #[error("cannot build worker pool: {0}")]
    ThreadPool(String),
}

/// `dot(a, b) / (|a| |b|)`, or `None` when either vector is zero.
pub fn cosine(a: &Vector, b: &Vector) -> Result<Option<f64>, SimilarityError> {
    match (a, b) {
        (Vector::Sparse(a), Vector::Sparse(b)) => Ok(cosine_sparse(a, b)),
        (Vector::Dense(a), Vector::Dense(b)) => cosine_dense(a, b),
        _ => Err(SimilarityError::KindMismatch),
    }
}

pub fn cosine_sparse(a: &SparseVector, b: &SparseVector) -> Option<f64> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let mut dot = 0.0;
    let mut ia = a.iter().peekable();
    let mut ib = b.iter().peekable();
    while let (Some(&(ta, wa)), Some(&(tb, wb))) = (ia.peek(), ib.peek()) {
        match ta.cmp(tb) {
            std::cmp::Ordering::Less => {
                ia.next();
            }
            std::cmp::Ordering::Greater => {
                ib.next();
            }
            std::cmp::Ordering::Equal => {
                dot += wa * wb;
                ia.next();
                ib.next();
            }
        }
    }
    let na = a.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
    let nb = b.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
    finish(dot, na, nb)
}

pub fn cosine_dense(a: &DenseVector, b: &DenseVector) -> Result<Option<f64>, SimilarityError> {
    if a.dim() != b.dim() {
        return Err(SimilarityError::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let dot: f64 = a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum();
    let na = a.values().iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.values().iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(finish(dot, na, nb))
}

fn finish(dot: f64, na: f64, nb: f64) -> Option<f64> {
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    Some((dot / (na * nb)).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchCandidate {
    pub source_id: String,
    pub target_id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedMatches {
    pub source_id: String,
    /// Score descending, target id ascending on ties.
    pub candidates: Vec<MatchCandidate>,
    /// Targets excluded because cosine is undefined for them, ascending.
    /// When the source itself has a zero vector this is every target.
    pub skipped: Vec<String>,
    pub source_has_vector: bool,
}

impl RankedMatches {
    pub fn top_k(&self, k: usize) -> &[MatchCandidate] {
        &self.candidates[..k.min(self.candidates.len())]
    }

    /// Number of adjacent candidate pairs with exactly equal scores, i.e.
    /// places where the id tie-break decided the order.
    pub fn tied_pairs(&self) -> usize {
        self.candidates
            .windows(2)
            .filter(|w| w[0].score == w[1].score)
            .count()
    }
}

/// A unit's id and vector, computed once and shared across rankings.
#[derive(Debug, Clone)]
pub struct PreparedUnit {
    pub unit_id: String,
    pub vector: Vector,
}

/// Vectorizes units in parallel. On failure the error of the first
/// failing unit in input order is returned.
pub fn prepare(
    units: &[Unit],
    backend: &Backend,
    side: Side,
) -> Result<Vec<PreparedUnit>, SimilarityError> {
    units
        .par_iter()
        .map(|u| {
            backend
                .vectorize_as(u, side)
                .map(|vector| PreparedUnit {
                    unit_id: u.unit_id().to_string(),
                    vector,
                })
                .map_err(|source| SimilarityError::Vectorize {
                    unit_id: u.unit_id().to_string(),
                    source,
                })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Ranks every target against one prepared source.
pub fn rank_prepared(
    source: &PreparedUnit,
    targets: &[PreparedUnit],
) -> Result<RankedMatches, SimilarityError> {
    let mut candidates = Vec::with_capacity(targets.len());
    let mut skipped = Vec::new();
    for t in targets {
        match cosine(&source.vector, &t.vector)? {
            Some(score) => candidates.push(MatchCandidate {
                source_id: source.unit_id.clone(),
                target_id: t.unit_id.clone(),
                score,
            }),
            None => skipped.push(t.unit_id.clone()),
        }
    }
    candidates.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.target_id.cmp(&b.target_id))
    });
    skipped.sort();
    Ok(RankedMatches {
        source_id: source.unit_id.clone(),
        candidates,
        skipped,
        source_has_vector: !source.vector.is_zero(),
    })
}

pub fn rank(
    source: &Unit,
    targets: &[Unit],
    backend: &Backend,
) -> Result<RankedMatches, SimilarityError> {
    let source = prepare(std::slice::from_ref(source), backend, Side::Source)?.remove(0);
    rank_prepared(&source, &prepare(targets, backend, Side::Target)?)
}

/// One ranking per unit of `a`, in `a`'s order, using the default pool.
pub fn match_all(
    a: &[Unit],
    b: &[Unit],
    backend: &Backend,
) -> Result<Vec<RankedMatches>, SimilarityError> {
    let sources = prepare(a, backend, Side::Source)?;
    let targets = prepare(b, backend, Side::Target)?;
    sources
        .par_iter()
        .map(|s| rank_prepared(s, &targets))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// [`match_all`] on a dedicated pool of `threads` workers (0 = default pool).
pub fn match_all_with_threads(
    a: &[Unit],
    b: &[Unit],
    backend: &Backend,
    threads: usize,
) -> Result<Vec<RankedMatches>, SimilarityError> {
    if threads == 0 {
        return match_all(a, b, backend);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SimilarityError::ThreadPool(e.to_string()))?;
    pool.install(|| match_all(a, b, backend))
}
