//! Structure-aware comparison of GDPR-like data-protection laws.
//!
//! The pipeline has four stages, each in its own module:
//!
//! - [`corpus`] parses a recital-level record file into a four-level
//!   [`Corpus`] tree (chapter, section, article, recital) and exposes it as
//!   comparable [`Unit`]s at recital or article granularity.
//! - [`vectorize`] turns units into vectors with one of three kinds of backend:
//!   TF-IDF, a static word-embedding sum, or summed sentence embeddings
//!   read from embedding-store files (one store per law and encoder).
//! - [`similarity`] scores units by cosine similarity and ranks every unit
//!   of one corpus against all units of the other.
//! - [`eval`] scores rankings against gold labels with HIT@K.
//!
//! [`report`] renders match and evaluation reports, and [`cli`] wires the
//! stages together behind the `lexalign` binary.
//!
//! ```
//! use lexalign::corpus::{parse_records_str, Level};
//! use lexalign::similarity::match_all;
//! use lexalign::vectorize::{fit_tfidf, Backend};
//!
//! let a = parse_records_str(
//!     "chapter\tsection\tarticle\trecital\ttitle\ttext\n\
//!      1\t\t1\t1\tScope\tThis law protects personal data.\n\
//!      1\t\t2\t1\tFines\tFines may be imposed on controllers.\n",
//!     "a", "en",
//! ).unwrap();
//! let b = parse_records_str(
//!     "chapter\tsection\tarticle\trecital\ttitle\ttext\n\
//!      1\t\t1\t1\t\tControllers may receive fines.\n\
//!      1\t\t2\t1\t\tPersonal data is protected by this law.\n",
//!     "b", "en",
//! ).unwrap();
//!
//! let (ua, ub) = (a.units(Level::Article), b.units(Level::Article));
//! let all: Vec<_> = ua.iter().chain(&ub).cloned().collect();
//! let backend = Backend::TfIdf(fit_tfidf(&all).unwrap());
//! let ranked = match_all(&ua, &ub, &backend).unwrap();
//! assert_eq!(ranked[0].candidates[0].target_id, "a2");
//! assert_eq!(ranked[1].candidates[0].target_id, "a1");
//! ```

pub mod cli;
pub mod corpus;
pub mod eval;
pub mod report;
pub mod similarity;
pub mod vectorize;

pub use corpus::{Corpus, Level, Unit};
pub use eval::{EvalConfig, EvalReport, GoldLabelSet};
pub use similarity::{MatchCandidate, RankedMatches};
pub use vectorize::{Backend, DenseVector, SparseVector, Vector};
