//! Independent reference implementations used by the integration and
//! acceptance tests. Nothing here calls into the scoring code under test:
//! the generators hand the oracles the sentence lists they were built
//! from, so the oracles do not depend on the crate's splitter either.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use lexalign::Unit;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

/// A generated unit: its id and the sentences its text was built from.
#[derive(Debug, Clone)]
pub struct GenUnit {
    pub id: String,
    pub sentences: Vec<Vec<String>>,
}

impl GenUnit {
    pub fn text(&self) -> String {
        self.sentences
            .iter()
            .zip([". ", "; ", "? ", "! "].iter().cycle())
            .map(|(words, stop)| format!("{}{}", words.join(" "), stop.trim_end()))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn unit(&self) -> Unit {
        Unit::recital(self.id.as_str(), &self.text())
    }
}

/// Random units over the vocabulary `w0 .. w{vocab-1}`: 1-3 sentences of
/// 1-6 words each.
pub fn gen_units<R: Rng>(rng: &mut R, prefix: &str, n: usize, vocab: usize) -> Vec<GenUnit> {
    (0..n)
        .map(|i| {
            let sentences = (0..rng.gen_range(1..=3))
                .map(|_| {
                    (0..rng.gen_range(1..=6))
                        .map(|_| format!("w{}", rng.gen_range(0..vocab)))
                        .collect()
                })
                .collect();
            GenUnit {
                id: format!("{prefix}{}", i + 1),
                sentences,
            }
        })
        .collect()
}

/// Like [`gen_units`] but sometimes copies an earlier unit verbatim, so
/// exact score ties are common.
pub fn gen_units_with_duplicates<R: Rng>(
    rng: &mut R,
    prefix: &str,
    n: usize,
    vocab: usize,
) -> Vec<GenUnit> {
    let mut units = gen_units(rng, prefix, n, vocab);
    for i in 1..units.len() {
        if rng.gen_bool(0.25) {
            let j = rng.gen_range(0..i);
            units[i].sentences = units[j].sentences.clone();
        }
    }
    units.shuffle(rng);
    for (i, u) in units.iter_mut().enumerate() {
        u.id = format!("{prefix}{}", i + 1);
    }
    units
}

/// Document frequency of each term over whole units.
pub fn oracle_df(units: &[&GenUnit]) -> BTreeMap<String, usize> {
    let mut df = BTreeMap::new();
    for u in units {
        let terms: BTreeSet<&String> = u.sentences.iter().flatten().collect();
        for t in terms {
            *df.entry(t.clone()).or_insert(0) += 1;
        }
    }
    df
}

/// Sum over sentences of `count/len * ln(N/df)`, zero weights dropped.
pub fn oracle_tfidf(
    u: &GenUnit,
    n_docs: usize,
    df: &BTreeMap<String, usize>,
) -> BTreeMap<String, f64> {
    let mut v: BTreeMap<String, f64> = BTreeMap::new();
    for s in &u.sentences {
        let mut counts: BTreeMap<&String, usize> = BTreeMap::new();
        for w in s {
            *counts.entry(w).or_default() += 1;
        }
        for (w, c) in counts {
            let idf = df
                .get(w)
                .map(|&d| (n_docs as f64 / d as f64).ln())
                .unwrap_or(0.0);
            let weight = (c as f64 / s.len() as f64) * idf;
            if weight != 0.0 {
                *v.entry(w.clone()).or_insert(0.0) += weight;
            }
        }
    }
    v.retain(|_, w| *w != 0.0);
    v
}

pub fn oracle_cosine(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> Option<f64> {
    let dot: f64 = a.iter().filter_map(|(t, x)| b.get(t).map(|y| x * y)).sum();
    let na = a.values().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.values().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        None
    } else {
        Some((dot / (na * nb)).clamp(-1.0, 1.0))
    }
}

/// Brute force: score every pair, then sort by score descending and
/// target id ascending. Returns `(source, [(target, score)])` per source.
pub fn oracle_rank(a: &[GenUnit], b: &[GenUnit]) -> Vec<(String, Vec<(String, f64)>)> {
    let all: Vec<&GenUnit> = a.iter().chain(b).collect();
    let df = oracle_df(&all);
    let n = all.len();
    let vb: Vec<_> = b
        .iter()
        .map(|u| (u.id.clone(), oracle_tfidf(u, n, &df)))
        .collect();
    a.iter()
        .map(|s| {
            let vs = oracle_tfidf(s, n, &df);
            let mut scored: Vec<(String, f64)> = vb
                .iter()
                .filter_map(|(id, v)| oracle_cosine(&vs, v).map(|c| (id.clone(), c)))
                .collect();
            scored.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then(x.0.cmp(&y.0)));
            (s.id.clone(), scored)
        })
        .collect()
}

pub fn dense_cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}
