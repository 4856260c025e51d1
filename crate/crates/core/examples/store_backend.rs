// Precomputed sentence embeddings: one store file per corpus, summed
// into unit vectors and ranked.

use std::error::Error;
use std::path::PathBuf;

use lexalign::corpus::load_corpus;
use lexalign::eval::{evaluate, load_gold, EvalConfig};
use lexalign::similarity::match_all;
use lexalign::vectorize::{load_embedding_store, Backend, SentenceKey};
use lexalign::Level;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a = load_corpus(&fixture("tiny_a.tsv"), "en")?;
    let b = load_corpus(&fixture("tiny_b.tsv"), "en")?;
    let store_a = load_embedding_store(fixture("tiny_a.store"))?;
    let store_b = load_embedding_store(fixture("tiny_b.store"))?;
    println!(
        "{}: {} sentences, dim {}",
        store_a.backend_name(),
        store_a.len(),
        store_a.dim()
    );
    println!(
        "a2.r1#1 = {:?}",
        store_a
            .get(&SentenceKey::new("a2.r1", 1))
            .map(|v| v.values())
    );

    // Every sentence the corpus enumerates must be in its store.
    for u in a.units(Level::Recital) {
        for key in u.sentence_keys() {
            assert!(
                store_a.get(&key.parse().unwrap()).is_some(),
                "{key} missing"
            );
        }
    }

    let backend = Backend::store_pair(store_a, store_b)?;
    let level = Level::Article;
    let (ua, ub) = (a.units(level), b.units(level));
    let matches = match_all(&ua, &ub, &backend)?;
    let gold = load_gold(fixture("tiny_gold_article.tsv"), level, &ua, &ub)?;
    let report = evaluate(backend.name(), &matches, &gold, &EvalConfig::new(1)?)?;
    println!(
        "{} {level} HIT@1 = {:.4}",
        report.backend_name, report.accuracy
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
