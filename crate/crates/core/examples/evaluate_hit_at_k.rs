// Score rankings against gold labels with HIT@K for several K.

use std::error::Error;
use std::path::PathBuf;

use lexalign::cli::tfidf_backend;
use lexalign::corpus::load_corpus;
use lexalign::eval::{evaluate, load_gold, EvalConfig};
use lexalign::similarity::match_all;
use lexalign::Level;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let gdpr = load_corpus(&data("gdpr.tsv"), "en")?;
    let lgpd = load_corpus(&data("lgpd.tsv"), "pt")?;
    let level = Level::Article;
    let (ua, ub) = (gdpr.units(level), lgpd.units(level));
    let backend = tfidf_backend(&gdpr, &lgpd, level)?;
    let matches = match_all(&ua, &ub, &backend)?;
    let gold = load_gold(data("gold_article.tsv"), level, &ua, &ub)?;

    let mut previous = 0.0;
    for k in [1, 3, 5, 10] {
        let report = evaluate(backend.name(), &matches, &gold, &EvalConfig::new(k)?)?;
        assert!(report.accuracy >= previous);
        previous = report.accuracy;
        println!(
            "HIT@{k:<2} {:.4} ({}/{})",
            report.accuracy,
            report.hits(),
            report.per_source.len()
        );
    }
    let at1 = evaluate(backend.name(), &matches, &gold, &EvalConfig::new(1)?)?;
    for (source, outcome) in at1.per_source.iter().filter(|(_, o)| o.hit == 0) {
        println!(
            "miss {source}: ranked {:?} first, gold {:?}",
            outcome.top_k,
            gold.get(source).unwrap().targets
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
