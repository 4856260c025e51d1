// The TF-IDF rows of the results table: HIT@1 at recital and article
// level on the shipped GDPR/LGPD data and gold labels.

use std::error::Error;
use std::path::PathBuf;

use lexalign::cli::tfidf_backend;
use lexalign::corpus::load_corpus;
use lexalign::eval::{evaluate, load_gold, EvalConfig};
use lexalign::report::render_table;
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
    let mut reports = Vec::new();
    for (level, gold_file) in [
        (Level::Recital, "gold_recital.tsv"),
        (Level::Article, "gold_article.tsv"),
    ] {
        let (ua, ub) = (gdpr.units(level), lgpd.units(level));
        let backend = tfidf_backend(&gdpr, &lgpd, level)?;
        let matches = match_all(&ua, &ub, &backend)?;
        let gold = load_gold(data(gold_file), level, &ua, &ub)?;
        reports.push(evaluate(
            backend.name(),
            &matches,
            &gold,
            &EvalConfig::new(1)?,
        )?);
    }
    print!("{}", render_table(&reports));
    println!("published: recital 0.6, article 0.5");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
