// Rank every GDPR article against all LGPD articles with TF-IDF cosine.

use std::error::Error;
use std::path::PathBuf;

use lexalign::cli::tfidf_backend;
use lexalign::corpus::load_corpus;
use lexalign::report::format_score;
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
    let backend = tfidf_backend(&gdpr, &lgpd, Level::Article)?;

    let (ua, ub) = (gdpr.units(Level::Article), lgpd.units(Level::Article));
    let ranked = match_all(&ua, &ub, &backend)?;
    for r in ranked.iter().take(10) {
        let top: Vec<String> = r
            .top_k(3)
            .iter()
            .map(|c| format!("{} {}", c.target_id, format_score(c.score)))
            .collect();
        println!("{:>4} -> {}", r.source_id, top.join(" | "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
