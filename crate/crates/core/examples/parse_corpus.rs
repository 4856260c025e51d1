// Parse a recital record file and walk the chapter/section/article/recital tree.

use std::error::Error;
use std::path::PathBuf;

use lexalign::corpus::load_corpus;
use lexalign::Level;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let corpus = load_corpus(&data("lgpd.tsv"), "pt")?;
    println!(
        "{}: {} chapters, {} articles, {} recitals",
        corpus.law_id(),
        corpus.chapters().len(),
        corpus.article_count(),
        corpus.recital_count()
    );
    for chapter in corpus.chapters().iter().take(2) {
        for section in &chapter.sections {
            println!("{}", section.id);
            for article in section.articles.iter().take(2) {
                println!("  {} ({}) {}", article.id, article.alias, article.title);
            }
        }
    }
    let units = corpus.units(Level::Article);
    assert_eq!(units.len(), corpus.article_count());
    println!(
        "first article unit: {} sentence(s)",
        units[0].sentences().len()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
