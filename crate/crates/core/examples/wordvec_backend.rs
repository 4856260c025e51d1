// Static word-embedding sums: load a word-vector table and rank with it.

use std::error::Error;
use std::path::PathBuf;

use lexalign::corpus::load_corpus;
use lexalign::similarity::match_all;
use lexalign::vectorize::{embedding_sum_vector, load_embedding_table, Backend};
use lexalign::Level;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a = load_corpus(&fixture("tiny_a.tsv"), "en")?;
    let b = load_corpus(&fixture("tiny_b.tsv"), "en")?;
    let table = load_embedding_table(fixture("tiny_words.txt"))?;
    println!("{} words, dim {}", table.len(), table.dim());

    let (ua, ub) = (a.units(Level::Recital), b.units(Level::Recital));
    for u in &ua {
        let sum = embedding_sum_vector(u, &table);
        println!(
            "{:>6}: {:?} ({} out-of-vocabulary)",
            u.unit_id(),
            sum.vector.values(),
            sum.oov
        );
    }
    let backend = Backend::WordVec(table);
    for r in match_all(&ua, &ub, &backend)? {
        match r.candidates.first() {
            Some(best) => println!("{} -> {} {:.4}", r.source_id, best.target_id, best.score),
            None => println!("{} has no vector", r.source_id),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
