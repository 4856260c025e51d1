// Fit TF-IDF over two corpora and inspect a unit's heaviest terms.

use std::error::Error;

use lexalign::corpus::parse_records_str;
use lexalign::vectorize::{fit_tfidf, idf, tfidf_vector, Token};
use lexalign::Level;

const GDPR: &str = "chapter\tsection\tarticle\trecital\ttitle\ttext
1\t\t1\t1\tSubject-matter\tThis Regulation lays down rules on the protection of personal data.
1\t\t2\t1\tScope\tThis Regulation applies to the processing of personal data by automated means.
";
const LGPD: &str = "chapter\tsection\tarticle\trecital\ttitle\ttext
1\t\t1\t1\t\tEsta Lei dispõe sobre o tratamento de dados pessoais.
1\t\t2\t1\t\tA disciplina da proteção de dados pessoais tem como fundamentos o respeito à privacidade.
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a = parse_records_str(GDPR, "gdpr", "en")?;
    let b = parse_records_str(LGPD, "lgpd", "pt")?;
    let mut units = a.units(Level::Article);
    units.extend(b.units(Level::Article));

    let model = fit_tfidf(&units)?;
    println!(
        "{} documents, {} terms",
        model.doc_count(),
        model.vocabulary().count()
    );
    // "personal" appears in both GDPR articles: ln(4/2).
    println!(
        "idf(personal) = {:.6}",
        idf(&Token::new("personal").unwrap(), &model)
    );

    let v = tfidf_vector(&units[0], &model)?;
    let mut terms: Vec<(&str, f64)> = v.iter().collect();
    terms.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(y.0)));
    for (term, w) in terms.iter().take(5) {
        println!("{term:>12} {w:.4}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
