//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails. Run with `cargo test --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{
    data, dense_cosine, gen_units, gen_units_with_duplicates, oracle_df, oracle_rank, oracle_tfidf,
    GenUnit,
};
use lexalign::cli::tfidf_backend;
use lexalign::corpus::load_corpus;
use lexalign::eval::{evaluate, load_gold, EvalConfig, GoldLabelSet};
use lexalign::similarity::{cosine, match_all};
use lexalign::vectorize::{fit_tfidf, idf, tf, tfidf_vector, tokenize, Backend, Token};
use lexalign::{DenseVector, Level, SparseVector, Unit, Vector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn within_time(started: Instant, limit: Duration, detail: String) -> Outcome {
    let took = started.elapsed();
    ensure!(took < limit, "took {took:.2?}, limit {limit:?}");
    Ok(format!("{detail}; {took:.2?} (limit {limit:?})"))
}

fn tfidf_unit_math() -> Outcome {
    let sentence = tokenize("data about personal data");
    let t = tf(&Token::new("data").unwrap(), &sentence).map_err(|e| e.to_string())?;
    ensure!((t - 0.5).abs() <= 1e-12, "tf = {t}, expected 0.5");

    let units: Vec<Unit> = ["data law", "data rights", "fines", "consent"]
        .iter()
        .enumerate()
        .map(|(i, s)| Unit::recital(format!("u{i}"), s))
        .collect();
    let model = fit_tfidf(&units).map_err(|e| e.to_string())?;
    let i = idf(&Token::new("data").unwrap(), &model);
    ensure!(
        (i - std::f64::consts::LN_2).abs() <= 1e-12,
        "idf(N=4, df=2) = {i}, expected ln 2"
    );

    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x7f1d);
    for round in 0..1000 {
        let (n, vocab) = (rng.gen_range(1..=20), rng.gen_range(2..=15));
        let mut gen = gen_units(&mut rng, "u", n, vocab);
        for g in &mut gen {
            g.sentences[0].push("everywhere".into());
        }
        let units: Vec<Unit> = gen.iter().map(GenUnit::unit).collect();
        let model = fit_tfidf(&units).map_err(|e| e.to_string())?;

        let mut reversed = units.clone();
        reversed.reverse();
        ensure!(
            fit_tfidf(&reversed).ok() == Some(model.clone()),
            "round {round}: fit depends on order"
        );

        for (term, df) in model.vocabulary() {
            let w = idf(&Token::new(term).unwrap(), &model);
            ensure!(w >= 0.0, "round {round}: idf({term}) = {w}");
            ensure!(
                (w == 0.0) == (df == n),
                "round {round}: idf({term}) = {w} with df {df} of {n}"
            );
        }

        let refs: Vec<&GenUnit> = gen.iter().collect();
        let df = oracle_df(&refs);
        for (g, u) in gen.iter().zip(&units) {
            for s in u.sentences() {
                let tokens = tokenize(s);
                let distinct: BTreeSet<&Token> = tokens.iter().collect();
                let sum: f64 = distinct.iter().map(|t| tf(t, &tokens).unwrap()).sum();
                ensure!(
                    (sum - 1.0).abs() <= 1e-12,
                    "round {round}: sum of tf = {sum}"
                );
            }
            let v = tfidf_vector(u, &model).map_err(|e| e.to_string())?;
            ensure!(
                v.get("everywhere") == 0.0,
                "round {round}: ubiquitous term kept a weight"
            );
            let expected = oracle_tfidf(g, n, &df);
            ensure!(
                v.len() == expected.len(),
                "round {round}: {} terms, oracle {}",
                v.len(),
                expected.len()
            );
            for (term, w) in v.iter() {
                let o = expected.get(term).copied().unwrap_or(f64::NAN);
                ensure!(
                    (w - o).abs() <= 1e-12,
                    "round {round}: weight of {term} = {w}, oracle {o}"
                );
            }
        }
    }
    within_time(
        started,
        Duration::from_secs(10),
        "hand cases + 1000 random corpora".into(),
    )
}

fn oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xa11ce);
    let mut ties = 0usize;
    for round in 0..200 {
        let vocab = rng.gen_range(2..=30);
        let (na, nb) = (rng.gen_range(1..=50), rng.gen_range(1..=50));
        let a = gen_units_with_duplicates(&mut rng, "a", na, vocab);
        let b = gen_units_with_duplicates(&mut rng, "b", nb, vocab);
        let ua: Vec<Unit> = a.iter().map(GenUnit::unit).collect();
        let ub: Vec<Unit> = b.iter().map(GenUnit::unit).collect();
        let all: Vec<Unit> = ua.iter().chain(&ub).cloned().collect();
        let backend = Backend::TfIdf(fit_tfidf(&all).map_err(|e| e.to_string())?);
        let got = match_all(&ua, &ub, &backend).map_err(|e| e.to_string())?;
        let want = oracle_rank(&a, &b);
        ensure!(
            got.len() == want.len(),
            "round {round}: {} rankings, oracle {}",
            got.len(),
            want.len()
        );
        for (g, (source, w)) in got.iter().zip(&want) {
            ensure!(
                &g.source_id == source,
                "round {round}: source order differs"
            );
            let g_ids: Vec<&str> = g.candidates.iter().map(|c| c.target_id.as_str()).collect();
            let w_ids: Vec<&str> = w.iter().map(|(t, _)| t.as_str()).collect();
            ensure!(
                g_ids == w_ids,
                "round {round} source {source}: order {g_ids:?}, oracle {w_ids:?}"
            );
            for (c, (_, s)) in g.candidates.iter().zip(w) {
                ensure!(
                    c.score == *s,
                    "round {round} {source}->{}: {} vs oracle {s}",
                    c.target_id,
                    c.score
                );
            }
            ties += g.tied_pairs();
        }
    }
    ensure!(
        ties > 0,
        "no tied scores were generated, tie-breaking untested"
    );
    within_time(
        started,
        Duration::from_secs(30),
        format!("200 corpus pairs, {ties} tied pairs"),
    )
}

// The pinned expected value is written out, not taken from std.
#[allow(clippy::approx_constant)]
fn cosine_numerics() -> Outcome {
    let v = |xs: &[f64]| Vector::Dense(DenseVector::from_values(xs.to_vec()));
    let c = cosine(&v(&[1.0, 0.0]), &v(&[1.0, 1.0]))
        .map_err(|e| e.to_string())?
        .unwrap_or(f64::NAN);
    ensure!((c - 0.70710678).abs() <= 1e-8, "cosine((1,0),(1,1)) = {c}");

    let mut rng = StdRng::seed_from_u64(0xc05);
    for i in 0..10_000 {
        let (a, b) = if i % 2 == 0 {
            let dim = rng.gen_range(1..=32);
            let a: Vec<f64> = (0..dim).map(|_| rng.gen_range(-100.0..100.0)).collect();
            let b: Vec<f64> = (0..dim).map(|_| rng.gen_range(-100.0..100.0)).collect();
            let o = dense_cosine(&a, &b);
            let got = cosine(&v(&a), &v(&b)).unwrap().unwrap();
            ensure!((got - o).abs() <= 1e-12, "pair {i}: {got} vs direct {o}");
            (v(&a), v(&b))
        } else {
            let sparse = |rng: &mut StdRng| -> Vector {
                let s: SparseVector = (0..rng.gen_range(1..10))
                    .map(|_| {
                        (
                            format!("t{}", rng.gen_range(0..12)),
                            rng.gen_range(0.01..5.0),
                        )
                    })
                    .collect::<Vec<(String, f64)>>()
                    .iter()
                    .map(|(t, w)| (t.as_str(), *w))
                    .collect();
                Vector::Sparse(s)
            };
            (sparse(&mut rng), sparse(&mut rng))
        };
        let ab = cosine(&a, &b).unwrap().unwrap();
        let ba = cosine(&b, &a).unwrap().unwrap();
        ensure!(
            (ab - ba).abs() <= 1e-12,
            "pair {i}: asymmetric {ab} vs {ba}"
        );
        ensure!((-1.0..=1.0).contains(&ab), "pair {i}: {ab} out of range");
        for x in [&a, &b] {
            let s = cosine(x, x).unwrap().unwrap();
            ensure!((s - 1.0).abs() <= 1e-12, "pair {i}: self-similarity {s}");
        }
    }
    Ok("(1,0)~(1,1) = 0.70710678; 10000 random pairs".into())
}

fn hit_at_k_properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x417);
    for round in 0..300 {
        let vocab = rng.gen_range(3..=20);
        let (na, nb) = (rng.gen_range(1..=15), rng.gen_range(1..=15));
        let mut a = gen_units(&mut rng, "a", na, vocab);
        let mut b = gen_units(&mut rng, "b", nb, vocab);
        // A private term per unit guarantees every vector is non-zero.
        for g in a.iter_mut().chain(b.iter_mut()) {
            let id = g.id.clone();
            g.sentences[0].push(format!("only{id}"));
        }
        let ua: Vec<Unit> = a.iter().map(GenUnit::unit).collect();
        let ub: Vec<Unit> = b.iter().map(GenUnit::unit).collect();
        let all: Vec<Unit> = ua.iter().chain(&ub).cloned().collect();
        let matches = match_all(&ua, &ub, &Backend::TfIdf(fit_tfidf(&all).unwrap())).unwrap();

        let mut gold = GoldLabelSet::new(Level::Recital);
        for u in &ua {
            let picks: Vec<&str> = (0..rng.gen_range(1..=3))
                .map(|_| ub[rng.gen_range(0..ub.len())].unit_id())
                .collect();
            gold.insert(u.unit_id(), picks, None).unwrap();
        }
        let mut last = -1.0;
        for k in 1..=ub.len() {
            let acc = evaluate("tfidf", &matches, &gold, &EvalConfig::new(k).unwrap())
                .unwrap()
                .accuracy;
            ensure!(
                (0.0..=1.0).contains(&acc),
                "round {round}: accuracy {acc} at k={k}"
            );
            ensure!(
                acc >= last,
                "round {round}: accuracy fell from {last} to {acc} at k={k}"
            );
            last = acc;
        }
        ensure!(last == 1.0, "round {round}: exhaustive k gave {last}");
    }
    Ok("300 random rankings: monotone in k, within [0,1], exhaustive k = 1".into())
}

fn corpus_scale() -> Outcome {
    let gdpr = load_corpus(&data("gdpr.tsv"), "en").map_err(|e| e.to_string())?;
    let lgpd = load_corpus(&data("lgpd.tsv"), "pt").map_err(|e| e.to_string())?;
    ensure!(
        gdpr.article_count() > 80,
        "GDPR has {} articles",
        gdpr.article_count()
    );
    let sections: Vec<&str> = lgpd
        .chapters()
        .iter()
        .flat_map(|c| c.sections.iter().map(|s| s.id.as_str()))
        .collect();
    ensure!(
        lgpd.chapters().len() > 1,
        "LGPD has {} chapters",
        lgpd.chapters().len()
    );
    ensure!(!sections.is_empty(), "LGPD has no sections");
    ensure!(
        lgpd.article_count() > 0 && lgpd.recital_count() >= lgpd.article_count(),
        "LGPD lacks articles or recitals"
    );
    Ok(format!(
        "GDPR {} articles / {} recitals; LGPD {} chapters / {} sections / {} articles / {} recitals",
        gdpr.article_count(),
        gdpr.recital_count(),
        lgpd.chapters().len(),
        sections.len(),
        lgpd.article_count(),
        lgpd.recital_count()
    ))
}

fn table_reproduction() -> Outcome {
    let started = Instant::now();
    let gdpr = load_corpus(&data("gdpr.tsv"), "en").map_err(|e| e.to_string())?;
    let lgpd = load_corpus(&data("lgpd.tsv"), "pt").map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut failures = Vec::new();
    for (level, gold_file, published) in [
        (Level::Recital, "gold_recital.tsv", 0.6),
        (Level::Article, "gold_article.tsv", 0.5),
    ] {
        let (ua, ub) = (gdpr.units(level), lgpd.units(level));
        let backend = tfidf_backend(&gdpr, &lgpd, level).map_err(|e| e.to_string())?;
        let matches = match_all(&ua, &ub, &backend).map_err(|e| e.to_string())?;
        let gold = load_gold(data(gold_file), level, &ua, &ub).map_err(|e| e.to_string())?;
        ensure!(
            gold.len() == 10,
            "{gold_file} labels {} sources, expected 10",
            gold.len()
        );
        let acc = evaluate("tfidf", &matches, &gold, &EvalConfig::new(1).unwrap())
            .map_err(|e| e.to_string())?
            .accuracy;
        parts.push(format!("{level} {acc:.4} (published {published})"));
        if (acc - published).abs() > 0.2 {
            failures.push(format!("{level}: {acc:.4} vs published {published}"));
        }
    }
    ensure!(failures.is_empty(), "outside ±0.2: {}", failures.join("; "));
    within_time(started, Duration::from_secs(60), parts.join(", "))
}

fn run_pipeline(out: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_lexalign"))
        .arg("pipeline")
        .arg(data("gdpr.tsv"))
        .arg(data("lgpd.tsv"))
        .arg("--gold")
        .arg(data("gold_article.tsv"))
        .arg("--gold")
        .arg(data("gold_recital.tsv"))
        .arg("--out")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        status.status.success(),
        "pipeline failed: {}",
        String::from_utf8_lossy(&status.stderr)
    );
    Ok(())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (first, second) = (dir.path().join("first"), dir.path().join("second"));
    run_pipeline(&first)?;
    run_pipeline(&second)?;
    let mut names: Vec<_> = std::fs::read_dir(&first)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let reports = names
        .iter()
        .filter(|n| {
            let n = n.to_string_lossy();
            n.starts_with("matches-") || n.starts_with("eval-")
        })
        .count();
    ensure!(
        reports >= 4,
        "expected match and eval reports for both levels, found {reports}"
    );
    for name in &names {
        let a = std::fs::read(first.join(name)).map_err(|e| e.to_string())?;
        let b = std::fs::read(second.join(name))
            .map_err(|e| format!("{}: {e}", name.to_string_lossy()))?;
        ensure!(a == b, "{} differs between runs", name.to_string_lossy());
    }
    let second_count = std::fs::read_dir(&second)
        .map_err(|e| e.to_string())?
        .count();
    ensure!(
        second_count == names.len(),
        "runs wrote different file sets"
    );
    Ok(format!(
        "{} files byte-identical across two runs",
        names.len()
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("tfidf-unit-math", tfidf_unit_math),
        ("oracle-equivalence", oracle_equivalence),
        ("cosine-numerics", cosine_numerics),
        ("hit-at-k-properties", hit_at_k_properties),
        ("corpus-scale", corpus_scale),
        ("table-reproduction", table_reproduction),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
