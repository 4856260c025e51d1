//! Text renderings of rankings and evaluations.
//!
//! All output is a pure function of its input: no timestamps, no paths,
//! no hash-map iteration order.

use std::fmt::Write as _;

use crate::corpus::Level;
use crate::eval::EvalReport;
use crate::similarity::RankedMatches;

/// Formats with 9 significant digits in plain decimal notation.
pub fn format_score(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000".to_string();
    }
    // Let the exponent come from the rounded value so 0.99999999996
    // becomes 1.00000000 rather than 1.000000000.
    let sci = format!("{x:.8e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    let decimals = (8 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `source_id<TAB>rank<TAB>target_id<TAB>score`, one line per candidate,
/// ranks starting at 1. Skipped targets and id tie-breaks are noted in
/// `#` comment lines.
pub fn match_report(backend: &str, level: Level, matches: &[RankedMatches]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# lexalign matches backend={backend} level={level}");
    let _ = writeln!(out, "# source_id\trank\ttarget_id\tscore");
    let mut tied = 0;
    for m in matches {
        for (i, c) in m.candidates.iter().enumerate() {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                m.source_id,
                i + 1,
                c.target_id,
                format_score(c.score)
            );
        }
        if !m.source_has_vector {
            let _ = writeln!(out, "# {} has no vector; nothing ranked", m.source_id);
        } else if !m.skipped.is_empty() {
            let _ = writeln!(out, "# {} skipped {}", m.source_id, m.skipped.join(","));
        }
        tied += m.tied_pairs();
    }
    let _ = writeln!(
        out,
        "# tied_pairs={tied} (ties ordered by ascending target_id)"
    );
    out
}

/// Machine-readable evaluation records.
pub fn eval_records(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# lexalign eval backend={} level={} k={}",
        report.backend_name, report.level, report.k
    );
    let _ = writeln!(out, "# source\tsource_id\thit\ttop_k\tflag");
    for (source, o) in &report.per_source {
        let flag = o.flag.map(|f| f.as_str()).unwrap_or("-");
        let _ = writeln!(
            out,
            "source\t{source}\t{}\t{}\t{flag}",
            o.hit,
            o.top_k.join(",")
        );
    }
    let _ = writeln!(
        out,
        "accuracy\t{}\t{}\t{}\t{}\t{}/{}",
        report.backend_name,
        report.level,
        report.k,
        format_score(report.accuracy),
        report.hits(),
        report.per_source.len()
    );
    out
}

/// A Level x Algorithm x HIT@K table. Recital rows come before article
/// rows; algorithms keep the order they appear in `reports`.
pub fn render_table(reports: &[EvalReport]) -> String {
    let header_k = match reports.first() {
        Some(r) if reports.iter().all(|x| x.k == r.k) => format!("HIT@{}", r.k),
        _ => "HIT@K".to_string(),
    };
    let mut rows: Vec<[String; 3]> = Vec::new();
    for level in Level::ALL {
        let mut first = true;
        for r in reports.iter().filter(|r| r.level == level) {
            let label = if first {
                capitalize(level.as_str())
            } else {
                String::new()
            };
            first = false;
            let value = if header_k == "HIT@K" {
                format!("{:.4} (k={})", r.accuracy, r.k)
            } else {
                format!("{:.4}", r.accuracy)
            };
            rows.push([label, r.backend_name.clone(), value]);
        }
    }
    let header = ["Level".to_string(), "Algorithm".to_string(), header_k];
    let widths: Vec<usize> = (0..3)
        .map(|i| {
            rows.iter()
                .chain(std::iter::once(&header))
                .map(|r| r[i].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String; 3]| {
        format!(
            "| {:<w0$} | {:<w1$} | {:<w2$} |\n",
            cells[0],
            cells[1],
            cells[2],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2]
        )
    };
    let mut out = line(&header);
    out.push_str(&format!(
        "|{}|{}|{}|\n",
        "-".repeat(widths[0] + 2),
        "-".repeat(widths[1] + 2),
        "-".repeat(widths[2] + 2)
    ));
    for r in &rows {
        out.push_str(&line(r));
    }
    out
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}
