//! Plain-text and CSV renderings of sweep summaries and auxiliary tables.

use std::fmt::Write as _;

use crate::alloc::Algorithm;
use crate::montecarlo::{EigenStats, SweepRow, SweepSummary};
use crate::quantize::eta;

pub const CSV_HEADER: [&str; 13] = [
    "snr_db",
    "algorithm",
    "b_ref",
    "b_low",
    "b_high",
    "n_rx",
    "mean_xi",
    "mean_se_ref",
    "mean_se_var",
    "match_rate",
    "mean_n_high",
    "mean_n_on",
    "trials",
];

fn fmt_float(x: f64) -> String {
    format!("{x:.6}")
}

/// Rows in output order: algorithm name, then `b_low`, `b_high`, `snr_db`.
pub fn sorted_rows(summary: &SweepSummary) -> Vec<&SweepRow> {
    let mut rows: Vec<&SweepRow> = summary.rows.iter().collect();
    rows.sort_by(|a, b| {
        a.algorithm
            .name()
            .cmp(b.algorithm.name())
            .then(a.b_low.cmp(&b.b_low))
            .then(a.b_high.cmp(&b.b_high))
            .then(a.snr_db.total_cmp(&b.snr_db))
    });
    rows
}

fn row_fields(r: &SweepRow) -> [String; 13] {
    [
        fmt_float(r.snr_db),
        r.algorithm.name().to_string(),
        r.b_ref.to_string(),
        r.b_low.to_string(),
        r.b_high.to_string(),
        r.n_rx.to_string(),
        fmt_float(r.mean_xi),
        fmt_float(r.mean_se_ref),
        fmt_float(r.mean_se_var),
        fmt_float(r.match_rate),
        fmt_float(r.mean_n_high),
        fmt_float(r.mean_n_on),
        r.trials.to_string(),
    ]
}

pub fn write_csv<W: std::io::Write>(summary: &SweepSummary, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in sorted_rows(summary) {
        w.write_record(row_fields(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(summary: &SweepSummary) -> String {
    let mut buf = Vec::new();
    write_csv(summary, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

/// One parsed CSV row. `mean_power_w` is not part of the CSV and reads as 0.
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, String> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(format!("unexpected header: {header:?}"));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let f = |k: usize| -> Result<f64, String> {
            rec[k]
                .parse()
                .map_err(|e| format!("row {}: column {}: {e}", i + 1, CSV_HEADER[k]))
        };
        let u = |k: usize| -> Result<usize, String> {
            rec[k]
                .parse()
                .map_err(|e| format!("row {}: column {}: {e}", i + 1, CSV_HEADER[k]))
        };
        let algorithm: Algorithm = rec[1].parse().map_err(|e: crate::Error| e.to_string())?;
        rows.push(SweepRow {
            snr_db: f(0)?,
            algorithm,
            b_ref: u(2)? as u32,
            b_low: u(3)? as u32,
            b_high: u(4)? as u32,
            n_rx: u(5)?,
            mean_xi: f(6)?,
            mean_se_ref: f(7)?,
            mean_se_var: f(8)?,
            match_rate: f(9)?,
            mean_n_high: f(10)?,
            mean_n_on: f(11)?,
            mean_power_w: 0.0,
            trials: u(12)?,
        });
    }
    Ok(rows)
}

/// Aligned human-readable table of the same rows as the CSV.
pub fn to_table(summary: &SweepSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>8} {:>6} {:>5} {:>5} {:>6} {:>5} {:>9} {:>9} {:>9} {:>7} {:>8} {:>8} {:>11} {:>6}",
        "snr_db",
        "alg",
        "b_ref",
        "b_low",
        "b_high",
        "n_rx",
        "xi",
        "se_ref",
        "se_var",
        "match",
        "n_high",
        "n_on",
        "power_w",
        "trials"
    );
    for r in sorted_rows(summary) {
        let _ = writeln!(
            out,
            "{:>8.1} {:>6} {:>5} {:>5} {:>6} {:>5} {:>9.4} {:>9.4} {:>9.4} {:>7.3} {:>8.2} {:>8.2} {:>11.4e} {:>6}",
            r.snr_db,
            r.algorithm.name(),
            r.b_ref,
            r.b_low,
            r.b_high,
            r.n_rx,
            r.mean_xi,
            r.mean_se_ref,
            r.mean_se_var,
            r.match_rate,
            r.mean_n_high,
            r.mean_n_on,
            r.mean_power_w,
            r.trials
        );
    }
    out
}

/// `eta(b)` for `b = 1..=10`. Tabulated values print with their own digits,
/// formula values in scientific notation.
pub fn eta_table() -> String {
    let mut out = String::from("b\teta\n");
    for b in 1..=10u32 {
        let e = eta(b);
        if b <= 5 {
            let _ = writeln!(out, "{b}\t{e}");
        } else {
            let _ = writeln!(out, "{b}\t{e:.4e}");
        }
    }
    out
}

pub fn eigen_report(stats: &EigenStats) -> String {
    format!(
        "draws: {}\n\
         P(dominant fraction > 0.50) = {:.6} +/- {:.6}\n\
         P(dominant fraction > 0.75) = {:.6} +/- {:.6}\n\
         mean dominant fraction      = {:.6}\n",
        stats.draws,
        stats.p_over_half,
        stats.std_err_half(),
        stats.p_over_three_quarters,
        stats.std_err_three_quarters(),
        stats.mean_fraction
    )
}
