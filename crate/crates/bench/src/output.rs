use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::config::BenchError;
use crate::fit::FitRow;
use crate::run::ResultRow;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

pub const CSV_HEADER: &str =
    "algorithm,distribution,params,n,trial,seed,comparisons,rounds,wall_seconds";

/// Render rows as CSV, byte-stable for identical inputs.
pub fn render_csv(rows: &[ResultRow]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        // params may contain '=' but never commas or quotes
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{:.6}",
            r.algorithm,
            r.distribution,
            r.params,
            r.n,
            r.trial,
            r.seed,
            r.comparisons,
            r.rounds,
            r.wall_seconds
        );
    }
    out
}

#[derive(Serialize)]
struct Document<'a> {
    rows: &'a [ResultRow],
    fits: &'a [FitRow],
}

/// Render rows and fits as one JSON object, byte-stable for identical inputs.
pub fn render_json(rows: &[ResultRow], fits: &[FitRow]) -> String {
    let mut s = serde_json::to_string_pretty(&Document { rows, fits })
        .expect("result rows serialize");
    s.push('\n');
    s
}

pub fn write_results(
    rows: &[ResultRow],
    fits: &[FitRow],
    path: &Path,
    format: OutputFormat,
) -> Result<(), BenchError> {
    let body = match format {
        OutputFormat::Csv => render_csv(rows),
        OutputFormat::Json => render_json(rows, fits),
    };
    fs::write(path, body).map_err(|source| BenchError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, trial: usize) -> ResultRow {
        ResultRow {
            algorithm: "er".into(),
            distribution: "zeta".into(),
            params: "s=2".into(),
            n,
            trial,
            seed: 42,
            comparisons: 10 * n as u64,
            rounds: 3,
            wall_seconds: 0.0,
        }
    }

    #[test]
    fn empty_rows_render_header_only() {
        assert_eq!(render_csv(&[]), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn csv_row_round_trips() {
        let rows = vec![row(100, 0)];
        let text = render_csv(&rows);
        let line = text.lines().nth(1).unwrap();
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], "er");
        assert_eq!(fields[1], "zeta");
        assert_eq!(fields[2], "s=2");
        assert_eq!(fields[3].parse::<usize>().unwrap(), 100);
        assert_eq!(fields[4].parse::<usize>().unwrap(), 0);
        assert_eq!(fields[5].parse::<u64>().unwrap(), 42);
        assert_eq!(fields[6].parse::<u64>().unwrap(), 1000);
        assert_eq!(fields[7].parse::<usize>().unwrap(), 3);
        assert_eq!(fields[8].parse::<f64>().unwrap(), 0.0);
    }

    #[test]
    fn json_and_csv_agree_on_rows() {
        let rows = vec![row(100, 0), row(100, 1), row(200, 0)];
        let json: serde_json::Value =
            serde_json::from_str(&render_json(&rows, &[])).unwrap();
        let json_rows = json["rows"].as_array().unwrap();
        assert_eq!(json_rows.len(), rows.len());
        let csv = render_csv(&rows);
        assert_eq!(csv.lines().count(), rows.len() + 1);
        for (jr, r) in json_rows.iter().zip(&rows) {
            assert_eq!(jr["n"].as_u64().unwrap() as usize, r.n);
            assert_eq!(jr["comparisons"].as_u64().unwrap(), r.comparisons);
        }
    }

    #[test]
    fn rendering_is_deterministic() {
        let rows = vec![row(100, 0), row(200, 1)];
        assert_eq!(render_csv(&rows), render_csv(&rows));
        assert_eq!(render_json(&rows, &[]), render_json(&rows, &[]));
    }
}
