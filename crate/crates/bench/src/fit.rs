use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::run::ResultRow;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FitError {
    #[error("a linear fit needs at least 3 distinct n values")]
    DegenerateGrid,
}

/// Ordinary least squares of comparisons against n.
///
/// `relative_spread` is the largest deviation of any row from the fit line,
/// normalized by the fitted value at the largest n: how far the worst point
/// strays relative to the line's full scale. A cloud hugging the line keeps
/// this near zero; superlinear growth blows it up.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub relative_spread: f64,
}

/// A fit report tagged with the group it describes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitRow {
    pub algorithm: String,
    pub distribution: String,
    pub params: String,
    #[serde(flatten)]
    pub report: FitReport,
}

pub fn linear_fit(rows: &[ResultRow]) -> Result<FitReport, FitError> {
    let mut distinct: Vec<usize> = rows.iter().map(|r| r.n).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(FitError::DegenerateGrid);
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.comparisons as f64).collect();
    let count = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / count;
    let mean_y = ys.iter().sum::<f64>() / count;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;

    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 {
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };

    let scale = slope * (*distinct.last().unwrap() as f64) + intercept;
    let max_deviation = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0f64, f64::max);
    let relative_spread = if scale.abs() < f64::EPSILON {
        if max_deviation == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        max_deviation / scale.abs()
    };

    Ok(FitReport { slope, intercept, r_squared, relative_spread })
}

/// Fit each (algorithm, distribution, params) group that has enough distinct
/// sizes; groups with fewer than three sizes are skipped.
pub fn fit_rows(rows: &[ResultRow]) -> Vec<FitRow> {
    let mut groups: BTreeMap<(String, String, String), Vec<ResultRow>> = BTreeMap::new();
    for row in rows {
        groups
            .entry((row.algorithm.clone(), row.distribution.clone(), row.params.clone()))
            .or_default()
            .push(row.clone());
    }
    groups
        .into_iter()
        .filter_map(|((algorithm, distribution, params), rows)| {
            linear_fit(&rows).ok().map(|report| FitRow {
                algorithm,
                distribution,
                params,
                report,
            })
        })
        .collect()
}
