use std::collections::BTreeMap;

use super::config::Method;
use super::sweep::Row;
use crate::{Error, Result};

/// Least-squares line through `(log₁₀ p, log₁₀ err)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn rate_fit(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 2 {
        return Err(Error::Argument(format!("rate fit needs ≥ 2 points, got {}", points.len())));
    }
    if let Some((p, e)) = points.iter().find(|(p, e)| !(*p > 0.0 && *e > 0.0)) {
        return Err(Error::Argument(format!("rate fit needs positive p and error, got ({p}, {e})")));
    }
    let xs: Vec<f64> = points.iter().map(|(p, _)| p.log10()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, e)| e.log10()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Argument("rate fit needs at least two distinct p".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(RateFit { slope, intercept, r2 })
}

/// Median of a non-empty slice (mean of the middle pair for even lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Median of `metric` over seeds for each `(method, p)`; failed runs are skipped.
pub fn median_curves(rows: &[Row], metric: impl Fn(&Row) -> f64) -> BTreeMap<Method, Vec<(usize, f64)>> {
    let mut groups: BTreeMap<(Method, usize), Vec<f64>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.error.is_none()) {
        groups.entry((r.method, r.p)).or_default().push(metric(r));
    }
    let mut curves: BTreeMap<Method, Vec<(usize, f64)>> = BTreeMap::new();
    for ((m, p), vals) in groups {
        curves.entry(m).or_default().push((p, median(&vals)));
    }
    curves
}
