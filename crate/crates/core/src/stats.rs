//! Statistics of a correlation sweep over h: mean and maximum of |C|, the
//! least-squares line C = m·h + b, its R², and the Pearson correlation of C
//! with h.

use rayon::prelude::*;
use serde::Serialize;

use crate::correlation::{check_checkpoints, correlation_at, CorrelationRecord, Mode};
use crate::error::{Error, Result};
use crate::table::FactorSignTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSummary {
    pub x: u64,
    pub mode: Mode,
    pub h_min: u64,
    pub h_max: u64,
    pub mean_abs: f64,
    pub max_abs: f64,
    pub slope_m: f64,
    pub intercept_b: f64,
    pub r_squared: f64,
    pub pearson_r: f64,
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

fn compensated<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = CompensatedSum::default();
    it.into_iter().for_each(|v| s.add(v));
    s.total()
}

/// One record per h in `h_min..=h_max`, in ascending h.
pub fn sweep(
    table: &FactorSignTable,
    x: u64,
    h_min: u64,
    h_max: u64,
    mode: Mode,
) -> Result<Vec<CorrelationRecord>> {
    Ok(sweep_at(table, &[x], h_min, h_max, mode)?.remove(0))
}

/// Sweeps several ascending X at once; the outer vector is indexed like `xs`.
pub fn sweep_at(
    table: &FactorSignTable,
    xs: &[u64],
    h_min: u64,
    h_max: u64,
    mode: Mode,
) -> Result<Vec<Vec<CorrelationRecord>>> {
    if h_min == 0 {
        return Err(Error::arg("h_min", "must be at least 1"));
    }
    if h_max < h_min {
        return Err(Error::arg(
            "h_max",
            format!("{h_max} is below h_min = {h_min}"),
        ));
    }
    check_checkpoints(table, xs, h_max)?;
    let per_h: Vec<Vec<CorrelationRecord>> = (h_min..=h_max)
        .into_par_iter()
        .map(|h| correlation_at(table, xs, h, mode))
        .collect::<Result<_>>()?;
    Ok((0..xs.len())
        .map(|k| per_h.iter().map(|recs| recs[k]).collect())
        .collect())
}

pub fn summarize(records: &[CorrelationRecord]) -> Result<SweepSummary> {
    let mut recs = records.to_vec();
    recs.sort_by_key(|r| r.h);
    if recs.windows(2).any(|w| w[0].h == w[1].h) {
        return Err(Error::arg("records", "shifts must be distinct"));
    }
    if recs.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 distinct h, got {}",
            recs.len()
        )));
    }
    let first = recs[0];
    if recs.iter().any(|r| r.x != first.x || r.mode != first.mode) {
        return Err(Error::arg("records", "all records must share X and mode"));
    }

    let n = recs.len() as f64;
    let hs: Vec<f64> = recs.iter().map(|r| r.h as f64).collect();
    let vs: Vec<f64> = recs.iter().map(|r| r.value).collect();

    let mean_abs = compensated(vs.iter().map(|v| v.abs())) / n;
    let max_abs = vs.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let mean_h = compensated(hs.iter().copied()) / n;
    let mean_v = compensated(vs.iter().copied()) / n;
    let sxx = compensated(hs.iter().map(|h| (h - mean_h) * (h - mean_h)));
    let syy = compensated(vs.iter().map(|v| (v - mean_v) * (v - mean_v)));
    let sxy = compensated(hs.iter().zip(&vs).map(|(h, v)| (h - mean_h) * (v - mean_v)));
    if syy == 0.0 {
        return Err(Error::DegenerateData(
            "values have zero variance; correlation is undefined".into(),
        ));
    }

    let slope_m = sxy / sxx;
    let intercept_b = mean_v - slope_m * mean_h;
    let ss_res = compensated(hs.iter().zip(&vs).map(|(h, v)| {
        let e = v - (slope_m * h + intercept_b);
        e * e
    }));
    let r_squared = (1.0 - ss_res / syy).clamp(0.0, 1.0);
    let pearson_r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);

    Ok(SweepSummary {
        x: first.x,
        mode: first.mode,
        h_min: first.h,
        h_max: recs.last().unwrap().h,
        mean_abs,
        max_abs,
        slope_m,
        intercept_b,
        r_squared,
        pearson_r,
    })
}
