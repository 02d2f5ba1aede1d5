//! Summatory sums, shifted correlation sums, 2×2 sign contingency tables,
//! conditional expectations and the χ² independence statistic.
//!
//! Two settings are supported. In λ-mode every n ≤ X contributes. In μ-mode
//! only n with both n and n + h square-free contribute, and the normalizer is
//! the number of such n (Y₂), or the square-free count Y₁ for the summatory
//! sum.
//!
//! All counts are exact `u64`; the final division is the only floating-point
//! step.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scan::{self, PairCounts};
use crate::table::FactorSignTable;

/// 95% critical value of χ² with one degree of freedom.
pub const CHI_SQUARE_CRITICAL_95: f64 = 3.84146;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Lambda,
    Moebius,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Lambda => "lambda",
            Mode::Moebius => "moebius",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lambda" | "liouville" => Ok(Mode::Lambda),
            "moebius" | "mobius" | "mu" => Ok(Mode::Moebius),
            other => Err(Error::arg("mode", format!("unknown mode {other:?}"))),
        }
    }
}

/// One normalized sum: `value = raw_sum / normalizer`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationRecord {
    /// Shift; zero for summatory sums.
    pub h: u64,
    pub x: u64,
    pub mode: Mode,
    pub raw_sum: i64,
    pub normalizer: u64,
    pub value: f64,
}

impl CorrelationRecord {
    fn new(h: u64, x: u64, mode: Mode, raw_sum: i64, normalizer: u64) -> Result<Self> {
        if normalizer == 0 {
            return Err(Error::DegenerateNormalizer(format!(
                "no contributing n for h = {h}, X = {x} in {mode} mode"
            )));
        }
        Ok(CorrelationRecord {
            h,
            x,
            mode,
            raw_sum,
            normalizer,
            value: raw_sum as f64 / normalizer as f64,
        })
    }
}

/// 2×2 table of joint sign counts. Index 0 is +1, index 1 is −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ContingencyTable {
    pub counts: [[u64; 2]; 2],
    pub total: u64,
    pub mode: Mode,
    pub h: u64,
    pub x: u64,
}

impl ContingencyTable {
    /// A free-standing table (no originating scan); `x` is set to the total.
    pub fn from_counts(counts: [[u64; 2]; 2]) -> Self {
        let total = counts.iter().flatten().sum();
        ContingencyTable {
            counts,
            total,
            mode: Mode::Lambda,
            h: 0,
            x: total,
        }
    }

    fn from_pairs(c: PairCounts, mode: Mode, h: u64, x: u64) -> Self {
        let l11 = c.both_neg;
        let l10 = c.first_neg - c.both_neg;
        let l01 = c.second_neg - c.both_neg;
        let l00 = c.total + c.both_neg - c.first_neg - c.second_neg;
        ContingencyTable {
            counts: [[l00, l01], [l10, l11]],
            total: c.total,
            mode,
            h,
            x,
        }
    }

    pub fn row(&self, i: usize) -> u64 {
        self.counts[i][0] + self.counts[i][1]
    }

    pub fn col(&self, j: usize) -> u64 {
        self.counts[0][j] + self.counts[1][j]
    }

    /// L₀₀ + L₁₁ − L₀₁ − L₁₀, the un-normalized correlation sum.
    pub fn signed_sum(&self) -> i64 {
        let [[a, b], [c, d]] = self.counts;
        (a + d) as i64 - (b + c) as i64
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.counts;
        ContingencyTable {
            counts: [[a, c], [b, d]],
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalExpectations {
    /// E[λ(n+h) | λ(n) = +1] = (L₀₀ − L₀₁) / L₀.
    pub e_plus: f64,
    /// E[λ(n+h) | λ(n) = −1] = (L₁₀ − L₁₁) / L₁.
    pub e_minus: f64,
    pub l0: u64,
    pub l1: u64,
    /// |(e_plus − e_minus) − rhs| where rhs is the decomposition into the
    /// correlation term and the marginal-imbalance term.
    pub identity_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquare {
    pub q: f64,
    /// `q > CHI_SQUARE_CRITICAL_95`.
    pub reject: bool,
}

fn check_window(table: &FactorSignTable, x: u64, h: u64) -> Result<()> {
    if x == 0 {
        return Err(Error::arg("x", "must be at least 1"));
    }
    if table.start() != 1 {
        return Err(Error::OutOfRange {
            n: 1,
            first: table.start(),
            last: table.last(),
        });
    }
    let need = x
        .checked_add(h)
        .ok_or_else(|| Error::arg("x", "X + h overflows"))?;
    if need > table.last() {
        return Err(Error::OutOfRange {
            n: need,
            first: table.start(),
            last: table.last(),
        });
    }
    Ok(())
}

pub(crate) fn check_checkpoints(table: &FactorSignTable, xs: &[u64], h: u64) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::arg("x", "at least one checkpoint required"));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::arg("x", "checkpoints must be strictly ascending"));
    }
    check_window(table, xs[0], h)?;
    check_window(table, *xs.last().unwrap(), h)
}

/// Runs `f` over each interval `(prev, x_k]` and returns running totals.
fn cumulative<T, F>(xs: &[u64], mut f: F) -> Vec<T>
where
    T: Copy + Default + std::ops::AddAssign,
    F: FnMut(u64, u64) -> T,
{
    let mut acc = T::default();
    let mut prev = 0;
    xs.iter()
        .map(|&x| {
            acc += f(prev, x);
            prev = x;
            acc
        })
        .collect()
}

/// Σ_{n≤X} λ(n) / X, or Σ_{n≤X} μ(n) / Y₁ in μ-mode.
pub fn summatory(table: &FactorSignTable, x: u64, mode: Mode) -> Result<CorrelationRecord> {
    Ok(summatory_at(table, &[x], mode)?.remove(0))
}

/// [`summatory`] for several ascending X in one pass.
pub fn summatory_at(
    table: &FactorSignTable,
    xs: &[u64],
    mode: Mode,
) -> Result<Vec<CorrelationRecord>> {
    check_checkpoints(table, xs, 0)?;
    let sign = table.sign_words();
    let sf = table.square_free_words();
    let sums = cumulative(xs, |a, b| match mode {
        Mode::Lambda => scan::lambda_single(sign, a, b),
        Mode::Moebius => scan::moebius_single(sign, sf, a, b),
    });
    xs.iter()
        .zip(sums)
        .map(|(&x, c)| CorrelationRecord::new(0, x, mode, c.0 as i64 - 2 * c.1 as i64, c.0))
        .collect()
}

/// C = Σ_{n≤X} λ(n)λ(n+h) / X, or D = Σ μ(n)μ(n+h) / Y₂ in μ-mode.
pub fn correlation(
    table: &FactorSignTable,
    x: u64,
    h: u64,
    mode: Mode,
) -> Result<CorrelationRecord> {
    Ok(correlation_at(table, &[x], h, mode)?.remove(0))
}

/// [`correlation`] for several ascending X in one pass.
pub fn correlation_at(
    table: &FactorSignTable,
    xs: &[u64],
    h: u64,
    mode: Mode,
) -> Result<Vec<CorrelationRecord>> {
    if h == 0 {
        return Err(Error::arg("h", "must be at least 1"));
    }
    check_checkpoints(table, xs, h)?;
    let sign = table.sign_words();
    let sf = table.square_free_words();
    let sums = cumulative(xs, |a, b| match mode {
        Mode::Lambda => scan::lambda_disagreements(sign, a, b, h),
        Mode::Moebius => scan::moebius_disagreements(sign, sf, a, b, h),
    });
    xs.iter()
        .zip(sums)
        .map(|(&x, c)| CorrelationRecord::new(h, x, mode, c.0 as i64 - 2 * c.1 as i64, c.0))
        .collect()
}

/// Joint sign counts L_ij of (n, n + h) over n ≤ X.
pub fn contingency(
    table: &FactorSignTable,
    x: u64,
    h: u64,
    mode: Mode,
) -> Result<ContingencyTable> {
    Ok(contingency_at(table, &[x], h, mode)?.remove(0))
}

/// [`contingency`] for several ascending X in one pass.
pub fn contingency_at(
    table: &FactorSignTable,
    xs: &[u64],
    h: u64,
    mode: Mode,
) -> Result<Vec<ContingencyTable>> {
    if h == 0 {
        return Err(Error::arg("h", "must be at least 1"));
    }
    check_checkpoints(table, xs, h)?;
    let sign = table.sign_words();
    let sf = table.square_free_words();
    let counts = cumulative(xs, |a, b| match mode {
        Mode::Lambda => scan::lambda_pairs(sign, a, b, h),
        Mode::Moebius => scan::moebius_pairs(sign, sf, a, b, h),
    });
    Ok(xs
        .iter()
        .zip(counts)
        .map(|(&x, c)| ContingencyTable::from_pairs(c, mode, h, x))
        .collect())
}

pub(crate) fn square_free_pair_count(table: &FactorSignTable, x: u64, h: u64) -> Result<u64> {
    check_window(table, x, h)?;
    Ok(scan::square_free_pairs(table.square_free_words(), 0, x, h))
}

pub fn conditional_expectations(ct: &ContingencyTable) -> Result<ConditionalExpectations> {
    let l0 = ct.row(0);
    let l1 = ct.row(1);
    if l0 == 0 || l1 == 0 {
        return Err(Error::DegenerateMarginal(format!(
            "row marginals L0 = {l0}, L1 = {l1} must both be positive"
        )));
    }
    let [[l00, l01], [l10, l11]] = ct.counts.map(|r| r.map(|v| v as f64));
    let (l0f, l1f, x) = (l0 as f64, l1 as f64, ct.total as f64);
    let e_plus = (l00 - l01) / l0f;
    let e_minus = (l10 - l11) / l1f;
    let rhs = (ct.signed_sum() as f64 / x) * (x / l0f) + ((l10 - l11) / x) * (x / l0f - x / l1f);
    Ok(ConditionalExpectations {
        e_plus,
        e_minus,
        l0,
        l1,
        identity_residual: ((e_plus - e_minus) - rhs).abs(),
    })
}

/// Q = Σ (L_ij − Ê_ij)² / Ê_ij with Ê_ij = L_{i+} L_{+j} / total.
pub fn chi_square(ct: &ContingencyTable) -> Result<ChiSquare> {
    let rows = [ct.row(0), ct.row(1)];
    let cols = [ct.col(0), ct.col(1)];
    if rows.contains(&0) || cols.contains(&0) {
        return Err(Error::DegenerateMarginal(format!(
            "marginals rows = {rows:?}, cols = {cols:?} must all be positive (h = {}, X = {})",
            ct.h, ct.x
        )));
    }
    let total = ct.total as f64;
    let mut q = 0.0;
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            let expected = r as f64 * c as f64 / total;
            let d = ct.counts[i][j] as f64 - expected;
            q += d * d / expected;
        }
    }
    Ok(ChiSquare {
        q,
        reject: q > CHI_SQUARE_CRITICAL_95,
    })
}

/// value(X) / value(10·X) for consecutive powers of ten.
pub fn decade_decay_ratios(values: &[(u64, f64)]) -> Result<Vec<f64>> {
    for &(x, v) in values {
        if x == 0 || 10u64.pow(x.ilog10()) != x {
            return Err(Error::arg("x", format!("{x} is not a power of ten")));
        }
        if v == 0.0 {
            return Err(Error::UndefinedRatio(format!("value at X = {x} is zero")));
        }
    }
    values
        .windows(2)
        .map(|w| {
            if w[1].0 != w[0].0 * 10 {
                return Err(Error::arg(
                    "x",
                    format!("{} and {} are not consecutive decades", w[0].0, w[1].0),
                ));
            }
            Ok(w[0].1 / w[1].1)
        })
        .collect()
}
