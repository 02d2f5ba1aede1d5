#![allow(dead_code)]

//! Shared fixtures: published reference tables, printed-precision comparison,
//! and a brute-force oracle built on trial division.

pub mod published;

use chowla::{factor_oracle, Mode};

/// Value of one unit in the last printed digit of `printed`
/// (`"0.0112"` → 1e-4, `"6.80E-05"` → 1e-7).
pub fn last_digit_unit(printed: &str) -> f64 {
    let s = printed.trim().trim_start_matches('-');
    let (mantissa, exp) = match s.split_once(['E', 'e']) {
        Some((m, e)) => (m, e.parse::<i32>().expect("exponent")),
        None => (s, 0),
    };
    let decimals = mantissa.split_once('.').map_or(0, |(_, d)| d.len() as i32);
    10f64.powi(exp - decimals)
}

pub fn parse_printed(printed: &str) -> f64 {
    printed.trim().parse().expect("printed value")
}

/// True when `value` rounds to `printed` at the printed precision.
pub fn rounds_to(value: f64, printed: &str) -> bool {
    let p = parse_printed(printed);
    (value - p).abs() <= 0.5 * last_digit_unit(printed) * (1.0 + 1e-9)
}

/// True when `value` is within one unit of the last printed digit.
pub fn within_last_digit(value: f64, printed: &str) -> bool {
    let p = parse_printed(printed);
    (value - p).abs() <= last_digit_unit(printed) * (1.0 + 1e-9)
}

/// λ(n) or μ(n) straight from trial division.
pub fn oracle_value(n: u64, mode: Mode) -> i64 {
    let v = factor_oracle(n).unwrap();
    match mode {
        Mode::Lambda => v.lambda.value() as i64,
        Mode::Moebius => v.mu() as i64,
    }
}

/// Naive per-(h, X) quantities: (raw correlation sum, normalizer, L counts).
pub struct NaivePair {
    pub raw_sum: i64,
    pub normalizer: u64,
    pub counts: [[u64; 2]; 2],
}

/// Double loop over precomputed oracle values (index 0 is n = 1).
pub fn naive_pair(values: &[i64], x: u64, h: u64, mode: Mode) -> NaivePair {
    let mut raw = 0i64;
    let mut norm = 0u64;
    let mut counts = [[0u64; 2]; 2];
    for n in 1..=x {
        let a = values[(n - 1) as usize];
        let b = values[(n + h - 1) as usize];
        if mode == Mode::Moebius && (a == 0 || b == 0) {
            continue;
        }
        raw += a * b;
        norm += 1;
        counts[(a < 0) as usize][(b < 0) as usize] += 1;
    }
    NaivePair {
        raw_sum: raw,
        normalizer: norm,
        counts,
    }
}

pub fn oracle_values(limit: u64, mode: Mode) -> Vec<i64> {
    (1..=limit).map(|n| oracle_value(n, mode)).collect()
}

/// Q for a 2×2 table via (ad − bc)² N / (r₀ r₁ c₀ c₁), exact up to the final division.
pub fn q_shortcut(c: [[u64; 2]; 2]) -> f64 {
    let [[a, b], [cc, d]] = c.map(|r| r.map(|v| v as i128));
    let n = a + b + cc + d;
    let det = a * d - b * cc;
    let denom = (a + b) as f64 * (cc + d) as f64 * (a + cc) as f64 * (b + d) as f64;
    (det * det) as f64 * n as f64 / denom
}
