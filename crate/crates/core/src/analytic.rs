//! Truncated Euler products for square-free densities.
//!
//! A(h₁,…,h_r) = ∏_p (1 − u(p)/p²), where u(p) counts the distinct residues of
//! the shifts modulo p², is the limiting density of n with every n + hᵢ
//! square-free. The conditional density of n + h being square-free given that
//! n is, for square-free h, is ∏_p (1 − 1/(p² − 1)).

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::Serialize;

use crate::correlation::square_free_pair_count;
use crate::error::{Error, Result};
use crate::sieve::{isqrt, primes_up_to};
use crate::table::FactorSignTable;

pub const DEFAULT_TRUNCATION: u64 = 1_000_000;

/// 6/π², the density of square-free integers.
pub fn square_free_density() -> f64 {
    6.0 / (PI * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerProductValue {
    pub value: f64,
    /// Largest prime included in the product.
    pub truncation_prime: u64,
    /// Upper bound on |log| of the product of the omitted factors.
    pub tail_bound: f64,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..=isqrt(p)).all(|d| !p.is_multiple_of(d))
}

fn distinct(shifts: &[i64]) -> Result<BTreeSet<i64>> {
    if shifts.is_empty() {
        return Err(Error::arg("shifts", "must be non-empty"));
    }
    Ok(shifts.iter().copied().collect())
}

fn count_residues(shifts: &BTreeSet<i64>, p: u64) -> u64 {
    let m = (p * p) as i64;
    shifts
        .iter()
        .map(|h| h.rem_euclid(m))
        .collect::<BTreeSet<_>>()
        .len() as u64
}

/// u(p): number of distinct residues of `shifts` modulo p².
pub fn residue_class_count(shifts: &[i64], p: u64) -> Result<u64> {
    let set = distinct(shifts)?;
    if !is_prime(p) {
        return Err(Error::arg("p", format!("{p} is not prime")));
    }
    Ok(count_residues(&set, p))
}

/// Bound on the omitted log-mass past the largest included prime `last`.
///
/// With u(p) ≤ r, −log ∏_{p>P}(1 − u(p)/p²) ≤ Σ_{p>P} r/(p² − r), using
/// −log(1 − t) ≤ t/(1 − t). When P² ≥ 2r every term has p² − r ≥ p²/2, and
/// summing over all integers n > P gives Σ 2r/n² ≤ 2r/P. Below that the bound
/// is reported as infinite.
fn tail_bound(r: u64, last: u64) -> f64 {
    if last == 0 || last * last < 2 * r {
        f64::INFINITY
    } else {
        2.0 * r as f64 / last as f64
    }
}

/// ∏_{p ≤ P} (1 − u(p)/p²).
pub fn euler_product_a(shifts: &[i64], truncation_prime: u64) -> Result<EulerProductValue> {
    let set = distinct(shifts)?;
    if truncation_prime < 2 {
        return Err(Error::arg("truncation_prime", "must be at least 2"));
    }
    let r = set.len() as u64;
    let spread = (set.last().unwrap() - set.first().unwrap()).unsigned_abs();
    let primes = primes_up_to(truncation_prime);
    let log_space = r > 4;

    let mut value = 1.0f64;
    let mut log_value = 0.0f64;
    for &p in &primes {
        let p2 = p * p;
        // past the largest pairwise difference every shift is its own class
        let u = if p2 > spread {
            r
        } else {
            count_residues(&set, p)
        };
        if u >= p2 {
            return Err(Error::Domain(format!(
                "factor 1 - {u}/{p2} at p = {p} is not positive"
            )));
        }
        let t = u as f64 / p2 as f64;
        if log_space {
            log_value += (-t).ln_1p();
        } else {
            value *= 1.0 - t;
        }
    }
    if log_space {
        value = log_value.exp();
    }
    let last = *primes.last().unwrap();
    Ok(EulerProductValue {
        value,
        truncation_prime: last,
        tail_bound: tail_bound(r, last),
    })
}

fn is_square_free(h: u64) -> bool {
    let mut d = 2u64;
    while d * d <= h {
        if h.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

/// ∏_{p ≤ P} (1 − 1/(p² − 1)): the limiting probability that n + h is
/// square-free given that n is, valid for square-free h.
pub fn conditional_squarefree_density(h: u64, truncation_prime: u64) -> Result<f64> {
    if h == 0 || !is_square_free(h) {
        return Err(Error::Unsupported(format!(
            "h = {h} is not square-free; use euler_product_a for general shifts"
        )));
    }
    if truncation_prime < 2 {
        return Err(Error::arg("truncation_prime", "must be at least 2"));
    }
    let primes = primes_up_to(truncation_prime);
    let value: f64 = primes
        .iter()
        .map(|&p| {
            let p2 = (p * p) as f64;
            1.0 - 1.0 / (p2 - 1.0)
        })
        .product();

    if cfg!(debug_assertions) {
        let a = euler_product_a(&[0, h as i64], truncation_prime)?;
        let via_a = PI * PI / 6.0 * a.value;
        let last = *primes.last().unwrap();
        let slack = a.tail_bound + tail_bound(1, last) + 1e-12;
        debug_assert!(
            (via_a / value).ln().abs() <= slack,
            "closed forms disagree: {via_a} vs {value}"
        );
    }
    Ok(value)
}

/// #{n ≤ X : n and n + h square-free} / X.
pub fn empirical_pair_density(table: &FactorSignTable, x: u64, h: u64) -> Result<f64> {
    Ok(square_free_pair_count(table, x, h)? as f64 / x as f64)
}
