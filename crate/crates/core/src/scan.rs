//! Word-parallel popcount kernels over the λ-sign and square-free bit planes.
//!
//! Bit i of a plane describes n = i + 1. A window `[a, b)` of bit indices is
//! split into chunks of [`CHUNK_WORDS`] words that rayon scans independently;
//! partial counts merge by integer addition, so results do not depend on the
//! chunking or the schedule.

use std::ops::AddAssign;

use rayon::prelude::*;

const CHUNK_WORDS: usize = 1 << 13;

/// Bits `[a, b)` restricted to word `w`.
#[inline]
fn window_mask(w: usize, a: u64, b: u64) -> u64 {
    let base = w as u64 * 64;
    let mut m = u64::MAX;
    if base < a {
        m &= u64::MAX << (a - base);
    }
    if base + 64 > b {
        m &= (1u64 << (b - base)) - 1;
    }
    m
}

/// The 64 bits starting at bit `w * 64 + shift`.
#[inline]
fn shifted(words: &[u64], w: usize, shift: u64) -> u64 {
    let k = w + (shift / 64) as usize;
    let r = shift % 64;
    let lo = words.get(k).copied().unwrap_or(0);
    if r == 0 {
        lo
    } else {
        let hi = words.get(k + 1).copied().unwrap_or(0);
        (lo >> r) | (hi << (64 - r))
    }
}

/// Scans bits `[a, b)` of the planes, calling `f(w, mask)` for each touched
/// word, and sums the results.
fn scan<T, F>(a: u64, b: u64, f: F) -> T
where
    T: Default + AddAssign + Send,
    F: Fn(usize, u64) -> T + Sync,
{
    if a >= b {
        return T::default();
    }
    let first = (a / 64) as usize;
    let last = ((b - 1) / 64) as usize;
    let chunks = (last - first) / CHUNK_WORDS + 1;
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = first + c * CHUNK_WORDS;
            let hi = (lo + CHUNK_WORDS).min(last + 1);
            let mut acc = T::default();
            for w in lo..hi {
                acc += f(w, window_mask(w, a, b));
            }
            acc
        })
        .reduce(T::default, |mut x, y| {
            x += y;
            x
        })
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Counts2(pub u64, pub u64);

impl AddAssign for Counts2 {
    fn add_assign(&mut self, o: Self) {
        self.0 += o.0;
        self.1 += o.1;
    }
}

/// Joint sign counts of (n, n + h) over a window.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PairCounts {
    /// Pairs in the window (all n in λ-mode, the doubly square-free n in μ-mode).
    pub total: u64,
    /// Pairs with the first value negative.
    pub first_neg: u64,
    /// Pairs with the shifted value negative.
    pub second_neg: u64,
    pub both_neg: u64,
}

impl AddAssign for PairCounts {
    fn add_assign(&mut self, o: Self) {
        self.total += o.total;
        self.first_neg += o.first_neg;
        self.second_neg += o.second_neg;
        self.both_neg += o.both_neg;
    }
}

/// (count, negatives) of λ over bits `[a, b)`.
pub(crate) fn lambda_single(sign: &[u64], a: u64, b: u64) -> Counts2 {
    scan(a, b, |w, m| {
        Counts2(m.count_ones() as u64, (sign[w] & m).count_ones() as u64)
    })
}

/// (square-free count, square-free negatives) over bits `[a, b)`.
pub(crate) fn moebius_single(sign: &[u64], sf: &[u64], a: u64, b: u64) -> Counts2 {
    scan(a, b, |w, m| {
        let q = sf[w] & m;
        Counts2(q.count_ones() as u64, (sign[w] & q).count_ones() as u64)
    })
}

/// (pairs, sign disagreements) of λ(n), λ(n + h).
pub(crate) fn lambda_disagreements(sign: &[u64], a: u64, b: u64, h: u64) -> Counts2 {
    scan(a, b, |w, m| {
        let d = (sign[w] ^ shifted(sign, w, h)) & m;
        Counts2(m.count_ones() as u64, d.count_ones() as u64)
    })
}

/// (doubly square-free pairs, sign disagreements among them) of μ(n), μ(n + h).
pub(crate) fn moebius_disagreements(sign: &[u64], sf: &[u64], a: u64, b: u64, h: u64) -> Counts2 {
    scan(a, b, |w, m| {
        let q = sf[w] & shifted(sf, w, h) & m;
        let d = (sign[w] ^ shifted(sign, w, h)) & q;
        Counts2(q.count_ones() as u64, d.count_ones() as u64)
    })
}

/// Count of n in the window with n and n + h both square-free.
pub(crate) fn square_free_pairs(sf: &[u64], a: u64, b: u64, h: u64) -> u64 {
    scan(a, b, |w, m| {
        (sf[w] & shifted(sf, w, h) & m).count_ones() as u64
    })
}

pub(crate) fn lambda_pairs(sign: &[u64], a: u64, b: u64, h: u64) -> PairCounts {
    scan(a, b, |w, m| {
        let s0 = sign[w] & m;
        let s1 = shifted(sign, w, h) & m;
        PairCounts {
            total: m.count_ones() as u64,
            first_neg: s0.count_ones() as u64,
            second_neg: s1.count_ones() as u64,
            both_neg: (s0 & s1).count_ones() as u64,
        }
    })
}

pub(crate) fn moebius_pairs(sign: &[u64], sf: &[u64], a: u64, b: u64, h: u64) -> PairCounts {
    scan(a, b, |w, m| {
        let q = sf[w] & shifted(sf, w, h) & m;
        let s0 = sign[w] & q;
        let s1 = shifted(sign, w, h) & q;
        PairCounts {
            total: q.count_ones() as u64,
            first_neg: s0.count_ones() as u64,
            second_neg: s1.count_ones() as u64,
            both_neg: (s0 & s1).count_ones() as u64,
        }
    })
}
