//! Segmented sieve of Eratosthenes producing Ω(n), λ(n) and the square-free
//! flag for every n in `[1, limit]`.
//!
//! Each segment keeps a running "smooth part" per n: every time a prime power
//! p^k divides n, Ω is bumped and the smooth part multiplied by p. Once every
//! prime p ≤ √limit has been walked, an n whose smooth part is still below n
//! has exactly one prime factor above √limit, which adds one more to Ω.
//! Multiples of p² clear the square-free bit.
//!
//! Segments are rounded up to whole 64-bit plane words so that workers write
//! disjoint slices of the output.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::table::{words_for, FactorSignTable, NValues, Sign};

pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 22;

/// Per-n scratch: smooth part (u32) plus Ω (u8).
const SCRATCH_BYTES_PER_N: u64 = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveConfig {
    /// Inclusive upper bound of the sieved range.
    pub limit: u64,
    /// Values per segment.
    pub segment_size: u64,
    pub include_omega: bool,
    /// Upper bound on the bytes the sieve may allocate; `None` means unbounded.
    pub memory_budget: Option<u64>,
}

impl SieveConfig {
    pub fn new(limit: u64) -> Self {
        SieveConfig {
            limit,
            segment_size: DEFAULT_SEGMENT_SIZE,
            include_omega: false,
            memory_budget: None,
        }
    }

    pub fn with_omega(mut self, include: bool) -> Self {
        self.include_omega = include;
        self
    }

    pub fn with_segment_size(mut self, segment_size: u64) -> Self {
        self.segment_size = segment_size;
        self
    }

    pub fn with_memory_budget(mut self, budget: Option<u64>) -> Self {
        self.memory_budget = budget;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.limit == 0 {
            return Err(Error::InvalidRange("limit must be at least 1".into()));
        }
        if self.limit > u32::MAX as u64 {
            return Err(Error::InvalidRange(format!(
                "limit {} exceeds the supported maximum {}",
                self.limit,
                u32::MAX
            )));
        }
        if self.segment_size == 0 {
            return Err(Error::arg("segment_size", "must be at least 1"));
        }
        Ok(())
    }

    fn effective_segment(&self) -> u64 {
        self.segment_size.div_ceil(64) * 64
    }

    /// Bytes the sieve allocates with `workers` concurrent segments in flight.
    pub fn estimated_memory(&self, workers: usize) -> u64 {
        let planes = 2 * 8 * words_for(self.limit) as u64;
        let omega = if self.include_omega { self.limit } else { 0 };
        let segment = self.effective_segment().min(self.limit.div_ceil(64) * 64);
        let base_primes = 4 * (self.limit as f64).sqrt() as u64;
        planes + omega + base_primes + workers as u64 * segment * SCRATCH_BYTES_PER_N
    }
}

/// All primes ≤ `n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Sieves `[1, config.limit]`. The result does not depend on the segment size
/// or on the number of rayon workers.
pub fn sieve_range(config: &SieveConfig) -> Result<FactorSignTable> {
    config.validate()?;
    let workers = rayon::current_num_threads();
    if let Some(budget) = config.memory_budget {
        let needed = config.estimated_memory(workers);
        if needed > budget {
            return Err(Error::Resource { needed, budget });
        }
    }

    let limit = config.limit;
    let base = primes_up_to(isqrt(limit));
    let words = words_for(limit);
    let mut sign = vec![0u64; words];
    let mut square_free = vec![0u64; words];
    let mut omega = config.include_omega.then(|| vec![0u8; limit as usize]);

    let seg = config.effective_segment();
    let seg_words = (seg / 64) as usize;

    let mut omega_chunks: Vec<Option<&mut [u8]>> = match omega.as_mut() {
        Some(om) => om.chunks_mut(seg as usize).map(Some).collect(),
        None => std::iter::repeat_with(|| None)
            .take(words.div_ceil(seg_words))
            .collect(),
    };

    sign.par_chunks_mut(seg_words)
        .zip(square_free.par_chunks_mut(seg_words))
        .zip(omega_chunks.par_iter_mut())
        .enumerate()
        .for_each_init(
            || Scratch::new(seg.min(limit) as usize),
            |scratch, (k, ((sign_out, sf_out), om_out))| {
                let lo = 1 + k as u64 * seg;
                let hi = (lo + seg).min(limit + 1);
                sieve_segment(
                    &base,
                    lo,
                    hi,
                    scratch,
                    sign_out,
                    sf_out,
                    om_out.as_deref_mut(),
                );
            },
        );

    FactorSignTable::from_planes(1, limit, sign, square_free, omega)
}

struct Scratch {
    smooth: Vec<u32>,
    omega: Vec<u8>,
}

impl Scratch {
    fn new(len: usize) -> Self {
        Scratch {
            smooth: vec![1; len],
            omega: vec![0; len],
        }
    }
}

/// Sieves `[lo, hi)` into the given output slices (index 0 is `lo`).
fn sieve_segment(
    base: &[u64],
    lo: u64,
    hi: u64,
    scratch: &mut Scratch,
    sign_out: &mut [u64],
    sf_out: &mut [u64],
    omega_out: Option<&mut [u8]>,
) {
    let len = (hi - lo) as usize;
    let smooth = &mut scratch.smooth[..len];
    let omega = &mut scratch.omega[..len];
    smooth.fill(1);
    omega.fill(0);

    for w in sf_out.iter_mut() {
        *w = u64::MAX;
    }
    let tail = len % 64;
    if tail != 0 {
        sf_out[len / 64] = (1u64 << tail) - 1;
    }

    for &p in base {
        let mut pk = p;
        let mut k = 1;
        while pk < hi {
            let first = lo.div_ceil(pk) * pk;
            let mut m = (first - lo) as usize;
            let step = pk as usize;
            while m < len {
                omega[m] += 1;
                smooth[m] *= p as u32;
                if k == 2 {
                    sf_out[m / 64] &= !(1u64 << (m % 64));
                }
                m += step;
            }
            match pk.checked_mul(p) {
                Some(next) => pk = next,
                None => break,
            }
            k += 1;
        }
    }

    for w in sign_out.iter_mut() {
        *w = 0;
    }
    for (i, (o, &s)) in omega.iter_mut().zip(smooth.iter()).enumerate() {
        if s as u64 != lo + i as u64 {
            *o += 1;
        }
        sign_out[i / 64] |= ((*o & 1) as u64) << (i % 64);
    }
    if let Some(out) = omega_out {
        out.copy_from_slice(omega);
    }
}

/// Ω, λ and square-freeness of `n` by trial division. Intended for
/// verification only.
pub fn factor_oracle(n: u64) -> Result<NValues> {
    if n == 0 {
        return Err(Error::arg("n", "must be at least 1"));
    }
    let mut rest = n;
    let mut omega = 0u32;
    let mut square_free = true;
    let mut d = 2u64;
    while d * d <= rest {
        let mut e = 0;
        while rest.is_multiple_of(d) {
            rest /= d;
            e += 1;
        }
        if e >= 2 {
            square_free = false;
        }
        omega += e;
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        omega += 1;
    }
    Ok(NValues {
        n,
        omega: Some(omega as u8),
        lambda: Sign::from_parity(omega),
        square_free,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(n: u64) -> (u8, Sign, bool) {
        let v = factor_oracle(n).unwrap();
        (v.omega.unwrap(), v.lambda, v.square_free)
    }

    #[test]
    fn oracle_small_cases() {
        assert_eq!(oracle(1), (0, Sign::Plus, true));
        assert_eq!(oracle(12), (3, Sign::Minus, false));
        assert_eq!(oracle(30), (3, Sign::Minus, true));
        assert_eq!(oracle(100), (4, Sign::Plus, false));
        assert_eq!(oracle(100_000_000), (16, Sign::Plus, false));
        assert_eq!(oracle(999_983), (1, Sign::Minus, true));
        assert!(factor_oracle(0).is_err());
    }

    #[test]
    fn sieve_matches_oracle_on_small_range() {
        let t = sieve_range(
            &SieveConfig::new(5000)
                .with_omega(true)
                .with_segment_size(700),
        )
        .unwrap();
        for v in t.iter() {
            let o = factor_oracle(v.n).unwrap();
            assert_eq!(v, o, "n = {}", v.n);
        }
    }

    #[test]
    fn single_value_range() {
        let t = sieve_range(&SieveConfig::new(1).with_omega(true)).unwrap();
        let one = t.query(1).unwrap();
        assert_eq!(
            (one.omega, one.lambda, one.square_free),
            (Some(0), Sign::Plus, true)
        );
    }

    #[test]
    fn twelve() {
        let t = sieve_range(&SieveConfig::new(20).with_omega(true)).unwrap();
        let v = t.query(12).unwrap();
        assert_eq!(
            (v.omega, v.lambda, v.square_free),
            (Some(3), Sign::Minus, false)
        );
    }

    #[test]
    fn zero_limit_is_invalid_range() {
        assert!(matches!(
            sieve_range(&SieveConfig::new(0)),
            Err(Error::InvalidRange(_))
        ));
    }

    #[test]
    fn zero_segment_rejected() {
        assert!(sieve_range(&SieveConfig::new(10).with_segment_size(0)).is_err());
    }

    #[test]
    fn budget_is_enforced_and_stated() {
        let cfg = SieveConfig::new(1_000_000).with_memory_budget(Some(1000));
        match sieve_range(&cfg) {
            Err(Error::Resource { budget, needed }) => {
                assert_eq!(budget, 1000);
                assert!(needed > 1000);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn primes_small() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
    }

    #[test]
    fn isqrt_edges() {
        for n in [
            0u64,
            1,
            2,
            3,
            4,
            15,
            16,
            17,
            99_999_999,
            100_000_000,
            u32::MAX as u64,
        ] {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "n = {n}");
        }
    }
}
