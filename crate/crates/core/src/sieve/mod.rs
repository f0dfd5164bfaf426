//! Segmented sieves for the Möbius function and the k-free indicator.
//!
//! k-free marking strides the multiples of `p^k` for every prime
//! `p ≤ hi^(1/k)`; the divisor-sum identity `μ^(k)(n) = Σ_{d^k | n} μ(d)` is
//! kept only as the brute-force oracle [`kfree_via_mobius_sum`].

pub mod cache;
mod primes;

use rayon::prelude::*;

pub use primes::{iroot, primes_up_to};

use crate::{Error, Result};

/// Largest sieve bound accepted by [`sieve_mobius`].
pub const MAX_LIMIT: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveConfig {
    /// Integers per work unit. Must be a positive multiple of 64.
    pub segment_size: u64,
    /// Upper bound on the bytes a single output block may occupy.
    pub memory_budget: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_size: 1 << 22,
            memory_budget: 2 << 30,
        }
    }
}

impl SieveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.segment_size == 0 || self.segment_size % 64 != 0 {
            return Err(Error::InvalidArgument(format!(
                "segment size {} is not a positive multiple of 64",
                self.segment_size
            )));
        }
        if self.segment_size / 8 > self.memory_budget {
            return Err(Error::Capacity(format!(
                "segment of {} integers exceeds the memory budget of {} bytes",
                self.segment_size, self.memory_budget
            )));
        }
        Ok(())
    }

    fn check_budget(&self, bytes: u64, what: &str) -> Result<()> {
        if bytes > self.memory_budget {
            return Err(Error::Capacity(format!(
                "{what} needs {bytes} bytes, budget is {}",
                self.memory_budget
            )));
        }
        Ok(())
    }
}

/// Bit-packed `μ^(k)(n)` for `n ∈ [start, start + len)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorBlock {
    k: u32,
    start: u64,
    len: u64,
    words: Vec<u64>,
}

impl IndicatorBlock {
    /// Wraps raw words; bits past `len` are cleared.
    pub fn from_words(k: u32, start: u64, len: u64, mut words: Vec<u64>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k = {k} must be at least 2")));
        }
        if start == 0 {
            return Err(Error::InvalidArgument("blocks start at n >= 1".into()));
        }
        if words.len() as u64 != len.div_ceil(64) {
            return Err(Error::InvalidArgument(format!(
                "{} words cannot hold exactly {len} bits",
                words.len()
            )));
        }
        if len % 64 != 0 {
            let last = words.last_mut().unwrap();
            *last &= (1u64 << (len % 64)) - 1;
        }
        Ok(Self { k, start, len, words })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Last integer covered (inclusive).
    pub fn last(&self) -> u64 {
        self.start + self.len - 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn covers(&self, n: u64) -> bool {
        n >= self.start && n - self.start < self.len
    }

    /// `μ^(k)(n)`; panics if `n` is outside the block.
    #[inline]
    pub fn get(&self, n: u64) -> bool {
        assert!(self.covers(n), "{n} outside [{}, {}]", self.start, self.last());
        let i = n - self.start;
        (self.words[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of k-free integers in `[start, n]`.
    pub fn count_through(&self, n: u64) -> u64 {
        if n < self.start {
            return 0;
        }
        let i = (n - self.start).min(self.len - 1) + 1;
        let full = (i / 64) as usize;
        let mut c: u64 = self.words[..full].iter().map(|w| w.count_ones() as u64).sum();
        if i % 64 != 0 {
            c += (self.words[full] & ((1u64 << (i % 64)) - 1)).count_ones() as u64;
        }
        c
    }

    /// The k-free integers of the block in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = u64> + '_ {
        let start = self.start;
        self.words.iter().enumerate().flat_map(move |(wi, &w)| {
            let base = start + 64 * wi as u64;
            BitIter(w).map(move |b| base + b as u64)
        })
    }

    /// Joins adjacent blocks of the same `k`.
    pub fn concat(blocks: &[IndicatorBlock]) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InvalidArgument("nothing to concatenate".into()))?;
        let k = first.k;
        let mut len = 0u64;
        let mut words: Vec<u64> = Vec::new();
        for b in blocks {
            if b.k != k || b.start != first.start + len {
                return Err(Error::InvalidArgument("blocks are not contiguous".into()));
            }
            let shift = (len % 64) as u32;
            if shift == 0 {
                words.extend_from_slice(&b.words);
            } else {
                for &w in &b.words {
                    *words.last_mut().unwrap() |= w << shift;
                    words.push(w >> (64 - shift));
                }
            }
            len += b.len;
            words.truncate(len.div_ceil(64) as usize);
        }
        Self::from_words(k, first.start, len, words)
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let t = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(t)
    }
}

/// `μ(n)` for `n ∈ [start, start + len)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusBlock {
    start: u64,
    values: Vec<i8>,
}

impl MobiusBlock {
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn get(&self, n: u64) -> i8 {
        self.values[(n - self.start) as usize]
    }

    /// Mertens function summed over the block.
    pub fn mertens(&self) -> i64 {
        self.values.iter().map(|&v| v as i64).sum()
    }
}

/// `μ(n)` for `1 ≤ n ≤ limit` with the default configuration.
pub fn sieve_mobius(limit: u64) -> Result<MobiusBlock> {
    sieve_mobius_with(1, limit, &SieveConfig::default())
}

pub fn sieve_mobius_with(lo: u64, hi: u64, config: &SieveConfig) -> Result<MobiusBlock> {
    config.validate()?;
    if lo == 0 || lo > hi {
        return Err(Error::InvalidArgument(format!("empty or invalid range [{lo}, {hi}]")));
    }
    if hi > MAX_LIMIT {
        return Err(Error::Capacity(format!("limit {hi} exceeds 2^40")));
    }
    config.check_budget(hi - lo + 1, "Möbius block")?;
    let primes = primes_up_to(iroot(hi, 2));
    let values: Vec<i8> = segments(lo, hi, config.segment_size)
        .into_par_iter()
        .map(|(a, b)| mobius_segment(a, b, &primes))
        .flatten_iter()
        .collect();
    Ok(MobiusBlock { start: lo, values })
}

fn mobius_segment(a: u64, b: u64, primes: &[u64]) -> Vec<i8> {
    let n = (b - a + 1) as usize;
    let mut mu = vec![1i8; n];
    let mut prod = vec![1u64; n];
    for &p in primes {
        if p * p > b {
            break;
        }
        let mut m = a.div_ceil(p) * p;
        while m <= b {
            let i = (m - a) as usize;
            mu[i] = -mu[i];
            prod[i] *= p;
            m += p;
        }
        let pp = p * p;
        let mut m = a.div_ceil(pp) * pp;
        while m <= b {
            mu[(m - a) as usize] = 0;
            m += pp;
        }
    }
    for (i, (v, &pr)) in mu.iter_mut().zip(&prod).enumerate() {
        if *v != 0 && pr != a + i as u64 {
            *v = -*v;
        }
    }
    mu
}

/// k-free indicator over `[lo, hi]` with the default configuration.
pub fn sieve_kfree(k: u32, lo: u64, hi: u64) -> Result<IndicatorBlock> {
    sieve_kfree_with(k, lo, hi, &SieveConfig::default())
}

/// k-free indicator over `[lo, hi]`. Segments run on the current rayon pool;
/// the output does not depend on the number of workers.
pub fn sieve_kfree_with(k: u32, lo: u64, hi: u64, config: &SieveConfig) -> Result<IndicatorBlock> {
    config.validate()?;
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 2")));
    }
    if lo == 0 || lo > hi {
        return Err(Error::InvalidArgument(format!("empty or invalid range [{lo}, {hi}]")));
    }
    if hi == u64::MAX {
        return Err(Error::Capacity("upper bound must be below 2^64 - 1".into()));
    }
    let len = hi - lo + 1;
    config.check_budget(len.div_ceil(8), "indicator block")?;
    let powers: Vec<u64> = primes_up_to(iroot(hi, k))
        .into_iter()
        .map(|p| p.pow(k))
        .collect();
    let words: Vec<u64> = segments(lo, hi, config.segment_size)
        .into_par_iter()
        .map(|(a, b)| kfree_segment(a, b, &powers))
        .flatten_iter()
        .collect();
    IndicatorBlock::from_words(k, lo, len, words)
}

fn kfree_segment(a: u64, b: u64, powers: &[u64]) -> Vec<u64> {
    let n = b - a + 1;
    let mut words = vec![u64::MAX; n.div_ceil(64) as usize];
    for &pk in powers {
        if pk > b {
            break;
        }
        let mut m = a.div_ceil(pk) * pk;
        while m <= b {
            let i = m - a;
            words[(i / 64) as usize] &= !(1u64 << (i % 64));
            m += pk;
        }
    }
    if n % 64 != 0 {
        *words.last_mut().unwrap() &= (1u64 << (n % 64)) - 1;
    }
    words
}

/// Inclusive `(a, b)` pieces of `[lo, hi]`, each `seg` long except the last.
fn segments(lo: u64, hi: u64, seg: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut a = lo;
    loop {
        let b = a.saturating_add(seg - 1).min(hi);
        out.push((a, b));
        if b == hi {
            break;
        }
        a = b + 1;
    }
    out
}

/// `Σ_{d^k | n} μ(d)` by trial division; the reference for [`sieve_kfree`].
pub fn kfree_via_mobius_sum(k: u32, n: u64) -> u8 {
    assert!(n >= 1 && k >= 2);
    let mut total = 0i64;
    let mut d = 1u64;
    while let Some(dk) = d.checked_pow(k).filter(|&v| v <= n) {
        if n % dk == 0 {
            total += mobius_by_factoring(d) as i64;
        }
        d += 1;
    }
    debug_assert!(total == 0 || total == 1);
    total as u8
}

fn mobius_by_factoring(mut n: u64) -> i8 {
    let mut mu = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}
