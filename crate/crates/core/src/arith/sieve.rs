//! Segmented sieve for the Möbius, Liouville and von Mangoldt functions.

use crate::error::{Error, Result};
use rayon::prelude::*;

/// Default segment length (2^22 integers).
pub const DEFAULT_BLOCK: u64 = 1 << 22;

/// Default ceiling on the largest integer a sweep may sieve to.
pub const DEFAULT_MAX_X: u64 = 1 << 27;

#[derive(Debug, Clone, Copy)]
pub struct SieveConfig {
    /// Segment length used when a range is split into blocks.
    pub block_size: u64,
    /// Largest integer a multi-block sweep may reach.
    pub max_x: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            block_size: DEFAULT_BLOCK,
            max_x: DEFAULT_MAX_X,
        }
    }
}

/// Exact values of μ, λ and Λ on the closed range `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveBlock {
    pub lo: u64,
    pub hi: u64,
    pub mu: Vec<i8>,
    pub liouville: Vec<i8>,
    /// Λ(n) in natural-log units.
    pub lambda_vm: Vec<f64>,
}

impl SieveBlock {
    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    #[inline]
    pub fn index(&self, n: u64) -> usize {
        (n - self.lo) as usize
    }

    /// Whether `n` (inside the block) is prime.
    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        let i = self.index(n);
        self.lambda_vm[i] > 0.0 && self.mu[i] == -1
    }
}

/// Primes up to `limit` by a linear sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u64> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u64);
        }
        let si = spf[i] as u64;
        for &p in &primes {
            if p > si || p * i as u64 > limit {
                break;
            }
            spf[(p as usize) * i] = p as u32;
        }
    }
    primes
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Sieves `[lo, hi]` (inclusive) as a single block.
pub fn sieve_range(lo: u64, hi: u64, cfg: &SieveConfig) -> Result<SieveBlock> {
    if lo < 1 || hi <= lo || hi > i64::MAX as u64 {
        return Err(Error::InvalidArgument(format!(
            "sieve range must satisfy 1 <= lo < hi <= 2^63-1, got [{lo}, {hi}]"
        )));
    }
    let len = hi - lo + 1;
    if len > cfg.block_size {
        return Err(Error::Capacity {
            requested: len,
            limit: cfg.block_size,
        });
    }
    let primes = primes_up_to(isqrt(hi));
    Ok(sieve_block_with(lo, hi, &primes))
}

/// Sieves `[lo, hi]` using a precomputed list of primes covering `sqrt(hi)`.
pub(crate) fn sieve_block_with(lo: u64, hi: u64, primes: &[u64]) -> SieveBlock {
    let len = (hi - lo + 1) as usize;
    let mut mu = vec![1i8; len];
    let mut liouville = vec![1i8; len];
    let mut lambda_vm = vec![0.0f64; len];
    // Product of the prime-power parts found so far; a shortfall against n
    // means exactly one prime factor above sqrt(hi) remains.
    let mut smooth = vec![1u64; len];
    let root = isqrt(hi);

    for &p in primes {
        if p > root {
            break;
        }
        let logp = (p as f64).ln();
        let mut pk = p;
        let mut k = 1;
        loop {
            let start = lo.div_ceil(pk) * pk;
            let mut m = start;
            while m <= hi {
                let i = (m - lo) as usize;
                if k == 1 {
                    mu[i] = -mu[i];
                } else if k == 2 {
                    mu[i] = 0;
                }
                liouville[i] = -liouville[i];
                smooth[i] *= p;
                m += pk;
            }
            if pk >= lo && pk <= hi {
                lambda_vm[(pk - lo) as usize] = logp;
            }
            match pk.checked_mul(p) {
                Some(next) if next <= hi => {
                    pk = next;
                    k += 1;
                }
                _ => break,
            }
        }
    }

    for i in 0..len {
        let n = lo + i as u64;
        if smooth[i] < n {
            mu[i] = -mu[i];
            liouville[i] = -liouville[i];
            if smooth[i] == 1 {
                lambda_vm[i] = (n as f64).ln();
            }
        }
    }

    SieveBlock {
        lo,
        hi,
        mu,
        liouville,
        lambda_vm,
    }
}

/// Splits `[1, x]` into blocks and sieves them, in parallel, returning
/// per-block results in ascending order.
pub fn map_blocks<R, F>(x: u64, cfg: &SieveConfig, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&SieveBlock) -> R + Sync + Send,
{
    map_blocks_range(1, x, cfg, f)
}

pub fn map_blocks_range<R, F>(lo: u64, hi: u64, cfg: &SieveConfig, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&SieveBlock) -> R + Sync + Send,
{
    if lo < 1 || hi < lo {
        return Err(Error::InvalidArgument(format!("bad sweep range [{lo}, {hi}]")));
    }
    if hi > cfg.max_x {
        return Err(Error::Capacity {
            requested: hi,
            limit: cfg.max_x,
        });
    }
    let primes = primes_up_to(isqrt(hi));
    let bs = cfg.block_size.max(1);
    let starts: Vec<u64> = (0..)
        .map(|k| lo + k * bs)
        .take_while(|&s| s <= hi)
        .collect();
    // Bound peak memory by processing a handful of blocks per wave.
    let wave = rayon::current_num_threads().max(1) * 2;
    let mut out = Vec::with_capacity(starts.len());
    for chunk in starts.chunks(wave) {
        let mut part: Vec<R> = chunk
            .par_iter()
            .map(|&s| {
                let e = (s + bs - 1).min(hi);
                let block = if s == e {
                    // Single-integer blocks are legal inside a sweep.
                    sieve_single(s, &primes)
                } else {
                    sieve_block_with(s, e, &primes)
                };
                f(&block)
            })
            .collect();
        out.append(&mut part);
    }
    Ok(out)
}

fn sieve_single(n: u64, primes: &[u64]) -> SieveBlock {
    if n == 1 {
        return SieveBlock {
            lo: 1,
            hi: 1,
            mu: vec![1],
            liouville: vec![1],
            lambda_vm: vec![0.0],
        };
    }
    sieve_block_with(n - 1, n, primes).tail_from(n)
}

impl SieveBlock {
    fn tail_from(self, n: u64) -> SieveBlock {
        let i = self.index(n);
        SieveBlock {
            lo: n,
            hi: self.hi,
            mu: self.mu[i..].to_vec(),
            liouville: self.liouville[i..].to_vec(),
            lambda_vm: self.lambda_vm[i..].to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_mu(n: u64) -> i8 {
        let mut m = n;
        let mut sign = 1i8;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                m /= p;
                if m % p == 0 {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if m > 1 {
            sign = -sign;
        }
        sign
    }

    #[test]
    fn first_ten() {
        let b = sieve_range(1, 10, &SieveConfig::default()).unwrap();
        assert_eq!(b.mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
        assert_eq!(b.liouville, vec![1, -1, -1, 1, -1, 1, -1, -1, 1, 1]);
    }

    #[test]
    fn prime_power_lambda() {
        let b = sieve_range(8, 9, &SieveConfig::default()).unwrap();
        assert!((b.lambda_vm[0] - 2f64.ln()).abs() < 1e-15);
        assert!((b.lambda_vm[1] - 3f64.ln()).abs() < 1e-15);
        let b = sieve_range(1, 30, &SieveConfig::default()).unwrap();
        for (i, &l) in b.lambda_vm.iter().enumerate() {
            let n = i as u64 + 1;
            let expect = match n {
                2 | 4 | 8 | 16 => 2f64.ln(),
                3 | 9 | 27 => 3f64.ln(),
                5 | 25 => 5f64.ln(),
                7 | 11 | 13 | 17 | 19 | 23 | 29 => (n as f64).ln(),
                _ => 0.0,
            };
            assert_eq!(l, expect, "n = {n}");
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        let cfg = SieveConfig {
            block_size: 100,
            max_x: 1000,
        };
        assert!(matches!(sieve_range(0, 5, &cfg), Err(Error::InvalidArgument(_))));
        assert!(matches!(sieve_range(5, 5, &cfg), Err(Error::InvalidArgument(_))));
        assert!(matches!(sieve_range(1, 101, &cfg), Err(Error::Capacity { .. })));
    }

    #[test]
    fn mobius_divisor_sum() {
        let b = sieve_range(1, 10_000, &SieveConfig::default()).unwrap();
        for n in 1..=10_000u64 {
            let mut s = 0i64;
            let mut d = 1;
            while d * d <= n {
                if n % d == 0 {
                    s += b.mu[(d - 1) as usize] as i64;
                    if d * d != n {
                        s += b.mu[(n / d - 1) as usize] as i64;
                    }
                }
                d += 1;
            }
            assert_eq!(s, (n == 1) as i64, "n = {n}");
        }
    }

    #[test]
    fn matches_trial_division_high_up() {
        let lo = 1_000_000_000_000u64;
        let b = sieve_range(lo, lo + 2000, &SieveConfig::default()).unwrap();
        for n in (lo..=lo + 2000).step_by(7) {
            assert_eq!(b.mu[b.index(n)], brute_mu(n), "n = {n}");
        }
    }

    #[test]
    fn sweep_single_integer_tail() {
        let cfg = SieveConfig {
            block_size: 10,
            max_x: 1000,
        };
        let blocks = map_blocks(21, &cfg, |b| b.mu.clone()).unwrap();
        let flat: Vec<i8> = blocks.into_iter().flatten().collect();
        let whole = sieve_range(1, 21, &SieveConfig::default()).unwrap();
        assert_eq!(flat, whole.mu);
    }

    proptest! {
        #[test]
        fn invariants_hold(lo in 1u64..1_000_000, len in 2u64..3000) {
            let b = sieve_range(lo, lo + len - 1, &SieveConfig::default()).unwrap();
            for i in 0..b.len() {
                let (m, l) = (b.mu[i] as i32, b.liouville[i] as i32);
                prop_assert!(m * m <= 1);
                prop_assert_eq!(l * l, 1);
                prop_assert_eq!(m * l, m * m);
            }
        }

        #[test]
        fn block_independence(total in 2u64..20_000, bs in 1u64..5000) {
            let whole = sieve_range(1, total, &SieveConfig { block_size: total, max_x: total }).unwrap();
            let cfg = SieveConfig { block_size: bs, max_x: total };
            let parts = map_blocks(total, &cfg, |b| (b.mu.clone(), b.liouville.clone(), b.lambda_vm.clone())).unwrap();
            let mut mu = Vec::new();
            let mut li = Vec::new();
            let mut la = Vec::new();
            for (a, b, c) in parts {
                mu.extend(a);
                li.extend(b);
                la.extend(c);
            }
            prop_assert_eq!(mu, whole.mu);
            prop_assert_eq!(li, whole.liouville);
            prop_assert_eq!(la, whole.lambda_vm);
        }
    }
}
