//! Exact summatory functions, computed blockwise with compensated sums.

use super::gcd;
use super::sieve::{map_blocks, SieveBlock, SieveConfig};
use crate::error::{Error, Result};
use crate::numeric::KahanSum;

/// Which arithmetic function a blockwise sum runs over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Mobius,
    Liouville,
    VonMangoldt,
    /// μ restricted to n ≡ a (mod q).
    MobiusAp { q: u64, a: u64 },
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} outside [0, 1]")));
    }
    Ok(())
}

#[inline]
fn weight_at(b: &SieveBlock, i: usize, n: u64, w: Weight) -> f64 {
    match w {
        Weight::Mobius => b.mu[i] as f64,
        Weight::Liouville => b.liouville[i] as f64,
        Weight::VonMangoldt => b.lambda_vm[i],
        Weight::MobiusAp { q, a } => {
            if n % q == a {
                b.mu[i] as f64
            } else {
                0.0
            }
        }
    }
}

/// Per-block compensated partial sums of `w(n) n^{-alpha}` over `[1, x]`,
/// in ascending block order.
pub fn weighted_block_sums(
    x: u64,
    alpha: f64,
    w: Weight,
    cfg: &SieveConfig,
) -> Result<Vec<KahanSum<f64>>> {
    map_blocks(x, cfg, |b| {
        let mut k = KahanSum::new();
        for i in 0..b.len() {
            let n = b.lo + i as u64;
            let v = weight_at(b, i, n, w);
            if v != 0.0 {
                k.add(if alpha == 0.0 { v } else { v * (n as f64).powf(-alpha) });
            }
        }
        k
    })
}

/// Folds block partials in the given order.
pub fn combine(parts: &[KahanSum<f64>], order: impl IntoIterator<Item = usize>) -> f64 {
    let mut acc = KahanSum::new();
    for i in order {
        acc.merge(&parts[i]);
    }
    acc.value()
}

fn weighted_sum(x: u64, alpha: f64, w: Weight, cfg: &SieveConfig) -> Result<f64> {
    if x == 0 {
        return Err(Error::InvalidArgument("x must be >= 1".into()));
    }
    let parts = weighted_block_sums(x, alpha, w, cfg)?;
    Ok(combine(&parts, 0..parts.len()))
}

/// M_α(x) = Σ_{n≤x} μ(n) n^{-α}.
pub fn summatory_m(x: u64, alpha: f64, cfg: &SieveConfig) -> Result<f64> {
    check_alpha(alpha)?;
    weighted_sum(x, alpha, Weight::Mobius, cfg)
}

/// L_α(x) = Σ_{n≤x} λ(n) n^{-α}.
pub fn summatory_l(x: u64, alpha: f64, cfg: &SieveConfig) -> Result<f64> {
    check_alpha(alpha)?;
    weighted_sum(x, alpha, Weight::Liouville, cfg)
}

/// M(x; q, a) = Σ_{n≤x, n≡a (q)} μ(n).
pub fn summatory_m_ap(x: u64, q: u64, a: u64, cfg: &SieveConfig) -> Result<f64> {
    let a = checked_residue(q, a)?;
    weighted_sum(x, 0.0, Weight::MobiusAp { q, a }, cfg)
}

/// ψ(x) = Σ_{n≤x} Λ(n).
pub fn chebyshev_psi(x: u64, cfg: &SieveConfig) -> Result<f64> {
    weighted_sum(x, 0.0, Weight::VonMangoldt, cfg)
}

/// Reduces `a` mod `q` after checking `q ≥ 2` and `gcd(a, q) = 1`.
pub fn checked_residue(q: u64, a: u64) -> Result<u64> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("modulus q = {q} must be >= 2")));
    }
    if gcd(a, q) != 1 {
        return Err(Error::InvalidResidue { a, q });
    }
    Ok(a % q)
}
