//! Ground truth: sieves, summatory functions and normalized error terms.

pub mod series;
pub mod sieve;
pub mod summatory;

pub use series::{error_term_series, error_term_series_vec, ErrorTermKind, ErrorTermSample};
pub use sieve::{sieve_range, SieveBlock, SieveConfig};
pub use summatory::{checked_residue, chebyshev_psi, summatory_l, summatory_m, summatory_m_ap};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}
