//! Bessel J₀ on the real line.

use crate::numeric::{lit, to_f64, Scalar};
use std::f64::consts::{FRAC_PI_4, PI};

/// J₀(x) to about 1e-15 absolute: power series for |x| ≤ 4, Miller's
/// backward recurrence up to 30, Hankel's expansion beyond.
pub fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= 4.0 {
        series(x)
    } else if x <= 30.0 {
        miller(x)
    } else {
        hankel(x)
    }
}

pub fn bessel_j0<T: Scalar>(x: T) -> T {
    lit(j0(to_f64(x)))
}

fn series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        term *= q / (k * k) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && k > 5 {
            break;
        }
    }
    sum
}

fn miller(x: f64) -> f64 {
    // start well above x; normalize with J₀ + 2ΣJ₂ₖ = 1
    let start = (x as usize + 40) & !1;
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut out = 0.0;
    for n in (1..=start).rev() {
        let mut jm1 = 2.0 * n as f64 / x * j - jp1;
        if jm1.abs() > 1e250 {
            jm1 *= 1e-250;
            j *= 1e-250;
            norm *= 1e-250;
        }
        jp1 = j;
        j = jm1;
        if n == 1 {
            out = j;
        } else if (n - 1) % 2 == 0 {
            norm += 2.0 * j;
        }
    }
    out / (norm + out)
}

fn hankel(x: f64) -> f64 {
    // P ~ Σ (−1)^k a_{2k}/x^{2k}, Q ~ Σ (−1)^{k+1} a_{2k+1}/x^{2k+1},
    // a_k = Π_{j=1}^{k} (2j−1)² / (k! 8^k)
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..60 {
        let term = a / x.powi(k as i32);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        let sign = if ((k + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if prev < 1e-17 {
            break;
        }
        let m = (2 * k + 1) as f64;
        a *= m * m / ((k + 1) as f64 * 8.0);
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
