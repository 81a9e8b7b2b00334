//! Euler–Maclaurin evaluation of Hurwitz ζ, Riemann ζ and Dirichlet L.

use super::character::Character;
use crate::error::{Error, Result};
use crate::numeric::{exprel, lit, to_f64, Scalar};
use crate::special::bernoulli_even;
use num_complex::Complex;

/// Truncation knobs for the Euler–Maclaurin series.
#[derive(Debug, Clone, Copy)]
pub struct EmConfig {
    pub min_terms: usize,
    /// Direct terms per unit of |Im s|.
    pub terms_per_height: f64,
    pub bernoulli_terms: usize,
    /// Doubling stops here; beyond it an accuracy error is raised.
    pub max_terms: usize,
}

impl Default for EmConfig {
    fn default() -> Self {
        Self {
            min_terms: 20,
            terms_per_height: 2.0,
            bernoulli_terms: 12,
            max_terms: 1 << 18,
        }
    }
}

/// Largest modulus `dirichlet_l` accepts.
pub const MAX_MODULUS: u64 = 100;

fn min_tol<T: Scalar>() -> T {
    if T::epsilon() > lit(1e-10) {
        lit(1e-5)
    } else {
        lit(1e-14)
    }
}

/// One Euler–Maclaurin pass with `n` direct terms; returns the regularized
/// value ζ(s, a) − 1/(s − 1) and a truncation estimate.
fn hurwitz_reg_pass<T: Scalar>(s: Complex<T>, a: T, n: usize, k_max: usize) -> (Complex<T>, T) {
    let mut acc = Complex::new(T::zero(), T::zero());
    for j in 0..n {
        let v = lit::<T>(j as f64) + a;
        let lv = v.ln();
        let mag = (-s.re * lv).exp();
        let (sin, cos) = (-s.im * lv).sin_cos();
        acc = acc + Complex::new(mag * cos, mag * sin);
    }
    let one = Complex::new(T::one(), T::zero());
    let b = lit::<T>(n as f64) + a;
    let lb = b.ln();
    // (b^{1-s} - 1)/(s - 1), finite through s = 1
    acc = acc - exprel((one - s) * lb) * lb;
    let b_neg_s = (-s * lb).exp();
    acc = acc + b_neg_s * lit::<T>(0.5);

    let inv_b = b.recip();
    let inv_b2 = inv_b * inv_b;
    // s(s+1)…(s+2k-2) b^{-s-2k+1} / (2k)!
    let mut p = s * b_neg_s * inv_b * lit::<T>(0.5);
    let mut last = T::zero();
    for k in 1..=k_max + 1 {
        let term = p * lit::<T>(bernoulli_even(k));
        if k <= k_max {
            acc = acc + term;
        } else {
            let kk = lit::<T>((2 * k) as f64);
            let widen = (s + kk - T::one()).norm() / (s.re + kk - T::one()).max(T::one());
            last = term.norm() * widen;
        }
        let k2 = lit::<T>((2 * k) as f64);
        p = p * (s + k2 - T::one()) * (s + k2) * inv_b2 / ((k2 + T::one()) * (k2 + lit(2.0)));
    }
    (acc, last)
}

/// ζ(s, a) − 1/(s − 1) for 0 < a ≤ 1 to absolute tolerance `tol`.
pub fn hurwitz_reg<T: Scalar>(s: Complex<T>, a: T, tol: T, cfg: &EmConfig) -> Result<Complex<T>> {
    if tol < min_tol::<T>() {
        return Err(Error::Accuracy(format!(
            "tolerance {} below the attainable floor {}",
            to_f64(tol),
            to_f64(min_tol::<T>())
        )));
    }
    if !(a > T::zero() && a <= T::one()) {
        return Err(Error::InvalidArgument(format!("Hurwitz shift a = {} outside (0, 1]", to_f64(a))));
    }
    let k_max = cfg.bernoulli_terms.clamp(1, 14);
    let height = to_f64(s.im.abs());
    let mut n = cfg
        .min_terms
        .max((cfg.terms_per_height * height).ceil() as usize)
        .min(cfg.max_terms);
    loop {
        let (v, err) = hurwitz_reg_pass(s, a, n, k_max);
        if err <= tol {
            return Ok(v);
        }
        if n >= cfg.max_terms {
            return Err(Error::Accuracy(format!(
                "Euler-Maclaurin remainder {:e} exceeds tol {:e} at {} terms",
                to_f64(err),
                to_f64(tol),
                n
            )));
        }
        n = (n * 2).min(cfg.max_terms);
    }
}

/// ζ(s, a) for 0 < a ≤ 1.
pub fn hurwitz<T: Scalar>(s: Complex<T>, a: T, tol: T) -> Result<Complex<T>> {
    if s.re == T::one() && s.im == T::zero() {
        return Err(Error::Pole);
    }
    let one = Complex::new(T::one(), T::zero());
    Ok(hurwitz_reg(s, a, tol, &EmConfig::default())? + (s - one).inv())
}

/// Riemann ζ(s) to absolute tolerance `tol`.
pub fn zeta<T: Scalar>(s: Complex<T>, tol: T) -> Result<Complex<T>> {
    zeta_with(s, tol, &EmConfig::default())
}

pub fn zeta_with<T: Scalar>(s: Complex<T>, tol: T, cfg: &EmConfig) -> Result<Complex<T>> {
    if s.re == T::one() && s.im == T::zero() {
        return Err(Error::Pole);
    }
    let one = Complex::new(T::one(), T::zero());
    Ok(hurwitz_reg(s, T::one(), tol, cfg)? + (s - one).inv())
}

/// ζ(x) for real x ≠ 1 at 1e-13.
pub fn zeta_real(x: f64) -> Result<f64> {
    Ok(zeta(Complex::new(x, 0.0), 1e-13)?.re)
}

/// ζ'(x) for real x ≠ 1 by Richardson-extrapolated central differences.
pub fn zeta_derivative_real(x: f64) -> Result<f64> {
    let f = |t: f64| zeta(Complex::new(t, 0.0), 1e-14).map(|z| z.re);
    let h0 = 0.05;
    let levels = 4;
    let mut table = vec![vec![0.0; levels]; levels];
    for i in 0..levels {
        let h = h0 / (1 << i) as f64;
        table[i][0] = (f(x + h)? - f(x - h)?) / (2.0 * h);
        for j in 1..=i {
            let w = 4f64.powi(j as i32);
            table[i][j] = (w * table[i][j - 1] - table[i - 1][j - 1]) / (w - 1.0);
        }
    }
    Ok(table[levels - 1][levels - 1])
}

/// L(s, χ) = q^{-s} Σ_a χ(a) ζ(s, a/q).
pub fn dirichlet_l<T: Scalar>(s: Complex<T>, chi: &Character, tol: T) -> Result<Complex<T>> {
    dirichlet_l_with(s, chi, tol, &EmConfig::default())
}

pub fn dirichlet_l_with<T: Scalar>(
    s: Complex<T>,
    chi: &Character,
    tol: T,
    cfg: &EmConfig,
) -> Result<Complex<T>> {
    let q = chi.modulus();
    if q > MAX_MODULUS {
        return Err(Error::Capacity {
            requested: q,
            limit: MAX_MODULUS,
        });
    }
    let one = Complex::new(T::one(), T::zero());
    let principal = chi.is_principal();
    if principal && s.re == T::one() && s.im == T::zero() {
        return Err(Error::Pole);
    }
    let qf = lit::<T>(q as f64);
    let q_neg_s = (-s * qf.ln()).exp();
    let phi = chi.values().iter().filter(|v| v.norm() > 0.5).count();
    // Spread the budget so the q^{-s}-scaled total stays within tol.
    let scale = q_neg_s.norm().max(lit(1e-300)) * lit::<T>(phi as f64);
    let sub_tol = (tol / scale).max(min_tol::<T>());
    let mut acc = Complex::new(T::zero(), T::zero());
    for (a, v) in chi.values().iter().enumerate() {
        if v.norm() < 0.5 {
            continue;
        }
        let shift = if a == 0 { qf } else { lit::<T>(a as f64) } / qf;
        let cv = Complex::new(lit::<T>(v.re), lit::<T>(v.im));
        acc = acc + cv * hurwitz_reg(s, shift, sub_tol, cfg)?;
    }
    let mut out = q_neg_s * acc;
    if principal {
        out = out + q_neg_s * lit::<T>(phi as f64) / (s - one);
    }
    Ok(out)
}
