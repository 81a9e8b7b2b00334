//! Gamma function, Bernoulli numbers and the logarithmic integral.

use crate::numeric::{lit, Scalar};
use num_complex::Complex;

/// Euler–Mascheroni constant γ₀.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// B₂, B₄, …, B₃₀.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Bernoulli number B₂ₖ for 1 ≤ k ≤ 15.
pub fn bernoulli_even(k: usize) -> f64 {
    assert!((1..=BERNOULLI_EVEN.len()).contains(&k), "B_2k tabulated for 1 <= k <= 15");
    BERNOULLI_EVEN[k - 1]
}

/// Log-gamma, continuous in `Im z` on the half plane `Re z ≥ 0`.
///
/// For `Re z < 0` the reflection formula is used; the result is then a
/// valid logarithm of Γ(z) but not necessarily the continuous branch.
pub fn ln_gamma<T: Scalar>(z: Complex<T>) -> Complex<T> {
    let half = lit::<T>(0.5);
    if z.re < T::zero() {
        let pi = T::PI();
        let one = Complex::new(T::one(), T::zero());
        let s = (z * pi).sin();
        return Complex::new(pi.ln(), T::zero()) - s.ln() - ln_gamma(one - z);
    }
    let threshold = lit::<T>(15.0);
    let mut shift = Complex::new(T::zero(), T::zero());
    let mut w = z;
    while w.norm() < threshold {
        shift = shift + w.ln();
        w = w + T::one();
    }
    let two_pi = T::PI() + T::PI();
    let mut acc = (w - half) * w.ln() - w + Complex::new(half * two_pi.ln(), T::zero());
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let terms = if T::epsilon() > lit(1e-10) { 4 } else { 10 };
    for k in 1..=terms {
        let kk = (2 * k) as f64;
        acc = acc + pow * lit::<T>(bernoulli_even(k) / (kk * (kk - 1.0)));
        pow = pow * inv2;
    }
    acc - shift
}

pub fn gamma<T: Scalar>(z: Complex<T>) -> Complex<T> {
    ln_gamma(z).exp()
}

/// Logarithmic integral li(x) for x > 0, x ≠ 1, via Ramanujan's series.
pub fn li(x: f64) -> f64 {
    assert!(x > 0.0 && x != 1.0, "li(x) needs x > 0, x != 1");
    let l = x.ln();
    let mut sum = 0.0;
    let mut term = 1.0; // (ln x)^n / (n! 2^{n-1}) with alternating sign
    let mut inner = 0.0;
    for n in 1..400 {
        let nf = n as f64;
        term *= l / nf;
        if n > 1 {
            term /= 2.0;
        }
        if (n - 1) % 2 == 0 {
            inner += 1.0 / nf;
        }
        let signed = if n % 2 == 1 { term } else { -term };
        let add = signed * inner;
        sum += add;
        if n > 5 && add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    EULER_GAMMA + l.abs().ln() + x.sqrt() * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn gamma_at_integers_and_half() {
        for n in 1..12u32 {
            let f: f64 = (1..n).map(|k| k as f64).product();
            let g = gamma(Complex64::new(n as f64, 0.0));
            assert!((g.re - f).abs() < 1e-12 * f, "n = {n}");
        }
        let g = gamma(Complex64::new(0.5, 0.0));
        assert!((g.re - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        let g = gamma(Complex64::new(-0.5, 0.0));
        assert!((g.re + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn ln_gamma_recurrence_on_critical_strip() {
        for &t in &[0.3, 5.0, 40.0, 700.0] {
            let z = Complex64::new(0.25, t);
            let lhs = ln_gamma(z + 1.0);
            let rhs = ln_gamma(z) + z.ln();
            assert!((lhs - rhs).norm() < 1e-11 * (1.0 + lhs.norm()), "t = {t}");
        }
    }

    #[test]
    fn ln_gamma_reflection_modulus() {
        // |Γ(1/2 + it)|² = π / cosh(πt)
        let t: f64 = 3.7;
        let g = ln_gamma(Complex64::new(0.5, t));
        let expect = 0.5 * (std::f64::consts::PI / (std::f64::consts::PI * t).cosh()).ln();
        assert!((g.re - expect).abs() < 1e-13);
    }

    #[test]
    fn ln_gamma_f32() {
        let g = ln_gamma(Complex::<f32>::new(4.0, 0.0));
        assert!((g.re - 6f32.ln()).abs() < 1e-5);
    }

    #[test]
    fn li_values() {
        // li(2) = 1.045163780117492784..., li(10) = 6.1655995047872979...
        assert!((li(2.0) - 1.045_163_780_117_492_8).abs() < 1e-14);
        assert!((li(10.0) - 6.165_599_504_787_298).abs() < 1e-13);
        // li(1e8) = 5762209.375448031...
        assert!((li(1e8) - 5_762_209.375_448_031).abs() < 1e-6);
    }
}
