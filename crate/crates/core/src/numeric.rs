//! Scalar abstraction and compensated accumulation.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar the numeric kernels are written against (`f32` or `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Kahan–Babuška (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum<T> {
    sum: T,
    comp: T,
}

impl<T: Scalar> KahanSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum in, keeping both compensation terms.
    #[inline]
    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.comp
    }

    pub fn sum_iter<I: IntoIterator<Item = T>>(iter: I) -> T {
        let mut k = Self::new();
        for v in iter {
            k.add(v);
        }
        k.value()
    }
}

/// Compensated sum of complex values, component-wise.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum<T> {
    re: KahanSum<T>,
    im: KahanSum<T>,
}

impl<T: Scalar> ComplexSum<T> {
    pub fn new() -> Self {
        Self {
            re: KahanSum::new(),
            im: KahanSum::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &Self) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

/// Formats `x` with `sig` significant digits: plain decimals for moderate
/// magnitudes, `d.ddde±k` outside [1e-6, 1e17).
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { format!("{x}") };
    }
    let exp = x.abs().log10().floor() as i64;
    // log10 can land one off near powers of ten; let the rounded mantissa decide.
    let probe = format!("{:.*e}", sig - 1, x);
    let exp = probe
        .split('e')
        .nth(1)
        .and_then(|e| e.parse::<i64>().ok())
        .unwrap_or(exp);
    if !(-6..17).contains(&exp) {
        let (mant, e) = probe.split_once('e').expect("exponent form");
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        return format!("{mant}e{e}");
    }
    let decimals = (sig as i64 - 1 - exp).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".to_string()
        } else {
            t.to_string()
        }
    } else {
        s
    }
}

/// Rounds `x` to 15 significant digits (the precision of every emitted float).
pub fn round15(x: f64) -> f64 {
    fmt_sig(x, 15).parse().unwrap_or(x)
}

/// `(e^z - 1) / z`, accurate near `z = 0`.
pub fn exprel<T: Scalar>(z: Complex<T>) -> Complex<T> {
    if z.norm() < lit(1e-3) {
        let mut term = Complex::new(T::one(), T::zero());
        let mut acc = term;
        for k in 2..10 {
            term = term * z / lit::<T>(k as f64);
            acc = acc + term;
        }
        acc
    } else {
        (z.exp() - Complex::new(T::one(), T::zero())) / z
    }
}

/// Trapezoid rule on an equally spaced sample vector.
pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let mut k = KahanSum::new();
            for v in &values[1..n - 1] {
                k.add(*v);
            }
            k.add(0.5 * (values[0] + values[n - 1]));
            k.value() * step
        }
    }
}

/// Ordinary least squares fit `y = slope * x + intercept`; returns (slope, intercept, rms residual).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    Some((slope, intercept, (rss / nf).sqrt()))
}
