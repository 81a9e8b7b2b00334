//! Explicit-formula coefficient models
//! φ(y) = c + Σ residues(y) + Re Σ_{λₙ≤X} rₙ e^{iλₙy}.
//!
//! Only positive frequencies are stored; each conjugate pair of zeros
//! contributes one term whose coefficient already carries the factor 2.

mod build;
mod conditions;
mod io;
mod residue;
mod vector;

pub use build::{
    build_liouville_model, build_mobius_ap_model, build_mobius_model, build_model, build_pi_li_model,
    build_psi_model,
};
pub use conditions::{check_conditions, check_conditions_with, ConditionOptions, ConditionReport};
pub use io::{format_model, parse_model, read_model, write_model};
pub use residue::{residue_spec, split_normalized, NormalizedResidue, PoleData, ResidueSpec};
pub use vector::{build_vector_model, VectorModel};

use crate::error::{Error, Result};
use crate::numeric::{lit, to_f64, KahanSum, Scalar};
use num_complex::Complex;

/// Lower end of the y-range every model is valid on (x ≥ X₀ = 2).
pub const Y0: f64 = std::f64::consts::LN_2;
pub const X0: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term<T> {
    pub lambda: T,
    pub r: Complex<T>,
}

/// Non-oscillating contributions decaying in y: remaining poles, trivial
/// zeros, lower-order pieces of the normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Residue<T> {
    /// amp · y^power · e^{rate·y}
    Exp { amp: T, rate: T, power: i32 },
    /// Re(w · e^{s·y})
    ComplexExp { w: Complex<T>, s: Complex<T> },
    /// amp · ln(1 − e^{−k·y}) · e^{rate·y}
    LogOneMinusExp { amp: T, rate: T, k: T },
}

impl<T: Scalar> Residue<T> {
    pub fn eval(&self, y: T) -> T {
        match *self {
            Residue::Exp { amp, rate, power } => amp * y.powi(power) * (rate * y).exp(),
            Residue::ComplexExp { w, s } => (w * (s * y).exp()).re,
            Residue::LogOneMinusExp { amp, rate, k } => amp * (-(-k * y).exp()).ln_1p() * (rate * y).exp(),
        }
    }

    pub fn scaled(&self, f: T) -> Self {
        match *self {
            Residue::Exp { amp, rate, power } => Residue::Exp { amp: amp * f, rate, power },
            Residue::ComplexExp { w, s } => Residue::ComplexExp { w: w * f, s },
            Residue::LogOneMinusExp { amp, rate, k } => Residue::LogOneMinusExp { amp: amp * f, rate, k },
        }
    }

    pub fn cast<U: Scalar>(&self) -> Residue<U> {
        let c = |x: T| lit::<U>(to_f64(x));
        let cc = |z: Complex<T>| Complex::new(c(z.re), c(z.im));
        match *self {
            Residue::Exp { amp, rate, power } => Residue::Exp {
                amp: c(amp),
                rate: c(rate),
                power,
            },
            Residue::ComplexExp { w, s } => Residue::ComplexExp { w: cc(w), s: cc(s) },
            Residue::LogOneMinusExp { amp, rate, k } => Residue::LogOneMinusExp {
                amp: c(amp),
                rate: c(rate),
                k: c(k),
            },
        }
    }
}

/// Unbounded trend removed from the truth before comparison. Recorded as
/// metadata; the trigonometric sum never evaluates it.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Secular<T> {
    #[default]
    None,
    /// slope · y
    LogLinear { slope: T },
}

impl<T: Scalar> Secular<T> {
    pub fn at(&self, y: T) -> T {
        match *self {
            Secular::None => T::zero(),
            Secular::LogLinear { slope } => slope * y,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientModel<T> {
    /// Error-term label, e.g. `mobius:alpha=0`.
    pub label: String,
    pub c: T,
    terms: Vec<Term<T>>,
    pub residues: Vec<Residue<T>>,
    pub secular: Secular<T>,
    pub y0: T,
}

impl<T: Scalar> CoefficientModel<T> {
    /// Builds a model from terms in any order; terms sharing a frequency are
    /// merged by adding their coefficients.
    pub fn new(label: impl Into<String>, c: T, mut terms: Vec<Term<T>>) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidArgument("constant term must be finite".into()));
        }
        for t in &terms {
            if !(t.lambda > T::zero() && t.lambda.is_finite()) || !(t.r.re.is_finite() && t.r.im.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "term lambda = {} must be positive with finite coefficient",
                    t.lambda
                )));
            }
        }
        terms.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).expect("finite"));
        let mut merged: Vec<Term<T>> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.lambda == t.lambda => last.r = last.r + t.r,
                _ => merged.push(t),
            }
        }
        Ok(CoefficientModel {
            label: label.into(),
            c,
            terms: merged,
            residues: Vec::new(),
            secular: Secular::None,
            y0: lit(Y0),
        })
    }

    pub fn constant(label: impl Into<String>, c: T) -> Self {
        Self::new(label, c, Vec::new()).expect("finite constant")
    }

    pub fn with_residues(mut self, residues: Vec<Residue<T>>) -> Self {
        self.residues = residues;
        self
    }

    pub fn with_secular(mut self, secular: Secular<T>) -> Self {
        self.secular = secular;
        self
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lambda_max(&self) -> Option<T> {
        self.terms.last().map(|t| t.lambda)
    }

    /// Number of terms with λ ≤ x.
    pub fn count_below(&self, x: T) -> usize {
        self.terms.partition_point(|t| t.lambda <= x)
    }

    /// Drops every term with λ > x.
    pub fn truncated(&self, x: T) -> Self {
        let mut m = self.clone();
        m.terms.truncate(self.count_below(x));
        m
    }

    /// Keeps the first `n` terms.
    pub fn first(&self, n: usize) -> Self {
        let mut m = self.clone();
        m.terms.truncate(n);
        m
    }

    pub fn residue_at(&self, y: T) -> T {
        let mut acc = KahanSum::new();
        for r in &self.residues {
            acc.add(r.eval(y));
        }
        acc.value()
    }

    /// Σ|rₙ|² over the stored terms.
    pub fn l2_sq(&self) -> T {
        KahanSum::sum_iter(self.terms.iter().map(|t| t.r.norm_sqr()))
    }

    /// c² + ½Σ|rₙ|², the mean square of the almost-periodic part.
    pub fn mean_square(&self) -> T {
        self.c * self.c + lit::<T>(0.5) * self.l2_sq()
    }

    /// Share of Σ|rₙ|² contributed by the top tenth of the available
    /// frequency range, λ ∈ (0.9·λ_max, λ_max].
    pub fn tail_share(&self) -> T {
        let Some(top) = self.lambda_max() else {
            return T::zero();
        };
        let total = self.l2_sq();
        if total == T::zero() {
            return T::zero();
        }
        let cut = self.count_below(top * lit(0.9));
        KahanSum::sum_iter(self.terms[cut..].iter().map(|t| t.r.norm_sqr())) / total
    }

    /// The model of −φ.
    pub fn negated(&self) -> Self {
        let mut m = self.clone();
        m.c = -m.c;
        for t in &mut m.terms {
            t.r = -t.r;
        }
        for r in &mut m.residues {
            *r = r.scaled(-T::one());
        }
        m.secular = match m.secular {
            Secular::None => Secular::None,
            Secular::LogLinear { slope } => Secular::LogLinear { slope: -slope },
        };
        m
    }

    pub fn cast<U: Scalar>(&self) -> CoefficientModel<U> {
        let c = |x: T| lit::<U>(to_f64(x));
        CoefficientModel {
            label: self.label.clone(),
            c: c(self.c),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    lambda: c(t.lambda),
                    r: Complex::new(c(t.r.re), c(t.r.im)),
                })
                .collect(),
            residues: self.residues.iter().map(|r| r.cast()).collect(),
            secular: match self.secular {
                Secular::None => Secular::None,
                Secular::LogLinear { slope } => Secular::LogLinear { slope: c(slope) },
            },
            y0: c(self.y0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn term(l: f64, re: f64, im: f64) -> Term<f64> {
        Term {
            lambda: l,
            r: Complex64::new(re, im),
        }
    }

    #[test]
    fn terms_sorted_and_merged() {
        let m = CoefficientModel::new("t", 0.0, vec![term(3.0, 1.0, 0.0), term(1.0, 0.0, 1.0), term(3.0, 0.5, 2.0)]).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.terms()[0].lambda, 1.0);
        assert_eq!(m.terms()[1].r, Complex64::new(1.5, 2.0));
        assert!(CoefficientModel::new("t", 0.0, vec![term(-1.0, 1.0, 0.0)]).is_err());
        assert!(CoefficientModel::new("t", f64::NAN, vec![]).is_err());
    }

    #[test]
    fn residue_shapes() {
        let e = Residue::Exp {
            amp: 2.0,
            rate: -0.5,
            power: 1,
        };
        assert!((e.eval(2.0) - 4.0 * (-1.0f64).exp()).abs() < 1e-15);
        let l = Residue::LogOneMinusExp {
            amp: -0.5,
            rate: -0.5,
            k: 2.0,
        };
        let y: f64 = 0.7;
        assert!((l.eval(y) + 0.5 * (1.0 - (-2.0 * y).exp()).ln() * (-0.5 * y).exp()).abs() < 1e-15);
        let c = Residue::ComplexExp {
            w: Complex64::new(0.0, 1.0),
            s: Complex64::new(0.0, 1.0),
        };
        assert!((c.eval(1.0) + 1f64.sin()).abs() < 1e-15);
        assert_eq!(c.scaled(-1.0).eval(1.0), -c.eval(1.0));
    }

    #[test]
    fn truncation_and_negation() {
        let m = CoefficientModel::new("t", 1.0, vec![term(1.0, 1.0, 0.0), term(2.0, 1.0, 0.0), term(5.0, 1.0, 1.0)])
            .unwrap()
            .with_secular(Secular::LogLinear { slope: 0.25 });
        assert_eq!(m.truncated(2.0).len(), 2);
        assert_eq!(m.truncated(0.5).len(), 0);
        assert_eq!(m.first(1).len(), 1);
        let n = m.negated();
        assert_eq!(n.c, -1.0);
        assert_eq!(n.terms()[2].r, Complex64::new(-1.0, -1.0));
        assert_eq!(n.secular.at(4.0), -1.0);
        assert_eq!(m.mean_square(), 1.0 + 0.5 * 4.0);
        let f: CoefficientModel<f32> = m.cast();
        assert_eq!(f.len(), 3);
    }

    proptest! {
        #[test]
        fn new_yields_strictly_increasing(ls in proptest::collection::vec(1u32..200, 1..60)) {
            let terms: Vec<_> = ls.iter().map(|&l| term(l as f64 * 0.5, 1.0, -1.0)).collect();
            let m = CoefficientModel::new("p", 0.0, terms).unwrap();
            prop_assert!(m.terms().windows(2).all(|w| w[0].lambda < w[1].lambda));
            // merging preserves the total coefficient
            let total: f64 = m.terms().iter().map(|t| t.r.re).sum();
            prop_assert_eq!(total, ls.len() as f64);
        }
    }
}
