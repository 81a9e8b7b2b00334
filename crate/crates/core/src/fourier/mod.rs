//! Characteristic functions of limiting distributions as J₀ products,
//! density recovery, races, and a torus Monte-Carlo oracle.
//!
//! Every product formula here presumes the frequencies are linearly
//! independent over ℚ; the outputs are conditional on that.

mod bessel;
mod invert;
mod mc;

pub use bessel::{bessel_j0, j0};
pub use invert::{
    invert_to_density, race_probability, symmetry_test, DensityGrid, GridSpec, InversionOptions, RaceReport,
    SymmetryReport,
};
pub use mc::{torus_mc_oracle, McEstimate, TestFn, MC_CHUNKS};

use crate::error::{Error, Result};
use crate::model::{CoefficientModel, VectorModel};
use crate::numeric::{lit, Scalar};
use num_complex::Complex;

/// −log J₀(u) ≤ TAIL_CONST · u²/4 for |u| ≤ 1.
const TAIL_CONST: f64 = 1.0705;

/// Truncated J₀-product data: `rows[k][m]` for component k at λ_m.
#[derive(Debug, Clone, PartialEq)]
pub struct CharFnSpec<T> {
    pub lambdas: Vec<T>,
    pub rows: Vec<Vec<Complex<T>>>,
    pub c: Vec<T>,
    /// Factors in the product (the first `n_terms` frequencies).
    pub n_terms: usize,
    /// Σ over omitted frequencies of the squared column norm, including
    /// an extrapolated part beyond the model.
    pub tail_l2: T,
    /// Squared column norms of the omitted in-model frequencies.
    omitted: Vec<T>,
}

impl<T: Scalar> CharFnSpec<T> {
    fn build(lambdas: Vec<T>, rows: Vec<Vec<Complex<T>>>, c: Vec<T>, n_terms: Option<usize>, beyond: T) -> Result<Self> {
        let n = lambdas.len();
        let n_terms = n_terms.unwrap_or(n);
        if n_terms > n {
            return Err(Error::InvalidArgument(format!("n_terms = {n_terms} exceeds model size {n}")));
        }
        if !(beyond >= T::zero() && beyond.is_finite()) {
            return Err(Error::InvalidArgument("tail estimate must be finite and >= 0".into()));
        }
        let omitted: Vec<T> = (n_terms..n)
            .map(|m| rows.iter().map(|r| r[m].norm_sqr()).fold(T::zero(), |a, b| a + b))
            .collect();
        let tail_l2 = omitted.iter().fold(beyond, |a, &b| a + b);
        Ok(CharFnSpec {
            lambdas,
            rows,
            c,
            n_terms,
            tail_l2,
            omitted,
        })
    }

    /// Scalar spec; `beyond` estimates Σ|rₙ|² past the model's last term.
    pub fn from_model(m: &CoefficientModel<T>, n_terms: Option<usize>, beyond: T) -> Result<Self> {
        let lambdas = m.terms().iter().map(|t| t.lambda).collect();
        let row = m.terms().iter().map(|t| t.r).collect();
        Self::build(lambdas, vec![row], vec![m.c], n_terms, beyond)
    }

    pub fn from_vector(v: &VectorModel<T>, n_terms: Option<usize>, beyond: T) -> Result<Self> {
        Self::build(v.lambdas.clone(), v.rows.clone(), v.c.clone(), n_terms, beyond)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Σ over the product's factors of the squared column norms (half of it
    /// is the variance for a scalar spec).
    pub fn l2_sq(&self) -> T {
        (0..self.n_terms)
            .map(|m| self.rows.iter().map(|r| r[m].norm_sqr()).fold(T::zero(), |a, b| a + b))
            .fold(T::zero(), |a, b| a + b)
    }

    /// Scalar spec of component i minus component j; frequencies that
    /// cancel exactly are dropped.
    pub fn difference(&self, i: usize, j: usize) -> Result<Self> {
        if i >= self.dim() || j >= self.dim() {
            return Err(Error::InvalidArgument("component index out of range".into()));
        }
        let mut lambdas = Vec::new();
        let mut row = Vec::new();
        let mut kept = 0;
        for m in 0..self.lambdas.len() {
            let d = self.rows[i][m] - self.rows[j][m];
            if d.re != T::zero() || d.im != T::zero() {
                lambdas.push(self.lambdas[m]);
                row.push(d);
                if m < self.n_terms {
                    kept += 1;
                }
            }
        }
        // |a − b|² ≤ 2(|a|² + |b|²)
        let beyond_model = self.tail_l2 - self.omitted.iter().fold(T::zero(), |a, &b| a + b);
        let two = lit::<T>(2.0);
        Self::build(
            lambdas,
            vec![row],
            vec![self.c[i] - self.c[j]],
            Some(kept),
            (two * beyond_model).max(T::zero()),
        )
    }

    fn factor_arg(&self, m: usize, xi: &[T]) -> T {
        let mut z = Complex::new(T::zero(), T::zero());
        for (row, &x) in self.rows.iter().zip(xi) {
            z = z + row[m] * x;
        }
        z.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharFnValue<T> {
    pub value: Complex<T>,
    /// Bound on |log(omitted factors)|.
    pub tail_bound: T,
}

/// μ̂(ξ) = exp(−i c·ξ) Π_{m<n_terms} J₀(|Σ_k r_k(λ_m) ξ_k|).
pub fn char_fn<T: Scalar>(spec: &CharFnSpec<T>, xi: &[T]) -> Result<CharFnValue<T>> {
    if xi.len() != spec.dim() {
        return Err(Error::ArityMismatch {
            expected: spec.dim(),
            got: xi.len(),
        });
    }
    let xi_sq = xi.iter().fold(T::zero(), |a, &x| a + x * x);
    for m in spec.n_terms..spec.lambdas.len() {
        let u = spec.factor_arg(m, xi);
        if u > T::one() {
            return Err(Error::TailBound(format!(
                "omitted factor at lambda = {} has argument {u} > 1",
                spec.lambdas[m]
            )));
        }
    }
    let mut prod = T::one();
    for m in 0..spec.n_terms {
        prod = prod * bessel_j0(spec.factor_arg(m, xi));
    }
    let phase = spec.c.iter().zip(xi).fold(T::zero(), |a, (&c, &x)| a + c * x);
    let value = Complex::from_polar(prod, -phase);
    let tail_bound = lit::<T>(TAIL_CONST) * xi_sq / lit(4.0) * spec.tail_l2;
    Ok(CharFnValue { value, tail_bound })
}
