//! Vector-valued models over a merged frequency sequence.

use super::{CoefficientModel, Residue, Secular, Term};
use crate::error::{Error, Result};
use crate::numeric::Scalar;
use num_complex::Complex;

/// Components share one increasing λ-sequence; `rows[k][m]` is component
/// k's coefficient at λ_m, zero where the component lacks that frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorModel<T> {
    pub labels: Vec<String>,
    pub c: Vec<T>,
    pub lambdas: Vec<T>,
    pub rows: Vec<Vec<Complex<T>>>,
    present: Vec<Vec<bool>>,
    pub residues: Vec<Vec<Residue<T>>>,
    pub secular: Vec<Secular<T>>,
    pub y0: T,
}

pub fn build_vector_model<T: Scalar>(models: &[CoefficientModel<T>]) -> Result<VectorModel<T>> {
    if models.len() < 2 {
        return Err(Error::InvalidArgument("a vector model needs at least two components".into()));
    }
    let mut lambdas: Vec<T> = models.iter().flat_map(|m| m.terms().iter().map(|t| t.lambda)).collect();
    lambdas.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    lambdas.dedup();
    let n = lambdas.len();
    let mut rows = vec![vec![Complex::new(T::zero(), T::zero()); n]; models.len()];
    let mut present = vec![vec![false; n]; models.len()];
    for (k, m) in models.iter().enumerate() {
        // both sequences are sorted: one merge pass
        let mut j = 0;
        for t in m.terms() {
            while lambdas[j] < t.lambda {
                j += 1;
            }
            rows[k][j] = t.r;
            present[k][j] = true;
        }
    }
    Ok(VectorModel {
        labels: models.iter().map(|m| m.label.clone()).collect(),
        c: models.iter().map(|m| m.c).collect(),
        lambdas,
        rows,
        present,
        residues: models.iter().map(|m| m.residues.clone()).collect(),
        secular: models.iter().map(|m| m.secular).collect(),
        y0: models.iter().map(|m| m.y0).fold(T::zero(), T::max),
    })
}

impl<T: Scalar> VectorModel<T> {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Component k as a scalar model, exactly as it was merged in.
    pub fn component(&self, k: usize) -> CoefficientModel<T> {
        let terms = self
            .lambdas
            .iter()
            .zip(&self.rows[k])
            .zip(&self.present[k])
            .filter(|(_, &p)| p)
            .map(|((&lambda, &r), _)| Term { lambda, r })
            .collect();
        CoefficientModel::new(self.labels[k].clone(), self.c[k], terms)
            .expect("components were valid")
            .with_residues(self.residues[k].clone())
            .with_secular(self.secular[k])
    }

    /// φ_i − φ_j as a scalar model; frequencies where the difference
    /// vanishes exactly are dropped.
    pub fn difference(&self, i: usize, j: usize) -> CoefficientModel<T> {
        let terms = self
            .lambdas
            .iter()
            .zip(self.rows[i].iter().zip(&self.rows[j]))
            .map(|(&lambda, (&a, &b))| Term { lambda, r: a - b })
            .filter(|t| t.r.re != T::zero() || t.r.im != T::zero())
            .collect();
        let mut residues = self.residues[i].clone();
        residues.extend(self.residues[j].iter().map(|r| r.scaled(-T::one())));
        let secular = match (self.secular[i], self.secular[j]) {
            (Secular::None, Secular::None) => Secular::None,
            (a, b) => Secular::LogLinear {
                slope: a.at(T::one()) - b.at(T::one()),
            },
        };
        CoefficientModel::new(
            format!("{}-minus-{}", self.labels[i], self.labels[j]),
            self.c[i] - self.c[j],
            terms,
        )
        .expect("components were valid")
        .with_residues(residues)
        .with_secular(secular)
    }

    /// Euclidean norm of column m across components.
    pub fn column_norm(&self, m: usize) -> T {
        self.rows
            .iter()
            .map(|row| row[m].norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn truncated(&self, x: T) -> Self {
        let n = self.lambdas.partition_point(|&l| l <= x);
        let mut v = self.clone();
        v.lambdas.truncate(n);
        v.rows.iter_mut().for_each(|r| r.truncate(n));
        v.present.iter_mut().for_each(|p| p.truncate(n));
        v
    }
}
