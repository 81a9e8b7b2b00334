//! Measurements on the model side and against sieved truth: trig sums,
//! residuals, Parseval balance, empirical distributions, log densities.

mod csv;
mod hist;

pub use csv::{histogram_csv, parseval_csv, residual_csv, Meta};
pub use hist::{
    empirical_distribution, empirical_distribution_values, log_density, subtract_residues, BinSpec, Binning,
    EmpiricalDistribution, Predicate, Weighting,
};

use crate::arith::{error_term_series, ErrorTermKind, ErrorTermSample, SieveConfig};
use crate::error::{Error, Result};
use crate::model::{check_conditions, CoefficientModel, X0};
use crate::numeric::{lit, trapezoid, KahanSum, Scalar};
use rayon::prelude::*;

/// Default spacing of y-grids.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Points y₀, y₀ + h, … up to and including `hi` (within rounding).
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite() && lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(Error::InvalidArgument(format!("bad grid [{lo}, {hi}] step {step}")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| lo + k as f64 * step).collect())
}

/// c + residues(y) + Re Σ_{λₙ≤X} rₙ e^{iλₙy} at every grid point.
pub fn eval_trig_sum<T: Scalar>(model: &CoefficientModel<T>, x: T, ys: &[T]) -> Result<Vec<T>> {
    if !(x >= lit(X0)) {
        return Err(Error::InvalidArgument(format!("truncation X = {x} below X0 = {X0}")));
    }
    let terms = &model.terms()[..model.count_below(x)];
    const CHUNK: usize = 256;
    let mut out = vec![T::zero(); ys.len()];
    out.par_chunks_mut(CHUNK).zip(ys.par_chunks(CHUNK)).for_each(|(o, y)| {
        for (v, &y) in o.iter_mut().zip(y) {
            let mut acc = KahanSum::new();
            acc.add(model.c);
            acc.add(model.residue_at(y));
            for t in terms {
                let (s, c) = (t.lambda * y).sin_cos();
                acc.add(t.r.re * c - t.r.im * s);
            }
            *v = acc.value();
        }
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub x: f64,
    pub y: f64,
    pub rms: f64,
    pub max_abs: f64,
    pub grid_step: f64,
    pub n_points: usize,
}

/// rms and max of truth − model over y ∈ [y₀, Y].
pub fn residual(
    model: &CoefficientModel<f64>,
    kind: ErrorTermKind,
    x: f64,
    y_max: f64,
    step: f64,
    cfg: &SieveConfig,
) -> Result<ResidualReport> {
    let grid = uniform_grid(model.y0, y_max, step)?;
    let truth = error_term_series(kind, &grid, cfg)?;
    residual_from_truth(model, x, &truth, 0, step)
}

/// As [`residual`], with truth already sampled (component `k`).
pub fn residual_from_truth(
    model: &CoefficientModel<f64>,
    x: f64,
    truth: &[ErrorTermSample],
    k: usize,
    step: f64,
) -> Result<ResidualReport> {
    if truth.is_empty() {
        return Err(Error::InsufficientData("empty truth series".into()));
    }
    let ys: Vec<f64> = truth.iter().map(|s| s.y).collect();
    let fit = eval_trig_sum(model, x, &ys)?;
    let mut sq = KahanSum::new();
    let mut max_abs: f64 = 0.0;
    for (s, f) in truth.iter().zip(&fit) {
        let e = component(s, k)? - f;
        sq.add(e * e);
        max_abs = max_abs.max(e.abs());
    }
    Ok(ResidualReport {
        x,
        y: ys[ys.len() - 1],
        rms: (sq.value() / truth.len() as f64).sqrt(),
        max_abs,
        grid_step: step,
        n_points: truth.len(),
    })
}

fn component(s: &ErrorTermSample, k: usize) -> Result<f64> {
    s.value.get(k).copied().ok_or(Error::ArityMismatch {
        expected: k + 1,
        got: s.value.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParsevalReport {
    /// (1/(Y−y₀))∫_{y₀}^{Y} (truth − residues)² dy
    pub lhs: f64,
    /// The same mean square without removing the residues.
    pub lhs_raw: f64,
    /// c² + ½Σ_{λ≤X}|rₙ|²
    pub rhs: f64,
    /// ½Σ_{λ>λ_max}|rₙ|² extrapolated; `None` below the condition
    /// checker's minimum size.
    pub tail_estimate: Option<f64>,
    pub x: f64,
    pub y: f64,
    pub step: f64,
}

pub fn parseval_check(
    model: &CoefficientModel<f64>,
    kind: ErrorTermKind,
    y_max: f64,
    step: f64,
    cfg: &SieveConfig,
) -> Result<ParsevalReport> {
    let grid = uniform_grid(model.y0, y_max, step)?;
    let truth = error_term_series(kind, &grid, cfg)?;
    parseval_from_truth(model, f64::INFINITY, &truth, 0, step)
}

/// Parseval balance with the truth already sampled on an equally spaced
/// grid (component `k`); `x` truncates the model side.
pub fn parseval_from_truth(
    model: &CoefficientModel<f64>,
    x: f64,
    truth: &[ErrorTermSample],
    k: usize,
    step: f64,
) -> Result<ParsevalReport> {
    if truth.len() < 2 {
        return Err(Error::InsufficientData("Parseval needs at least two grid points".into()));
    }
    let mut sq = Vec::with_capacity(truth.len());
    let mut sq_raw = Vec::with_capacity(truth.len());
    for s in truth {
        let v = component(s, k)?;
        let c = v - model.residue_at(s.y);
        sq.push(c * c);
        sq_raw.push(v * v);
    }
    let span = truth[truth.len() - 1].y - truth[0].y;
    let m = if x.is_finite() { model.truncated(x) } else { model.clone() };
    let tail_estimate = if m.len() >= 100 && m.len() == model.len() {
        check_conditions(&m).ok().map(|r| 0.5 * r.tail_l2_estimate)
    } else {
        None
    };
    Ok(ParsevalReport {
        lhs: trapezoid(&sq, step) / span,
        lhs_raw: trapezoid(&sq_raw, step) / span,
        rhs: m.mean_square(),
        tail_estimate,
        x,
        y: truth[truth.len() - 1].y,
        step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Residue, Term};
    use num_complex::Complex64;

    fn two_term() -> CoefficientModel<f64> {
        CoefficientModel::new(
            "t",
            0.25,
            vec![
                Term {
                    lambda: 3.0,
                    r: Complex64::new(1.0, 0.5),
                },
                Term {
                    lambda: 7.5,
                    r: Complex64::new(-0.2, 0.3),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn grid_includes_endpoint() {
        let g = uniform_grid(0.0, 1.0, 0.1).unwrap();
        assert_eq!(g.len(), 11);
        assert!((g[10] - 1.0).abs() < 1e-15);
        assert!(uniform_grid(1.0, 0.0, 0.1).is_err());
        assert!(uniform_grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn constant_and_single_term() {
        let m = CoefficientModel::constant("c", 3.0);
        assert_eq!(eval_trig_sum(&m, 10.0, &[0.0, 1.0, 5.0]).unwrap(), vec![3.0; 3]);
        let r = 2.0 / Complex64::new(0.5, 14.134725141734694);
        let m = CoefficientModel::new(
            "one",
            0.1,
            vec![Term {
                lambda: 14.134725141734694,
                r,
            }],
        )
        .unwrap();
        assert!((eval_trig_sum(&m, 20.0, &[0.0]).unwrap()[0] - (0.1 + r.re)).abs() < 1e-16);
        assert!(eval_trig_sum(&m, 1.0, &[0.0]).is_err());
    }

    #[test]
    fn residues_are_added_and_truncation_saturates() {
        let m = two_term().with_residues(vec![Residue::Exp {
            amp: 1.0,
            rate: -1.0,
            power: 0,
        }]);
        let ys = [0.0, 0.4, 2.0];
        let a = eval_trig_sum(&m, 8.0, &ys).unwrap();
        let b = eval_trig_sum(&m, 1e6, &ys).unwrap();
        assert_eq!(a, b);
        for (y, v) in ys.iter().zip(&a) {
            let direct = 0.25
                + (-y).exp()
                + (Complex64::new(1.0, 0.5) * Complex64::new(0.0, 3.0 * y).exp()).re
                + (Complex64::new(-0.2, 0.3) * Complex64::new(0.0, 7.5 * y).exp()).re;
            assert!((v - direct).abs() < 1e-14);
        }
        let c = eval_trig_sum(&m, 5.0, &ys).unwrap();
        assert!((c[0] - (0.25 + 1.0 + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn generic_f32_instantiation() {
        let m: CoefficientModel<f32> = two_term().cast();
        let v = eval_trig_sum(&m, 10.0f32, &[0.0f32]).unwrap();
        assert!((v[0] - 1.05).abs() < 1e-6);
    }

    #[test]
    fn parseval_constant_model() {
        let m = CoefficientModel::constant("five", 5.0);
        let truth: Vec<_> = uniform_grid(0.7, 5.0, 0.01)
            .unwrap()
            .into_iter()
            .map(|y| ErrorTermSample { y, value: vec![5.0] })
            .collect();
        let p = parseval_from_truth(&m, f64::INFINITY, &truth, 0, 0.01).unwrap();
        assert!((p.lhs - 25.0).abs() < 1e-12);
        assert_eq!(p.rhs, 25.0);
        assert!(p.tail_estimate.is_none());
    }

    #[test]
    fn residual_of_model_against_itself_vanishes() {
        let m = two_term();
        let ys = uniform_grid(0.7, 10.0, 0.01).unwrap();
        let v = eval_trig_sum(&m, 100.0, &ys).unwrap();
        let truth: Vec<_> = ys.iter().zip(&v).map(|(&y, &v)| ErrorTermSample { y, value: vec![v] }).collect();
        let r = residual_from_truth(&m, 100.0, &truth, 0, 0.01).unwrap();
        assert!(r.rms < 1e-15 && r.rms <= r.max_abs + 1e-300);
        let r = residual_from_truth(&m, 5.0, &truth, 0, 0.01).unwrap();
        // dropping the 7.5 term leaves its rms |r|/√2
        assert!((r.rms - Complex64::new(-0.2, 0.3).norm() / 2f64.sqrt()).abs() < 5e-3);
        assert!(r.rms <= r.max_abs);
        assert!(matches!(
            residual_from_truth(&m, 5.0, &truth, 1, 0.01),
            Err(Error::ArityMismatch { .. })
        ));
    }
}
