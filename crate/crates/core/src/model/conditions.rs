//! Empirical growth conditions on a model's coefficients.

use super::CoefficientModel;
use crate::error::{Error, Result};
use crate::numeric::linear_fit;

#[derive(Debug, Clone, Copy)]
pub struct ConditionOptions {
    /// Power of log T divided out before fitting the second-moment growth.
    pub kappa: f64,
    /// Log-spaced T values in the θ fit.
    pub points: usize,
    /// Fit range [λ_max·window, λ_max].
    pub window: f64,
    /// Exponent γ of (log T)^γ in the window-sum bound.
    pub si_gamma: f64,
}

impl Default for ConditionOptions {
    fn default() -> Self {
        ConditionOptions {
            kappa: 1.0,
            points: 64,
            window: 0.1,
            si_gamma: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub n_terms: usize,
    pub lambda_max: f64,
    /// Slope of log(S(T)/(log T)^κ) against log T, S(T) = Σ_{λ≤T} λ²|r|².
    pub theta_hat: f64,
    pub theta_residual: f64,
    /// Slope without the log correction.
    pub theta_raw: f64,
    pub kappa: f64,
    pub theta_bound: f64,
    pub theta_pass: bool,
    /// Fitted decay exponent of unit-window sums Σ_{T<λ≤T+1}|r|.
    pub beta: f64,
    pub si_gamma: f64,
    pub si_residual: f64,
    /// max_T window sum · T^β / (log T)^γ
    pub si_constant: f64,
    /// α = β, the smallest admissible choice.
    pub alpha: f64,
    /// √(β² + β + 1/16) − 1/4
    pub alpha_upper: f64,
    pub alphacond_feasible: bool,
    /// max over dyadic (S, 2S] of Σ|r| · S^β / ((T−S)^α (log T)^γ)
    pub ai_constant: f64,
    /// Share of Σ|r|² from the top tenth of the λ-range.
    pub tail_share: f64,
    /// Σ_{λ>λ_max}|r|² extrapolated from the local growth of S.
    pub tail_l2_estimate: f64,
}

pub fn check_conditions(model: &CoefficientModel<f64>) -> Result<ConditionReport> {
    check_conditions_with(model, &ConditionOptions::default())
}

pub fn check_conditions_with(model: &CoefficientModel<f64>, opt: &ConditionOptions) -> Result<ConditionReport> {
    const MIN_TERMS: usize = 100;
    if model.len() < MIN_TERMS {
        return Err(Error::InsufficientData(format!(
            "{} terms, need at least {MIN_TERMS}",
            model.len()
        )));
    }
    let terms = model.terms();
    let lmax = terms[terms.len() - 1].lambda;
    let lmin = terms[0].lambda;

    // prefix sums of λ²|r|²
    let mut prefix = Vec::with_capacity(terms.len());
    let mut acc = 0.0;
    for t in terms {
        acc += t.lambda * t.lambda * t.r.norm_sqr();
        prefix.push(acc);
    }
    let s_at = |x: f64| -> f64 {
        let k = terms.partition_point(|t| t.lambda <= x);
        if k == 0 {
            0.0
        } else {
            prefix[k - 1]
        }
    };
    let lo = (lmax * opt.window).max(lmin).max(std::f64::consts::E);
    let (mut xs, mut ys, mut yr) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..opt.points {
        let t = lo * (lmax / lo).powf(i as f64 / (opt.points - 1).max(1) as f64);
        let s = s_at(t);
        if s > 0.0 {
            xs.push(t.ln());
            yr.push(s.ln());
            ys.push(s.ln() - opt.kappa * t.ln().ln());
        }
    }
    let degenerate = || Error::InsufficientData("second-moment sums do not span a fit range".into());
    let (theta_hat, _, theta_residual) = linear_fit(&xs, &ys).ok_or_else(degenerate)?;
    let (theta_raw, _, _) = linear_fit(&xs, &yr).ok_or_else(degenerate)?;

    // unit windows (T, T+1]
    let first = lmin.floor().max(3.0) as u64;
    let last = lmax.floor() as u64;
    let mut windows = Vec::new();
    let mut k = terms.partition_point(|t| t.lambda <= first as f64);
    for t in first..last {
        let mut w = 0.0;
        while k < terms.len() && terms[k].lambda <= (t + 1) as f64 {
            w += terms[k].r.norm();
            k += 1;
        }
        windows.push((t as f64, w));
    }
    let (wx, wy): (Vec<f64>, Vec<f64>) = windows
        .iter()
        .filter(|(_, w)| *w > 0.0)
        .map(|&(t, w)| (t.ln(), w.ln() - opt.si_gamma * t.ln().ln()))
        .unzip();
    let (slope, _, si_residual) = linear_fit(&wx, &wy).ok_or_else(degenerate)?;
    let beta = -slope;
    let si_constant = windows
        .iter()
        .map(|&(t, w)| w * t.powf(beta) / t.ln().powf(opt.si_gamma))
        .fold(0.0, f64::max);

    let alpha = beta;
    let alpha_upper = (beta * beta + beta + 1.0 / 16.0).sqrt() - 0.25;
    let alphacond_feasible = beta > 0.0 && alpha < alpha_upper;

    let mut ai_constant: f64 = 0.0;
    let mut s = 2.0;
    while 2.0 * s <= lmax {
        let t = 2.0 * s;
        let a = terms.partition_point(|x| x.lambda <= s);
        let b = terms.partition_point(|x| x.lambda <= t);
        let sum: f64 = terms[a..b].iter().map(|x| x.r.norm()).sum();
        ai_constant = ai_constant.max(sum * s.powf(beta) / ((t - s).powf(alpha) * t.ln().powf(opt.si_gamma)));
        s = t;
    }

    let theta_bound = 3.0 - 3f64.sqrt();
    let tail_l2_estimate = if theta_raw < 2.0 {
        (prefix[prefix.len() - 1] * theta_raw.max(0.0) / ((2.0 - theta_raw) * lmax * lmax)).max(0.0)
    } else {
        f64::INFINITY
    };
    Ok(ConditionReport {
        n_terms: model.len(),
        lambda_max: lmax,
        theta_hat,
        theta_residual,
        theta_raw,
        kappa: opt.kappa,
        theta_bound,
        theta_pass: theta_hat < theta_bound,
        beta,
        si_gamma: opt.si_gamma,
        si_residual,
        si_constant,
        alpha,
        alpha_upper,
        alphacond_feasible,
        ai_constant,
        tail_share: model.tail_share(),
        tail_l2_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Term;
    use num_complex::Complex64;

    fn power_model(n: usize, p: f64) -> CoefficientModel<f64> {
        let terms = (1..=n)
            .map(|k| Term {
                lambda: k as f64,
                r: Complex64::new((k as f64).powf(-p), 0.0),
            })
            .collect();
        CoefficientModel::new("power", 0.0, terms).unwrap()
    }

    #[test]
    fn summable_power_law_passes_branch_a() {
        let opt = ConditionOptions {
            si_gamma: 0.0,
            ..Default::default()
        };
        let r = check_conditions_with(&power_model(2000, 2.0), &opt).unwrap();
        assert!((r.beta - 2.0).abs() < 0.02, "beta = {}", r.beta);
        assert!(r.alphacond_feasible);
        assert!(r.si_constant > 0.5 && r.si_constant < 1.5);
        assert!(r.ai_constant.is_finite());
        // Σλ²|r|² = Σk⁻² converges: θ = 0
        let opt = ConditionOptions {
            kappa: 0.0,
            ..opt
        };
        let r = check_conditions_with(&power_model(2000, 2.0), &opt).unwrap();
        assert!(r.theta_hat.abs() < 0.01);
        assert!(r.theta_pass);
        assert!(r.tail_share < 0.01);
        // |r| = 1/k: Σλ²|r|² = T
        let r = check_conditions_with(&power_model(2000, 1.0), &opt).unwrap();
        assert!((r.theta_hat - 1.0).abs() < 0.01);
        assert!(r.theta_pass);
    }

    #[test]
    fn slow_decay_fails_theta_bound() {
        // |r| = n^{-1/2}: Σλ²|r|² ~ n²/2
        let opt = ConditionOptions {
            kappa: 0.0,
            ..Default::default()
        };
        let r = check_conditions_with(&power_model(1000, 0.5), &opt).unwrap();
        assert!((r.theta_hat - 2.0).abs() < 0.02);
        assert!(!r.theta_pass);
    }

    #[test]
    fn too_few_terms() {
        assert!(matches!(
            check_conditions(&power_model(99, 2.0)),
            Err(Error::InsufficientData(_))
        ));
    }
}
