//! Zero location on the critical line and derivative data at the zeros.

use super::character::CharacterTable;
use super::eval::zeta;
use super::hardy::{Hardy, LFunction};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;

/// Highest ordinate the zero finder accepts.
pub const GAMMA_MAX_CEILING: f64 = 1e4;

/// One nontrivial zero ρ = 1/2 + iγ and the derivative data its coefficients need.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroDatum {
    pub gamma: f64,
    /// |ζ'(ρ)| or |L'(ρ, χ)|.
    pub deriv_abs: Option<f64>,
    /// ζ(2ρ), for Liouville weights.
    pub aux_zeta2rho: Option<Complex64>,
    pub char_id: Option<usize>,
    /// Full complex derivative; not persisted, recomputed after import.
    pub deriv: Option<Complex64>,
}

impl ZeroDatum {
    pub fn new(gamma: f64) -> Self {
        ZeroDatum {
            gamma,
            deriv_abs: None,
            aux_zeta2rho: None,
            char_id: None,
            deriv: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ZeroSearch {
    /// Uniform sampling step, halved on a failed count check.
    pub step: f64,
    pub max_refinements: usize,
    /// Allowed mean deviation from the smooth count over the final window.
    pub count_slack: f64,
}

impl ZeroSearch {
    pub fn for_function(lf: &LFunction) -> Self {
        let zeta_like = Hardy::new(lf).is_zeta();
        ZeroSearch {
            step: 0.05,
            max_refinements: 3,
            count_slack: if zeta_like { 1.0 } else { 2.0 },
        }
    }
}

/// Illinois-modified regula falsi on a bracketing interval.
fn refine<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64, xtol: f64) -> Result<f64> {
    let mut side = 0i8;
    for _ in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let fc = f(c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

/// Gram-type points θ(g) = kπ inside the sampled range where θ increases.
fn gram_points(h: &Hardy, grid: &[f64]) -> Vec<f64> {
    let thetas: Vec<f64> = grid.iter().map(|&t| h.theta(t)).collect();
    let mut out = Vec::new();
    for i in 1..grid.len() {
        let (t0, t1) = (thetas[i - 1], thetas[i]);
        if t1 <= t0 {
            continue;
        }
        let k0 = (t0 / std::f64::consts::PI).floor();
        let k1 = (t1 / std::f64::consts::PI).floor();
        let mut k = k0 + 1.0;
        while k <= k1 {
            let target = k * std::f64::consts::PI;
            let (mut lo, mut hi) = (grid[i - 1], grid[i]);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if h.theta(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let g = 0.5 * (lo + hi);
            if g > grid[i - 1] && g < grid[i] {
                out.push(g);
            }
            k += 1.0;
        }
    }
    out
}

fn sample_and_bracket(h: &Hardy, gamma_max: f64, step: f64, xtol: f64) -> Result<Vec<f64>> {
    let n = (gamma_max / step).ceil() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|i| (i as f64 * step).min(gamma_max)).collect();
    grid.dedup();
    let mut pts = grid.clone();
    pts.extend(gram_points(h, &grid));
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pts.dedup();
    let vals: Vec<f64> = pts.par_iter().map(|&t| h.z(t)).collect::<Result<_>>()?;

    let mut brackets = Vec::new();
    let mut exact = Vec::new();
    for i in 0..pts.len() {
        if vals[i] == 0.0 && pts[i] > 0.0 {
            exact.push(pts[i]);
        }
        if i > 0 && vals[i - 1] * vals[i] < 0.0 {
            brackets.push(i);
        }
    }
    let f = |t: f64| h.z(t);
    let mut zeros: Vec<f64> = brackets
        .par_iter()
        .map(|&i| refine(&f, pts[i - 1], vals[i - 1], pts[i], vals[i], xtol))
        .collect::<Result<_>>()?;
    zeros.extend(exact);
    zeros.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(zeros)
}

/// Mean of (located count − smooth count) over the last stretch below T.
fn mean_count_deviation(h: &Hardy, zeros: &[f64], gamma_max: f64) -> f64 {
    let lo = (gamma_max - 2.0).max(0.0);
    let m = 200;
    let mut total = 0.0;
    for i in 0..=m {
        let t = lo + (gamma_max - lo) * i as f64 / m as f64;
        let found = zeros.partition_point(|&g| g <= t) as f64;
        let smooth = h.theta(t) / std::f64::consts::PI + h.count_offset();
        total += found - smooth;
    }
    total / (m + 1) as f64
}

/// Ordinates 0 < γ ≤ gamma_max of zeros on the critical line, to `tol`.
pub fn locate_zeros(lf: &LFunction, gamma_max: f64, tol: f64) -> Result<Vec<f64>> {
    locate_zeros_with(lf, gamma_max, tol, &ZeroSearch::for_function(lf))
}

pub fn locate_zeros_with(lf: &LFunction, gamma_max: f64, tol: f64, search: &ZeroSearch) -> Result<Vec<f64>> {
    if !gamma_max.is_finite() || gamma_max > GAMMA_MAX_CEILING {
        return Err(Error::Capacity {
            requested: gamma_max.max(0.0) as u64,
            limit: GAMMA_MAX_CEILING as u64,
        });
    }
    if tol.is_nan() || tol < 1e-10 {
        return Err(Error::InvalidArgument(format!("tolerance {tol} below 1e-10")));
    }
    if gamma_max <= 0.0 {
        return Ok(Vec::new());
    }
    let h = Hardy::new(lf);
    let xtol = (tol * 1e-2).max(1e-12);
    let mut step = search.step;
    let mut last = (0usize, 0.0);
    for _ in 0..=search.max_refinements {
        let zeros = sample_and_bracket(&h, gamma_max, step, xtol)?;
        let dev = mean_count_deviation(&h, &zeros, gamma_max);
        if dev.abs() <= search.count_slack {
            return Ok(zeros);
        }
        last = (zeros.len(), zeros.len() as f64 - dev);
        step *= 0.5;
    }
    Err(Error::MissedZeros {
        gamma_max,
        found: last.0,
        expected: last.1,
    })
}

/// L'(1/2 + iγ) by Richardson-extrapolated central differences along the
/// critical line (step `h`, two levels).
pub fn complex_derivative_with_step(lf: &LFunction, gamma: f64, h: f64) -> Result<Complex64> {
    let f = |t: f64| lf.eval(Complex64::new(0.5, t), 1e-14);
    let d = |h: f64| -> Result<Complex64> { Ok((f(gamma + h)? - f(gamma - h)?) / (2.0 * h)) };
    let d1 = d(h)?;
    let d2 = d(0.5 * h)?;
    // d/ds = -i d/dt on the line s = 1/2 + it
    Ok((d2 * 4.0 - d1) / 3.0 * Complex64::new(0.0, -1.0))
}

pub fn complex_derivative(lf: &LFunction, gamma: f64) -> Result<Complex64> {
    complex_derivative_with_step(lf, gamma, 1e-4)
}

/// |L'(ρ)| at a located zero; errors on a numerically vanishing derivative.
pub fn deriv_at_zero(lf: &LFunction, zero: &ZeroDatum) -> Result<f64> {
    let d = complex_derivative(lf, zero.gamma)?;
    let m = d.norm();
    if m < 1e-8 {
        return Err(Error::DegenerateZero {
            gamma: zero.gamma,
            deriv: m,
        });
    }
    Ok(m)
}

/// ζ(2ρ) = ζ(1 + 2iγ).
pub fn zeta_at_2rho(zero: &ZeroDatum, tol: f64) -> Result<Complex64> {
    zeta(Complex64::new(1.0, 2.0 * zero.gamma), tol)
}

/// Locates the zeros of `lf` and attaches derivatives (and ζ(2ρ) for ζ).
pub fn find_zeros(lf: &LFunction, gamma_max: f64, tol: f64) -> Result<Vec<ZeroDatum>> {
    let gammas = locate_zeros(lf, gamma_max, tol)?;
    annotate(lf, &gammas)
}

fn annotate(lf: &LFunction, gammas: &[f64]) -> Result<Vec<ZeroDatum>> {
    gammas
        .par_iter()
        .map(|&g| {
            let mut z = ZeroDatum::new(g);
            z.char_id = lf.char_id();
            let d = complex_derivative(lf, g)?;
            if d.norm() < 1e-8 {
                return Err(Error::DegenerateZero { gamma: g, deriv: d.norm() });
            }
            z.deriv = Some(d);
            z.deriv_abs = Some(d.norm());
            if matches!(lf, LFunction::Zeta) {
                z.aux_zeta2rho = Some(zeta_at_2rho(&z, 1e-12)?);
            }
            Ok(z)
        })
        .collect()
}

/// Zeros of every L(s, χ) mod q merged into one sequence tagged by character.
pub fn find_zeros_mod(q: u64, gamma_max: f64, tol: f64) -> Result<Vec<ZeroDatum>> {
    let table = CharacterTable::new(q)?;
    let mut all = Vec::new();
    for chi in &table.chars {
        let lf = LFunction::Dirichlet(chi.clone());
        all.extend(find_zeros(&lf, gamma_max, tol)?);
    }
    all.sort_by(|a, b| {
        a.gamma
            .partial_cmp(&b.gamma)
            .expect("finite")
            .then(a.char_id.cmp(&b.char_id))
    });
    Ok(all)
}
