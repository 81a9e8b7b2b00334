//! Densities from characteristic functions by discretized Fourier inversion.

use super::{char_fn, CharFnSpec};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionOptions {
    /// |μ̂| must stay below this beyond the ξ window.
    pub decay_tol: f64,
    /// Largest ξ-radius tried before giving up.
    pub xi_limit: f64,
    /// The ξ step resolves a period of at least this many standard deviations.
    pub period_sigmas: f64,
    /// Cap on ξ points per axis (a power of two).
    pub max_xi_points: usize,
    pub max_xi_points_2d: usize,
}

impl Default for InversionOptions {
    fn default() -> Self {
        InversionOptions {
            decay_tol: 1e-10,
            xi_limit: 1e4,
            period_sigmas: 60.0,
            max_xi_points: 1 << 16,
            max_xi_points_2d: 1 << 11,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    /// `points` per axis over c ± `sigmas`·σ.
    Auto { points: usize, sigmas: f64 },
    /// (lo, hi, points) per axis; endpoints included.
    Explicit(Vec<(f64, f64, usize)>),
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Auto {
            points: 1024,
            sigmas: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub dim: usize,
    /// (lo, hi, points) per axis.
    pub axes: Vec<(f64, f64, usize)>,
    /// Row-major, last axis fastest; negative lobes clipped to 0.
    pub values: Vec<f64>,
    /// ∫ density after clipping.
    pub mass: f64,
    /// |1 − ∫ density| before clipping.
    pub mass_defect: f64,
    /// Mass removed by clipping.
    pub clipped_mass: f64,
    pub xi_max: f64,
    pub xi_step: f64,
    pub xi_points: usize,
}

fn axis_point(a: &(f64, f64, usize), j: usize) -> f64 {
    a.0 + (a.1 - a.0) * j as f64 / (a.2 - 1) as f64
}

fn axis_step(a: &(f64, f64, usize)) -> f64 {
    (a.1 - a.0) / (a.2 - 1) as f64
}

fn trap_weight(j: usize, n: usize) -> f64 {
    if j == 0 || j == n - 1 {
        0.5
    } else {
        1.0
    }
}

impl DensityGrid {
    pub fn point(&self, k: usize, j: usize) -> f64 {
        axis_point(&self.axes[k], j)
    }

    fn weight(&self, idx: usize) -> f64 {
        let mut w = 1.0;
        let mut rem = idx;
        for a in self.axes.iter().rev() {
            w *= trap_weight(rem % a.2, a.2) * axis_step(a);
            rem /= a.2;
        }
        w
    }

    fn coords(&self, idx: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        let mut rem = idx;
        for k in (0..self.dim).rev() {
            let n = self.axes[k].2;
            out[k] = axis_point(&self.axes[k], rem % n);
            rem /= n;
        }
        out
    }

    /// Trapezoid integral of g(x)·density(x) over the grid.
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, g: F) -> f64 {
        let mut acc = crate::numeric::KahanSum::new();
        for (i, v) in self.values.iter().enumerate() {
            acc.add(self.weight(i) * v * g(&self.coords(i)));
        }
        acc.value()
    }

    pub fn mean(&self, k: usize) -> f64 {
        self.integrate(|x| x[k]) / self.mass
    }

    pub fn variance(&self, k: usize) -> f64 {
        let m = self.mean(k);
        self.integrate(|x| (x[k] - m) * (x[k] - m)) / self.mass
    }
}

fn sigmas(spec: &CharFnSpec<f64>) -> Vec<f64> {
    spec.rows
        .iter()
        .map(|r| (0.5 * r[..spec.n_terms].iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt())
        .collect()
}

fn abs_cf(spec: &CharFnSpec<f64>, xi: &[f64]) -> Result<f64> {
    Ok(char_fn(spec, xi)?.value.norm())
}

/// Smallest radius Ξ = 2^j with |μ̂| < tol sampled over the shell [Ξ/2, Ξ].
fn xi_window(spec: &CharFnSpec<f64>, opt: &InversionOptions) -> Result<f64> {
    let dim = spec.dim();
    let mut r = 1.0;
    while r <= opt.xi_limit {
        let mut peak: f64 = 0.0;
        for i in 0..=64 {
            let rad = r * (0.5 + 0.5 * i as f64 / 64.0);
            if dim == 1 {
                peak = peak.max(abs_cf(spec, &[rad])?);
            } else {
                for a in 0..32 {
                    let t = PI * a as f64 / 32.0;
                    peak = peak.max(abs_cf(spec, &[rad * t.cos(), rad * t.sin()])?);
                }
            }
        }
        if peak < opt.decay_tol {
            return Ok(r);
        }
        r *= 2.0;
    }
    Err(Error::InsufficientDecay(format!(
        "|char_fn| above {:e} up to xi = {}",
        opt.decay_tol, opt.xi_limit
    )))
}

fn resolve_axes(spec: &CharFnSpec<f64>, grid: &GridSpec) -> Result<Vec<(f64, f64, usize)>> {
    let sig = sigmas(spec);
    let axes: Vec<_> = match grid {
        GridSpec::Auto { points, sigmas } => spec
            .c
            .iter()
            .zip(&sig)
            .map(|(&c, &s)| {
                let h = sigmas * s.max(1e-3);
                (c - h, c + h, *points)
            })
            .collect(),
        GridSpec::Explicit(a) => a.clone(),
    };
    if axes.len() != spec.dim() {
        return Err(Error::ArityMismatch {
            expected: spec.dim(),
            got: axes.len(),
        });
    }
    for a in &axes {
        if !(a.1 > a.0 && a.2 >= 2) {
            return Err(Error::InvalidArgument(format!("bad density axis {a:?}")));
        }
    }
    Ok(axes)
}

/// Density of the J₀-product distribution on a grid (dim ≤ 2).
pub fn invert_to_density(spec: &CharFnSpec<f64>, grid: &GridSpec, opt: &InversionOptions) -> Result<DensityGrid> {
    let dim = spec.dim();
    if dim == 0 || dim > 2 {
        return Err(Error::InvalidArgument(format!("density inversion supports dim 1 or 2, got {dim}")));
    }
    let axes = resolve_axes(spec, grid)?;
    let xi_max = xi_window(spec, opt)?;
    let sig = sigmas(spec);
    let width = axes.iter().map(|a| a.1 - a.0).fold(0.0, f64::max);
    let period = (4.0 * width).max(opt.period_sigmas * sig.iter().cloned().fold(0.0, f64::max));
    let target = 2.0 * PI / period;
    let k = ((xi_max / target).ceil() as usize).next_power_of_two();
    // the 2-D sum holds (2k+1)(k+1) values
    let cap = if dim == 1 { opt.max_xi_points } else { opt.max_xi_points_2d };
    if k > cap {
        return Err(Error::Capacity {
            requested: k as u64,
            limit: cap as u64,
        });
    }
    let dxi = xi_max / k as f64;
    let raw = if dim == 1 {
        invert_1d(spec, &axes[0], k, dxi)?
    } else {
        invert_2d(spec, &axes, k, dxi)?
    };
    let mut g = DensityGrid {
        dim,
        axes,
        values: raw.iter().map(|v| v.max(0.0)).collect(),
        mass: 0.0,
        mass_defect: 0.0,
        clipped_mass: 0.0,
        xi_max,
        xi_step: dxi,
        xi_points: k,
    };
    let (mut total, mut neg) = (0.0, 0.0);
    for (i, v) in raw.iter().enumerate() {
        let w = g.weight(i);
        total += w * v;
        if *v < 0.0 {
            neg -= w * v;
        }
    }
    g.mass = total + neg;
    g.mass_defect = (1.0 - total).abs();
    g.clipped_mass = neg;
    Ok(g)
}

fn invert_1d(spec: &CharFnSpec<f64>, axis: &(f64, f64, usize), k: usize, dxi: f64) -> Result<Vec<f64>> {
    let cf: Vec<Complex64> = (0..=k)
        .into_par_iter()
        .map(|i| char_fn(spec, &[i as f64 * dxi]).map(|v| v.value))
        .collect::<Result<_>>()?;
    Ok((0..axis.2)
        .into_par_iter()
        .map(|j| {
            let x = axis_point(axis, j);
            let mut acc = crate::numeric::KahanSum::new();
            let step = Complex64::from_polar(1.0, dxi * x);
            let mut e = Complex64::new(1.0, 0.0);
            for (i, z) in cf.iter().enumerate() {
                // re-anchor the rotation every 64 steps
                if i % 64 == 0 {
                    e = Complex64::from_polar(1.0, i as f64 * dxi * x);
                }
                acc.add(trap_weight(i, k + 1) * (e * z).re);
                e *= step;
            }
            acc.value() * dxi / PI
        })
        .collect())
}

fn invert_2d(spec: &CharFnSpec<f64>, axes: &[(f64, f64, usize)], k: usize, dxi: f64) -> Result<Vec<f64>> {
    // ξ₁ ∈ [−Ξ, Ξ], ξ₂ ∈ [0, Ξ]; the lower half-plane is the conjugate.
    let n1 = 2 * k + 1;
    let n2 = k + 1;
    let cf: Vec<Complex64> = (0..n1 * n2)
        .into_par_iter()
        .map(|idx| {
            let (a, b) = (idx / n2, idx % n2);
            let xi = [(a as f64 - k as f64) * dxi, b as f64 * dxi];
            char_fn(spec, &xi).map(|v| v.value)
        })
        .collect::<Result<_>>()?;
    let (ax, ay) = (&axes[0], &axes[1]);
    // A(ξ₁, x₂) = Σ_{ξ₂} w e^{iξ₂x₂} μ̂(ξ₁, ξ₂)
    let partial: Vec<Complex64> = (0..n1 * ay.2)
        .into_par_iter()
        .map(|idx| {
            let (a, j) = (idx / ay.2, idx % ay.2);
            let x2 = axis_point(ay, j);
            let mut acc = Complex64::new(0.0, 0.0);
            let step = Complex64::from_polar(1.0, dxi * x2);
            let mut e = Complex64::new(1.0, 0.0);
            for b in 0..n2 {
                if b % 64 == 0 {
                    e = Complex64::from_polar(1.0, b as f64 * dxi * x2);
                }
                acc += cf[a * n2 + b] * e * trap_weight(b, n2);
                e *= step;
            }
            acc
        })
        .collect();
    Ok((0..ax.2 * ay.2)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / ay.2, idx % ay.2);
            let x1 = axis_point(ax, i);
            let mut acc = 0.0;
            let step = Complex64::from_polar(1.0, dxi * x1);
            let mut e = Complex64::new(1.0, 0.0);
            for a in 0..n1 {
                if a % 64 == 0 {
                    e = Complex64::from_polar(1.0, (a as f64 - k as f64) * dxi * x1);
                }
                acc += trap_weight(a, n1) * (e * partial[a * ay.2 + j]).re;
                e *= step;
            }
            acc * 2.0 * dxi * dxi / (4.0 * PI * PI)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaceReport {
    /// P(X₁ > X₂).
    pub probability: f64,
    /// The difference is constant; `probability` is then a convention.
    pub degenerate: bool,
    pub mass_defect: f64,
    pub clipped_mass: f64,
}

/// P(X_i > X_j) from the density of the difference component.
pub fn race_probability(spec: &CharFnSpec<f64>, i: usize, j: usize, opt: &InversionOptions) -> Result<RaceReport> {
    let d = spec.difference(i, j)?;
    let c = d.c[0];
    if d.n_terms == 0 {
        let probability = if c > 0.0 {
            1.0
        } else if c < 0.0 {
            0.0
        } else {
            0.5
        };
        return Ok(RaceReport {
            probability,
            degenerate: true,
            mass_defect: 0.0,
            clipped_mass: 0.0,
        });
    }
    let s = sigmas(&d)[0];
    let bound: f64 = d.rows[0][..d.n_terms].iter().map(|z| z.norm()).sum();
    let half = bound.min(12.0 * s) * 1.05;
    let grid = GridSpec::Explicit(vec![(c - half, c + half, 4097)]);
    let g = invert_to_density(&d, &grid, opt)?;
    let h = axis_step(&g.axes[0]);
    let mut above = 0.0;
    for (k, w) in g.values.windows(2).enumerate() {
        let (a, b) = (g.point(0, k), g.point(0, k + 1));
        if a >= 0.0 {
            above += 0.5 * (w[0] + w[1]) * h;
        } else if b > 0.0 {
            // linear interpolation across 0
            let t = -a / h;
            let f0 = w[0] + t * (w[1] - w[0]);
            above += 0.5 * (f0 + w[1]) * b;
        }
    }
    Ok(RaceReport {
        probability: (above / g.mass).clamp(0.0, 1.0),
        degenerate: false,
        mass_defect: g.mass_defect,
        clipped_mass: g.clipped_mass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport {
    pub max_abs_diff: f64,
    pub max_density: f64,
    pub symmetric: bool,
}

/// Relative tolerance for a symmetric verdict.
const SYMMETRY_TOL: f64 = 1e-3;

/// 1-D: reflection about c. 2-D: exchange of the coordinates.
pub fn symmetry_test(spec: &CharFnSpec<f64>, opt: &InversionOptions) -> Result<SymmetryReport> {
    let sig = sigmas(spec);
    let smax = sig.iter().cloned().fold(0.0, f64::max).max(1e-3);
    let grid = match spec.dim() {
        1 => GridSpec::Explicit(vec![(spec.c[0] - 10.0 * smax, spec.c[0] + 10.0 * smax, 513)]),
        2 => {
            let lo = spec.c.iter().cloned().fold(f64::INFINITY, f64::min) - 8.0 * smax;
            let hi = spec.c.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 8.0 * smax;
            GridSpec::Explicit(vec![(lo, hi, 129), (lo, hi, 129)])
        }
        d => return Err(Error::InvalidArgument(format!("symmetry test supports dim 1 or 2, got {d}"))),
    };
    let g = invert_to_density(spec, &grid, opt)?;
    let max_density = g.values.iter().cloned().fold(0.0, f64::max);
    let mut diff: f64 = 0.0;
    if g.dim == 1 {
        let n = g.values.len();
        for j in 0..n {
            diff = diff.max((g.values[j] - g.values[n - 1 - j]).abs());
        }
    } else {
        let n = g.axes[0].2;
        for a in 0..n {
            for b in 0..n {
                diff = diff.max((g.values[a * n + b] - g.values[b * n + a]).abs());
            }
        }
    }
    Ok(SymmetryReport {
        max_abs_diff: diff,
        max_density,
        symmetric: diff <= SYMMETRY_TOL * max_density,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::model;
    use super::*;
    use crate::model::build_vector_model;

    fn zeta_like(n: usize) -> CharFnSpec<f64> {
        // |r| ~ 2/γ with γ spaced like the first zeros
        let rs: Vec<_> = (0..n)
            .map(|k| {
                let g = 14.0 + 6.0 * k as f64 / (1.0 + 0.1 * (k as f64).sqrt());
                (g, -1.0 / (g * g), -2.0 / g)
            })
            .collect();
        CharFnSpec::from_model(&model(0.0, &rs), None, 0.0).unwrap()
    }

    // P(X > 0) = 1/2 − (1/π)∫₀^∞ Im μ̂(ξ)/ξ dξ for μ̂(ξ) = E e^{−iξX}
    fn gil_pelaez(spec: &CharFnSpec<f64>) -> f64 {
        let (n, top) = (400_000, 400.0);
        let h = top / n as f64;
        let mut acc = 0.0;
        for i in 1..=n {
            let xi = i as f64 * h;
            let w = if i == n { 0.5 } else { 1.0 };
            acc -= w * char_fn(spec, &[xi]).unwrap().value.im / xi;
        }
        // integrand → c as ξ → 0; add the first half-cell
        acc += 0.5 * spec.c[0];
        0.5 + acc * h / PI
    }

    #[test]
    fn psi_like_density_moments() {
        let s = zeta_like(100);
        let g = invert_to_density(&s, &GridSpec::default(), &InversionOptions::default()).unwrap();
        assert!(g.mass_defect < 1e-3, "defect {}", g.mass_defect);
        let var = 0.5 * s.l2_sq();
        assert!((g.variance(0) - var).abs() < 0.05 * var);
        assert!(g.mean(0).abs() < 1e-6);
        assert!(g.xi_points.is_power_of_two());
    }

    #[test]
    fn retransform_recovers_char_fn() {
        let s = zeta_like(60);
        let g = invert_to_density(&s, &GridSpec::default(), &InversionOptions::default()).unwrap();
        for xi in [0.5, 2.0, 5.0] {
            let re = g.integrate(|x| (xi * x[0]).cos());
            let want = char_fn(&s, &[xi]).unwrap().value.re;
            assert!((re - want).abs() < 1e-4, "xi = {xi}");
        }
    }

    #[test]
    fn two_rotor_density_symmetric_and_bounded() {
        let m = model(0.5, &[(1.0, 0.3, 0.0), (std::f64::consts::SQRT_2, 0.0, 0.3)]);
        let s = CharFnSpec::from_model(&m, None, 0.0).unwrap();
        // J₀² decays like 1/ξ: only a loose window is attainable
        let opt = InversionOptions {
            decay_tol: 5e-3,
            ..Default::default()
        };
        assert!(matches!(
            invert_to_density(&s, &GridSpec::default(), &InversionOptions::default()),
            Err(Error::InsufficientDecay(_))
        ));
        let g = invert_to_density(&s, &GridSpec::Explicit(vec![(-0.5, 1.5, 401)]), &opt).unwrap();
        let n = g.values.len();
        for j in 0..n {
            assert!((g.values[j] - g.values[n - 1 - j]).abs() < 1e-9);
        }
        let outside = g.integrate(|x| if (x[0] - 0.5).abs() > 0.62 { 1.0 } else { 0.0 });
        assert!(outside < 0.02);
        let sym = symmetry_test(&s, &opt).unwrap();
        assert!(sym.symmetric);
    }

    #[test]
    fn race_matches_gil_pelaez_and_reflects() {
        let a = model(0.05, &[(14.1, 0.1, -0.05), (21.0, 0.07, 0.02), (25.0, -0.04, 0.05)]);
        let b = model(0.0, &[(14.1, -0.1, 0.05), (21.0, 0.07, 0.02), (30.4, 0.06, 0.0)]);
        let mut ms = vec![a, b];
        for k in 0..40 {
            let g = 32.0 + 2.3 * k as f64;
            ms[k % 2] = {
                let mut t: Vec<_> = ms[k % 2].terms().to_vec();
                t.push(crate::model::Term {
                    lambda: g,
                    r: Complex64::new(1.0 / g, 0.5 / g),
                });
                crate::model::CoefficientModel::new("x", ms[k % 2].c, t).unwrap()
            };
        }
        let v = build_vector_model(&ms).unwrap();
        let s = CharFnSpec::from_vector(&v, None, 0.0).unwrap();
        let opt = InversionOptions::default();
        let p = race_probability(&s, 0, 1, &opt).unwrap();
        let q = race_probability(&s, 1, 0, &opt).unwrap();
        let oracle = gil_pelaez(&s.difference(0, 1).unwrap());
        assert!((p.probability - oracle).abs() < 1e-3, "{} vs {oracle}", p.probability);
        assert!((p.probability + q.probability - 1.0).abs() < 1e-6);
        assert!(p.probability > 0.5);
        let same = build_vector_model(&[ms[0].clone(), ms[0].clone()]).unwrap();
        let s2 = CharFnSpec::from_vector(&same, None, 0.0).unwrap();
        let r = race_probability(&s2, 0, 1, &opt).unwrap();
        assert!(r.degenerate && r.probability == 0.5);
    }

    #[test]
    fn two_dimensional_swap_symmetry() {
        let rs = |sign: f64| -> Vec<(f64, f64, f64)> {
            (0..30)
                .map(|k| {
                    let g = 6.0 + 3.1 * k as f64;
                    (g, sign * 1.0 / g, 0.5 / g)
                })
                .collect()
        };
        let a = model(0.0, &rs(1.0));
        let b = model(0.0, &rs(-1.0));
        let v = build_vector_model(&[a.clone(), b]).unwrap();
        let s = CharFnSpec::from_vector(&v, None, 0.0).unwrap();
        let opt = InversionOptions {
            decay_tol: 1e-8,
            ..Default::default()
        };
        let rep = symmetry_test(&s, &opt).unwrap();
        assert!(rep.symmetric, "{rep:?}");
        // shrinking one row breaks the exchange symmetry
        let small: Vec<_> = rs(-1.0).iter().map(|&(g, re, im)| (g, 0.6 * re, 0.5 * im)).collect();
        let v = build_vector_model(&[a, model(0.0, &small)]).unwrap();
        let s = CharFnSpec::from_vector(&v, None, 0.0).unwrap();
        let rep = symmetry_test(&s, &opt).unwrap();
        assert!(!rep.symmetric, "{rep:?}");
    }
}
