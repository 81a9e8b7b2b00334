//! Histograms of sampled error terms and strict-order log densities.

use crate::arith::ErrorTermSample;
use crate::error::{Error, Result};
use crate::model::CoefficientModel;
use crate::numeric::KahanSum;

/// Minimum number of samples for a histogram.
pub const MIN_SAMPLES: usize = 1000;
/// Cap on the total number of bins.
const MAX_BINS: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinSpec {
    /// Freedman–Diaconis width per axis over the sample range.
    Auto,
    /// `n` equal bins per axis over the sample range.
    Count(usize),
    /// Fixed range and count on every axis; samples outside fall in the edge bins.
    Explicit { lo: f64, hi: f64, count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Binning {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Binning {
    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.count as f64
    }

    fn index(&self, v: f64) -> usize {
        let i = ((v - self.lo) / self.width()).floor();
        if i < 0.0 {
            0
        } else {
            (i as usize).min(self.count - 1)
        }
    }

    pub fn edges(&self, i: usize) -> (f64, f64) {
        let w = self.width();
        (self.lo + i as f64 * w, self.lo + (i + 1) as f64 * w)
    }
}

/// How samples are weighted. A uniform y-grid is the logarithmic measure
/// dx/x in x = e^y, so the two coincide here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    UniformInY,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    pub dim: usize,
    pub bins: Vec<Binning>,
    /// Row-major over axes (last axis fastest).
    pub mass: Vec<f64>,
    pub mean: Vec<f64>,
    /// E[X²] per axis.
    pub second_moment: Vec<f64>,
    pub variance: Vec<f64>,
    pub sample_count: usize,
    /// Samples that fell outside explicit bounds and were put in edge bins.
    pub clamped: usize,
    pub weighting: Weighting,
}

impl EmpiricalDistribution {
    /// Mean of axis `k` recomputed from the binned mass (bin centres).
    pub fn binned_mean(&self, k: usize) -> f64 {
        let stride: usize = self.bins[k + 1..].iter().map(|b| b.count).product();
        let mut acc = KahanSum::new();
        for (i, m) in self.mass.iter().enumerate() {
            let j = (i / stride) % self.bins[k].count;
            let (a, b) = self.bins[k].edges(j);
            acc.add(m * 0.5 * (a + b));
        }
        acc.value()
    }

    pub fn total_mass(&self) -> f64 {
        KahanSum::sum_iter(self.mass.iter().copied())
    }
}

fn auto_binning(v: &mut [f64], count: Option<usize>) -> Result<Binning> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let (lo, hi) = (v[0], v[v.len() - 1]);
    if lo == hi {
        return Err(Error::DegenerateRange);
    }
    let n = v.len();
    let count = match count {
        Some(c) => c,
        None => {
            let q = |p: f64| v[((n - 1) as f64 * p).round() as usize];
            let iqr = q(0.75) - q(0.25);
            if iqr > 0.0 {
                let h = 2.0 * iqr / (n as f64).cbrt();
                (((hi - lo) / h).ceil() as usize).clamp(1, 10_000)
            } else {
                // Sturges
                ((n as f64).log2().ceil() as usize) + 1
            }
        }
    };
    Ok(Binning { lo, hi, count })
}

/// Normalized histogram and sample moments of equally weighted vector samples.
pub fn empirical_distribution_values(values: &[Vec<f64>], spec: BinSpec) -> Result<EmpiricalDistribution> {
    if values.len() < MIN_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "{} samples, need at least {MIN_SAMPLES}",
            values.len()
        )));
    }
    let dim = values[0].len();
    if dim == 0 {
        return Err(Error::InvalidArgument("zero-dimensional samples".into()));
    }
    for v in values {
        if v.len() != dim {
            return Err(Error::ArityMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite sample".into()));
        }
    }
    let mut bins = Vec::with_capacity(dim);
    for k in 0..dim {
        let b = match spec {
            BinSpec::Explicit { lo, hi, count } => {
                if !(hi > lo && count > 0) {
                    return Err(Error::InvalidArgument(format!("bad bins [{lo}, {hi}] x {count}")));
                }
                Binning { lo, hi, count }
            }
            BinSpec::Count(0) => return Err(Error::InvalidArgument("bin count must be positive".into())),
            BinSpec::Count(c) => auto_binning(&mut values.iter().map(|v| v[k]).collect::<Vec<_>>(), Some(c))?,
            BinSpec::Auto => auto_binning(&mut values.iter().map(|v| v[k]).collect::<Vec<_>>(), None)?,
        };
        bins.push(b);
    }
    let total: u64 = bins.iter().map(|b| b.count as u64).product();
    if total > MAX_BINS {
        return Err(Error::Capacity {
            requested: total,
            limit: MAX_BINS,
        });
    }
    let mut counts = vec![0u64; total as usize];
    let mut clamped = 0;
    for v in values {
        let mut idx = 0;
        let mut out = false;
        for (x, b) in v.iter().zip(&bins) {
            out |= *x < b.lo || *x > b.hi;
            idx = idx * b.count + b.index(*x);
        }
        clamped += out as usize;
        counts[idx] += 1;
    }
    let n = values.len() as f64;
    let mass = counts.iter().map(|&c| c as f64 / n).collect();
    let mut mean = Vec::with_capacity(dim);
    let mut second = Vec::with_capacity(dim);
    let mut variance = Vec::with_capacity(dim);
    for k in 0..dim {
        let m = KahanSum::sum_iter(values.iter().map(|v| v[k])) / n;
        let s = KahanSum::sum_iter(values.iter().map(|v| v[k] * v[k])) / n;
        let var = KahanSum::sum_iter(values.iter().map(|v| (v[k] - m) * (v[k] - m))) / n;
        mean.push(m);
        second.push(s);
        variance.push(var);
    }
    Ok(EmpiricalDistribution {
        dim,
        bins,
        mass,
        mean,
        second_moment: second,
        variance,
        sample_count: values.len(),
        clamped,
        weighting: Weighting::UniformInY,
    })
}

/// [`empirical_distribution_values`] over error-term samples on a uniform y-grid.
pub fn empirical_distribution(samples: &[ErrorTermSample], spec: BinSpec) -> Result<EmpiricalDistribution> {
    if samples.len() >= 3 {
        let h = samples[1].y - samples[0].y;
        let bad = samples
            .windows(2)
            .any(|w| ((w[1].y - w[0].y) - h).abs() > 1e-9 * h.abs().max(1.0));
        if bad {
            return Err(Error::InvalidArgument("samples must lie on an equally spaced y-grid".into()));
        }
    }
    let values: Vec<Vec<f64>> = samples.iter().map(|s| s.value.clone()).collect();
    empirical_distribution_values(&values, spec)
}

/// Removes each component model's residue terms from the samples.
pub fn subtract_residues(samples: &[ErrorTermSample], models: &[&CoefficientModel<f64>]) -> Result<Vec<ErrorTermSample>> {
    samples
        .iter()
        .map(|s| {
            if s.value.len() != models.len() {
                return Err(Error::ArityMismatch {
                    expected: models.len(),
                    got: s.value.len(),
                });
            }
            Ok(ErrorTermSample {
                y: s.y,
                value: s.value.iter().zip(models).map(|(v, m)| v - m.residue_at(s.y)).collect(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    Always { dim: usize },
    /// x[i₀] > x[i₁] > … (strict).
    StrictOrder(Vec<usize>),
}

impl Predicate {
    pub fn arity(&self) -> usize {
        match self {
            Predicate::Always { dim } => *dim,
            Predicate::StrictOrder(ix) => ix.len(),
        }
    }

    pub fn holds(&self, v: &[f64]) -> bool {
        match self {
            Predicate::Always { .. } => true,
            Predicate::StrictOrder(ix) => ix.windows(2).all(|w| v[w[0]] > v[w[1]]),
        }
    }
}

/// Fraction of grid samples satisfying `pred`; on a uniform y-grid this is
/// the logarithmic density of the x-set at the truncation point.
pub fn log_density(samples: &[ErrorTermSample], pred: &Predicate) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("no samples".into()));
    }
    let dim = samples[0].value.len();
    if pred.arity() != dim {
        return Err(Error::ArityMismatch {
            expected: pred.arity(),
            got: dim,
        });
    }
    if let Predicate::StrictOrder(ix) = pred {
        let mut seen = vec![false; dim];
        for &i in ix {
            if i >= dim || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument("order predicate must permute the components".into()));
            }
        }
    }
    let mut hits = 0usize;
    for s in samples {
        if s.value.len() != dim {
            return Err(Error::ArityMismatch {
                expected: dim,
                got: s.value.len(),
            });
        }
        hits += pred.holds(&s.value) as usize;
    }
    Ok(hits as f64 / samples.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Residue;
    use proptest::prelude::*;

    fn scalar(vals: impl IntoIterator<Item = f64>) -> Vec<ErrorTermSample> {
        vals.into_iter()
            .enumerate()
            .map(|(i, v)| ErrorTermSample {
                y: i as f64 * 0.01,
                value: vec![v],
            })
            .collect()
    }

    #[test]
    fn constant_samples() {
        let s = scalar(std::iter::repeat(2.5).take(2000));
        assert!(matches!(empirical_distribution(&s, BinSpec::Auto), Err(Error::DegenerateRange)));
        let d = empirical_distribution(
            &s,
            BinSpec::Explicit {
                lo: 0.0,
                hi: 5.0,
                count: 10,
            },
        )
        .unwrap();
        assert_eq!(d.mass[5], 1.0);
        assert_eq!(d.variance[0], 0.0);
        assert_eq!(d.mean[0], 2.5);
    }

    #[test]
    fn sine_is_arcsine_shaped() {
        let s = scalar((0..20000).map(|i| (i as f64 * 0.01).sin()));
        let d = empirical_distribution(&s, BinSpec::Count(20)).unwrap();
        // (1 − cos Y)/Y with Y = 200
        assert!((d.mean[0] - (1.0 - 200f64.cos()) / 200.0).abs() < 1e-3);
        assert!((d.variance[0] - 0.5).abs() < 1e-2);
        // heavier at the edges than the centre
        assert!(d.mass[0] > 3.0 * d.mass[10]);
        assert!(d.mass[19] > 3.0 * d.mass[9]);
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_and_irregular() {
        assert!(matches!(
            empirical_distribution(&scalar((0..999).map(|i| i as f64)), BinSpec::Auto),
            Err(Error::InsufficientData(_))
        ));
        let mut s = scalar((0..1500).map(|i| i as f64));
        s[700].y += 0.003;
        assert!(empirical_distribution(&s, BinSpec::Auto).is_err());
    }

    #[test]
    fn two_dimensional_histogram() {
        let s: Vec<_> = (0..4000)
            .map(|i| {
                let t = i as f64 * 0.01;
                ErrorTermSample {
                    y: t,
                    value: vec![t.sin(), (2.0 * t).cos()],
                }
            })
            .collect();
        let d = empirical_distribution(&s, BinSpec::Count(8)).unwrap();
        assert_eq!(d.mass.len(), 64);
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
        assert!((d.binned_mean(1) - d.mean[1]).abs() < d.bins[1].width());
    }

    #[test]
    fn log_density_predicates() {
        let s: Vec<_> = (0..100)
            .map(|i| ErrorTermSample {
                y: i as f64,
                value: vec![(i as f64).sin(), (i as f64).sin()],
            })
            .collect();
        assert_eq!(log_density(&s, &Predicate::Always { dim: 2 }).unwrap(), 1.0);
        assert_eq!(log_density(&s, &Predicate::StrictOrder(vec![0, 1])).unwrap(), 0.0);
        assert!(matches!(
            log_density(&s, &Predicate::StrictOrder(vec![0, 1, 2])),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(log_density(&s, &Predicate::StrictOrder(vec![0, 0])).is_err());
    }

    #[test]
    fn residues_subtracted_per_component() {
        let m = CoefficientModel::constant("a", 0.0).with_residues(vec![Residue::Exp {
            amp: 1.0,
            rate: 0.0,
            power: 0,
        }]);
        let z = CoefficientModel::constant("b", 0.0);
        let s = vec![ErrorTermSample {
            y: 1.0,
            value: vec![3.0, 3.0],
        }];
        let out = subtract_residues(&s, &[&m, &z]).unwrap();
        assert_eq!(out[0].value, vec![2.0, 3.0]);
    }

    proptest! {
        #[test]
        fn mass_normalized_and_affine_mean(
            seed in 0u64..1000,
            a in 0.1f64..5.0,
            b in -3.0f64..3.0,
        ) {
            let vals: Vec<f64> = (0..1500).map(|i| ((i as f64 + seed as f64) * 0.37).sin() + 0.3 * ((i as f64) * 1.3).cos()).collect();
            let d = empirical_distribution(&scalar(vals.iter().copied()), BinSpec::Auto).unwrap();
            prop_assert!((d.total_mass() - 1.0).abs() < 1e-12);
            prop_assert!((d.binned_mean(0) - d.mean[0]).abs() <= d.bins[0].width());
            let e = empirical_distribution(&scalar(vals.iter().map(|v| a * v + b)), BinSpec::Auto).unwrap();
            prop_assert!((e.mean[0] - (a * d.mean[0] + b)).abs() < 1e-9 * (1.0 + e.mean[0].abs()));
            prop_assert!((e.binned_mean(0) - (a * d.binned_mean(0) + b)).abs() <= e.bins[0].width() + a * d.bins[0].width());
        }

        #[test]
        fn complementary_orders_cover_all_but_ties(vals in proptest::collection::vec((-3i32..3, -3i32..3), 1..200)) {
            let s: Vec<_> = vals.iter().enumerate().map(|(i, &(a, b))| ErrorTermSample { y: i as f64, value: vec![a as f64, b as f64] }).collect();
            let p = log_density(&s, &Predicate::StrictOrder(vec![0, 1])).unwrap();
            let q = log_density(&s, &Predicate::StrictOrder(vec![1, 0])).unwrap();
            let ties = vals.iter().filter(|(a, b)| a == b).count() as f64 / vals.len() as f64;
            prop_assert!(p + q <= 1.0 + 1e-15);
            prop_assert!((1.0 - p - q - ties).abs() < 1e-12);
        }
    }
}
