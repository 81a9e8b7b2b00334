//! Monte-Carlo averages over the torus of phases, an oracle for the J₀
//! product on small models.

use super::CharFnSpec;
use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Independent streams; results do not depend on the worker count.
pub const MC_CHUNKS: usize = 64;
const MAX_TERMS: usize = 6;
const MIN_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum TestFn {
    One,
    /// e^{−iξ·x}
    CharExp(Vec<f64>),
    /// 1[x_k > t]
    Above { component: usize, threshold: f64 },
    /// 1[x_{i₀} > x_{i₁} > …]
    StrictOrder(Vec<usize>),
}

impl TestFn {
    fn eval(&self, x: &[f64]) -> Complex64 {
        match self {
            TestFn::One => Complex64::new(1.0, 0.0),
            TestFn::CharExp(xi) => {
                let p: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
                Complex64::from_polar(1.0, -p)
            }
            TestFn::Above { component, threshold } => Complex64::new((x[*component] > *threshold) as u8 as f64, 0.0),
            TestFn::StrictOrder(ix) => Complex64::new(ix.windows(2).all(|w| x[w[0]] > x[w[1]]) as u8 as f64, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: Complex64,
    /// sqrt((E|f|² − |Ef|²)/n)
    pub std_err: f64,
}

#[derive(Clone, Copy, Default)]
struct Acc {
    re: KahanSum<f64>,
    im: KahanSum<f64>,
    sq: KahanSum<f64>,
}

/// Averages of each test function over x = c + Re Σ_m r(λ_m) e^{2πiθ_m}
/// with θ uniform on the torus.
pub fn torus_mc_oracle(spec: &CharFnSpec<f64>, fs: &[TestFn], n_samples: usize, seed: u64) -> Result<Vec<McEstimate>> {
    let n = spec.n_terms;
    if n > MAX_TERMS {
        return Err(Error::InvalidArgument(format!("torus oracle takes at most {MAX_TERMS} terms, got {n}")));
    }
    if n_samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_SAMPLES} samples")));
    }
    let dim = spec.dim();
    for f in fs {
        let ok = match f {
            TestFn::One => true,
            TestFn::CharExp(xi) => xi.len() == dim,
            TestFn::Above { component, .. } => *component < dim,
            TestFn::StrictOrder(ix) => ix.iter().all(|&i| i < dim),
        };
        if !ok {
            return Err(Error::ArityMismatch {
                expected: dim,
                got: match f {
                    TestFn::CharExp(xi) => xi.len(),
                    TestFn::StrictOrder(ix) => ix.len(),
                    _ => dim + 1,
                },
            });
        }
    }
    let per = n_samples / MC_CHUNKS;
    let extra = n_samples % MC_CHUNKS;
    let parts: Vec<Vec<Acc>> = (0..MC_CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let count = per + (chunk < extra) as usize;
            let mut acc = vec![Acc::default(); fs.len()];
            let mut x = vec![0.0; dim];
            let mut rot = [Complex64::new(0.0, 0.0); MAX_TERMS];
            for _ in 0..count {
                for r in rot.iter_mut().take(n) {
                    *r = Complex64::from_polar(1.0, TAU * rng.gen::<f64>());
                }
                for (k, xk) in x.iter_mut().enumerate() {
                    let mut v = spec.c[k];
                    for (m, e) in rot.iter().take(n).enumerate() {
                        v += (spec.rows[k][m] * e).re;
                    }
                    *xk = v;
                }
                for (a, f) in acc.iter_mut().zip(fs) {
                    let z = f.eval(&x);
                    a.re.add(z.re);
                    a.im.add(z.im);
                    a.sq.add(z.norm_sqr());
                }
            }
            acc
        })
        .collect();
    let nf = n_samples as f64;
    Ok((0..fs.len())
        .map(|i| {
            let mut t = Acc::default();
            for p in &parts {
                t.re.merge(&p[i].re);
                t.im.merge(&p[i].im);
                t.sq.merge(&p[i].sq);
            }
            let mean = Complex64::new(t.re.value() / nf, t.im.value() / nf);
            let var = (t.sq.value() / nf - mean.norm_sqr()).max(0.0);
            McEstimate {
                mean,
                std_err: (var / nf).sqrt(),
            }
        })
        .collect())
}
