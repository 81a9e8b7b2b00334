//! Normalized error terms sampled on a logarithmic grid.

use super::sieve::{map_blocks, SieveBlock, SieveConfig};
use super::summatory::checked_residue;
use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::special::li;
use crate::zeta::zeta_real;
use std::fmt;

/// The error terms the truth side can evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorTermKind {
    /// e^{-y/2}(ψ(e^y) − e^y).
    Psi,
    /// Weighted Möbius sum with the case split at α = 1/2.
    Mobius { alpha: f64 },
    /// Weighted Liouville sum with the three-way case split.
    Liouville { alpha: f64 },
    /// e^{-y/2} M(e^y; q, a).
    MobiusAp { q: u64, a: u64 },
    /// y e^{-y/2}(π(e^y) − Li(e^y)) with Li(x) = li(x) − li(2).
    PiLi,
}

impl ErrorTermKind {
    pub fn label(&self) -> String {
        match self {
            ErrorTermKind::Psi => "psi".into(),
            ErrorTermKind::Mobius { alpha } => format!("mobius:alpha={alpha}"),
            ErrorTermKind::Liouville { alpha } => format!("liouville:alpha={alpha}"),
            ErrorTermKind::MobiusAp { q, a } => format!("mobius-ap:q={q}:a={a}"),
            ErrorTermKind::PiLi => "pi-li".into(),
        }
    }

    pub fn parse_label(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown error-term label '{s}'"));
        let mut parts = s.split(':');
        let head = parts.next().ok_or_else(bad)?;
        let mut get = |key: &str| -> Result<String> {
            let p = parts.next().ok_or_else(bad)?;
            p.strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .map(str::to_string)
                .ok_or_else(bad)
        };
        let kind = match head {
            "psi" => ErrorTermKind::Psi,
            "pi-li" => ErrorTermKind::PiLi,
            "mobius" => ErrorTermKind::Mobius {
                alpha: get("alpha")?.parse().map_err(|_| bad())?,
            },
            "liouville" => ErrorTermKind::Liouville {
                alpha: get("alpha")?.parse().map_err(|_| bad())?,
            },
            "mobius-ap" => {
                let q = get("q")?.parse().map_err(|_| bad())?;
                let a = get("a")?.parse().map_err(|_| bad())?;
                ErrorTermKind::MobiusAp { q, a }
            }
            _ => return Err(bad()),
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ErrorTermKind::Mobius { alpha } | ErrorTermKind::Liouville { alpha } => {
                if !(0.0..=1.0).contains(&alpha) {
                    return Err(Error::InvalidArgument(format!("alpha = {alpha} outside [0, 1]")));
                }
            }
            ErrorTermKind::MobiusAp { q, a } => {
                checked_residue(q, a)?;
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for ErrorTermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTermSample {
    pub y: f64,
    pub value: Vec<f64>,
}

/// Largest integer `x ≤ e^y`, tolerant of the last-bit error of `exp`
/// (so that `y = ln 10` lands on 10).
pub fn floor_exp(y: f64) -> u64 {
    (y.exp() * (1.0 + 1e-12)).floor().max(1.0) as u64
}

/// Normalized scalar error term on `y_grid`.
pub fn error_term_series(
    kind: ErrorTermKind,
    y_grid: &[f64],
    cfg: &SieveConfig,
) -> Result<Vec<ErrorTermSample>> {
    error_term_series_vec(&[kind], y_grid, cfg)
}

/// All `kinds` on `y_grid` from one sieve sweep; sample `i` carries one
/// component per kind.
pub fn error_term_series_vec(
    kinds: &[ErrorTermKind],
    y_grid: &[f64],
    cfg: &SieveConfig,
) -> Result<Vec<ErrorTermSample>> {
    if kinds.is_empty() {
        return Err(Error::InvalidArgument("no error-term kinds requested".into()));
    }
    for k in kinds {
        k.validate()?;
    }
    for (i, &y) in y_grid.iter().enumerate() {
        if !(y >= 0.0 && y.is_finite()) {
            return Err(Error::InvalidArgument(format!("grid point y = {y} must be finite and >= 0")));
        }
        if i > 0 && y <= y_grid[i - 1] {
            return Err(Error::InvalidArgument("y grid must be strictly increasing".into()));
        }
        if kinds.contains(&ErrorTermKind::PiLi) && y < 2f64.ln() - 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "pi-li is defined for y >= ln 2, got y = {y}"
            )));
        }
    }
    if y_grid.is_empty() {
        return Ok(Vec::new());
    }
    let xs: Vec<u64> = y_grid.iter().map(|&y| floor_exp(y)).collect();
    let sums = summatory_on_grid(kinds, &xs, cfg)?;
    let consts: Vec<Subtract> = kinds.iter().map(|k| subtraction(*k)).collect::<Result<_>>()?;

    let out = y_grid
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let value = kinds
                .iter()
                .zip(&consts)
                .enumerate()
                .map(|(k, (kind, sub))| normalize(*kind, sub, y, sums[i * kinds.len() + k]))
                .collect();
            ErrorTermSample { y, value }
        })
        .collect();
    Ok(out)
}

/// What the truth subtracts before scaling.
#[derive(Debug, Clone, Copy)]
enum Subtract {
    None,
    Constant(f64),
    /// y ↦ slope·y
    Linear(f64),
}

fn subtraction(kind: ErrorTermKind) -> Result<Subtract> {
    Ok(match kind {
        ErrorTermKind::Mobius { alpha } if alpha > 0.5 => {
            if alpha == 1.0 {
                Subtract::Constant(0.0)
            } else {
                Subtract::Constant(1.0 / zeta_real(alpha)?)
            }
        }
        ErrorTermKind::Liouville { alpha } if alpha == 0.5 => {
            Subtract::Linear(1.0 / (2.0 * zeta_real(0.5)?))
        }
        ErrorTermKind::Liouville { alpha } if alpha > 0.5 => {
            if alpha == 1.0 {
                Subtract::Constant(0.0)
            } else {
                Subtract::Constant(zeta_real(2.0 * alpha)? / zeta_real(alpha)?)
            }
        }
        _ => Subtract::None,
    })
}

fn normalize(kind: ErrorTermKind, sub: &Subtract, y: f64, s: f64) -> f64 {
    let shifted = match *sub {
        Subtract::None => s,
        Subtract::Constant(c) => s - c,
        Subtract::Linear(k) => s - k * y,
    };
    match kind {
        ErrorTermKind::Psi => (-0.5 * y).exp() * (s - y.exp()),
        ErrorTermKind::Mobius { alpha } | ErrorTermKind::Liouville { alpha } => {
            ((alpha - 0.5) * y).exp() * shifted
        }
        ErrorTermKind::MobiusAp { .. } => (-0.5 * y).exp() * s,
        ErrorTermKind::PiLi => {
            let x = y.exp();
            let big_li = li(x) - li(2.0);
            y * (-0.5 * y).exp() * (s - big_li)
        }
    }
}

#[inline]
fn term(kind: ErrorTermKind, b: &SieveBlock, i: usize, n: u64) -> f64 {
    match kind {
        ErrorTermKind::Psi => b.lambda_vm[i],
        ErrorTermKind::Mobius { alpha } => {
            let m = b.mu[i] as f64;
            if m == 0.0 || alpha == 0.0 {
                m
            } else {
                m * (n as f64).powf(-alpha)
            }
        }
        ErrorTermKind::Liouville { alpha } => {
            let l = b.liouville[i] as f64;
            if alpha == 0.0 {
                l
            } else {
                l * (n as f64).powf(-alpha)
            }
        }
        ErrorTermKind::MobiusAp { q, a } => {
            if n % q == a % q {
                b.mu[i] as f64
            } else {
                0.0
            }
        }
        ErrorTermKind::PiLi => {
            if b.mu[i] == -1 && b.lambda_vm[i] > 0.0 {
                1.0
            } else {
                0.0
            }
        }
    }
}

struct BlockPartial {
    first: usize,
    /// Row-major `[grid point][kind]` within-block partial sums.
    values: Vec<f64>,
    totals: Vec<KahanSum<f64>>,
}

/// Exact summatory values `Σ_{n ≤ xs[i]} term_k(n)` for every grid point,
/// row-major `[i][k]`. Blocks are reduced in ascending order.
fn summatory_on_grid(kinds: &[ErrorTermKind], xs: &[u64], cfg: &SieveConfig) -> Result<Vec<f64>> {
    let nk = kinds.len();
    let x_max = *xs.last().expect("nonempty grid");
    let partials = map_blocks(x_max, cfg, |b| {
        let first = xs.partition_point(|&x| x < b.lo);
        let last = xs.partition_point(|&x| x <= b.hi);
        let mut acc = vec![KahanSum::<f64>::new(); nk];
        let mut values = Vec::with_capacity((last - first) * nk);
        let mut j = first;
        for i in 0..b.len() {
            let n = b.lo + i as u64;
            for (k, kind) in kinds.iter().enumerate() {
                let v = term(*kind, b, i, n);
                if v != 0.0 {
                    acc[k].add(v);
                }
            }
            while j < last && xs[j] == n {
                values.extend(acc.iter().map(|a| a.value()));
                j += 1;
            }
        }
        BlockPartial {
            first,
            values,
            totals: acc,
        }
    })?;

    let mut out = vec![0.0; xs.len() * nk];
    let mut prefix = vec![KahanSum::<f64>::new(); nk];
    for p in &partials {
        let rows = p.values.len() / nk;
        for r in 0..rows {
            for k in 0..nk {
                let mut s = prefix[k];
                s.add(p.values[r * nk + k]);
                out[(p.first + r) * nk + k] = s.value();
            }
        }
        for k in 0..nk {
            prefix[k].merge(&p.totals[k]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SieveConfig {
        SieveConfig::default()
    }

    #[test]
    fn labels_round_trip() {
        for k in [
            ErrorTermKind::Psi,
            ErrorTermKind::PiLi,
            ErrorTermKind::Mobius { alpha: 0.0 },
            ErrorTermKind::Liouville { alpha: 0.5 },
            ErrorTermKind::MobiusAp { q: 3, a: 2 },
        ] {
            assert_eq!(ErrorTermKind::parse_label(&k.label()).unwrap(), k);
        }
        assert!(ErrorTermKind::parse_label("mobius-ap:q=6:a=2").is_err());
        assert!(ErrorTermKind::parse_label("nonsense").is_err());
    }

    #[test]
    fn mobius_at_ten() {
        let s = error_term_series(ErrorTermKind::Mobius { alpha: 0.0 }, &[10f64.ln()], &cfg()).unwrap();
        assert!((s[0].value[0] + 10f64.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn psi_at_zero() {
        let s = error_term_series(ErrorTermKind::Psi, &[0.0], &cfg()).unwrap();
        assert_eq!(s[0].value, vec![-1.0]);
    }

    #[test]
    fn liouville_half_subtracts_secular_term() {
        let y = 100f64.ln();
        let s = error_term_series(ErrorTermKind::Liouville { alpha: 0.5 }, &[y], &cfg()).unwrap();
        let b = crate::arith::sieve_range(1, 100, &cfg()).unwrap();
        let l: f64 = (1..=100).map(|n| b.liouville[n - 1] as f64 / (n as f64).sqrt()).sum();
        let zeta_half = -1.460_354_508_809_586_8;
        let expect = l - y / (2.0 * zeta_half);
        assert!((s[0].value[0] - expect).abs() < 1e-12);
    }

    #[test]
    fn vector_matches_scalar_runs() {
        let grid: Vec<f64> = (0..400).map(|i| 2f64.ln() + 0.03 * i as f64).collect();
        let kinds = [
            ErrorTermKind::Psi,
            ErrorTermKind::MobiusAp { q: 3, a: 1 },
            ErrorTermKind::MobiusAp { q: 3, a: 2 },
            ErrorTermKind::Mobius { alpha: 0.75 },
            ErrorTermKind::PiLi,
        ];
        let small = SieveConfig {
            block_size: 1000,
            max_x: 1 << 27,
        };
        let v = error_term_series_vec(&kinds, &grid, &small).unwrap();
        for (k, kind) in kinds.iter().enumerate() {
            let s = error_term_series(*kind, &grid, &cfg()).unwrap();
            for (a, b) in v.iter().zip(&s) {
                assert!((a.value[k] - b.value[0]).abs() < 1e-12, "{kind} at y = {}", a.y);
            }
        }
    }

    #[test]
    fn pi_li_counts_primes() {
        // π(100) = 25
        let y = 100f64.ln();
        let s = error_term_series(ErrorTermKind::PiLi, &[y], &cfg()).unwrap();
        let expect = y * (-0.5 * y).exp() * (25.0 - (li(100.0) - li(2.0)));
        assert!((s[0].value[0] - expect).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(error_term_series(ErrorTermKind::Psi, &[1.0, 0.5], &cfg()).is_err());
        assert!(error_term_series(ErrorTermKind::Psi, &[-1.0], &cfg()).is_err());
        let tight = SieveConfig {
            block_size: 1 << 10,
            max_x: 1 << 12,
        };
        assert!(matches!(
            error_term_series(ErrorTermKind::Psi, &[10.0], &tight),
            Err(Error::Capacity { .. })
        ));
    }
}
