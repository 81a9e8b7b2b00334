//! Zero datasets: text-v1 persistence and the moment statistics built on them.

use crate::error::{Error, Result};
use crate::numeric::{fmt_sig, KahanSum};
use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

pub use crate::zeta::ZeroDatum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    Zeta,
    Dirichlet { q: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroDataset {
    pub kind: DatasetKind,
    /// Sorted by γ; for Dirichlet data a merged multiset tagged by `char_id`.
    pub zeros: Vec<ZeroDatum>,
    pub gamma_max: f64,
    pub provenance: String,
}

impl ZeroDataset {
    pub fn new(kind: DatasetKind, zeros: Vec<ZeroDatum>, gamma_max: f64, provenance: impl Into<String>) -> Result<Self> {
        let ds = ZeroDataset {
            kind,
            zeros,
            gamma_max,
            provenance: provenance.into(),
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Every zero carries a derivative magnitude.
    pub fn is_coefficient_ready(&self) -> bool {
        self.zeros.iter().all(|z| z.deriv_abs.is_some())
    }

    pub fn has_aux(&self) -> bool {
        self.zeros.iter().all(|z| z.aux_zeta2rho.is_some())
    }

    fn validate(&self) -> Result<()> {
        let mut last: HashMap<Option<usize>, f64> = HashMap::new();
        for (i, z) in self.zeros.iter().enumerate() {
            if !(z.gamma > 0.0 && z.gamma.is_finite()) {
                return Err(Error::InvalidArgument(format!("zero {i}: gamma must be positive")));
            }
            if let Some(d) = z.deriv_abs {
                if !(d > 0.0) {
                    return Err(Error::InvalidArgument(format!("zero {i}: derivative magnitude must be positive")));
                }
            }
            if let Some(&prev) = last.get(&z.char_id) {
                if z.gamma <= prev {
                    return Err(Error::Monotonicity {
                        line: i + 1,
                        prev,
                        gamma: z.gamma,
                    });
                }
            }
            last.insert(z.char_id, z.gamma);
        }
        if let Some(z) = self.zeros.last() {
            if self.gamma_max < z.gamma {
                return Err(Error::InvalidArgument(format!(
                    "gamma_max {} below last ordinate {}",
                    self.gamma_max, z.gamma
                )));
            }
        }
        Ok(())
    }

    /// Zeros with γ ≤ t.
    pub fn count_below(&self, t: f64) -> usize {
        self.zeros.partition_point(|z| z.gamma <= t)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("malformed number '{tok}'")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value '{tok}'")));
    }
    Ok(v)
}

/// Parses text-v1 content.
pub fn parse_zeros(text: &str) -> Result<ZeroDataset> {
    let mut kind = DatasetKind::Zeta;
    let mut gamma_max: Option<f64> = None;
    let mut provenance = String::new();
    let mut zeros: Vec<ZeroDatum> = Vec::new();
    let mut last: HashMap<Option<usize>, f64> = HashMap::new();
    let mut seen_data = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            if let Some(p) = c.trim().strip_prefix("provenance:") {
                provenance = p.trim().to_string();
            }
            continue;
        }
        if line.starts_with("kind=") {
            if seen_data {
                return Err(parse_err(line_no, "header after data"));
            }
            let mut q = None;
            let mut k = None;
            for tok in line.split_whitespace() {
                let (key, val) = tok
                    .split_once('=')
                    .ok_or_else(|| parse_err(line_no, format!("bad header token '{tok}'")))?;
                match key {
                    "kind" => k = Some(val.to_string()),
                    "q" => q = Some(val.parse::<u64>().map_err(|_| parse_err(line_no, "bad modulus"))?),
                    "gamma_max" => gamma_max = Some(parse_f64(val, line_no)?),
                    _ => return Err(parse_err(line_no, format!("unknown header key '{key}'"))),
                }
            }
            kind = match (k.as_deref(), q) {
                (Some("zeta"), _) => DatasetKind::Zeta,
                (Some("dirichlet"), Some(q)) if q >= 1 => DatasetKind::Dirichlet { q },
                (Some("dirichlet"), _) => return Err(parse_err(line_no, "dirichlet header needs q=<int>")),
                _ => return Err(parse_err(line_no, "kind must be zeta or dirichlet")),
            };
            continue;
        }
        seen_data = true;
        let mut nums = Vec::new();
        let mut char_id = None;
        for tok in line.split_whitespace() {
            if let Some(id) = tok.strip_prefix("char=") {
                if char_id.is_some() {
                    return Err(parse_err(line_no, "duplicate char= field"));
                }
                char_id = Some(
                    id.parse::<usize>()
                        .map_err(|_| parse_err(line_no, format!("malformed character id '{id}'")))?,
                );
            } else {
                if char_id.is_some() {
                    return Err(parse_err(line_no, "char= must be the last field"));
                }
                nums.push(parse_f64(tok, line_no)?);
            }
        }
        let mut z = match nums.as_slice() {
            [g] => ZeroDatum::new(*g),
            [g, d] => {
                let mut z = ZeroDatum::new(*g);
                z.deriv_abs = Some(*d);
                z
            }
            [g, d, re, im] => {
                let mut z = ZeroDatum::new(*g);
                z.deriv_abs = Some(*d);
                z.aux_zeta2rho = Some(Complex64::new(*re, *im));
                z
            }
            _ => return Err(parse_err(line_no, format!("expected 1, 2 or 4 numbers, got {}", nums.len()))),
        };
        if !(z.gamma > 0.0) {
            return Err(parse_err(line_no, "gamma must be positive"));
        }
        if matches!(z.deriv_abs, Some(d) if d <= 0.0) {
            return Err(parse_err(line_no, "derivative magnitude must be positive"));
        }
        z.char_id = char_id;
        if let Some(&prev) = last.get(&z.char_id) {
            if z.gamma <= prev {
                return Err(Error::Monotonicity {
                    line: line_no,
                    prev,
                    gamma: z.gamma,
                });
            }
        }
        last.insert(z.char_id, z.gamma);
        zeros.push(z);
    }
    zeros.sort_by(|a, b| {
        a.gamma
            .partial_cmp(&b.gamma)
            .expect("finite")
            .then(a.char_id.cmp(&b.char_id))
    });
    let top = zeros.last().map_or(0.0, |z| z.gamma);
    let gamma_max = gamma_max.unwrap_or(top);
    if gamma_max < top {
        return Err(Error::InvalidArgument(format!("gamma_max {gamma_max} below last ordinate {top}")));
    }
    ZeroDataset::new(kind, zeros, gamma_max, provenance)
}

pub fn import_zeros(path: &Path) -> Result<ZeroDataset> {
    let text = std::fs::read_to_string(path)?;
    let mut ds = parse_zeros(&text)?;
    if ds.provenance.is_empty() {
        ds.provenance = format!("imported from {}", path.display());
    }
    Ok(ds)
}

/// Serializes to text-v1 with 15 significant digits.
pub fn format_zeros(ds: &ZeroDataset) -> String {
    let mut out = String::new();
    match ds.kind {
        DatasetKind::Zeta => out.push_str("kind=zeta"),
        DatasetKind::Dirichlet { q } => {
            let _ = write!(out, "kind=dirichlet q={q}");
        }
    }
    let _ = writeln!(out, " gamma_max={}", fmt_sig(ds.gamma_max, 15));
    if !ds.provenance.is_empty() {
        let _ = writeln!(out, "# provenance: {}", ds.provenance.replace('\n', " "));
    }
    for z in &ds.zeros {
        out.push_str(&fmt_sig(z.gamma, 15));
        if let Some(d) = z.deriv_abs {
            let _ = write!(out, " {}", fmt_sig(d, 15));
            if let Some(a) = z.aux_zeta2rho {
                let _ = write!(out, " {} {}", fmt_sig(a.re, 15), fmt_sig(a.im, 15));
            }
        }
        if let Some(c) = z.char_id {
            let _ = write!(out, " char={c}");
        }
        out.push('\n');
    }
    out
}

pub fn export_zeros(ds: &ZeroDataset, path: &Path) -> Result<()> {
    std::fs::write(path, format_zeros(ds))?;
    Ok(())
}

/// J₋₁(T) = Σ_{0<γ≤T} |L'(ρ)|^{-2}, over all characters for Dirichlet data.
pub fn j_minus_one(ds: &ZeroDataset, t: f64) -> Result<f64> {
    if !ds.is_coefficient_ready() {
        return Err(Error::NotCoefficientReady);
    }
    if t > ds.gamma_max {
        return Err(Error::InvalidArgument(format!(
            "T = {t} exceeds dataset coverage {}",
            ds.gamma_max
        )));
    }
    let mut k = KahanSum::new();
    for z in ds.zeros.iter().take_while(|z| z.gamma <= t) {
        let d = z.deriv_abs.expect("coefficient-ready");
        k.add(1.0 / (d * d));
    }
    Ok(k.value())
}

/// Zero counts in (T, T+1] for T = 1, …, ⌊T_max⌋ − 1, the unit intervals
/// inside (1, T_max].
pub fn unit_interval_counts(ds: &ZeroDataset, t_max: f64) -> Result<Vec<(u64, usize)>> {
    if t_max > ds.gamma_max {
        return Err(Error::InvalidArgument(format!(
            "T_max = {t_max} exceeds dataset coverage {}",
            ds.gamma_max
        )));
    }
    let top = (t_max.floor() - 1.0).max(0.0) as u64;
    Ok((1..=top)
        .map(|t| {
            let lo = ds.count_below(t as f64);
            let hi = ds.count_below((t + 1) as f64);
            (t, hi - lo)
        })
        .collect())
}

/// max over T ≥ 3 of count(T)/log T — the implied constant in the
/// unit-interval bound.
pub fn max_count_over_log(counts: &[(u64, usize)]) -> f64 {
    counts
        .iter()
        .filter(|(t, _)| *t >= 3)
        .map(|&(t, c)| c as f64 / (t as f64).ln())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_two_line_file() {
        let ds = parse_zeros("14.134725 0.7832\n21.022040 1.109\n").unwrap();
        assert_eq!(ds.len(), 2);
        assert!(ds.is_coefficient_ready());
        assert_eq!(ds.kind, DatasetKind::Zeta);
        assert_eq!(ds.gamma_max, 21.02204);
    }

    #[test]
    fn empty_file() {
        let ds = parse_zeros("").unwrap();
        assert!(ds.is_empty());
        assert_eq!(ds.gamma_max, 0.0);
        let text = format_zeros(&ds);
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("kind=zeta"));
    }

    #[test]
    fn malformed_token_reports_line() {
        match parse_zeros("21.0 x\n") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_zeros("# c\n14.1\n\n13.0\n") {
            Err(Error::Monotonicity { line: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dirichlet_round_trip_keeps_characters() {
        let text = "kind=dirichlet q=3 gamma_max=20\n# provenance: test\n8.03973715568147 1.16715606288041 char=1\n14.1347251417347 1.2 char=0\n15.7 1.0 char=1\n";
        let ds = parse_zeros(text).unwrap();
        assert_eq!(ds.kind, DatasetKind::Dirichlet { q: 3 });
        assert_eq!(ds.zeros[1].char_id, Some(0));
        let again = parse_zeros(&format_zeros(&ds)).unwrap();
        assert_eq!(again, ds);
        assert_eq!(format_zeros(&again), format_zeros(&ds));
    }

    #[test]
    fn j_minus_one_three_zeros() {
        let ds = parse_zeros(
            "kind=zeta gamma_max=30\n14.1347251417347 0.793160433356506\n21.0220396387716 1.13683910682797\n25.0108575801457 1.37172128721613\n",
        )
        .unwrap();
        assert_eq!(j_minus_one(&ds, 10.0).unwrap(), 0.0);
        let want = 1.0 / 0.793160433356506f64.powi(2) + 1.0 / 1.13683910682797f64.powi(2) + 1.0 / 1.37172128721613f64.powi(2);
        assert!((j_minus_one(&ds, 30.0).unwrap() - want).abs() < 1e-14);
        assert!(j_minus_one(&ds, 31.0).is_err());
        let bare = parse_zeros("14.1\n").unwrap();
        assert!(matches!(j_minus_one(&bare, 14.0), Err(Error::NotCoefficientReady)));
    }

    #[test]
    fn unit_counts_near_first_zero() {
        let ds = parse_zeros("kind=zeta gamma_max=30\n14.1347\n21.022\n25.0108\n").unwrap();
        let c = unit_interval_counts(&ds, 29.0).unwrap();
        assert_eq!(c[12], (13, 0));
        assert_eq!(c[13], (14, 1));
        assert_eq!(c.iter().map(|x| x.1).sum::<usize>(), 3);
    }

    fn arb_dataset() -> impl Strategy<Value = ZeroDataset> {
        prop::collection::vec((0.001f64..5.0, 0.01f64..10.0, -3.0f64..3.0, -3.0f64..3.0), 0..40).prop_map(|v| {
            let mut g = 0.5;
            let zeros = v
                .into_iter()
                .map(|(dg, d, re, im)| {
                    g += dg;
                    let mut z = ZeroDatum::new(g);
                    z.deriv_abs = Some(d);
                    z.aux_zeta2rho = Some(Complex64::new(re, im));
                    z
                })
                .collect();
            ZeroDataset::new(DatasetKind::Zeta, zeros, g + 1.0, "prop").unwrap()
        })
    }

    proptest! {
        #[test]
        fn import_export_identity(ds in arb_dataset()) {
            let text = format_zeros(&ds);
            let back = parse_zeros(&text).unwrap();
            prop_assert_eq!(back.len(), ds.len());
            for (a, b) in back.zeros.iter().zip(&ds.zeros) {
                prop_assert_eq!(a.gamma, crate::numeric::round15(b.gamma));
                prop_assert_eq!(a.deriv_abs.unwrap(), crate::numeric::round15(b.deriv_abs.unwrap()));
            }
            prop_assert_eq!(format_zeros(&back), text);
        }

        #[test]
        fn j_minus_one_monotone(ds in arb_dataset(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let t1 = lo * ds.gamma_max;
            let t2 = hi * ds.gamma_max;
            prop_assert!(j_minus_one(&ds, t1).unwrap() <= j_minus_one(&ds, t2).unwrap());
        }

        #[test]
        fn unit_counts_bounded_by_total(ds in arb_dataset(), f in 0.0f64..1.0) {
            let t_max = f * ds.gamma_max;
            let c = unit_interval_counts(&ds, t_max).unwrap();
            let s: usize = c.iter().map(|x| x.1).sum();
            prop_assert!(s <= ds.count_below(t_max));
        }
    }
}
