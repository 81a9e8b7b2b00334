//! CSV emitters. Metadata goes first as `# key: value` lines.

use super::{EmpiricalDistribution, ParsevalReport, ResidualReport};
use crate::numeric::fmt_sig;
use std::fmt::Write as _;

/// Ordered metadata pairs for the `#` header.
pub type Meta = Vec<(String, String)>;

fn f(x: f64) -> String {
    fmt_sig(x, 15)
}

fn header(meta: &Meta) -> String {
    let mut out = String::new();
    for (k, v) in meta {
        let _ = writeln!(out, "# {k}: {}", v.replace('\n', " "));
    }
    out
}

/// `bin_lo,bin_hi,mass` in 1-D; per-axis edge pairs then `mass` otherwise.
pub fn histogram_csv(d: &EmpiricalDistribution, meta: &Meta) -> String {
    let mut out = header(meta);
    let _ = writeln!(out, "# samples: {}", d.sample_count);
    for k in 0..d.dim {
        let _ = writeln!(
            out,
            "# axis {k}: mean {} variance {}",
            f(d.mean[k]),
            f(d.variance[k])
        );
    }
    if d.dim == 1 {
        out.push_str("bin_lo,bin_hi,mass\n");
    } else {
        let cols: Vec<String> = (0..d.dim).map(|k| format!("bin{k}_lo,bin{k}_hi")).collect();
        let _ = writeln!(out, "{},mass", cols.join(","));
    }
    for (i, m) in d.mass.iter().enumerate() {
        let mut rem = i;
        let mut idx = vec![0; d.dim];
        for k in (0..d.dim).rev() {
            idx[k] = rem % d.bins[k].count;
            rem /= d.bins[k].count;
        }
        for (k, &j) in idx.iter().enumerate() {
            let (a, b) = d.bins[k].edges(j);
            let _ = write!(out, "{},{},", f(a), f(b));
        }
        let _ = writeln!(out, "{}", f(*m));
    }
    out
}

pub fn residual_csv(reports: &[ResidualReport], meta: &Meta) -> String {
    let mut out = header(meta);
    out.push_str("X,Y,step,points,rms,max_abs\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            f(r.x),
            f(r.y),
            f(r.grid_step),
            r.n_points,
            f(r.rms),
            f(r.max_abs)
        );
    }
    out
}

pub fn parseval_csv(p: &ParsevalReport, meta: &Meta) -> String {
    let mut out = header(meta);
    out.push_str("X,Y,step,lhs,lhs_raw,rhs,tail_estimate\n");
    let tail = p.tail_estimate.map_or_else(String::new, f);
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{}",
        f(p.x),
        f(p.y),
        f(p.step),
        f(p.lhs),
        f(p.lhs_raw),
        f(p.rhs),
        tail
    );
    out
}

#[cfg(test)]
mod tests {
    use super::super::{empirical_distribution_values, BinSpec};
    use super::*;

    #[test]
    fn histogram_layout() {
        let vals: Vec<Vec<f64>> = (0..1000).map(|i| vec![(i % 4) as f64]).collect();
        let d = empirical_distribution_values(
            &vals,
            BinSpec::Explicit {
                lo: 0.0,
                hi: 4.0,
                count: 4,
            },
        )
        .unwrap();
        let meta = vec![("model".to_string(), "psi".to_string())];
        let csv = histogram_csv(&d, &meta);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# model: psi");
        assert!(lines.contains(&"bin_lo,bin_hi,mass"));
        assert!(lines.contains(&"0,1,0.25"));
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 5);
    }

    #[test]
    fn parseval_row() {
        let p = ParsevalReport {
            lhs: 0.05,
            lhs_raw: 0.2,
            rhs: 0.044,
            tail_estimate: None,
            x: f64::INFINITY,
            y: 18.4,
            step: 1e-3,
        };
        let csv = parseval_csv(&p, &Meta::new());
        assert!(csv.ends_with("inf,18.4,0.001,0.05,0.2,0.044,\n"));
    }
}
