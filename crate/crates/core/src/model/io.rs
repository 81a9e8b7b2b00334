//! Model files: a header line, optional `residue` lines, one term per line.
//!
//! ```text
//! model=psi c=0 secular=none y0=0.693147180559945
//! residue exp -1.83787706641401 -0.5 0
//! 14.1347251417347 -0.00353... 0.141...
//! ```

use super::{CoefficientModel, Residue, Secular, Term};
use crate::error::{Error, Result};
use crate::numeric::fmt_sig;
use num_complex::Complex64;
use std::fmt::Write as _;
use std::path::Path;

fn f(x: f64) -> String {
    fmt_sig(x, 15)
}

pub fn format_model(m: &CoefficientModel<f64>) -> String {
    let mut out = String::new();
    let secular = match m.secular {
        Secular::None => "none".to_string(),
        Secular::LogLinear { slope } => format!("loglinear:{}", f(slope)),
    };
    let _ = writeln!(out, "model={} c={} secular={} y0={}", m.label, f(m.c), secular, f(m.y0));
    for r in &m.residues {
        let _ = match *r {
            Residue::Exp { amp, rate, power } => writeln!(out, "residue exp {} {} {}", f(amp), f(rate), power),
            Residue::ComplexExp { w, s } => {
                writeln!(out, "residue cexp {} {} {} {}", f(w.re), f(w.im), f(s.re), f(s.im))
            }
            Residue::LogOneMinusExp { amp, rate, k } => {
                writeln!(out, "residue log1mexp {} {} {}", f(amp), f(rate), f(k))
            }
        };
    }
    for t in m.terms() {
        let _ = writeln!(out, "{} {} {}", f(t.lambda), f(t.r.re), f(t.r.im));
    }
    out
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn num(tok: &str, line: usize) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(perr(line, format!("malformed number '{tok}'"))),
    }
}

fn nums(toks: &[&str], n: usize, line: usize) -> Result<Vec<f64>> {
    if toks.len() != n {
        return Err(perr(line, format!("expected {n} numbers, got {}", toks.len())));
    }
    toks.iter().map(|t| num(t, line)).collect()
}

pub fn parse_model(text: &str) -> Result<CoefficientModel<f64>> {
    let mut header: Option<(String, f64, Secular<f64>, f64)> = None;
    let mut residues = Vec::new();
    let mut terms = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0].starts_with("model=") {
            if header.is_some() {
                return Err(perr(line_no, "duplicate header"));
            }
            let (mut label, mut c, mut secular, mut y0) = (None, None, Secular::None, super::Y0);
            for tok in &toks {
                let (k, v) = tok
                    .split_once('=')
                    .ok_or_else(|| perr(line_no, format!("bad header token '{tok}'")))?;
                match k {
                    "model" => label = Some(v.to_string()),
                    "c" => c = Some(num(v, line_no)?),
                    "y0" => y0 = num(v, line_no)?,
                    "secular" => {
                        secular = match v.split_once(':') {
                            None if v == "none" => Secular::None,
                            Some(("loglinear", s)) => Secular::LogLinear { slope: num(s, line_no)? },
                            _ => return Err(perr(line_no, format!("unknown secular tag '{v}'"))),
                        }
                    }
                    _ => return Err(perr(line_no, format!("unknown header key '{k}'"))),
                }
            }
            let c = c.ok_or_else(|| perr(line_no, "header lacks c="))?;
            let label = label.filter(|l| !l.is_empty()).ok_or_else(|| perr(line_no, "empty model label"))?;
            header = Some((label, c, secular, y0));
            continue;
        }
        if header.is_none() {
            return Err(perr(line_no, "data before model= header"));
        }
        if toks[0] == "residue" {
            let kind = *toks.get(1).ok_or_else(|| perr(line_no, "residue line without kind"))?;
            let rest = &toks[2..];
            let r = match kind {
                "exp" => {
                    if rest.len() != 3 {
                        return Err(perr(line_no, "residue exp takes amp rate power"));
                    }
                    let power = rest[2]
                        .parse::<i32>()
                        .map_err(|_| perr(line_no, format!("bad power '{}'", rest[2])))?;
                    Residue::Exp {
                        amp: num(rest[0], line_no)?,
                        rate: num(rest[1], line_no)?,
                        power,
                    }
                }
                "cexp" => {
                    let v = nums(rest, 4, line_no)?;
                    Residue::ComplexExp {
                        w: Complex64::new(v[0], v[1]),
                        s: Complex64::new(v[2], v[3]),
                    }
                }
                "log1mexp" => {
                    let v = nums(rest, 3, line_no)?;
                    Residue::LogOneMinusExp {
                        amp: v[0],
                        rate: v[1],
                        k: v[2],
                    }
                }
                other => return Err(perr(line_no, format!("unknown residue kind '{other}'"))),
            };
            residues.push(r);
            continue;
        }
        let v = nums(&toks, 3, line_no)?;
        if !(v[0] > 0.0) {
            return Err(perr(line_no, "lambda must be positive"));
        }
        if v[0] <= prev {
            return Err(Error::Monotonicity {
                line: line_no,
                prev,
                gamma: v[0],
            });
        }
        prev = v[0];
        terms.push(Term {
            lambda: v[0],
            r: Complex64::new(v[1], v[2]),
        });
    }
    let (label, c, secular, y0) = header.ok_or_else(|| perr(0, "missing model= header"))?;
    let mut m = CoefficientModel::new(label, c, terms)?
        .with_residues(residues)
        .with_secular(secular);
    m.y0 = y0;
    Ok(m)
}

pub fn read_model(path: &Path) -> Result<CoefficientModel<f64>> {
    parse_model(&std::fs::read_to_string(path)?)
}

pub fn write_model(m: &CoefficientModel<f64>, path: &Path) -> Result<()> {
    std::fs::write(path, format_model(m))?;
    Ok(())
}
