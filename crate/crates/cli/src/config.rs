//! Knob resolution (flag > config file > default) and provenance records.

use crate::output::{fmt_num, Emit};
use crate::{ModelKind, Route, ZeroKind};
use clap::ValueEnum;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use zerodist::{Error, Result};

const KEYS: &[&str] = &[
    "emit", "seed", "workers", "kind", "q", "gamma-max", "tol", "j-minus-one", "rows", "zeros", "alpha", "a",
    "kappa", "si-gamma", "points", "window", "model", "Y", "step", "X", "bins", "raw", "n-terms", "sigmas",
    "decay-tol", "a1", "a2", "route",
];

/// Knobs that change how fast a run goes, not what it computes.
const NOT_ECHOED: &[&str] = &["workers"];

pub trait Knob: Sized {
    fn parse_knob(s: &str) -> Option<Self>;
    fn show(&self) -> String;
}

macro_rules! from_str_knob {
    ($($t:ty),*) => {$(
        impl Knob for $t {
            fn parse_knob(s: &str) -> Option<Self> {
                s.parse().ok()
            }
            fn show(&self) -> String {
                self.to_string()
            }
        }
    )*};
}
from_str_knob!(u64, usize, bool, String);

impl Knob for f64 {
    fn parse_knob(s: &str) -> Option<Self> {
        s.parse().ok().filter(|v: &f64| v.is_finite())
    }
    fn show(&self) -> String {
        fmt_num(*self)
    }
}

impl Knob for PathBuf {
    fn parse_knob(s: &str) -> Option<Self> {
        Some(PathBuf::from(s))
    }
    fn show(&self) -> String {
        self.display().to_string()
    }
}

macro_rules! enum_knob {
    ($($t:ty),*) => {$(
        impl Knob for $t {
            fn parse_knob(s: &str) -> Option<Self> {
                <$t as ValueEnum>::from_str(s, false).ok()
            }
            fn show(&self) -> String {
                self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
            }
        }
    )*};
}
enum_knob!(Emit, ZeroKind, ModelKind, Route);

pub struct Ctx {
    file: BTreeMap<String, String>,
    echo: BTreeMap<String, String>,
    inputs: Vec<(String, String)>,
    command: String,
    pub emit: Emit,
    pub seed: u64,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Ctx {
    pub fn new(config: Option<&Path>) -> Result<Self> {
        let mut ctx = Ctx {
            file: BTreeMap::new(),
            echo: BTreeMap::new(),
            inputs: Vec::new(),
            command: String::new(),
            emit: Emit::Csv,
            seed: 0,
        };
        if let Some(p) = config {
            let text = ctx.input(p)?;
            for (i, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                    line: i + 1,
                    msg: format!("expected key = value, got '{line}'"),
                })?;
                let k = k.trim();
                if !KEYS.contains(&k) {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("unknown config key '{k}'"),
                    });
                }
                ctx.file.insert(k.to_string(), v.trim().to_string());
            }
        }
        Ok(ctx)
    }

    pub fn command(&mut self, name: &str) {
        self.command = name.to_string();
    }

    fn record<T: Knob>(&mut self, key: &str, v: &T) {
        if !NOT_ECHOED.contains(&key) {
            self.echo.insert(key.to_string(), v.show());
        }
    }

    pub fn knob_opt<T: Knob>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        let v = match flag {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some(s) => Some(
                    T::parse_knob(s)
                        .ok_or_else(|| Error::InvalidArgument(format!("config: bad value '{s}' for {key}")))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &v {
            self.record(key, v);
        }
        Ok(v)
    }

    pub fn knob<T: Knob>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T> {
        match self.knob_opt(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, &default);
                Ok(default)
            }
        }
    }

    pub fn knob_req<T: Knob>(&mut self, key: &str, flag: Option<T>) -> Result<T> {
        self.knob_opt(key, flag)?
            .ok_or_else(|| Error::InvalidArgument(format!("missing --{key}")))
    }

    /// A switch: set by the flag or by `key = true` in the file.
    pub fn flag(&mut self, key: &str, set: bool) -> Result<bool> {
        self.knob(key, set.then_some(true), false)
    }

    /// A y-value: a number, or `log:<x>` for ln x.
    pub fn knob_y(&mut self, key: &str, flag: Option<String>, default: f64) -> Result<f64> {
        let raw = match flag {
            Some(s) => Some(s),
            None => self.file.get(key).cloned(),
        };
        let y = match raw {
            None => default,
            Some(s) => parse_y(&s).ok_or_else(|| Error::InvalidArgument(format!("bad value '{s}' for {key}")))?,
        };
        self.record(key, &y);
        Ok(y)
    }

    /// Reads an input file and records its checksum.
    pub fn input(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push((path.display().to_string(), sha256_hex(&bytes)));
        String::from_utf8(bytes).map_err(|_| Error::InvalidArgument(format!("{} is not UTF-8", path.display())))
    }

    pub fn provenance(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("tool".to_string(), format!("zerodist {}", env!("CARGO_PKG_VERSION"))),
            ("command".to_string(), self.command.clone()),
            ("seed".to_string(), self.seed.to_string()),
        ];
        let cfg: Vec<String> = self.echo.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push(("config".to_string(), cfg.join(" ")));
        for (p, h) in &self.inputs {
            out.push((format!("input {p}"), format!("sha256:{h}")));
        }
        out
    }

    pub fn echo(&self) -> &BTreeMap<String, String> {
        &self.echo
    }

    pub fn inputs(&self) -> &[(String, String)] {
        &self.inputs
    }

    pub fn command_name(&self) -> &str {
        &self.command
    }

    pub fn provenance_comments(&self) -> String {
        self.provenance()
            .iter()
            .map(|(k, v)| format!("# {k}: {v}\n"))
            .collect()
    }
}

fn parse_y(s: &str) -> Option<f64> {
    let v = match s.strip_prefix("log:") {
        Some(x) => x.trim().parse::<f64>().ok().filter(|x| *x > 0.0)?.ln(),
        None => s.trim().parse().ok()?,
    };
    v.is_finite().then_some(v)
}
