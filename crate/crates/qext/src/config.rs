//! Run configuration: built-in defaults, then a `key=value` file, then flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use qext_core::moments::MomentKind;
use qext_core::quadratic::DEFAULT_FAMILY_CAP;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Enumerate,
    Lpoly,
    Moment,
    Verify,
    Charsum,
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub p: u32,
    pub r: u32,
    pub m: u32,
    pub m_max: u32,
    pub kind: MomentKind,
    pub s: Complex64,
    pub t: Complex64,
    pub epsilon: f64,
    pub tol: f64,
    /// Degree cutoff for truncated Euler products and divisor series.
    pub cutoff: u32,
    pub cap: u128,
    /// Worker count; 0 lets the pool decide.
    pub threads: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    /// Largest modulus degree in the character-sum sweep.
    pub max_degree: usize,
}

const DEFAULTS: &[(&str, &str)] = &[
    ("m", "1"),
    ("kind", "LL"),
    ("s", "2"),
    ("t", "2"),
    ("epsilon", "0.01"),
    ("tol", "1e-12"),
    ("cutoff", "10"),
    ("threads", "0"),
    ("format", "csv"),
    ("max-degree", "4"),
];

/// Keys accepted in config files and on the command line.
pub const KEYS: &[&str] = &[
    "command", "q", "p", "r", "m", "m-max", "kind", "s", "t", "epsilon", "tol", "cutoff", "cap", "threads", "format",
    "out", "cache-dir", "max-degree",
];

#[derive(Debug, Parser)]
#[command(name = "qext", version, about = "Quadratic extensions of F_q(x): enumeration, L-polynomials, character sums and moments")]
pub struct Args {
    /// enumerate | lpoly | moment | verify | charsum | sigma
    pub command: Option<String>,
    /// key=value file; flags given here override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long = "m-max")]
    pub m_max: Option<String>,
    /// LL, Lq, invLL, L or invL
    #[arg(long)]
    pub kind: Option<String>,
    /// complex, e.g. 2 or 1.5+0.3i
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub cutoff: Option<String>,
    #[arg(long)]
    pub cap: Option<String>,
    #[arg(long)]
    pub threads: Option<String>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long = "cache-dir")]
    pub cache_dir: Option<String>,
    #[arg(long = "max-degree")]
    pub max_degree: Option<String>,
}

impl Args {
    fn overrides(&self) -> Vec<(&'static str, &String)> {
        let pairs: [(&'static str, &Option<String>); 18] = [
            ("command", &self.command),
            ("q", &self.q),
            ("p", &self.p),
            ("r", &self.r),
            ("m", &self.m),
            ("m-max", &self.m_max),
            ("kind", &self.kind),
            ("s", &self.s),
            ("t", &self.t),
            ("epsilon", &self.epsilon),
            ("tol", &self.tol),
            ("cutoff", &self.cutoff),
            ("cap", &self.cap),
            ("threads", &self.threads),
            ("format", &self.format),
            ("out", &self.out),
            ("cache-dir", &self.cache_dir),
            ("max-degree", &self.max_degree),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k, v))).collect()
    }
}

/// Parses `key=value` lines; `#` starts a comment. Underscores in keys are read as dashes.
pub fn parse_config_text(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!("line {}: expected key=value, got {line:?}", no + 1)));
        };
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("line {}: unknown key {key:?}", no + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn read_config_file(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_config_text(&text)
}

fn value<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> CliResult<Option<T>> {
    map.get(key)
        .map(|v| v.parse::<T>().map_err(|_| CliError::Config(format!("{key}: cannot parse {v:?}"))))
        .transpose()
}

fn required<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> CliResult<T> {
    value(map, key)?.ok_or_else(|| CliError::Config(format!("missing {key}")))
}

/// `(p, r)` with `p^r = q`, or an error if `q` is not a prime power.
pub fn split_prime_power(q: u32) -> CliResult<(u32, u32)> {
    if q < 2 {
        return Err(CliError::Config(format!("q={q} is not a prime power")));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap_or(q);
    let (mut rest, mut r) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    if rest != 1 {
        return Err(CliError::Config(format!("q={q} is not a prime power")));
    }
    Ok((p, r))
}

fn parse_enum<T: ValueEnum>(map: &BTreeMap<String, String>, key: &str) -> CliResult<T> {
    let v: String = required(map, key)?;
    T::from_str(&v, true).map_err(|_| CliError::Config(format!("{key}: unknown value {v:?}")))
}

impl RunConfig {
    /// Builds a configuration from already merged settings, defaults filled in.
    pub fn from_map(settings: &BTreeMap<String, String>) -> CliResult<RunConfig> {
        let mut map: BTreeMap<String, String> = DEFAULTS.iter().map(|&(k, v)| (k.to_string(), v.to_string())).collect();
        map.extend(settings.iter().map(|(k, v)| (k.clone(), v.clone())));

        let (p, r) = match (value::<u32>(&map, "q")?, value::<u32>(&map, "p")?) {
            (Some(q), p) => {
                let (qp, qr) = split_prime_power(q)?;
                let r = value::<u32>(&map, "r")?;
                if p.is_some_and(|p| p != qp) || r.is_some_and(|r| r != qr) {
                    return Err(CliError::Config(format!("q={q} disagrees with the given p and r")));
                }
                (qp, qr)
            }
            (None, Some(p)) => (p, value(&map, "r")?.unwrap_or(1)),
            (None, None) => return Err(CliError::Config("missing q (or p and r)".into())),
        };
        let m: u32 = required(&map, "m")?;
        let m_max = value(&map, "m-max")?.unwrap_or(m);
        if m_max < m {
            return Err(CliError::Config(format!("m-max={m_max} is below m={m}")));
        }
        let kind_text: String = required(&map, "kind")?;
        let kind = MomentKind::parse(&kind_text).ok_or_else(|| CliError::Config(format!("kind: unknown value {kind_text:?}")))?;
        let epsilon: f64 = required(&map, "epsilon")?;
        let tol: f64 = required(&map, "tol")?;
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(CliError::Config(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config(format!("tol must be positive, got {tol}")));
        }
        Ok(RunConfig {
            command: parse_enum(&map, "command")?,
            p,
            r,
            m,
            m_max,
            kind,
            s: required(&map, "s")?,
            t: required(&map, "t")?,
            epsilon,
            tol,
            cutoff: required(&map, "cutoff")?,
            cap: value(&map, "cap")?.unwrap_or(DEFAULT_FAMILY_CAP),
            threads: required(&map, "threads")?,
            format: parse_enum(&map, "format")?,
            out: value(&map, "out")?,
            cache_dir: value(&map, "cache-dir")?,
            max_degree: required(&map, "max-degree")?,
        })
    }

    /// Merges the config file named by `--config` under the flags.
    pub fn from_args(args: &Args) -> CliResult<RunConfig> {
        let mut map = match &args.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        for (k, v) in args.overrides() {
            map.insert(k.to_string(), v.clone());
        }
        RunConfig::from_map(&map)
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.r)
    }

    pub fn ms(&self) -> std::ops::RangeInclusive<u32> {
        self.m..=self.m_max
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}
