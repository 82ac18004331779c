//! Run configuration: defaults, a flat `key=value` file, and flag overrides.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!("unknown format {other:?}, expected csv or json"))),
        }
    }
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Everything a subcommand needs. Keys of the text form match field names.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub omega1: [f64; 2],
    pub omega2: [f64; 2],
    /// Factor applied to the cell area; generators scale by its square root.
    pub area_scale: Option<f64>,
    pub window: u32,
    pub fock: usize,
    pub k_max: u32,
    pub radii: Vec<f64>,
    /// Cell areas for `sweep`, in units of π.
    pub areas: Vec<f64>,
    pub format: Format,
    pub svg: Option<String>,
    pub seed: u64,
    pub force: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = std::f64::consts::PI.sqrt();
        RunConfig {
            omega1: [s, 0.0],
            omega2: [0.0, s],
            area_scale: None,
            window: 8,
            fock: 96,
            k_max: 12,
            radii: (1..=12).map(f64::from).collect(),
            areas: vec![0.8, 0.9, 1.0, 1.1, 1.2],
            format: Format::Csv,
            svg: None,
            seed: 20_240_601,
            force: false,
        }
    }
}

pub const KEYS: [&str; 12] =
    ["omega1", "omega2", "area_scale", "window", "fock", "k_max", "radii", "areas", "format", "svg", "seed", "force"];

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| CliError::Config(format!("{key}: cannot parse {v:?}")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| parse_num(key, x)).collect()
}

pub fn parse_pair(key: &str, v: &str) -> Result<[f64; 2], CliError> {
    match parse_list(key, v)?.as_slice() {
        &[re, im] => Ok([re, im]),
        _ => Err(CliError::Config(format!("{key}: expected re,im but got {v:?}"))),
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Config(format!("{key}: expected true or false, got {v:?}"))),
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let v = value.trim();
        match key.trim() {
            "omega1" => self.omega1 = parse_pair(key, v)?,
            "omega2" => self.omega2 = parse_pair(key, v)?,
            "area_scale" => self.area_scale = if v.is_empty() { None } else { Some(parse_num(key, v)?) },
            "window" => self.window = parse_num(key, v)?,
            "fock" => self.fock = parse_num(key, v)?,
            "k_max" => self.k_max = parse_num(key, v)?,
            "radii" => self.radii = parse_list(key, v)?,
            "areas" => self.areas = parse_list(key, v)?,
            "format" => self.format = v.parse()?,
            "svg" => self.svg = if v.is_empty() { None } else { Some(v.to_string()) },
            "seed" => self.seed = parse_num(key, v)?,
            "force" => self.force = parse_bool(key, v)?,
            other => return Err(CliError::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Applies a `key=value` document on top of `self`. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", lineno + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = RunConfig::default();
        c.apply_text(text)?;
        Ok(c)
    }

    /// Canonical text form: every key once, in [`KEYS`] order, shortest
    /// round-trip numbers.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let lines = [
            join(&self.omega1),
            join(&self.omega2),
            opt(self.area_scale),
            self.window.to_string(),
            self.fock.to_string(),
            self.k_max.to_string(),
            join(&self.radii),
            join(&self.areas),
            self.format.as_str().to_string(),
            self.svg.clone().unwrap_or_default(),
            self.seed.to_string(),
            self.force.to_string(),
        ];
        for (k, v) in KEYS.iter().zip(lines) {
            writeln!(out, "{k}={v}").expect("writing to a String");
        }
        out
    }
}
