//! Line-based `key = value` experiment configuration.
//!
//! Vector values are comma-separated, `#` starts a comment, duplicate and
//! unknown keys are rejected with their line number. Every key is optional
//! at parse time; each suite demands the keys it needs.

use std::collections::BTreeMap;
use std::fmt;

use hypercross::modulus::MixedModulus;
use hypercross::spectral::MultiIndex;

/// Keys understood by the parser. Anything else is rejected.
const KNOWN_KEYS: &[&str] = &[
    "m",
    "p",
    "q",
    "theta1",
    "theta2",
    "tau",
    "lambda",
    "gamma",
    "gamma_prime",
    "alpha",
    "beta",
    "r",
    "omega",
    "order",
    "ladder",
    "levels",
    "degrees",
    "count",
    "oversample",
    "seed",
    "threads",
    "out",
    "c3",
    "tolerance",
    "rate",
    "set",
    "witness",
    "N",
    "s_tilde",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn semantic(message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config line {}: {}", line, self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Parsed experiment configuration; raw values retained per key.
#[derive(Debug, Clone, Default)]
pub struct ExperimentConfig {
    entries: BTreeMap<String, (usize, String)>,
}

/// Modulus family selector as written in a config.
#[derive(Debug, Clone, PartialEq)]
pub enum OmegaSpec {
    Power(Vec<f64>),
    PowerLog(Vec<f64>, Vec<f64>),
}

impl OmegaSpec {
    pub fn build(&self, order: u32) -> Result<MixedModulus, ConfigError> {
        let built = match self {
            OmegaSpec::Power(r) => MixedModulus::power(r.clone(), order),
            OmegaSpec::PowerLog(r, b) => MixedModulus::power_log(r.clone(), b.clone(), order),
        };
        built.map_err(|e| ConfigError::semantic(format!("omega: {}", e)))
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut entries = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::at(
                line_no,
                format!("expected `key = value`, got `{}`", line),
            ));
        };
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(ConfigError::at(line_no, format!("unknown key `{}`", key)));
        }
        if value.is_empty() {
            return Err(ConfigError::at(line_no, format!("empty value for `{}`", key)));
        }
        if entries.contains_key(key) {
            return Err(ConfigError::at(line_no, format!("duplicate key `{}`", key)));
        }
        entries.insert(key.to_string(), (line_no, value.to_string()));
    }
    Ok(ExperimentConfig { entries })
}

impl ExperimentConfig {
    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.entries.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn string(&self, key: &str) -> Option<String> {
        self.raw(key).map(|(_, v)| v.to_string())
    }

    pub fn require(&self, key: &str) -> Result<&str, ConfigError> {
        self.raw(key)
            .map(|(_, v)| v)
            .ok_or_else(|| ConfigError::semantic(format!("missing required key `{}`", key)))
    }

    pub fn f64_opt(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| ConfigError::at(line, format!("`{}` is not a number: `{}`", key, v))),
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.raw(key) {
            None => Ok(default),
            Some((line, v)) => v.parse::<usize>().map_err(|_| {
                ConfigError::at(line, format!("`{}` is not a nonnegative integer: `{}`", key, v))
            }),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.raw(key) {
            None => Ok(default),
            Some((line, v)) => v.parse::<u64>().map_err(|_| {
                ConfigError::at(line, format!("`{}` is not an unsigned integer: `{}`", key, v))
            }),
        }
    }

    pub fn u32_required(&self, key: &str) -> Result<u32, ConfigError> {
        let (line, v) = self
            .raw(key)
            .ok_or_else(|| ConfigError::semantic(format!("missing required key `{}`", key)))?;
        v.parse::<u32>()
            .map_err(|_| ConfigError::at(line, format!("`{}` is not an integer: `{}`", key, v)))
    }

    pub fn vector(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => parse_vector(v)
                .map(Some)
                .map_err(|msg| ConfigError::at(line, format!("`{}`: {}", key, msg))),
        }
    }

    pub fn vector_required(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        self.vector(key)?
            .ok_or_else(|| ConfigError::semantic(format!("missing required key `{}`", key)))
    }

    /// Strictly increasing list of powers of two.
    pub fn ladder(&self, key: &str) -> Result<Vec<u64>, ConfigError> {
        let (line, v) = self
            .raw(key)
            .ok_or_else(|| ConfigError::semantic(format!("missing required key `{}`", key)))?;
        let mut out = Vec::new();
        for part in v.split(',') {
            let n: u64 = part.trim().parse().map_err(|_| {
                ConfigError::at(line, format!("`{}`: `{}` is not an integer", key, part.trim()))
            })?;
            if n < 2 || !n.is_power_of_two() {
                return Err(ConfigError::at(
                    line,
                    format!("`{}`: entry {} must be a power of two >= 2", key, n),
                ));
            }
            if let Some(&last) = out.last() {
                if n <= last {
                    return Err(ConfigError::at(
                        line,
                        format!("`{}` must be strictly increasing", key),
                    ));
                }
            }
            out.push(n);
        }
        Ok(out)
    }

    pub fn levels_or(&self, key: &str, default: &[u32]) -> Result<Vec<u32>, ConfigError> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some((line, v)) => {
                let mut out = Vec::new();
                for part in v.split(',') {
                    let n: u32 = part.trim().parse().map_err(|_| {
                        ConfigError::at(
                            line,
                            format!("`{}`: `{}` is not an integer", key, part.trim()),
                        )
                    })?;
                    out.push(n);
                }
                Ok(out)
            }
        }
    }

    pub fn omega(&self) -> Result<Option<OmegaSpec>, ConfigError> {
        match self.raw("omega") {
            None => Ok(None),
            Some((line, v)) => parse_omega(v)
                .map(Some)
                .map_err(|msg| ConfigError::at(line, msg)),
        }
    }

    pub fn omega_required(&self) -> Result<OmegaSpec, ConfigError> {
        self.omega()?
            .ok_or_else(|| ConfigError::semantic("missing required key `omega`"))
    }

    pub fn s_tilde(&self) -> Result<Option<MultiIndex>, ConfigError> {
        match self.raw("s_tilde") {
            None => Ok(None),
            Some((line, v)) => {
                let mut levels = Vec::new();
                for part in v.split(',') {
                    let s: u32 = part.trim().parse().map_err(|_| {
                        ConfigError::at(line, format!("`s_tilde`: `{}` is not an integer", part))
                    })?;
                    levels.push(s);
                }
                Ok(Some(MultiIndex::new(levels)))
            }
        }
    }
}

fn parse_vector(v: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in v.split(',') {
        let part = part.trim();
        let value = if part == "inf" {
            f64::INFINITY
        } else {
            part.parse::<f64>()
                .map_err(|_| format!("`{}` is not a number", part))?
        };
        out.push(value);
    }
    if out.is_empty() {
        return Err("empty vector".into());
    }
    Ok(out)
}

fn parse_omega(v: &str) -> Result<OmegaSpec, String> {
    let v = v.trim();
    let open = v.find('(').ok_or("omega must look like power(...)")?;
    if !v.ends_with(')') {
        return Err("omega spec must end with `)`".into());
    }
    let name = &v[..open];
    let args = &v[open + 1..v.len() - 1];
    match name {
        "power" => Ok(OmegaSpec::Power(parse_vector(args)?)),
        "power_log" => {
            let (r, b) = args
                .split_once(';')
                .ok_or("power_log needs `r1,..,rm;b1,..,bm`")?;
            let r = parse_vector(r)?;
            let b = parse_vector(b)?;
            if r.len() != b.len() {
                return Err("power_log: r and b must have the same length".into());
            }
            Ok(OmegaSpec::PowerLog(r, b))
        }
        other => Err(format!("unknown omega family `{}`", other)),
    }
}
