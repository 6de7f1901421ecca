//! `key = value` run configuration. Unset keys take the default model
//! parameters (m = 1, ω 5 → 10, T = 2, g = 0.02, f = 0.05, 4000 samples).

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use ste_core::synthesis::{DEFAULT_F_INERTIAL, DEFAULT_N_GRID};
use ste_core::{BathParams, ProtocolKind, SystemParams};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemParams,
    pub bath: BathParams,
    /// One duration, or several for a sweep. Strictly increasing.
    pub t_f: Vec<f64>,
    pub n_grid: usize,
    pub kind: ProtocolKind,
    pub f_inertial: f64,
    pub output_dir: PathBuf,
    /// Sweep worker threads; 0 picks one per core.
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            system: SystemParams::default(),
            bath: BathParams::default(),
            t_f: vec![8.0],
            n_grid: DEFAULT_N_GRID,
            kind: ProtocolKind::Ste,
            f_inertial: DEFAULT_F_INERTIAL,
            output_dir: PathBuf::from("out"),
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self { line: Some(line), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

const KEYS: &[&str] = &[
    "system.m",
    "system.omega_i",
    "system.omega_f",
    "bath.T",
    "bath.g",
    "protocol.t_f",
    "protocol.n_grid",
    "protocol.kind",
    "inertial.f",
    "output.dir",
    "sweep.workers",
];

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut cfg = RunConfig::default();
    let mut m = cfg.system.m;
    let mut omega_i = cfg.system.omega_i;
    let mut omega_f = cfg.system.omega_f;
    let mut temp = cfg.bath.t;
    let mut g = cfg.bath.g;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let key = *KEYS.iter().find(|k| **k == key).ok_or_else(|| ConfigError::at(line, format!("unknown key `{key}`")))?;
        if let Some(prev) = seen.insert(key, line) {
            return Err(ConfigError::at(line, format!("duplicate key `{key}` (first set on line {prev})")));
        }
        let num = |v: &str| -> Result<f64, ConfigError> {
            v.parse::<f64>().map_err(|_| ConfigError::at(line, format!("`{key}`: cannot parse `{v}` as a number")))
        };
        let count = |v: &str| -> Result<usize, ConfigError> {
            v.parse::<usize>().map_err(|_| ConfigError::at(line, format!("`{key}`: cannot parse `{v}` as a count")))
        };
        match key {
            "system.m" => m = num(value)?,
            "system.omega_i" => omega_i = num(value)?,
            "system.omega_f" => omega_f = num(value)?,
            "bath.T" => temp = num(value)?,
            "bath.g" => g = num(value)?,
            "protocol.t_f" => cfg.t_f = parse_tf_list(value).map_err(|e| ConfigError::at(line, e))?,
            "protocol.n_grid" => cfg.n_grid = count(value)?,
            "protocol.kind" => cfg.kind = value.parse().map_err(|e: String| ConfigError::at(line, e))?,
            "inertial.f" => cfg.f_inertial = num(value)?,
            "output.dir" => cfg.output_dir = PathBuf::from(value),
            "sweep.workers" => cfg.workers = count(value)?,
            _ => unreachable!("key list and match arms agree"),
        }
    }

    let line_of = |keys: &[&str]| keys.iter().filter_map(|k| seen.get(k).copied()).max();
    let invariant = |keys: &[&str], msg: String| ConfigError { line: line_of(keys), message: msg };
    cfg.system = SystemParams::new(m, omega_i, omega_f)
        .map_err(|e| invariant(&["system.m", "system.omega_i", "system.omega_f"], e.to_string()))?;
    cfg.bath = BathParams::new(temp, g).map_err(|e| invariant(&["bath.T", "bath.g"], e.to_string()))?;
    if cfg.n_grid < 16 {
        return Err(invariant(&["protocol.n_grid"], format!("protocol.n_grid = {} must be >= 16", cfg.n_grid)));
    }
    if !(cfg.f_inertial > 0.0 && cfg.f_inertial < 1.0) {
        return Err(invariant(&["inertial.f"], format!("inertial.f = {} must lie in (0, 1)", cfg.f_inertial)));
    }
    Ok(cfg)
}

/// Comma-separated positive durations in strictly increasing order.
pub fn parse_tf_list(value: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in value.split(',') {
        let item = item.trim();
        let t: f64 = item.parse().map_err(|_| format!("cannot parse duration `{item}`"))?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(format!("duration {t} must be finite and > 0"));
        }
        if out.last().is_some_and(|&prev| t <= prev) {
            return Err(format!("durations must be strictly increasing, got {t} after {}", out.last().unwrap()));
        }
        out.push(t);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(parse_config("").unwrap(), RunConfig::default());
        assert_eq!(parse_config("# nothing here\n\n   \n").unwrap(), RunConfig::default());
    }

    #[test]
    fn reads_values() {
        let cfg = parse_config(
            "bath.T = 2\nsystem.omega_i = 10 # expansion\nsystem.omega_f=5\nprotocol.t_f = 8, 16,32\nprotocol.kind = quench\nsweep.workers = 3\noutput.dir = runs/a",
        )
        .unwrap();
        assert_eq!(cfg.bath.t, 2.0);
        assert_eq!(cfg.system, SystemParams::expansion());
        assert_eq!(cfg.t_f, vec![8.0, 16.0, 32.0]);
        assert_eq!(cfg.kind, ProtocolKind::Quench);
        assert_eq!(cfg.workers, 3);
        assert_eq!(cfg.output_dir, PathBuf::from("runs/a"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_config("bath.T = 2\nsystem.omega_i = -1\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert!(e.message.contains("omega_i") && e.message.contains("> 0"), "{e}");

        let e = parse_config("\n\nsystem.mass = 1").unwrap_err();
        assert_eq!(e.line, Some(3));
        assert!(e.message.contains("unknown key"));

        let e = parse_config("bath.g = lots").unwrap_err();
        assert_eq!(e.line, Some(1));

        let e = parse_config("protocol.t_f = 8, 8").unwrap_err();
        assert!(e.message.contains("strictly increasing"));

        let e = parse_config("bath.T = 1\nbath.T = 2").unwrap_err();
        assert_eq!(e.line, Some(2));

        assert!(parse_config("inertial.f = 1.5").is_err());
        assert!(parse_config("protocol.n_grid = 8").is_err());
        assert!(parse_config("just words").is_err());
    }
}
