//! Sweep configuration and its flat `key = value` text format.
//!
//! ```text
//! # comment
//! experiment = power_sweep
//! swept_values = 10, 15, 20, 25, 30
//! k = 32
//! methods = proposed, no_null_space, random_beamforming
//! ```
//!
//! `experiment` selects the defaults; every other key overrides one field.
//! Unknown and repeated keys are errors.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::alignment::SinrFormula;
use crate::allocation::{QosMode, QosPolicy};
use crate::channel::{db_to_linear, ChannelParams, InterferenceModel, PowerLevels};
use crate::optimizer::{AlgorithmSettings, Method, DEFAULT_EPS, DEFAULT_MAX_ITERS};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("unknown experiment '{0}' (valid: power_sweep, antenna_sweep, qos_sweep, convergence, interference_vs_antennas, csi_sweep)")]
    UnknownExperiment(String),
    #[error("unknown key '{0}'")]
    UnknownKey(String),
    #[error("duplicate key '{0}'")]
    DuplicateKey(String),
    #[error("invalid value '{value}' for '{key}': {reason}")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("line {line}: expected 'key = value'")]
    Syntax { line: usize },
    #[error("missing required key 'experiment'")]
    MissingExperiment,
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    PowerSweep,
    AntennaSweep,
    QosSweep,
    Convergence,
    InterferenceVsAntennas,
    CsiSweep,
}

/// The fixed parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptVariable {
    SuPowerDbm,
    Antennas,
    SinrThresholdDb,
    CsiError,
}

impl SweptVariable {
    pub fn key(self) -> &'static str {
        match self {
            Self::SuPowerDbm => "su_power_dbm",
            Self::Antennas => "k",
            Self::SinrThresholdDb => "sinr_threshold_db",
            Self::CsiError => "csi_error",
        }
    }
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Self::PowerSweep,
        Self::AntennaSweep,
        Self::QosSweep,
        Self::Convergence,
        Self::InterferenceVsAntennas,
        Self::CsiSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::PowerSweep => "power_sweep",
            Self::AntennaSweep => "antenna_sweep",
            Self::QosSweep => "qos_sweep",
            Self::Convergence => "convergence",
            Self::InterferenceVsAntennas => "interference_vs_antennas",
            Self::CsiSweep => "csi_sweep",
        }
    }

    pub fn swept_variable(self) -> SweptVariable {
        match self {
            Self::PowerSweep => SweptVariable::SuPowerDbm,
            Self::AntennaSweep | Self::InterferenceVsAntennas | Self::Convergence => {
                SweptVariable::Antennas
            }
            Self::QosSweep => SweptVariable::SinrThresholdDb,
            Self::CsiSweep => SweptVariable::CsiError,
        }
    }

    pub fn default_grid(self) -> Vec<f64> {
        match self {
            Self::PowerSweep => vec![10.0, 15.0, 20.0, 25.0, 30.0],
            Self::AntennaSweep | Self::InterferenceVsAntennas => vec![32.0, 64.0, 128.0, 256.0],
            Self::QosSweep => vec![5.0, 10.0, 15.0, 20.0, 25.0],
            Self::Convergence => vec![32.0],
            Self::CsiSweep => vec![0.0, 0.05, 0.1, 0.15, 0.2],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Experiment {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| ConfigError::UnknownExperiment(s.to_string()))
    }
}

/// Parameters held constant across a sweep (the swept one is overridden per
/// point).
#[derive(Debug, Clone, PartialEq)]
pub struct FixedParams {
    pub k: usize,
    /// `None` means `k / 2`.
    pub d_pu: Option<usize>,
    pub su_power_dbm: f64,
    pub pu_power_dbm: f64,
    pub noise_dbm: f64,
    pub sinr_threshold_db: f64,
    pub csi_error: f64,
    pub qos_mode: QosMode,
    pub sinr_formula: SinrFormula,
    pub interference_model: InterferenceModel,
}

impl Default for FixedParams {
    fn default() -> Self {
        Self {
            k: 32,
            d_pu: None,
            su_power_dbm: 20.0,
            pu_power_dbm: 20.0,
            noise_dbm: -100.0,
            sinr_threshold_db: 10.0,
            csi_error: 0.0,
            qos_mode: QosMode::Guarded,
            sinr_formula: SinrFormula::Cross,
            interference_model: InterferenceModel::SharedCluster,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub experiment: Experiment,
    pub swept_values: Vec<f64>,
    pub fixed: FixedParams,
    pub methods: Vec<Method>,
    pub trials: usize,
    pub master_seed: u64,
    pub eps: f64,
    pub max_iters: usize,
}

/// Everything needed to run one trial at one sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointParams {
    pub channel: ChannelParams,
    pub powers: PowerLevels,
    pub qos: QosPolicy,
    pub settings: AlgorithmSettings,
}

/// Keys accepted by [`SweepConfig::set`], in canonical order.
pub const KEYS: [&str; 18] = [
    "experiment",
    "swept_values",
    "methods",
    "trials",
    "master_seed",
    "eps",
    "max_iters",
    "k",
    "d_pu",
    "su_power_dbm",
    "pu_power_dbm",
    "noise_dbm",
    "sinr_threshold_db",
    "csi_error",
    "qos_mode",
    "sinr_formula",
    "interference_model",
    "literal_sinr_mode",
];

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| invalid(key, value, "expected a finite number"))
}

fn parse_usize(key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse::<usize>()
        .map_err(|_| invalid(key, value, "expected a non-negative integer"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(invalid(key, value, "expected true or false")),
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn fmt_list<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl SweepConfig {
    /// Defaults for one of the named experiments.
    pub fn for_experiment(experiment: Experiment) -> Self {
        let swept_values = experiment.default_grid();
        let large = experiment.swept_variable() == SweptVariable::Antennas
            && swept_values.iter().any(|&k| k >= 128.0);
        Self {
            experiment,
            swept_values,
            fixed: FixedParams::default(),
            methods: Method::ALL.to_vec(),
            trials: if large { 20 } else { 200 },
            master_seed: DEFAULT_SEED,
            eps: DEFAULT_EPS,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }

    /// Sets one field from its text form. `experiment` resets nothing; use
    /// [`SweepConfig::for_experiment`] to change defaults.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key {
            "experiment" => self.experiment = value.parse()?,
            "swept_values" => {
                self.swept_values = split_list(value)
                    .map(|v| parse_f64(key, v))
                    .collect::<Result<_, _>>()?;
            }
            "methods" => {
                self.methods = split_list(value)
                    .map(|v| v.parse::<Method>().map_err(|e| invalid(key, v, e)))
                    .collect::<Result<_, _>>()?;
            }
            "trials" => self.trials = parse_usize(key, value)?,
            "master_seed" => {
                self.master_seed = value
                    .parse()
                    .map_err(|_| invalid(key, value, "expected an unsigned 64-bit integer"))?
            }
            "eps" => self.eps = parse_f64(key, value)?,
            "max_iters" => self.max_iters = parse_usize(key, value)?,
            "k" => self.fixed.k = parse_usize(key, value)?,
            "d_pu" => {
                self.fixed.d_pu = match value {
                    "auto" => None,
                    v => Some(parse_usize(key, v)?),
                }
            }
            "su_power_dbm" => self.fixed.su_power_dbm = parse_f64(key, value)?,
            "pu_power_dbm" => self.fixed.pu_power_dbm = parse_f64(key, value)?,
            "noise_dbm" => self.fixed.noise_dbm = parse_f64(key, value)?,
            "sinr_threshold_db" => self.fixed.sinr_threshold_db = parse_f64(key, value)?,
            "csi_error" => self.fixed.csi_error = parse_f64(key, value)?,
            "qos_mode" => {
                self.fixed.qos_mode = QosMode::parse(value)
                    .ok_or_else(|| invalid(key, value, "expected guarded or literal"))?
            }
            "sinr_formula" => {
                self.fixed.sinr_formula = SinrFormula::parse(value)
                    .ok_or_else(|| invalid(key, value, "expected cross or literal"))?
            }
            "literal_sinr_mode" => {
                self.fixed.sinr_formula = if parse_bool(key, value)? {
                    SinrFormula::Literal
                } else {
                    SinrFormula::Cross
                }
            }
            "interference_model" => {
                self.fixed.interference_model = value
                    .parse()
                    .map_err(|e: crate::channel::ChannelError| invalid(key, value, e.to_string()))?
            }
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Fully resolved configuration as `(key, value)` pairs. Feeding these
    /// back through [`parse_config`] reproduces `self`.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let f = &self.fixed;
        vec![
            ("experiment", self.experiment.to_string()),
            ("swept_values", fmt_list(&self.swept_values)),
            ("methods", fmt_list(&self.methods)),
            ("trials", self.trials.to_string()),
            ("master_seed", self.master_seed.to_string()),
            ("eps", self.eps.to_string()),
            ("max_iters", self.max_iters.to_string()),
            ("k", f.k.to_string()),
            ("d_pu", f.d_pu.map_or_else(|| "auto".to_string(), |d| d.to_string())),
            ("su_power_dbm", f.su_power_dbm.to_string()),
            ("pu_power_dbm", f.pu_power_dbm.to_string()),
            ("noise_dbm", f.noise_dbm.to_string()),
            ("sinr_threshold_db", f.sinr_threshold_db.to_string()),
            ("csi_error", f.csi_error.to_string()),
            ("qos_mode", f.qos_mode.name().to_string()),
            ("sinr_formula", f.sinr_formula.name().to_string()),
            ("interference_model", f.interference_model.to_string()),
        ]
    }

    pub fn to_text(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn swept_variable(&self) -> SweptVariable {
        self.experiment.swept_variable()
    }

    /// Resolves the parameters of the sweep point where the swept variable
    /// takes `value`.
    pub fn point(&self, value: f64) -> Result<PointParams, ConfigError> {
        let mut f = self.fixed.clone();
        match self.swept_variable() {
            SweptVariable::SuPowerDbm => f.su_power_dbm = value,
            SweptVariable::SinrThresholdDb => f.sinr_threshold_db = value,
            SweptVariable::CsiError => f.csi_error = value,
            SweptVariable::Antennas => {
                if value.fract() != 0.0 || value < 2.0 {
                    return Err(ConfigError::Invalid(format!(
                        "antenna count must be an integer >= 2, got {value}"
                    )));
                }
                f.k = value as usize;
            }
        }
        let d_pu = f.d_pu.unwrap_or((f.k / 2).max(1));
        let channel =
            ChannelParams::new(f.k, d_pu, f.csi_error).with_model(f.interference_model);
        channel
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let powers = PowerLevels::from_dbm(f.su_power_dbm, f.pu_power_dbm, f.noise_dbm)
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let qos = QosPolicy::new(db_to_linear(f.sinr_threshold_db), f.qos_mode).ok_or_else(|| {
            ConfigError::Invalid(format!("SINR threshold {} dB is out of range", f.sinr_threshold_db))
        })?;
        Ok(PointParams {
            channel,
            powers,
            qos,
            settings: AlgorithmSettings {
                eps: self.eps,
                max_iters: self.max_iters,
                sinr_formula: f.sinr_formula,
            },
        })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.swept_values.is_empty() {
            return Err(ConfigError::Invalid("swept_values is empty".into()));
        }
        if self.swept_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConfigError::Invalid(
                "swept_values must be strictly increasing".into(),
            ));
        }
        if self.methods.is_empty() {
            return Err(ConfigError::Invalid("methods is empty".into()));
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return Err(ConfigError::Invalid(format!("method {m} listed twice")));
            }
        }
        if self.trials == 0 {
            return Err(ConfigError::Invalid("trials must be at least 1".into()));
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return Err(ConfigError::Invalid("eps must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(ConfigError::Invalid("max_iters must be at least 1".into()));
        }
        for &v in &self.swept_values {
            self.point(v)?;
        }
        Ok(())
    }
}

/// Parses a config file body. Blank lines and `#` comments are ignored.
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(ConfigError::Syntax { line: idx + 1 })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax { line: idx + 1 });
        }
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey(key.to_string()));
        }
        if pairs.iter().any(|(k, _)| k == key) {
            return Err(ConfigError::DuplicateKey(key.to_string()));
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    let experiment: Experiment = pairs
        .iter()
        .find(|(k, _)| k == "experiment")
        .ok_or(ConfigError::MissingExperiment)?
        .1
        .parse()?;
    let mut cfg = SweepConfig::for_experiment(experiment);
    for (k, v) in pairs.iter().filter(|(k, _)| k != "experiment") {
        cfg.set(k, v)?;
    }
    Ok(cfg)
}

/// Splits `key=value` override strings, rejecting repeated keys.
pub fn parse_overrides<S: AsRef<str>>(items: &[S]) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for item in items {
        let item = item.as_ref();
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| invalid(item, "", "expected key=value"))?;
        let k = k.trim();
        if !KEYS.contains(&k) || k == "experiment" {
            return Err(ConfigError::UnknownKey(k.to_string()));
        }
        if out.iter().any(|(seen, _)| seen == k) {
            return Err(ConfigError::DuplicateKey(k.to_string()));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}
