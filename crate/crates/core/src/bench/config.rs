use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GkqGrid,
    Sir,
    Ukq,
}

impl Method {
    pub fn id(self) -> &'static str {
        match self {
            Method::Sir => "sir",
            Method::Ukq => "ukq",
            Method::GkqGrid => "gkq_grid",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sir" => Ok(Method::Sir),
            "ukq" => Ok(Method::Ukq),
            "gkq_grid" | "gkq-grid" => Ok(Method::GkqGrid),
            other => Err(Error::Parse(format!("unknown method `{other}` (expected sir, ukq or gkq-grid)"))),
        }
    }
}

/// How output weights are set once atom locations are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSetting {
    /// Ridge regression on the training data.
    Regression,
    /// The method's own weights (uniform `1/p` for UKQ, spectrum over `p` for
    /// SIR, conditional-gradient weights for GKQ).
    Native,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SirSettings {
    pub p_prime: usize,
    pub scale_a: f64,
    pub scale_b: f64,
    pub weights: WeightSetting,
    pub ridge: f64,
}

impl Default for SirSettings {
    fn default() -> Self {
        Self {
            p_prime: 1000,
            scale_a: 5.0,
            scale_b: 5.0,
            weights: WeightSetting::Regression,
            ridge: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UkqSettings {
    pub q: usize,
    pub proposal_scale: f64,
    pub maximize_as_printed: bool,
    pub weights: WeightSetting,
    pub ridge: f64,
}

impl Default for UkqSettings {
    fn default() -> Self {
        Self {
            q: 100,
            proposal_scale: 1.0,
            maximize_as_printed: false,
            weights: WeightSetting::Regression,
            ridge: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GkqGridSettings {
    pub lambda: f64,
    /// Lattice points per axis.
    pub grid_size: usize,
    /// The lattice covers `[−half_width, half_width]²` in `(a, b)`.
    pub half_width: f64,
    pub line_search: bool,
    pub fully_corrective: bool,
    pub weights: WeightSetting,
    pub ridge: f64,
}

impl Default for GkqGridSettings {
    fn default() -> Self {
        Self {
            lambda: 5.0,
            grid_size: 41,
            half_width: 8.0,
            line_search: false,
            fully_corrective: false,
            weights: WeightSetting::Regression,
            ridge: 1e-4,
        }
    }
}

/// Sweep description. Deserialized from TOML; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSpec {
    pub n_train: usize,
    pub n_test: usize,
    pub noise_sd: f64,
    pub p_grid: Vec<usize>,
    pub seeds: usize,
    pub base_seed: u64,
    pub methods: Vec<Method>,
    /// Smallest `p` included in the rate fits.
    pub fit_min_p: usize,
    /// Write wall-clock times to the report (makes it non-reproducible byte for byte).
    pub record_timing: bool,
    pub sir: SirSettings,
    pub ukq: UkqSettings,
    pub gkq_grid: GkqGridSettings,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            n_train: 100,
            n_test: 100,
            noise_sd: 0.1,
            p_grid: vec![2, 4, 8, 16, 32, 64],
            seeds: 10,
            base_seed: 0,
            methods: vec![Method::Sir, Method::Ukq],
            fit_min_p: 4,
            record_timing: false,
            sir: SirSettings::default(),
            ukq: UkqSettings::default(),
            gkq_grid: GkqGridSettings::default(),
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_train == 0 || self.n_test == 0 {
            return Err(Error::Argument("n_train and n_test must be ≥ 1".into()));
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::Argument(format!("noise_sd must be ≥ 0, got {}", self.noise_sd)));
        }
        if self.p_grid.contains(&0) || self.p_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument("p_grid must be strictly increasing and positive".into()));
        }
        if self.seeds == 0 {
            return Err(Error::Argument("seeds must be ≥ 1".into()));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}
