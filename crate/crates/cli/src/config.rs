//! Run configuration: one JSON document, overridable from the command line.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use dirac_morse::bound::Branch;
use dirac_morse::model::ModelParams;
use serde::{Deserialize, Serialize};

/// Model parameters as plain numbers, validated on deserialization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct ModelConfig {
    params: ModelParams,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    a: f64,
    omega: f64,
    xi: f64,
    lambda_c: f64,
}

impl TryFrom<RawModel> for ModelConfig {
    type Error = String;

    fn try_from(raw: RawModel) -> Result<Self, String> {
        ModelParams::new(raw.a, raw.omega, raw.xi, raw.lambda_c)
            .map(|params| Self { params })
            .map_err(|e| e.to_string())
    }
}

impl From<ModelConfig> for RawModel {
    fn from(m: ModelConfig) -> Self {
        let p = m.params;
        Self { a: p.a(), omega: p.omega(), xi: p.xi(), lambda_c: p.lambda_c() }
    }
}

impl ModelConfig {
    pub fn params(&self) -> ModelParams {
        self.params
    }
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { params: ModelParams::new(2.0, 0.5, 0.8, 1.0).expect("reference parameters are admissible") }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum BranchName {
    #[default]
    Plus,
    Minus,
}

impl From<BranchName> for Branch {
    fn from(b: BranchName) -> Self {
        match b {
            BranchName::Plus => Branch::Plus,
            BranchName::Minus => Branch::Minus,
        }
    }
}

/// Uniform sampling grid in x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub model: ModelConfig,
    /// Scattering energy, |ε| > 1.
    #[serde(default)]
    pub energy: Option<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_terms")]
    pub n_terms: usize,
    /// Bound-state level for `wavefunction`.
    #[serde(default)]
    pub state: Option<usize>,
    #[serde(default)]
    pub branch: BranchName,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    /// Shooting window inside (−1, 1).
    #[serde(default)]
    pub window: Option<(f64, f64)>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_alpha() -> f64 {
    1.0
}

fn default_terms() -> usize {
    dirac_morse::scatter::DEFAULT_TERMS
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelConfig::default(),
            energy: None,
            alpha: default_alpha(),
            n_terms: default_terms(),
            state: None,
            branch: BranchName::default(),
            grid: None,
            window: None,
            format: Format::default(),
            output: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(format!("alpha must be positive, got {}", self.alpha));
        }
        if self.n_terms == 0 {
            return Err("n_terms must be at least 1".into());
        }
        if let Some(e) = self.energy {
            if !e.is_finite() {
                return Err(format!("energy must be finite, got {e}"));
            }
        }
        if let Some(g) = self.grid {
            if !(g.x_min < g.x_max) || g.n_points < 3 {
                return Err(format!(
                    "empty grid: need x_min < x_max and at least 3 points, got [{}, {}] with {}",
                    g.x_min, g.x_max, g.n_points
                ));
            }
        }
        if let Some((lo, hi)) = self.window {
            if !(lo > -1.0 && lo < hi && hi < 1.0) {
                return Err(format!("shooting window must satisfy -1 < lo < hi < 1, got ({lo}, {hi})"));
            }
        }
        Ok(())
    }
}
