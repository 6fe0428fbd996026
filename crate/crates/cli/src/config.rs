//! Experiment configuration: flat key = value sections (TOML), one file per
//! run. Unknown suite names and unknown tolerance keys are rejected when
//! the file is loaded, and the seed pins every sampled family.

use crate::{CliError, Result};
use radop::OperatorParams;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub params: ParamsConfig,
    pub grid: GridConfig,
    pub run: RunConfig,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub dim: u32,
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub radius: f64,
    pub n: usize,
    pub grading: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub suites: Vec<String>,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

/// The eight suites, in dependency order. `spectrum` gates the three
/// operator-driven suites behind it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Lyapunov,
    MFunction,
    RHolder,
    Spectrum,
    Semigroup,
    Green,
    Weighted,
    Sector,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Lyapunov,
        Suite::MFunction,
        Suite::RHolder,
        Suite::Spectrum,
        Suite::Semigroup,
        Suite::Green,
        Suite::Weighted,
        Suite::Sector,
    ];

    pub fn parse(name: &str) -> Option<Suite> {
        match name {
            "lyapunov" => Some(Suite::Lyapunov),
            "mfunction" => Some(Suite::MFunction),
            "rholder" => Some(Suite::RHolder),
            "spectrum" => Some(Suite::Spectrum),
            "semigroup" => Some(Suite::Semigroup),
            "green" => Some(Suite::Green),
            "weighted" => Some(Suite::Weighted),
            "sector" => Some(Suite::Sector),
            _ => None,
        }
    }

    /// Suites that are skipped when the spectrum suite aborts.
    pub fn depends_on_spectrum(self) -> bool {
        matches!(self, Suite::Semigroup | Suite::Green | Suite::Sector)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Lyapunov => "lyapunov",
            Suite::MFunction => "mfunction",
            Suite::RHolder => "rholder",
            Suite::Spectrum => "spectrum",
            Suite::Semigroup => "semigroup",
            Suite::Green => "green",
            Suite::Weighted => "weighted",
            Suite::Sector => "sector",
        };
        write!(f, "{name}")
    }
}

/// Every numerical threshold used by the suites, overridable per run
/// through the `[tolerances]` section.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub lyapunov_slack: f64,
    pub lyapunov_oracle_rel: f64,
    pub m_slope_window: f64,
    pub m_oracle_rel: f64,
    pub rh_unit: f64,
    pub rh_growth: f64,
    pub ortho_defect: f64,
    pub residual_scale: f64,
    pub n_doubling_rel: f64,
    pub r_doubling_rel: f64,
    pub positivity_floor: f64,
    pub domination_slack: f64,
    pub kernel_growth: f64,
    pub green_newtonian_rel: f64,
    pub green_origin_rel: f64,
    pub ck_growth: f64,
    pub weighted_growth: f64,
    pub shift_scan_rel: f64,
    pub ray_bound_slack: f64,
    pub dissipativity_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            lyapunov_slack: 1e-9,
            lyapunov_oracle_rel: 1e-6,
            m_slope_window: 0.1,
            m_oracle_rel: 1e-4,
            rh_unit: 1e-9,
            rh_growth: 0.05,
            ortho_defect: 1e-8,
            residual_scale: 1e-8,
            n_doubling_rel: 1e-3,
            r_doubling_rel: 1e-4,
            positivity_floor: 1e-12,
            domination_slack: 1e-10,
            kernel_growth: 0.05,
            green_newtonian_rel: 1e-2,
            green_origin_rel: 2e-2,
            ck_growth: 0.10,
            weighted_growth: 0.10,
            shift_scan_rel: 1e-6,
            ray_bound_slack: 1e-8,
            dissipativity_floor: -1e-9,
        }
    }
}

impl Tolerances {
    pub fn with_overrides(map: &BTreeMap<String, f64>) -> Result<Self> {
        let mut t = Self::default();
        for (key, &value) in map {
            match key.as_str() {
                "lyapunov_slack" => t.lyapunov_slack = value,
                "lyapunov_oracle_rel" => t.lyapunov_oracle_rel = value,
                "m_slope_window" => t.m_slope_window = value,
                "m_oracle_rel" => t.m_oracle_rel = value,
                "rh_unit" => t.rh_unit = value,
                "rh_growth" => t.rh_growth = value,
                "ortho_defect" => t.ortho_defect = value,
                "residual_scale" => t.residual_scale = value,
                "n_doubling_rel" => t.n_doubling_rel = value,
                "r_doubling_rel" => t.r_doubling_rel = value,
                "positivity_floor" => t.positivity_floor = value,
                "domination_slack" => t.domination_slack = value,
                "kernel_growth" => t.kernel_growth = value,
                "green_newtonian_rel" => t.green_newtonian_rel = value,
                "green_origin_rel" => t.green_origin_rel = value,
                "ck_growth" => t.ck_growth = value,
                "weighted_growth" => t.weighted_growth = value,
                "shift_scan_rel" => t.shift_scan_rel = value,
                "ray_bound_slack" => t.ray_bound_slack = value,
                "dissipativity_floor" => t.dissipativity_floor = value,
                other => {
                    return Err(CliError::Config(format!("unknown tolerance key `{other}`")))
                }
            }
        }
        Ok(t)
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        let config: ExperimentConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.operator_params()?;
        if !(self.grid.radius > 0.0) {
            return Err(CliError::Config(format!(
                "grid.radius must be positive, got {}",
                self.grid.radius
            )));
        }
        if self.grid.n < 16 {
            return Err(CliError::Config(format!("grid.n must be at least 16, got {}", self.grid.n)));
        }
        if !(self.grid.grading >= 1.0) {
            return Err(CliError::Config(format!(
                "grid.grading must be >= 1, got {}",
                self.grid.grading
            )));
        }
        for name in &self.run.suites {
            if name != "all" && Suite::parse(name).is_none() {
                return Err(CliError::Config(format!("unknown suite `{name}`")));
            }
        }
        Tolerances::with_overrides(&self.tolerances)?;
        Ok(())
    }

    pub fn operator_params(&self) -> Result<OperatorParams> {
        OperatorParams::new(self.params.dim, self.params.alpha, self.params.beta, self.params.p)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn tolerances(&self) -> Result<Tolerances> {
        Tolerances::with_overrides(&self.tolerances)
    }

    /// Requested suites expanded and ordered by dependency.
    pub fn resolved_suites(&self) -> Result<Vec<Suite>> {
        let mut requested = Vec::new();
        for name in &self.run.suites {
            if name == "all" {
                requested.extend_from_slice(&Suite::ALL);
            } else {
                requested.push(
                    Suite::parse(name)
                        .ok_or_else(|| CliError::Config(format!("unknown suite `{name}`")))?,
                );
            }
        }
        let mut ordered = Vec::new();
        for suite in Suite::ALL {
            if requested.contains(&suite) && !ordered.contains(&suite) {
                ordered.push(suite);
            }
        }
        Ok(ordered)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[params]
dim = 3
alpha = 3.0
beta = 2.0
p = 2.0

[grid]
radius = 30.0
n = 800
grading = 2.0

[run]
suites = ["lyapunov", "sector"]
output_dir = "out/sample"
seed = 7
"#;

    #[test]
    fn parses_and_validates_sample() {
        let config: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        config.validate().unwrap();
        assert_eq!(config.run.seed, 7);
        let suites = config.resolved_suites().unwrap();
        assert_eq!(suites, vec![Suite::Lyapunov, Suite::Sector]);
    }

    #[test]
    fn rejects_unknown_suites_and_tolerances() {
        let mut config: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        config.run.suites = vec!["lyapunov".into(), "spectralizer".into()];
        assert!(config.validate().is_err());

        let mut config: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        config.tolerances.insert("no_such_tolerance".into(), 1.0);
        assert!(config.validate().is_err());
    }

    #[test]
    fn rejects_invalid_operator_parameters() {
        let mut config: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        config.params.beta = 0.5; // beta <= alpha - 2
        assert!(config.validate().is_err());
    }

    #[test]
    fn all_expands_in_dependency_order() {
        let mut config: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        config.run.suites = vec!["all".into()];
        let suites = config.resolved_suites().unwrap();
        assert_eq!(suites.len(), 8);
        assert_eq!(suites[3], Suite::Spectrum);
        assert!(suites[4..].iter().all(|s| s.depends_on_spectrum() || *s == Suite::Weighted));
    }

    #[test]
    fn empty_suite_list_is_allowed() {
        let mut config: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        config.run.suites = vec![];
        config.validate().unwrap();
        assert!(config.resolved_suites().unwrap().is_empty());
    }
}
