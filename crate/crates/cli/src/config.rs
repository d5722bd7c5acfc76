use std::path::{Path, PathBuf};

use eigenband::manifold::{ManifoldKind, ManifoldModel, ManifoldSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Resolved experiment parameters. Every field has a default; a JSON config
/// file overrides the defaults and command-line flags override the file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub manifold: ManifoldSpec,
    pub lambdas: Vec<f64>,
    pub seed: u64,
    pub samples: usize,
    pub grid_density: usize,
    /// Substrate size for nets, and grid size for diameter scans.
    pub substrate: usize,
    /// Covering radii as fractions of half the diameter, largest first.
    pub eps_max: f64,
    pub eps_min: f64,
    pub eps_count: usize,
    pub a_values: Vec<f64>,
    /// Criteria run by `verify`; empty means all.
    pub criteria: Vec<usize>,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            manifold: ManifoldSpec { kind: ManifoldKind::Sphere2, dim: None, side_lengths: Vec::new() },
            lambdas: vec![10.0],
            seed: 0,
            samples: 100,
            grid_density: 8,
            substrate: 20_000,
            eps_max: 1.0,
            eps_min: 0.25,
            eps_count: 9,
            a_values: vec![0.01, 0.05, 0.1, 0.2, 0.5],
            criteria: Vec::new(),
            out: PathBuf::from("results"),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<ManifoldModel, CliError> {
        let model = self.manifold.build().map_err(|e| CliError::Config(e.to_string()))?;
        if self.lambdas.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
            return Err(CliError::Config("every lambda must be positive and finite".into()));
        }
        let counts = [
            ("samples", self.samples),
            ("grid_density", self.grid_density),
            ("substrate", self.substrate),
            ("eps_count", self.eps_count),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v < 1) {
            return Err(CliError::Config(format!("{name} must be at least 1")));
        }
        if !(self.eps_min > 0.0 && self.eps_min <= self.eps_max) {
            return Err(CliError::Config("need 0 < eps_min <= eps_max".into()));
        }
        if self.a_values.iter().any(|a| !(*a > 0.0)) {
            return Err(CliError::Config("claim parameters must be positive".into()));
        }
        Ok(model)
    }

    /// `eps_count` radii from `eps_max·h` down to `eps_min·h`, geometric.
    pub fn radii(&self, h: f64) -> Vec<f64> {
        let n = self.eps_count;
        if n == 1 {
            return vec![self.eps_max * h];
        }
        (0..n)
            .map(|i| h * self.eps_max * (self.eps_min / self.eps_max).powf(i as f64 / (n - 1) as f64))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radii_are_geometric_and_descending() {
        let c = ExperimentConfig { eps_max: 1.0, eps_min: 0.25, eps_count: 3, ..Default::default() };
        let r = c.radii(2.0);
        assert_eq!(r.len(), 3);
        assert!((r[0] - 2.0).abs() < 1e-15 && (r[1] - 1.0).abs() < 1e-15 && (r[2] - 0.5).abs() < 1e-15);
        let one = ExperimentConfig { eps_count: 1, ..Default::default() };
        assert_eq!(one.radii(0.3), vec![0.3]);
    }

    #[test]
    fn validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = [
            ExperimentConfig { samples: 0, ..Default::default() },
            ExperimentConfig { lambdas: vec![0.0], ..Default::default() },
            ExperimentConfig { eps_min: 2.0, ..Default::default() },
            ExperimentConfig { a_values: vec![-0.1], ..Default::default() },
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(CliError::Config(_))));
        }
    }

    #[test]
    fn partial_json_keeps_defaults() {
        let c: ExperimentConfig = serde_json::from_str(r#"{"seed": 9}"#).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.samples, ExperimentConfig::default().samples);
    }
}
