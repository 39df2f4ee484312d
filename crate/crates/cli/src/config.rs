//! Experiment configuration: JSON in, JSON out, with validated ranges.

use std::path::PathBuf;

use gffx_core::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// Independent N(0, g(0)) variables, the comparison ensemble.
    IidControl,
    /// Zero-boundary field on the box (spectral sampler).
    DirichletBox,
    /// Infinite-volume field restricted to the box window (Cholesky).
    InfiniteWindow,
}

impl Law {
    pub fn as_str(&self) -> &'static str {
        match self {
            Law::IidControl => "iid-control",
            Law::DirichletBox => "dirichlet-box",
            Law::InfiniteWindow => "infinite-window",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub d: usize,
    pub law: Law,
    /// Box side for single-domain experiments.
    pub box_side: usize,
    /// Box sides for experiments that sweep domains (lln, markov-check,
    /// gumbel KS comparison).
    pub sides: Vec<usize>,
    pub z_grid: Vec<f64>,
    pub delta: f64,
    pub epsilon: f64,
    pub replicates: u64,
    pub master_seed: u64,
    /// Worker threads; None lets rayon pick. Results do not depend on it.
    pub workers: Option<usize>,
    pub out_dir: PathBuf,
    pub quad_tol: f64,
    /// N grid for the bound-decay table.
    pub n_grid: Vec<u64>,
    /// Window radius for the `green` table dump.
    pub green_radius: i64,
    /// |empirical − Gumbel| tolerance gating the gumbel experiment.
    pub gumbel_tolerance: f64,
    /// Band for the normalized LLN ratio.
    pub lln_band: (f64, f64),
    /// Threshold factor ε in P(max |μ| > ε·a_{m_N}) for markov-check.
    pub drift_epsilon: f64,
    /// Site list for the small-instance oracle.
    pub oracle_sites: Vec<Vec<i64>>,
    pub oracle_threshold: f64,
    pub oracle_budget: u64,
    /// Also write an SVG plot next to the CSV.
    pub svg: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            d: 3,
            law: Law::DirichletBox,
            box_side: 16,
            sides: vec![8, 12, 16],
            z_grid: vec![-2.0, -1.0, 0.0, 1.0, 2.0, 3.0],
            delta: 0.1,
            epsilon: 0.05,
            replicates: 10_000,
            master_seed: 7_2024,
            workers: None,
            out_dir: PathBuf::from("out"),
            quad_tol: 1e-7,
            n_grid: vec![1_000, 10_000, 100_000, 1_000_000],
            green_radius: 6,
            gumbel_tolerance: 0.06,
            lln_band: (0.85, 1.0),
            drift_epsilon: 0.5,
            oracle_sites: vec![
                vec![0, 0, 0],
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![1, 1, 0],
                vec![0, 0, 1],
                vec![1, 0, 1],
                vec![0, 1, 1],
                vec![1, 1, 1],
            ],
            oracle_threshold: 2.0,
            oracle_budget: 100_000,
            svg: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d < 3 {
            return Err(Error::DimensionTooSmall(self.d));
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(Error::invalid(format!(
                "delta must lie in (0, 1/2), got {}",
                self.delta
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::invalid("epsilon must be positive"));
        }
        if self.replicates < 1 {
            return Err(Error::invalid("replicates must be at least 1"));
        }
        if self.box_side < 1 {
            return Err(Error::invalid("box side must be at least 1"));
        }
        if self.n_grid.is_empty() {
            return Err(Error::invalid("n_grid must be nonempty"));
        }
        if self.z_grid.is_empty() {
            return Err(Error::invalid("z_grid must be nonempty"));
        }
        if !(self.quad_tol > 0.0) {
            return Err(Error::invalid("quad_tol must be positive"));
        }
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path)?;
        let cfg: ExperimentConfig = serde_json::from_str(&raw)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Green-table cache directory from GFFX_CACHE, when set.
    pub fn cache_dir() -> Option<PathBuf> {
        std::env::var_os("GFFX_CACHE").map(PathBuf::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_lossless() {
        let cfg = ExperimentConfig {
            box_side: 12,
            z_grid: vec![-1.0, 0.5],
            master_seed: 99,
            ..Default::default()
        };
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn defaults_validate() {
        ExperimentConfig::default().validate().unwrap();
    }

    #[test]
    fn bad_ranges_rejected() {
        let mut cfg = ExperimentConfig::default();
        cfg.delta = 0.5;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.d = 2;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.replicates = 0;
        assert!(cfg.validate().is_err());
    }
}
