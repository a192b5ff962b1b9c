//! Suite configuration and the report schema emitted by `verify`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// Which registered family of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Iwasawa,
    Brackets,
    Spectral,
    Inversion,
    Intertwining,
    Counterexample,
    All,
}

impl Suite {
    pub fn tag(&self) -> &'static str {
        match self {
            Suite::Iwasawa => "iwasawa",
            Suite::Brackets => "brackets",
            Suite::Spectral => "spectral",
            Suite::Inversion => "inversion",
            Suite::Intertwining => "intertwining",
            Suite::Counterexample => "counterexample",
            Suite::All => "all",
        }
    }

    pub fn includes(&self, suite: &str) -> bool {
        matches!(self, Suite::All) || self.tag() == suite
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Grid knobs shared by the checks that admit a size/accuracy trade-off.
/// Defaults are the pinned configuration the tolerances were validated at.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct GridSizes {
    pub disk_radius: f64,
    pub disk_radial: usize,
    pub disk_angular: usize,
    pub lambda_max: f64,
    pub lambda_nodes: usize,
    pub boundary_nodes: usize,
    pub line_nodes: usize,
    pub circle_nodes: usize,
}

impl Default for GridSizes {
    fn default() -> Self {
        GridSizes {
            disk_radius: 1.7,
            disk_radial: 200,
            disk_angular: 128,
            lambda_max: 24.0,
            lambda_nodes: 400,
            boundary_nodes: 128,
            line_nodes: 1600,
            circle_nodes: 512,
        }
    }
}

/// Full configuration of a verification run. Serialisable so a JSON config
/// file and the command line populate the same struct.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub seed: u64,
    /// Per-suite tolerance overrides: a value here replaces the registered
    /// tolerance of every check in that suite.
    pub tolerances: BTreeMap<String, f64>,
    pub grid_sizes: GridSizes,
    pub output_path: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::All,
            seed: 7,
            tolerances: BTreeMap::new(),
            grid_sizes: GridSizes::default(),
            output_path: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        for (suite, tol) in &self.tolerances {
            anyhow::ensure!(
                *tol > 0.0 && tol.is_finite(),
                "tolerance override for suite {suite} must be positive, got {tol}"
            );
            let known = ["iwasawa", "brackets", "spectral", "inversion", "intertwining", "counterexample"];
            anyhow::ensure!(known.contains(&suite.as_str()), "unknown suite tag {suite}");
        }
        let g = &self.grid_sizes;
        anyhow::ensure!(g.disk_radius > 0.0, "disk radius must be positive");
        anyhow::ensure!(g.lambda_max > 0.0, "spectral cutoff must be positive");
        Ok(())
    }

    pub fn tolerance_for(&self, suite: &str, default: f64) -> f64 {
        self.tolerances.get(suite).copied().unwrap_or(default)
    }
}

/// One executed check. `pass` is derived, never set independently.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRecord {
    pub name: String,
    pub suite: String,
    pub expected: String,
    pub observed: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub paper_ref: String,
}

impl CheckRecord {
    pub fn new(
        name: &str,
        suite: &str,
        expected: String,
        observed: String,
        residual: f64,
        tolerance: f64,
        paper_ref: &str,
    ) -> Self {
        CheckRecord {
            name: name.to_string(),
            suite: suite.to_string(),
            expected,
            observed,
            residual,
            tolerance,
            pass: residual <= tolerance,
            paper_ref: paper_ref.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Verification report. Wall time is measured but kept out of the JSON so a
/// fixed seed yields bit-identical files; the runner prints it separately.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub config: SuiteConfig,
    pub per_check: Vec<CheckRecord>,
    pub summary: Summary,
    #[serde(skip)]
    pub wall_time_seconds: f64,
}

impl Report {
    pub fn assemble(config: SuiteConfig, per_check: Vec<CheckRecord>, wall: f64) -> Self {
        let passed = per_check.iter().filter(|c| c.pass).count();
        let summary =
            Summary { total: per_check.len(), passed, failed: per_check.len() - passed };
        Report { schema_version: 1, config, per_check, summary, wall_time_seconds: wall }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suite_includes_everything_and_tags_only_themselves() {
        for tag in ["iwasawa", "brackets", "spectral", "inversion", "intertwining", "counterexample"] {
            assert!(Suite::All.includes(tag));
        }
        assert!(Suite::Spectral.includes("spectral"));
        assert!(!Suite::Spectral.includes("inversion"));
    }

    #[test]
    fn pass_flag_is_derived_from_residual_and_tolerance() {
        let ok = CheckRecord::new("a", "spectral", "0".into(), "1e-9".into(), 1e-9, 1e-6, "r");
        assert!(ok.pass);
        let bad = CheckRecord::new("a", "spectral", "0".into(), "1e-3".into(), 1e-3, 1e-6, "r");
        assert!(!bad.pass);
    }

    #[test]
    fn tolerance_overrides_replace_per_suite() {
        let mut cfg = SuiteConfig::default();
        cfg.tolerances.insert("spectral".into(), 1e-2);
        assert_eq!(cfg.tolerance_for("spectral", 1e-6), 1e-2);
        assert_eq!(cfg.tolerance_for("inversion", 1e-3), 1e-3);
        assert!(cfg.validate().is_ok());
        cfg.tolerances.insert("spectral".into(), -1.0);
        assert!(cfg.validate().is_err());
        cfg.tolerances.insert("spectral".into(), 1e-2);
        cfg.tolerances.insert("everything".into(), 1e-2);
        assert!(cfg.validate().is_err(), "unknown suite tags are rejected");
    }

    #[test]
    fn partial_config_json_fills_defaults_and_wall_time_stays_out() {
        let cfg: SuiteConfig =
            serde_json::from_str("{\"suite\": \"brackets\", \"seed\": 3}").unwrap();
        assert_eq!(cfg.suite, Suite::Brackets);
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.grid_sizes.lambda_nodes, GridSizes::default().lambda_nodes);

        let record =
            CheckRecord::new("a", "brackets", "0".into(), "0".into(), 0.0, 1e-9, "r");
        let report = Report::assemble(cfg, vec![record], 12.5);
        let json = report.to_json();
        assert!(json.contains("\"schemaVersion\": 1"));
        assert!(json.contains("\"perCheck\""));
        assert!(!json.to_lowercase().contains("wall"), "wall time must not be serialised");
    }
}
