//! Scenario files: one JSON object naming a solver, its parameters and an
//! optional one-parameter sweep.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Example1,
    DipoleLimit,
    Example2,
    Example3,
    RhUnidirectional,
    RhAxisymmetric,
    RhComposed,
    GravityDynamics,
}

impl SolverKind {
    /// Keys every item needs, and keys it may carry.
    fn keys(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            SolverKind::Example1 => (&["q", "a", "b", "Q"], &[]),
            SolverKind::DipoleLimit => (&["mu", "a", "Q"], &[]),
            SolverKind::Example2 => (&["mu", "Q", "A"], &["B"]),
            SolverKind::Example3 => (&["beta", "Q", "a"], &[]),
            SolverKind::RhUnidirectional => (&[], &["p", "alpha", "B", "x0", "mu", "guess_alpha", "guess_beta"]),
            SolverKind::RhAxisymmetric => (&[], &["p", "alpha", "B", "r0", "mu", "guess_alpha", "guess_beta"]),
            SolverKind::RhComposed => (&[], &["p", "core", "alpha", "B", "a", "mu", "guess_alpha", "guess_beta"]),
            SolverKind::GravityDynamics => (&["C", "mu", "A", "t"], &[]),
        }
    }

    /// Name of the dipole-position key for the Riemann-Hilbert solvers.
    pub fn center_key(self) -> Option<&'static str> {
        match self {
            SolverKind::RhUnidirectional => Some("x0"),
            SolverKind::RhAxisymmetric => Some("r0"),
            SolverKind::RhComposed => Some("a"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "yes")]
    pub csv: bool,
    #[serde(default = "yes")]
    pub svg: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: default_dir(), csv: true, svg: true }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn yes() -> bool {
    true
}

fn default_grid() -> usize {
    heleshaw::spectral::DEFAULT_GRID
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Stem for every output file.
    pub name: String,
    pub solver: SolverKind,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub verify: bool,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let config: ScenarioConfig =
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Parameter sets of the individual runs, in sweep order.
    pub fn items(&self) -> Vec<BTreeMap<String, f64>> {
        match &self.sweep {
            None => vec![self.parameters.clone()],
            Some(s) => s
                .values
                .iter()
                .map(|&v| {
                    let mut p = self.parameters.clone();
                    p.insert(s.parameter.clone(), v);
                    p
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(format!("name {:?} must be non-empty and use only [A-Za-z0-9_-]", self.name));
        }
        heleshaw::spectral::check_grid_size(self.grid).map_err(|e| e.to_string())?;
        let (required, optional) = self.solver.keys();
        let known = |k: &str| required.contains(&k) || optional.contains(&k);
        for (k, v) in &self.parameters {
            if !known(k) {
                return Err(format!("unknown parameter {k:?} for solver {:?}", self.solver));
            }
            if !v.is_finite() {
                return Err(format!("parameter {k} = {v} is not finite"));
            }
        }
        if let Some(s) = &self.sweep {
            if !known(&s.parameter) {
                return Err(format!("cannot sweep unknown parameter {:?}", s.parameter));
            }
            if s.values.is_empty() {
                return Err("sweep has no values".into());
            }
            if let Some(v) = s.values.iter().find(|v| !v.is_finite()) {
                return Err(format!("sweep value {v} is not finite"));
            }
        }
        for item in self.items() {
            for k in required {
                if !item.contains_key(*k) {
                    return Err(format!("missing required parameter {k:?}"));
                }
            }
            if let Some(center) = self.solver.center_key() {
                let has = |k: &str| item.contains_key(k);
                let ok = (has("alpha") && has("B")) || (has(center) && (has("mu") ^ has("B")));
                if !ok || (has("alpha") && has(center)) {
                    return Err(format!("give either alpha and B, or {center} with exactly one of mu and B"));
                }
                if has("guess_alpha") != has("guess_beta") {
                    return Err("guess_alpha and guess_beta go together".into());
                }
                if let Some(&core) = item.get("core") {
                    if core != 1.0 && core != 2.0 {
                        return Err(format!("core must be 1 (identity) or 2 (z²/2), got {core}"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ScenarioConfig {
        serde_json::from_str(
            r#"{"name": "t", "solver": "example2", "parameters": {"mu": 1, "Q": 1, "A": 4}}"#,
        )
        .unwrap()
    }

    #[test]
    fn defaults_fill_in() {
        let c = base();
        assert_eq!(c.grid, 2048);
        assert!(c.output.csv && c.output.svg && !c.verify);
        assert!(c.validate().is_ok());
        assert_eq!(c.items().len(), 1);
    }

    #[test]
    fn empty_sweep_is_rejected() {
        let mut c = base();
        c.sweep = Some(Sweep { parameter: "A".into(), values: vec![] });
        assert!(c.validate().is_err());
    }

    #[test]
    fn missing_and_unknown_keys_are_rejected() {
        let mut c = base();
        c.parameters.remove("A");
        assert!(c.validate().is_err());
        c.sweep = Some(Sweep { parameter: "A".into(), values: vec![1.0, 2.0] });
        assert!(c.validate().is_ok());
        c.parameters.insert("zeta".into(), 1.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn rh_parameter_combinations() {
        let mut c: ScenarioConfig = serde_json::from_str(
            r#"{"name": "r", "solver": "rh_unidirectional", "parameters": {"alpha": 1, "B": 2.2}}"#,
        )
        .unwrap();
        assert!(c.validate().is_ok());
        c.parameters.insert("x0".into(), 1.0);
        assert!(c.validate().is_err());
        c.parameters.remove("alpha");
        assert!(c.validate().is_ok());
        c.parameters.insert("mu".into(), 1.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn bad_grid_and_name() {
        let mut c = base();
        c.grid = 1000;
        assert!(c.validate().is_err());
        let mut c = base();
        c.name = "../x".into();
        assert!(c.validate().is_err());
    }
}
