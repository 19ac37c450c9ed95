//! Run reports, as JSON for machines and as a table for people.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::config::{ScenarioConfig, SolverKind};
use crate::run::ItemResult;

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub parameter: String,
    pub critical: f64,
    pub value: f64,
    pub predicted_univalent: bool,
    /// Within 1e-3 (relative) of the critical value.
    pub at_threshold: bool,
    /// Computed univalence agrees with the prediction, or the item sits on
    /// the threshold where either verdict is admissible.
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub residuals: Vec<(u32, f64)>,
    pub max_abs_residual: f64,
    pub relative_residual: f64,
    pub tolerance: f64,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feasibility: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rationality_defect: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ItemReport {
    pub index: usize,
    pub parameters: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub univalent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub univalence_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<ThresholdReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub solution: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub name: String,
    pub solver: SolverKind,
    pub grid: usize,
    pub items: Vec<ItemReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub files: Vec<String>,
}

impl ItemReport {
    pub fn new(index: usize, parameters: BTreeMap<String, f64>, result: &Result<ItemResult, String>) -> Self {
        let mut report = ItemReport {
            index,
            parameters,
            error: None,
            univalent: None,
            univalence_failure: None,
            area: None,
            threshold: None,
            verification: None,
            solution: BTreeMap::new(),
            warnings: Vec::new(),
            files: Vec::new(),
        };
        let r = match result {
            Ok(r) => r,
            Err(e) => {
                report.error = Some(e.clone());
                return report;
            }
        };
        report.univalent = Some(r.univalent);
        report.univalence_failure = r.univalence_failure.clone();
        report.area = r.area;
        report.warnings = r.warnings.clone();
        report.threshold = r.threshold.as_ref().map(|t| {
            let at_threshold = (t.value - t.critical).abs() <= 1e-3 * t.critical.abs();
            ThresholdReport {
                parameter: t.parameter.to_string(),
                critical: t.critical,
                value: t.value,
                predicted_univalent: t.predicted_univalent,
                at_threshold,
                consistent: at_threshold || t.predicted_univalent == r.univalent,
            }
        });
        report.verification = r.verification.as_ref().map(|v| VerificationReport {
            residuals: v.residuals.clone(),
            max_abs_residual: v.max_abs_residual,
            relative_residual: v.max_abs_residual / v.scale,
            tolerance: v.tolerance,
            verdict: v.verdict,
            feasibility: v.feasibility.map(|f| [f.re, f.im]),
            rationality_defect: v.rationality_defect,
        });
        if let Some(s) = &r.rh {
            for (k, v) in [
                ("alpha", s.alpha),
                ("beta", s.beta),
                ("center", s.center),
                ("mu", s.mu),
                ("node_residual", s.node_residual),
                ("midpoint_residual", s.midpoint_residual),
                ("grid", s.n as f64),
            ] {
                report.solution.insert(k.into(), v);
            }
        }
        if let Some(g) = &r.gravity {
            report.solution.insert("stationary_residue".into(), g.stationary_residue);
            report.solution.insert("sinking_residue".into(), g.sinking_residue);
            report.solution.insert("sinking_center_re".into(), g.sinking_center.re);
            report.solution.insert("sinking_center_im".into(), g.sinking_center.im);
            if g.unphysical {
                report.solution.insert("unphysical".into(), 1.0);
            }
        }
        report
    }

    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

impl RunReport {
    pub fn new(config: &ScenarioConfig, items: Vec<ItemReport>) -> Self {
        RunReport { name: config.name.clone(), solver: config.solver, grid: config.grid, items, files: Vec::new() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn any_failed(&self) -> bool {
        self.items.iter().any(ItemReport::failed)
    }

    pub fn all_verified(&self) -> bool {
        self.items.iter().all(|i| i.verification.as_ref().is_some_and(|v| v.verdict))
    }

    pub fn to_text(&self, detailed: bool) -> String {
        let mut s = String::new();
        writeln!(s, "{} ({:?}, n = {})", self.name, self.solver, self.grid).unwrap();
        for item in &self.items {
            let params: Vec<String> = item.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(s, "  [{}] {}", item.index + 1, params.join(" ")).unwrap();
            if let Some(e) = &item.error {
                writeln!(s, "  FAILED: {e}").unwrap();
                continue;
            }
            if let Some(u) = item.univalent {
                write!(s, "  {}", if u { "univalent" } else { "NOT univalent" }).unwrap();
            }
            if let Some(a) = item.area {
                write!(s, "  area={a:.6}").unwrap();
            }
            if let Some(t) = &item.threshold {
                let note = if !t.consistent {
                    " (disagrees)"
                } else if t.at_threshold {
                    " (at threshold)"
                } else {
                    ""
                };
                write!(s, "  {}_crit={:.6}{note}", t.parameter, t.critical).unwrap();
            }
            if let Some(v) = &item.verification {
                write!(s, "  residual={:.2e} ({})", v.relative_residual, if v.verdict { "pass" } else { "FAIL" }).unwrap();
            }
            for (k, v) in &item.solution {
                if matches!(k.as_str(), "alpha" | "beta" | "center" | "mu" | "stationary_residue" | "sinking_residue") {
                    write!(s, "  {k}={v:.6}").unwrap();
                }
            }
            s.push('\n');
            if detailed {
                if let Some(v) = &item.verification {
                    if let Some(f) = v.feasibility {
                        writeln!(s, "      feasibility = {:.12} {:+.3e}i", f[0], f[1]).unwrap();
                    }
                    if let Some(d) = v.rationality_defect {
                        writeln!(s, "      rationality defect = {d:.3e}").unwrap();
                    }
                    for (k, r) in &v.residuals {
                        writeln!(s, "      k={k:2}  |residual|={r:.3e}").unwrap();
                    }
                }
            }
            if let Some(f) = &item.univalence_failure {
                writeln!(s, "      {f}").unwrap();
            }
            for w in &item.warnings {
                writeln!(s, "      warning: {w}").unwrap();
            }
        }
        s
    }
}
