//! Built-in scenarios reproducing the published figure parameter sets.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use crate::config::{OutputConfig, ScenarioConfig, SolverKind, Sweep};

pub struct Preset {
    pub id: &'static str,
    pub summary: &'static str,
    pub config: fn() -> ScenarioConfig,
}

fn scenario(name: &str, solver: SolverKind, fixed: &[(&str, f64)], sweep: (&str, &[f64])) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        solver,
        parameters: fixed.iter().map(|&(k, v)| (k.to_string(), v)).collect::<BTreeMap<_, _>>(),
        sweep: Some(Sweep { parameter: sweep.0.into(), values: sweep.1.to_vec() }),
        grid: heleshaw::spectral::DEFAULT_GRID,
        output: OutputConfig::default(),
        verify: true,
    }
}

pub const PRESETS: &[Preset] = &[
    Preset {
        id: "fig1",
        summary: "source q=1 at a=1, sink at b=4, charge at 0; Q = 0.2734 0.2959 0.3189 0.3424 0.3664 0.3909",
        config: || {
            scenario(
                "fig1",
                SolverKind::Example1,
                &[("q", 1.0), ("a", 1.0), ("b", 4.0)],
                ("Q", &[0.2734, 0.2959, 0.3189, 0.3424, 0.3664, 0.3909]),
            )
        },
    },
    Preset {
        id: "fig2",
        summary: "dipole mu=1 at a=1, charge at 0; Q = 0.2026 0.2410 0.2866 0.3408 0.4053",
        config: || {
            scenario(
                "fig2",
                SolverKind::DipoleLimit,
                &[("mu", 1.0), ("a", 1.0)],
                ("Q", &[0.2026, 0.2410, 0.2866, 0.3408, 0.4053]),
            )
        },
    },
    Preset {
        id: "fig3",
        summary: "dipole and charge at 0, mu=Q=1; A = 1 sqrt2 2 2sqrt2 4 (first two self-intersect)",
        config: || {
            scenario(
                "fig3",
                SolverKind::Example2,
                &[("mu", 1.0), ("Q", 1.0)],
                ("A", &[1.0, SQRT_2, 2.0, 2.0 * SQRT_2, 4.0]),
            )
        },
    },
    Preset {
        id: "fig4",
        summary: "quadrupole beta=1 at 0, charges Q=1 at +-a; a = 0.2677 0.3183 0.3785 0.4502 (first self-intersects)",
        config: || {
            scenario(
                "fig4",
                SolverKind::Example3,
                &[("beta", 1.0), ("Q", 1.0)],
                ("a", &[0.2677, 0.3183, 0.3785, 0.4502]),
            )
        },
    },
    Preset {
        id: "fig5",
        summary: "dipole in the field G = x^2, alpha=1; B = 2.00 2.02 2.06 2.12 2.20, plus the (alpha, beta, x0, mu/alpha) table",
        config: || {
            scenario(
                "fig5",
                SolverKind::RhUnidirectional,
                &[("p", 2.0), ("alpha", 1.0)],
                ("B", &[2.00, 2.02, 2.06, 2.12, 2.20]),
            )
        },
    },
    Preset {
        id: "fig7",
        summary: "dipole in the field G = x^2 + y^2, alpha=1; B = 2.0 2.021 2.061 2.121 2.201",
        config: || {
            scenario(
                "fig7",
                SolverKind::RhAxisymmetric,
                &[("p", 1.0), ("alpha", 1.0)],
                ("B", &[2.0, 2.021, 2.061, 2.121, 2.201]),
            )
        },
    },
    Preset {
        id: "fig8",
        summary: "dipole at z=1 in the field G = (Re z^2/2)^2; B = 2.0001 2.0201 2.0601 2.1201 2.2001",
        config: || {
            scenario(
                "fig8",
                SolverKind::RhComposed,
                &[("p", 2.0), ("core", 2.0), ("a", 1.0)],
                ("B", &[2.0001, 2.0201, 2.0601, 2.1201, 2.2001]),
            )
        },
    },
    Preset {
        id: "gravity_split",
        summary: "disk A/z under gravity C=1 with a dipole mu=1, A=2; t = 0 0.5 1 2 4",
        config: || {
            scenario(
                "gravity_split",
                SolverKind::GravityDynamics,
                &[("C", 1.0), ("mu", 1.0), ("A", 2.0)],
                ("t", &[0.0, 0.5, 1.0, 2.0, 4.0]),
            )
        },
    },
];

pub fn find(id: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.id == id)
}

pub fn listing() -> String {
    let width = PRESETS.iter().map(|p| p.id.len()).max().unwrap_or(0);
    PRESETS.iter().map(|p| format!("{:width$}  {}\n", p.id, p.summary)).collect()
}
