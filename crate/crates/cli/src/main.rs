//! `heleshaw`: run, verify and plot equilibrium scenarios.
//!
//! Exit codes: 0 on success, 2 when the configuration or arguments are
//! invalid (nothing is written), 3 when any solve or verification fails.

mod config;
mod output;
mod presets;
mod report;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use heleshaw::Execution;

use config::{ScenarioConfig, SolverKind};
use report::{ItemReport, RunReport};
use run::{ItemResult, RunSettings};

#[derive(Parser)]
#[command(name = "heleshaw", version, about = "Hele-Shaw equilibrium shapes in singular external fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Overrides {
    /// Boundary grid size (power of two, 64..=32768).
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Skip the SVG overlay.
    #[arg(long, global = true)]
    no_svg: bool,
    /// Relative tolerance of the moment-identity check.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a scenario file and write boundary CSVs, an SVG and a JSON report.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Solve a scenario file and print the full verification report.
    Verify {
        config: PathBuf,
        /// Print the JSON report instead of the table.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run a built-in scenario.
    Preset {
        id: String,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Print the scenario file instead of running it.
        #[arg(long)]
        print_config: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// List the built-in scenarios.
    ListPresets,
}

enum Failure {
    Validation(String),
    Solver(String),
}

fn apply(mut config: ScenarioConfig, o: &Overrides) -> Result<(ScenarioConfig, RunSettings), Failure> {
    if let Some(n) = o.grid {
        config.grid = n;
    }
    if o.no_svg {
        config.output.svg = false;
    }
    if !(o.tolerance > 0.0) {
        return Err(Failure::Validation(format!("tolerance must be positive, got {}", o.tolerance)));
    }
    config.validate().map_err(Failure::Validation)?;
    let settings = RunSettings { grid: config.grid, verify: config.verify, tolerance: o.tolerance };
    Ok((config, settings))
}

fn solve_all(config: &ScenarioConfig, settings: RunSettings) -> Vec<(ItemReport, Option<ItemResult>)> {
    let items = config.items();
    let results =
        Execution::default().map_slice(&items, |p| run::run_item(config.solver, p, settings).map_err(|e| e.to_string()));
    items
        .into_iter()
        .zip(results)
        .enumerate()
        .map(|(k, (params, r))| (ItemReport::new(k, params, &r), r.ok()))
        .collect()
}

fn write(dir: &Path, name: &str, text: &str, files: &mut Vec<String>) -> anyhow::Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    files.push(path.display().to_string());
    Ok(())
}

fn sweep_value(config: &ScenarioConfig, item: &ItemReport) -> f64 {
    config.sweep.as_ref().map_or(f64::NAN, |s| item.parameters[&s.parameter])
}

fn write_outputs(config: &ScenarioConfig, solved: &mut [(ItemReport, Option<ItemResult>)]) -> anyhow::Result<Vec<String>> {
    let dir = &config.output.dir;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files = Vec::new();
    if config.output.csv {
        for (report, result) in solved.iter_mut() {
            let Some(r) = result else { continue };
            for (j, curve) in r.curves.iter().enumerate() {
                let file = if r.curves.len() == 1 {
                    format!("{}_{}.csv", config.name, report.index + 1)
                } else {
                    format!("{}_{}_{}.csv", config.name, report.index + 1, j + 1)
                };
                write(dir, &file, &output::boundary_csv(&r.phi, curve), &mut report.files)?;
            }
        }
        let rows: Vec<Vec<f64>> = solved
            .iter()
            .map(|(rep, _)| {
                vec![
                    (rep.index + 1) as f64,
                    sweep_value(config, rep),
                    rep.univalent.map_or(f64::NAN, |u| u as u8 as f64),
                    rep.area.unwrap_or(f64::NAN),
                    rep.verification.as_ref().map_or(f64::NAN, |v| v.relative_residual),
                ]
            })
            .collect();
        let header = ["item", "value", "univalent", "area", "relative_residual"];
        write(dir, &format!("{}.csv", config.name), &output::table_csv(&header, &rows), &mut files)?;
        if config.solver == SolverKind::RhUnidirectional {
            if let Some(alpha) = solved.iter().find_map(|(_, r)| r.as_ref().and_then(|r| r.rh.as_ref()).map(|s| s.alpha)) {
                let mut bs: Vec<f64> = (0..=100).map(|k| 2.0 + 0.02 * k as f64).collect();
                bs.extend(solved.iter().filter_map(|(_, r)| r.as_ref()?.rh.as_ref().map(|s| s.beta / s.alpha)));
                bs.sort_by(f64::total_cmp);
                bs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
                let rows: Vec<Vec<f64>> = run::relation_table(alpha, &bs)?.into_iter().map(|r| r.to_vec()).collect();
                let header = ["alpha", "beta", "x0", "mu_over_alpha"];
                write(dir, &format!("{}_relation.csv", config.name), &output::table_csv(&header, &rows), &mut files)?;
            }
        }
    }
    if config.output.svg {
        let ok: Vec<&ItemResult> = solved.iter().filter_map(|(_, r)| r.as_ref()).collect();
        let items: Vec<output::SvgItem> =
            ok.iter().map(|r| output::SvgItem { curves: &r.curves, univalent: r.univalent }).collect();
        let markers: Vec<run::Marker> = ok.iter().flat_map(|r| r.markers.iter().copied()).collect();
        write(dir, &format!("{}.svg", config.name), &output::overlay_svg(&config.name, &items, &markers), &mut files)?;
    }
    Ok(files)
}

fn execute(config: ScenarioConfig, overrides: &Overrides, emit: bool) -> Result<RunReport, Failure> {
    let (config, settings) = apply(config, overrides)?;
    let mut solved = solve_all(&config, settings);
    let mut files = Vec::new();
    if emit {
        files = write_outputs(&config, &mut solved).map_err(|e| Failure::Solver(format!("{e:#}")))?;
    }
    let mut report = RunReport::new(&config, solved.into_iter().map(|(r, _)| r).collect());
    if emit {
        let name = format!("{}_report.json", config.name);
        let json_path = config.output.dir.join(&name);
        files.push(json_path.display().to_string());
        report.files = files;
        std::fs::write(&json_path, report.to_json())
            .map_err(|e| Failure::Solver(format!("writing {}: {e}", json_path.display())))?;
    }
    Ok(report)
}

fn main_inner(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::ListPresets => {
            print!("{}", presets::listing());
            Ok(())
        }
        Command::Run { config, overrides } => {
            let config = ScenarioConfig::load(&config).map_err(Failure::Validation)?;
            let report = execute(config, &overrides, true)?;
            print!("{}", report.to_text(false));
            for f in &report.files {
                println!("wrote {f}");
            }
            if report.any_failed() {
                return Err(Failure::Solver("some sweep items failed".into()));
            }
            Ok(())
        }
        Command::Verify { config, json, overrides } => {
            let mut config = ScenarioConfig::load(&config).map_err(Failure::Validation)?;
            config.verify = true;
            let report = execute(config, &overrides, false)?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text(true));
            }
            if report.any_failed() || !report.all_verified() {
                return Err(Failure::Solver("verification failed".into()));
            }
            Ok(())
        }
        Command::Preset { id, out, print_config, overrides } => {
            let preset =
                presets::find(&id).ok_or_else(|| Failure::Validation(format!("unknown preset {id:?}; see list-presets")))?;
            let mut config = (preset.config)();
            config.output.dir = out;
            if print_config {
                println!("{}", config.to_json());
                return Ok(());
            }
            let report = execute(config, &overrides, true)?;
            print!("{}", report.to_text(false));
            for f in &report.files {
                println!("wrote {f}");
            }
            if report.any_failed() {
                return Err(Failure::Solver("some sweep items failed".into()));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
