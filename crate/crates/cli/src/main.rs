//! `mediator`: simulate the three-pass protocol, sweep coupling angles,
//! compare interaction orders and run the self-check suite.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 impossible outcome,
//! 3 verification failure.

mod args;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use mediator_core::explorer::down_down_population;
use mediator_core::process::{run_protocol_with, DEFAULT_EPSILON_P};
use mediator_core::verify::{run_checks, VerifyConfig};
use mediator_core::{
    concurrence, enumerate_recipes, find_optimum, initialization_demo, sweep, target_state, CouplingParams,
    DensityMatrix, Error, GridSpec, Recipe, SimOptions,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "mediator", version, about = "Entanglement extraction through a traveling mediator qubit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one recipe on a two-qubit state and report the extracted state.
    Simulate {
        #[command(flatten)]
        angles: AngleArgs,
        #[arg(long, default_value = "fig2", value_parser = args::parse_recipe)]
        recipe: Recipe,
        #[arg(long, default_value = "maximally-mixed", value_parser = args::parse_state)]
        state: DensityMatrix,
        #[command(flatten)]
        free: FreeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate concurrence and normalized yield over a grid of angles.
    Sweep {
        #[arg(long, default_value = "fig2", value_parser = args::parse_recipe)]
        recipe: Recipe,
        /// `start:stop:step` for both axes, or `A-axis,B-axis`; numbers take an optional `pi` suffix.
        #[arg(long, value_parser = args::parse_grid)]
        grid: Option<GridSpec>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the best point of every interaction order.
    Recipes {
        #[arg(long, value_parser = args::parse_grid)]
        grid: Option<GridSpec>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the seeded self-check suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random draws per check.
        #[arg(long, default_value_t = 100)]
        draws: usize,
        /// Replace every per-check tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reset both qubits to up with two unconditioned transfer passes.
    InitDemo {
        #[command(flatten)]
        angles: AngleArgs,
        #[arg(long, default_value = "maximally-mixed", value_parser = args::parse_state)]
        state: DensityMatrix,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct AngleArgs {
    /// θ_A in radians.
    #[arg(long, allow_hyphen_values = true, value_parser = args::parse_angle, conflicts_with = "theta_a_pi")]
    theta_a: Option<f64>,
    /// θ_B in radians.
    #[arg(long, allow_hyphen_values = true, value_parser = args::parse_angle, conflicts_with = "theta_b_pi")]
    theta_b: Option<f64>,
    /// θ_A in units of π.
    #[arg(long, allow_hyphen_values = true)]
    theta_a_pi: Option<f64>,
    /// θ_B in units of π.
    #[arg(long, allow_hyphen_values = true)]
    theta_b_pi: Option<f64>,
}

impl AngleArgs {
    fn resolve(&self, default_a: f64, default_b: f64) -> (f64, f64) {
        let pick = |rad: Option<f64>, units: Option<f64>, default| {
            rad.or(units.map(|k| k * std::f64::consts::PI)).unwrap_or(default)
        };
        (pick(self.theta_a, self.theta_a_pi, default_a), pick(self.theta_b, self.theta_b_pi, default_b))
    }
}

#[derive(Args)]
struct FreeArgs {
    /// Keep the free Hamiltonian in the propagators.
    #[arg(long)]
    include_free: bool,
    /// Phase Ω·τ accumulated per interaction.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, requires = "include_free")]
    omega_t: f64,
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Impossible(String),
    Verification,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Impossible(_) => 2,
            Failure::Verification => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Impossible(msg) => eprintln!("impossible outcome: {msg}"),
                Failure::Verification => eprintln!("verification failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Simulate { angles, recipe, state, free, output } => {
            let (theta_a, theta_b) = angles.resolve(FRAC_PI_4, FRAC_PI_2);
            simulate(
                CouplingParams::new(theta_a, theta_b).with_omega_t(free.omega_t),
                &recipe,
                &state,
                free.include_free,
                &output,
            )
        }
        Command::Sweep { recipe, grid, output } => {
            let result = sweep(&recipe, &grid.unwrap_or_default())?;
            match output.format.unwrap_or(Format::Csv) {
                Format::Csv => emit(&output, result.to_csv()),
                Format::Json => emit_json(&output, &json!({ "schema_version": SCHEMA_VERSION, "sweep": result })),
            }
        }
        Command::Recipes { grid, output } => recipes(&grid.unwrap_or_default(), &output),
        Command::Verify { seed, draws, tol, output } => {
            if let Some(t) = tol {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(Failure::Usage(format!("tolerance must be finite and nonnegative, got {t}")));
                }
            }
            verify(VerifyConfig { seed, draws, tolerance_override: tol }, &output)
        }
        Command::InitDemo { angles, state, output } => {
            let (theta_a, theta_b) = angles.resolve(FRAC_PI_2, FRAC_PI_2);
            let init = initialization_demo(&state, &CouplingParams::new(theta_a, theta_b))?;
            json_only(&output)?;
            emit_json(
                &output,
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "theta_a": theta_a,
                    "theta_b": theta_b,
                    "final_state": init.state,
                    "fidelity_to_up_up": init.fidelity_to_up_up,
                }),
            )
        }
    }
}

fn simulate(
    params: CouplingParams,
    recipe: &Recipe,
    rho: &DensityMatrix,
    include_free: bool,
    output: &OutputArgs,
) -> Result<(), Failure> {
    json_only(output)?;
    let opts = SimOptions { include_free, epsilon_p: DEFAULT_EPSILON_P };
    let out = match run_protocol_with(rho, recipe, &params, &opts) {
        Ok(out) => out,
        Err(Error::ImpossibleOutcome { probability }) => {
            emit_json(
                output,
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "status": "impossible-outcome",
                    "recipe": recipe,
                    "params": params,
                    "yield": probability,
                }),
            )?;
            return Err(Failure::Impossible(format!("success probability {probability:e}")));
        }
        Err(e) => return Err(e.into()),
    };
    let c = concurrence(&out.state)?.value;
    // the closed-form target belongs to the rightward-leftward-rightward order
    let fidelity = if *recipe == Recipe::optimal() {
        target_state(&params).ok().map(|psi| out.state.fidelity_pure(&psi)).transpose()?
    } else {
        None
    };
    let population = down_down_population(rho);
    emit_json(
        output,
        &json!({
            "schema_version": SCHEMA_VERSION,
            "status": "ok",
            "recipe": recipe,
            "params": params,
            "include_free": include_free,
            "final_state": out.state,
            "yield": out.probability,
            "normalized_yield": if population > 0.0 { Some(out.probability / population) } else { None },
            "concurrence": c,
            "fidelity_to_target": fidelity,
        }),
    )
}

#[derive(Serialize)]
struct RecipeRow {
    directions: String,
    label: String,
    #[serde(flatten)]
    report: mediator_core::OptimumReport,
}

fn recipes(grid: &GridSpec, output: &OutputArgs) -> Result<(), Failure> {
    json_only(output)?;
    let mut rows = Vec::new();
    for recipe in enumerate_recipes() {
        let report = find_optimum(&sweep(&recipe, grid)?)?;
        rows.push(RecipeRow { directions: recipe.directions(), label: recipe.label(), report });
    }
    let winners: Vec<&str> = rows.iter().filter(|r| r.report.simultaneous_max).map(|r| r.directions.as_str()).collect();
    let note = match winners.as_slice() {
        [] => Some("no recipe reaches unit concurrence and unit normalized yield at a grid point; the grid may not resolve the optimum".to_string()),
        [_] => None,
        many => Some(format!("several recipes reach the simultaneous maximum: {}", many.join(", "))),
    };
    emit_json(output, &json!({ "schema_version": SCHEMA_VERSION, "grid": grid, "reports": rows, "note": note }))
}

fn verify(config: VerifyConfig, output: &OutputArgs) -> Result<(), Failure> {
    json_only(output)?;
    let checks = run_checks(&config)?;
    for c in &checks {
        eprintln!(
            "{} {} (max error {:.3e}, tolerance {:.1e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.max_error,
            c.tolerance
        );
    }
    let passed = checks.iter().all(|c| c.passed);
    emit_json(
        output,
        &json!({
            "schema_version": SCHEMA_VERSION,
            "seed": config.seed,
            "draws": config.draws,
            "passed": passed,
            "checks": checks,
        }),
    )?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn json_only(output: &OutputArgs) -> Result<(), Failure> {
    match output.format {
        Some(Format::Csv) => Err(Failure::Usage("csv output is only available for sweep".into())),
        _ => Ok(()),
    }
}

fn emit_json(output: &OutputArgs, value: &serde_json::Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    text.push('\n');
    emit(output, text)
}

fn emit(output: &OutputArgs, text: String) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
    }
}
