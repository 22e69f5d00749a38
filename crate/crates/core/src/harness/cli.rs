//! Command-line surface: `run` one cell, `grid` the full experiment,
//! `plot` stored traces to SVG, and `eval` the layer on a frozen snapshot.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::geometry::Vec2;
use crate::harness::config::{load_config, Config};
use crate::harness::csv::{group_by_trial, parse_trace_csv, summary_to_csv, trace_to_csv};
use crate::harness::grid::{
    run_cell, run_grid, ExperimentGrid, GridCell, HumanChoice, SummaryRow,
};
use crate::harness::svg::render_svg;
use crate::layer::{layer_tick, DesirabilityPolicy, PredictionParams};
use crate::world::{AgentId, AgentState, ButtonId, WorldState};

#[derive(Parser)]
#[command(
    name = "shellgame",
    version,
    about = "Deterministic two-agent shell-game simulator with a consequence-evaluating control layer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment cell and write its trace and summary
    Run(RunArgs),
    /// Run the full experiment grid
    Grid(GridArgs),
    /// Render an SVG from stored trace CSVs
    Plot(PlotArgs),
    /// Print the five q values the layer assigns on a frozen snapshot
    Eval(EvalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Ethical,
    /// Regard only the assistant's own outcome
    #[value(alias = "competitive")]
    Egoistic,
    Aggressive,
}

impl From<PolicyArg> for DesirabilityPolicy {
    fn from(arg: PolicyArg) -> Self {
        match arg {
            PolicyArg::Ethical => DesirabilityPolicy::Ethical,
            PolicyArg::Egoistic => DesirabilityPolicy::Egoistic,
            PolicyArg::Aggressive => DesirabilityPolicy::Aggressive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ChoiceArg {
    Correct,
    Incorrect,
    Random,
}

impl From<ChoiceArg> for HumanChoice {
    fn from(arg: ChoiceArg) -> Self {
        match arg {
            ChoiceArg::Correct => HumanChoice::Correct,
            ChoiceArg::Incorrect => HumanChoice::Incorrect,
            ChoiceArg::Random => HumanChoice::Random,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPER")]
enum ButtonArg {
    L,
    R,
}

impl From<ButtonArg> for ButtonId {
    fn from(arg: ButtonArg) -> Self {
        match arg {
            ButtonArg::L => ButtonId::L,
            ButtonArg::R => ButtonId::R,
        }
    }
}

fn parse_vec2(s: &str) -> Result<Vec2, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected X,Y, got {s:?}"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("bad coordinate {v:?}"))
    };
    Ok(Vec2::new(parse(x)?, parse(y)?))
}

#[derive(Args)]
struct CommonArgs {
    /// Configuration file (flat `key = value` lines)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Evaluation policy ("competitive" is accepted for egoistic)
    #[arg(long, value_enum)]
    policy: PolicyArg,
    /// The human's button relative to the correct one
    #[arg(long, value_enum, default_value = "random")]
    human_choice: ChoiceArg,
    /// Trial seed (resolves a random human choice)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also render the trial to SVG
    #[arg(long)]
    svg: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct GridArgs {
    /// Restrict to one policy (default: all three)
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
    /// Restrict to one human choice (default: correct and incorrect)
    #[arg(long, value_enum)]
    human_choice: Option<ChoiceArg>,
    /// Replications per cell
    #[arg(long, default_value_t = 3)]
    replications: u32,
    /// Base seed; per-trial seeds derive from it
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also render one SVG per cell
    #[arg(long)]
    svg: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct PlotArgs {
    /// Trace CSV files to overlay
    #[arg(value_name = "TRACE", required = true)]
    traces: Vec<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct EvalArgs {
    /// Evaluation policy ("competitive" is accepted for egoistic)
    #[arg(long, value_enum)]
    policy: PolicyArg,
    /// Which button is the correct one
    #[arg(long, value_enum, ignore_case = true, default_value = "L")]
    correct: ButtonArg,
    /// Human position as X,Y (default: configured start)
    #[arg(long, value_parser = parse_vec2)]
    human_pos: Option<Vec2>,
    /// Human velocity as X,Y m/s (default: 0,0)
    #[arg(long, value_parser = parse_vec2)]
    human_vel: Option<Vec2>,
    /// Assistant position as X,Y (default: configured start)
    #[arg(long, value_parser = parse_vec2)]
    asst_pos: Option<Vec2>,
    /// Configuration file (flat `key = value` lines)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

/// Parses arguments and runs; usage errors exit 2 via clap, runtime errors
/// exit 1 with a one-line diagnostic.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run(args) => cmd_run(args),
        Command::Grid(args) => cmd_grid(args),
        Command::Plot(args) => cmd_plot(args),
        Command::Eval(args) => cmd_eval(args),
    }
}

fn load(config: Option<&Path>) -> Result<Config, Error> {
    match config {
        Some(path) => load_config(path),
        None => Ok(Config::default()),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    let io_err = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io_err)?;
    }
    std::fs::write(path, contents).map_err(io_err)
}

fn summary_line(id: &str, row: &SummaryRow) -> String {
    let button = |b: Option<ButtonId>| b.map(|b| b.label()).unwrap_or("none");
    format!(
        "{id}: human={} ({:+}) assistant={} ({:+}) in {:.2}s",
        button(row.human_final_button),
        row.human_score,
        button(row.assistant_final_button),
        row.assistant_score,
        row.duration_s
    )
}

fn cmd_run(args: RunArgs) -> Result<(), Error> {
    let config = load(args.common.config.as_deref())?;
    let cell = GridCell {
        policy: args.policy.into(),
        human_choice: args.human_choice.into(),
        replication: 0,
        seed: args.seed,
    };
    let (result, row) = run_cell(&cell, &config)?;
    let id = cell.trial_id();
    write_file(
        &args.common.out.join(format!("trace_{id}.csv")),
        &trace_to_csv(&id, &result.trace),
    )?;
    write_file(&args.common.out.join("summary.csv"), &summary_to_csv(&[row]))?;
    if args.svg {
        let svg = render_svg(std::slice::from_ref(&result.trace), &config.arena);
        write_file(
            &args.common.out.join(format!("cell_{}.svg", cell.cell_id())),
            &svg,
        )?;
    }
    println!("{}", summary_line(&id, &row));
    Ok(())
}

fn cmd_grid(args: GridArgs) -> Result<(), Error> {
    let config = load(args.common.config.as_deref())?;
    let defaults = ExperimentGrid::default();
    let grid = ExperimentGrid {
        policies: args
            .policy
            .map(|p| vec![p.into()])
            .unwrap_or(defaults.policies),
        human_choices: args
            .human_choice
            .map(|c| vec![c.into()])
            .unwrap_or(defaults.human_choices),
        replications: args.replications,
        base_seed: args.seed,
    };
    let results = run_grid(&grid, &config)?;

    let mut rows = Vec::with_capacity(results.len());
    for (cell, result, row) in &results {
        let id = cell.trial_id();
        write_file(
            &args.common.out.join(format!("trace_{id}.csv")),
            &trace_to_csv(&id, &result.trace),
        )?;
        println!("{}", summary_line(&id, row));
        rows.push(*row);
    }
    write_file(&args.common.out.join("summary.csv"), &summary_to_csv(&rows))?;

    if args.svg {
        for policy in &grid.policies {
            for choice in &grid.human_choices {
                let traces: Vec<_> = results
                    .iter()
                    .filter(|(cell, ..)| cell.policy == *policy && cell.human_choice == *choice)
                    .map(|(_, result, _)| result.trace.clone())
                    .collect();
                let svg = render_svg(&traces, &config.arena);
                write_file(
                    &args
                        .common
                        .out
                        .join(format!("cell_{}-{}.svg", policy.label(), choice.label())),
                    &svg,
                )?;
            }
        }
    }
    println!(
        "ran {} trials -> {}",
        results.len(),
        args.common.out.display()
    );
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<(), Error> {
    let config = load(args.common.config.as_deref())?;
    let mut grouped = Vec::new();
    for path in &args.traces {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        for (_, trace) in group_by_trial(parse_trace_csv(&text)?) {
            grouped.push(trace);
        }
    }
    let svg = render_svg(&grouped, &config.arena);
    let out = args.common.out.join("plot.svg");
    write_file(&out, &svg)?;
    println!("plotted {} traces -> {}", grouped.len(), out.display());
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<(), Error> {
    let config = load(args.config.as_deref())?;
    let speed = config.sim.agent_speed;
    let agent = |id, position, velocity_estimate| AgentState {
        id,
        position,
        velocity_estimate,
        goal: None,
        pointing_at: None,
        speed,
        halted: false,
    };
    let world = WorldState {
        human: agent(
            AgentId::Human,
            args.human_pos.unwrap_or(config.arena.human_start),
            args.human_vel.unwrap_or(Vec2::ZERO),
        ),
        assistant: agent(
            AgentId::Assistant,
            args.asst_pos.unwrap_or(config.arena.assistant_start),
            Vec2::ZERO,
        ),
        human_pressed: None,
        assistant_pressed: None,
    };
    let decision = layer_tick(
        &world,
        args.policy.into(),
        args.correct.into(),
        &config.arena,
        &config.sim.sigmoid,
        &config.sim.enforcement,
        &PredictionParams {
            dt: config.sim.physics_dt,
            horizon: config.sim.prediction_horizon,
            conflict_threshold: config.sim.avoidance_threshold,
        },
    );
    println!(
        "inferred_goal: {}",
        decision
            .inferred_goal
            .map(|b| b.label())
            .unwrap_or("none")
    );
    for (index, eval) in decision.evaluations.iter().enumerate() {
        println!(
            "a{} {:<10} q_n={:+.6}  q_h={:.6}  q_e={:.6}",
            index + 1,
            eval.alternative.token(),
            eval.q_n,
            eval.q_h,
            eval.q_e
        );
    }
    println!(
        "enforcement: {}",
        decision
            .enforcement
            .map(|a| a.token())
            .unwrap_or("none")
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn vec2_parser() {
        assert_eq!(parse_vec2("0.5,-0.25").unwrap(), Vec2::new(0.5, -0.25));
        assert!(parse_vec2("0.5").is_err());
        assert!(parse_vec2("a,b").is_err());
    }

    #[test]
    fn policy_values_and_alias() {
        let cli = Cli::try_parse_from(["shellgame", "run", "--policy", "competitive"]).unwrap();
        match cli.command {
            Command::Run(args) => {
                assert_eq!(
                    DesirabilityPolicy::from(args.policy),
                    DesirabilityPolicy::Egoistic
                );
            }
            _ => panic!("expected run"),
        }
        assert!(Cli::try_parse_from(["shellgame", "run", "--policy", "friendly"]).is_err());
    }
}
