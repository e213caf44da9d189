mod args;
mod error;
mod output;
mod run;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gw_core::io::{read_coupling, read_distance_matrix, read_vector};
use gw_core::{summarize, ProbabilityVector};
use log::error;

use args::{Cli, Command, DiagnoseArgs, SolverArgs};
use error::{CliError, CliResult};
use output::TraceMode;
use run::Task;
use settings::{solver_grid, Settings};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // Usage errors exit with 1 so that 2 stays reserved for numerical failures.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> CliResult<ExitCode> {
    match command {
        Command::Align(a) => experiment(
            Task::Align,
            &a.solver,
            vec![
                ("source", a.source.map(display)),
                ("target", a.target.map(display)),
                ("ground_truth", a.ground_truth.map(display)),
                ("nodes", a.nodes),
                ("attach", a.attach),
                ("noise", a.noise),
            ],
        ),
        Command::Partition(a) => experiment(
            Task::Partition,
            &a.solver,
            vec![
                ("source", a.source.map(display)),
                ("labels", a.labels.map(display)),
                ("nodes", a.nodes),
                ("clusters", a.clusters),
                ("p_in", a.p_in),
                ("p_out", a.p_out),
                ("target_weights", a.target_weights),
            ],
        ),
        Command::Match2d(a) => experiment(
            Task::Match2d,
            &a.solver,
            vec![
                ("shape", a.shape),
                ("source_points", a.source_points),
                ("target_points", a.target_points),
                ("angle", a.angle),
            ],
        ),
        Command::Diagnose(a) => diagnose(&a).map(|()| ExitCode::SUCCESS),
    }
}

fn display(p: PathBuf) -> String {
    p.display().to_string()
}

fn experiment(task: Task, solver: &SolverArgs, flags: Vec<(&str, Option<String>)>) -> CliResult<ExitCode> {
    let settings = Settings::load(task.name(), solver, flags)?;
    let grid = solver_grid(&settings)?;
    let jobs: usize = settings.one("jobs", "1")?;
    if jobs == 0 {
        return Err(CliError::Config("jobs must be at least 1".into()));
    }
    let trace: TraceMode = settings.one("trace", "final")?;
    let out = settings.path("out").unwrap_or_else(|| PathBuf::from("gw_out"));

    let rows = run::run_grid(task, &settings, &grid, jobs)?;
    output::write_all(&out, &rows, trace, task == Task::Match2d)?;

    let mut code = 0u8;
    for row in &rows {
        if let Err(e) = &row.outcome {
            eprintln!(
                "error: run {} ({}, seed {}): {e}",
                row.run_id, row.config.algorithm, row.seed
            );
            code = code.max(if e.is_numerical() { 2 } else { 1 });
        }
    }
    Ok(ExitCode::from(code))
}

fn diagnose(a: &DiagnoseArgs) -> CliResult<()> {
    let pi = read_coupling(&a.coupling)?;
    let dx = read_distance_matrix(&a.dx)?;
    let dy = read_distance_matrix(&a.dy)?;
    let mu = match &a.mu {
        Some(p) => read_vector(p)?,
        None => ProbabilityVector::uniform(dx.size())?,
    };
    let nu = match &a.nu {
        Some(p) => read_vector(p)?,
        None => ProbabilityVector::uniform(dy.size())?,
    };
    let summary = summarize(&dx, &dy, &pi, &mu, &nu, None)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
