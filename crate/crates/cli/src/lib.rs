//! Library half of the `ofke` command-line tool: argument types, system
//! construction, command execution and report rendering.

pub mod args;
pub mod commands;
pub mod render;
pub mod systems;

use thiserror::Error;

use args::{Cli, Command, OutputArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] ofke_core::Error),
    #[error("{0}")]
    Numerical(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// 3 for numerical failures, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(_) | CliError::Core(ofke_core::Error::Unidentifiable(_)) => 3,
            _ => 2,
        }
    }
}

/// Rendered report plus the strict-mode failure, if any.
pub struct Rendered {
    pub body: String,
    pub failure: Option<String>,
}

pub fn output_args(cli: &Cli) -> &OutputArgs {
    match &cli.command {
        Command::Eval(a) => &a.output,
        Command::Bounds(a) => &a.output,
        Command::Decompose(a) => &a.output,
        Command::FitQ(a) => &a.output,
        Command::Solve(a) => &a.output,
    }
}

pub fn execute(cli: &Cli) -> Result<Rendered, CliError> {
    let outcome = match &cli.command {
        Command::Eval(a) => commands::eval(a)?,
        Command::Bounds(a) => commands::bounds(a)?,
        Command::Decompose(a) => commands::decompose(a)?,
        Command::FitQ(a) => commands::fit(a)?,
        Command::Solve(a) => commands::solve(a)?,
    };
    Ok(Rendered {
        body: render::render(outcome.doc, output_args(cli).format),
        failure: outcome.failure,
    })
}

/// Execute and write the report to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let rendered = execute(cli)?;
    match &output_args(cli).out {
        Some(path) => std::fs::write(path, &rendered.body).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        })?,
        None => print!("{}", rendered.body),
    }
    match rendered.failure {
        Some(msg) => Err(CliError::Numerical(msg)),
        None => Ok(()),
    }
}
