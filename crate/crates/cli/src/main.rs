use std::process::ExitCode;

use clap::Parser;

use ofke_cli::args::Cli;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match ofke_cli::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ofke: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
