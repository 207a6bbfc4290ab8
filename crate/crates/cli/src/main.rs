use std::process::ExitCode;

use clap::Parser;
use incalg_cli::{run, seed_from_env, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match seed_from_env() {
        Ok(seed) => run(&RunConfig::from_cli(&cli, seed)),
        Err(e) => run_error(&cli, &e),
    };
    let rendered = outcome.render();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("incalg: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if outcome.exit_code == 2 {
        if let Some(msg) = outcome.report["error"]["message"].as_str() {
            eprintln!("incalg: {msg}");
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}

fn run_error(cli: &Cli, e: &incalg_cli::InputError) -> incalg_cli::Outcome {
    incalg_cli::Outcome {
        report: serde_json::json!({
            "command": cli.command.to_string(),
            "field": cli.field,
            "status": "input_error",
            "error": e.to_json(),
        }),
        exit_code: 2,
    }
}
