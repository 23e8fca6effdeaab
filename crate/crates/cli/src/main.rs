use std::process::ExitCode;

use clap::Parser;
use cloneforge_cli::app::{run, Cli, SCHEMA};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse_from(&argv);
    match run(&cli, &argv) {
        Ok(out) => {
            print!("{}", out.output);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.emit == Some(cloneforge_cli::app::Emit::Json) {
                let v = serde_json::json!({ "schema": SCHEMA, "error": format!("{e:#}") });
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
