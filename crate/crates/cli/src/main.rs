use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use germ_cli::run::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not errors
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let start = Instant::now();
    let outcome = run(&cli);
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    let mut out = std::io::stdout().lock();
    match outcome {
        Ok(report) => {
            // a closed pipe is not an error of the computation
            let _ = match &report.result {
                serde_json::Value::String(text) => write!(out, "{text}"),
                v => {
                    // the command echo omits the program name
                    let echo: Vec<String> = std::env::args().skip(1).collect();
                    let doc = serde_json::json!({"command": echo, "result": v});
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("JSON values serialize"))
                }
            };
            if report.negative {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
