mod args;
mod manifest;
mod run;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::Cli;
use manifest::{digest_file, sha256_hex, versions, RunManifest};
use run::{execute, to_json, Failure};

const EXIT_COUNTEREXAMPLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match dispatch(&cli, &argv) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn dispatch(cli: &Cli, argv: &[String]) -> Result<u8, Failure> {
    if let Some(w) = cli.global.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let start = Instant::now();
    let outcome = execute(&cli.command, &cli.global)?;
    let wall = start.elapsed();
    let code = if outcome.verified { 0 } else { EXIT_COUNTEREXAMPLE };
    let io = |e: std::io::Error| Failure::Io(e.to_string());
    match &cli.global.out {
        Some(path) => std::fs::write(path, &outcome.output).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(outcome.output.as_bytes()).map_err(io)?,
    }
    if let Some(path) = &cli.global.manifest {
        let mut input_digests = std::collections::BTreeMap::new();
        for p in &outcome.inputs {
            input_digests.insert(p.display().to_string(), digest_file(p).map_err(io)?);
        }
        let m = RunManifest {
            command: argv.to_vec(),
            versions: versions(),
            input_digests,
            seed: outcome.seed,
            wall_time_seconds: wall.as_secs_f64(),
            workers: rayon::current_num_threads(),
            output_digest: sha256_hex(outcome.output.as_bytes()),
            exit_code: code,
        };
        std::fs::write(path, to_json(&m)).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(code)
}
