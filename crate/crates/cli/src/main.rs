use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use opercalc_cli::commands::{self, SeriesKind};
use opercalc_cli::verify::{run_verify, VerifyConfig};
use opercalc_cli::CliError;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "opercalc", version, about = "Canonical forms of opers, Miura maps and q-character checks")]
struct Cli {
    /// Write the JSON payload to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce an oper operator to canonical coordinates.
    Reduce {
        /// JSON file, or `-` for stdin.
        #[arg(default_value = "-")]
        input: String,
        #[arg(long)]
        precision: Option<i64>,
    },
    /// Find the coweight for which a canonical oper is monodromy-free.
    Classify {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, default_value_t = 4)]
        bound: i64,
    },
    /// Apply the Miura map to a Cartan connection.
    Miura {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Bring an oper to its lambda-nilpotent form.
    Nilpotent {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<i64>,
    },
    /// Print a q-series as JSON.
    Qchar {
        #[arg(long = "type")]
        cartan: String,
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<i64>,
        #[arg(long, default_value_t = 40)]
        order: usize,
        #[arg(long, value_enum, default_value_t = SeriesKind::ZReg)]
        series: SeriesKind,
    },
    /// Run the verification suite for one type.
    Verify {
        #[arg(long = "type", default_value = "A1")]
        cartan: String,
        #[arg(long, default_value_t = 3)]
        lambda_max: i64,
        #[arg(long, default_value_t = 40)]
        order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples per sampled check.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
}

fn read_input(path: &str) -> Result<Value, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?
    };
    Ok(serde_json::from_str(&text)?)
}

fn run(command: Command) -> Result<(String, i32), CliError> {
    let json = |v: Value| serde_json::to_string(&v).expect("value serializes");
    Ok(match command {
        Command::Reduce { input, precision } => (json(commands::reduce(&read_input(&input)?, precision)?), 0),
        Command::Classify { input, bound } => (json(commands::classify(&read_input(&input)?, bound)?), 0),
        Command::Miura { input } => (json(commands::miura(&read_input(&input)?)?), 0),
        Command::Nilpotent { input, lambda } => (json(commands::nilpotent(&read_input(&input)?, &lambda)?), 0),
        Command::Qchar { cartan, lambda, order, series } => (commands::qchar(&cartan, &lambda, order, series)?, 0),
        Command::Verify { cartan, lambda_max, order, seed, samples } => {
            let cfg = VerifyConfig { label: cartan, lambda_max, order, seed, samples };
            let start = Instant::now();
            let report = run_verify(&cfg, std::env::args().skip(1).collect())?;
            eprintln!("{} cases in {:.2}s", report.cases.len(), start.elapsed().as_secs_f64());
            let code = report.exit_code();
            (serde_json::to_string_pretty(&report).expect("report serializes"), code)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli.command).and_then(|(payload, code)| {
        match &cli.json_out {
            Some(path) => std::fs::write(path, format!("{payload}\n"))
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?,
            None => println!("{payload}"),
        }
        Ok(code)
    });
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
