use std::path::PathBuf;
use std::process::ExitCode;

use optomech_cli::{config, runner, CliError};

const USAGE: &str = "\
optomech - mechanical-squeezing simulator for a two-tone-driven cavity
           with an intracavity parametric amplifier

USAGE:
    optomech --config <path> [--out <dir>]
    optomech --preset <name> [--out <dir>]

OPTIONS:
    --config <path>   run the configuration file
    --preset <name>   run a named figure sweep with reference parameters
                      (fig3a fig3b fig5a fig5b fig5c fig5d fig5e fig5f fig6a fig6b)
    --out <dir>       output directory (default: ., or [output] dir from the config)
    --seedless        accepted for compatibility; deterministic seedless
                      execution is the only mode
    --help            print this help
    --version         print the version

Runs are fully deterministic; there is no random number generator anywhere.
Errors are reported as one JSON object on standard error. Exit codes:
0 success, 1 numerical/instability failure, 2 configuration errors.
";

struct Args {
    config_path: Option<PathBuf>,
    preset: Option<String>,
    out_dir: Option<PathBuf>,
}

fn parse_args(argv: &[String]) -> Result<Option<Args>, CliError> {
    let mut args = Args {
        config_path: None,
        preset: None,
        out_dir: None,
    };
    let mut iter = argv.iter();
    while let Some(flag) = iter.next() {
        match flag.as_str() {
            "--help" | "-h" => {
                println!("{USAGE}");
                return Ok(None);
            }
            "--version" | "-V" => {
                println!("optomech {}", env!("CARGO_PKG_VERSION"));
                return Ok(None);
            }
            "--config" => {
                let value = iter
                    .next()
                    .ok_or_else(|| CliError::config("--config needs a path"))?;
                args.config_path = Some(PathBuf::from(value));
            }
            "--preset" => {
                let value = iter
                    .next()
                    .ok_or_else(|| CliError::config("--preset needs a name"))?;
                args.preset = Some(value.clone());
            }
            "--out" => {
                let value = iter
                    .next()
                    .ok_or_else(|| CliError::config("--out needs a directory"))?;
                args.out_dir = Some(PathBuf::from(value));
            }
            // Deterministic execution is the only mode; the flag is a no-op.
            "--seedless" => {}
            other => {
                return Err(CliError::config(format!(
                    "unknown flag `{other}` (see --help)"
                )));
            }
        }
    }
    match (&args.config_path, &args.preset) {
        (Some(_), Some(_)) => Err(CliError::config(
            "give either --config or --preset, not both",
        )),
        (None, None) => Err(CliError::config(
            "one of --config or --preset is required (see --help)",
        )),
        _ => Ok(Some(args)),
    }
}

fn execute(args: Args) -> Result<(), CliError> {
    let mut run_config = match (&args.config_path, &args.preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::config(format!("cannot read config {}: {e}", path.display()))
            })?;
            config::parse_config(&text)?
        }
        (None, Some(name)) => config::preset_config(name)?,
        _ => unreachable!("validated by parse_args"),
    };
    if let Some(dir) = args.out_dir {
        run_config.out_dir = dir;
    }
    let outcome = runner::run(&run_config)?;
    for path in &outcome.artifacts {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let args = match parse_args(&argv) {
        Ok(Some(args)) => args,
        Ok(None) => return ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
