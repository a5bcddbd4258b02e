use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use conewsi_cli::{
    console_summary, emit_report, parse_config, run_scenario, Format, Report, Scenario,
};

/// Numerical toolkit for two-weight Sobolev and isoperimetric inequalities
/// on convex cones.
#[derive(Parser)]
#[command(name = "conewsi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Scenario config file(s).
    #[arg(long, required = true, num_args = 1..)]
    config: Vec<PathBuf>,
    /// Output directory for reports.
    #[arg(long, default_value = "reports")]
    out: PathBuf,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Override the grid resolution.
    #[arg(long)]
    grid: Option<usize>,
    /// Comma-separated output formats (text, csv).
    #[arg(long, default_value = "text,csv")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a scenario config without running tasks.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a single scenario and emit reports.
    Run(RunArgs),
    /// Run several scenarios concurrently and emit all reports.
    Batch(RunArgs),
}

// Exit codes: 0 = all tasks ran, 1 = validation failure, 2 = task error.
const EXIT_VALIDATION: u8 = 1;
const EXIT_TASK: u8 = 2;

fn load_scenario(path: &PathBuf, args: Option<&RunArgs>) -> Result<Scenario, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let mut scenario = parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(a) = args {
        if let Some(seed) = a.seed {
            scenario.knobs.seed = seed;
        }
        if let Some(samples) = a.samples {
            scenario.knobs.samples = samples;
        }
        if let Some(grid) = a.grid {
            scenario.knobs.grid = grid;
        }
    }
    Ok(scenario)
}

fn run_one(scenario: &Scenario, out: &PathBuf, formats: &[Format]) -> Result<Report, String> {
    let report = run_scenario(scenario);
    let files = emit_report(&report, out, formats).map_err(|e| e.to_string())?;
    print!("{}", console_summary(&report));
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { config } => match load_scenario(&config, None) {
            Ok(s) => match conewsi::validate_exponents(s.n, s.p, s.tau, s.alpha) {
                Ok(e) => {
                    println!(
                        "{}: valid (q = {}, n_a = {}, tasks: {})",
                        s.name,
                        e.q,
                        e.n_a,
                        s.tasks
                            .iter()
                            .map(|t| t.name())
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{}: exponent validation failed: {e}", s.name);
                    ExitCode::from(EXIT_VALIDATION)
                }
            },
            Err(e) => {
                eprintln!("config error: {e}");
                ExitCode::from(EXIT_VALIDATION)
            }
        },
        Command::Run(args) => {
            let formats = match Format::parse_list(&args.format) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(EXIT_VALIDATION);
                }
            };
            if args.config.len() != 1 {
                eprintln!("run takes exactly one --config; use batch for several");
                return ExitCode::from(EXIT_VALIDATION);
            }
            match load_scenario(&args.config[0], Some(&args)) {
                Ok(s) => match run_one(&s, &args.out, &formats) {
                    Ok(report) if report.validation_failed() => ExitCode::from(EXIT_VALIDATION),
                    Ok(report) if report.any_failed() => ExitCode::from(EXIT_TASK),
                    Ok(_) => ExitCode::SUCCESS,
                    Err(e) => {
                        eprintln!("{e}");
                        ExitCode::from(EXIT_TASK)
                    }
                },
                Err(e) => {
                    eprintln!("config error: {e}");
                    ExitCode::from(EXIT_VALIDATION)
                }
            }
        }
        Command::Batch(args) => {
            let formats = match Format::parse_list(&args.format) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(EXIT_VALIDATION);
                }
            };
            let mut scenarios = Vec::new();
            for path in &args.config {
                match load_scenario(path, Some(&args)) {
                    Ok(s) => scenarios.push(s),
                    Err(e) => {
                        eprintln!("config error: {e}");
                        return ExitCode::from(EXIT_VALIDATION);
                    }
                }
            }
            // Scenarios run concurrently; report assembly stays per-scenario.
            let results: Vec<Result<Report, String>> = std::thread::scope(|scope| {
                let handles: Vec<_> = scenarios
                    .iter()
                    .map(|s| scope.spawn(|| run_one(s, &args.out, &formats)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().unwrap_or_else(|_| Err("worker panicked".into())))
                    .collect()
            });
            let mut code = ExitCode::SUCCESS;
            for r in results {
                match r {
                    Ok(report) if report.validation_failed() => {
                        code = ExitCode::from(EXIT_VALIDATION)
                    }
                    Ok(report) if report.any_failed() => code = ExitCode::from(EXIT_TASK),
                    Ok(_) => {}
                    Err(e) => {
                        eprintln!("{e}");
                        code = ExitCode::from(EXIT_TASK);
                    }
                }
            }
            code
        }
    }
}
