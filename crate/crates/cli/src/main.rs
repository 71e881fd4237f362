use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gram_pinv_cli::{
    gen_cases, parse_case_file, run_suite, volterra_report, CliError, GenConfig, RankProfile, Result, RunOptions,
};

#[derive(Parser)]
#[command(name = "gram-pinv", version, about = "Moore–Penrose inverse checks over block C*-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every requested check on a case file.
    Verify {
        file: PathBuf,
        /// Rank tolerance for all cases, replacing per-case values.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        parallel: usize,
        /// Override a threshold coefficient, e.g. `--threshold penrose=1e-8`.
        #[arg(long = "threshold", value_parser = parse_threshold)]
        thresholds: Vec<(String, f64)>,
        /// Record wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Write a seeded corpus of generated cases.
    Gen {
        /// Block sizes, e.g. `2,3`.
        #[arg(long, value_delimiter = ',', required = true)]
        shape: Vec<usize>,
        /// Operator size as `OUTxIN`, e.g. `4x3`.
        #[arg(long, value_parser = parse_dims)]
        dims: (usize, usize),
        /// `full` or one rank per summand, e.g. `3,5`.
        #[arg(long, default_value = "full")]
        rank: RankProfile,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Prefix for case ids.
        #[arg(long, default_value = "case")]
        prefix: String,
        /// Restrict the check list, e.g. `penrose,gram_left`.
        #[arg(long, value_delimiter = ',', value_parser = parse_check)]
        checks: Option<Vec<gram_pinv_cli::Check>>,
    },
    /// Run the Volterra refinement study.
    Volterra {
        #[arg(long, value_delimiter = ',', default_values_t = gram_pinv::volterra::DEFAULT_GRIDS)]
        grids: Vec<usize>,
        /// Write the JSON study here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_threshold(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v = value.parse::<f64>().map_err(|e| format!("bad value {value:?}: {e}"))?;
    Ok((name.trim().to_string(), v))
}

fn parse_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once('x').ok_or_else(|| format!("expected OUTxIN, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("bad dimension {x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

fn parse_check(s: &str) -> std::result::Result<gram_pinv_cli::Check, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| format!("unknown check {s:?}"))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify {
            file,
            tol,
            report,
            parallel,
            thresholds,
            timings,
        } => {
            if let Some(t) = tol {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(CliError::Validation(format!("--tol must be positive, got {t}")));
                }
            }
            let cases = parse_case_file(&file)?;
            let mut opts = RunOptions {
                parallelism: parallel,
                rel_tol: tol,
                timings,
                ..RunOptions::default()
            };
            for (name, value) in thresholds {
                opts.thresholds.set(&name, value)?;
            }
            let r = run_suite(&cases, &opts)?;
            print!("{}", r.to_table());
            if let Some(path) = report {
                write_file(&path, &r.to_json())?;
            }
            Ok(r.exit_code())
        }
        Command::Gen {
            shape,
            dims,
            rank,
            count,
            seed,
            out,
            prefix,
            checks,
        } => {
            let mut config = GenConfig::new(&shape, dims.0, dims.1, rank, count, seed);
            config.id_prefix = prefix;
            config.checks = checks;
            let file = gen_cases(&config)?;
            let text = serde_json::to_string_pretty(&file).expect("case file serializes") + "\n";
            write_file(&out, &text)?;
            println!("wrote {} cases to {}", file.cases.len(), out.display());
            Ok(0)
        }
        Command::Volterra { grids, out } => {
            let r = volterra_report(&grids).map_err(|e| match e {
                CliError::Kernel(gram_pinv::Error::InvalidArgument(m)) => CliError::Validation(m),
                other => other,
            })?;
            print!("{}", r.to_table());
            if let Some(path) = out {
                write_file(&path, &(serde_json::to_string_pretty(&r).expect("study serializes") + "\n"))?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
