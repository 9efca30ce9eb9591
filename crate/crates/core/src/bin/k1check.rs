use clap::{Parser, ValueEnum};
use iwasawa_k1::groups::FiniteGroup;
use iwasawa_k1::report::{run_suite, RunConfig, Suite};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Runs verification suites for K1 of p-adic group rings and writes a report.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// Finite p-group: C(p,n), C(p,n)xC(p,k)..., or U(d,p,n)
    #[arg(long, default_value = "C(3,2)")]
    carrier: String,
    #[arg(long, default_value_t = 3)]
    prime: u64,
    /// Working precision m (coefficients mod p^m)
    #[arg(long, default_value_t = 4)]
    precision: u32,
    /// Truncation degree for power series
    #[arg(long, default_value_t = 30)]
    degree: usize,
    /// Highest cyclotomic level for series evaluation
    #[arg(long, default_value_t = 2)]
    max_level: u32,
    /// Suites to run; repeatable. Defaults to every suite that applies to the carrier.
    #[arg(long, value_enum)]
    suite: Vec<Suite>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random samples per check
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let suites = if args.suite.is_empty() {
        match FiniteGroup::parse(&args.carrier) {
            Ok(g) => Suite::applicable(&g),
            Err(e) => {
                eprintln!("error: --carrier: {e}");
                return ExitCode::FAILURE;
            }
        }
    } else {
        args.suite
    };
    let config = RunConfig {
        carrier: args.carrier,
        prime: args.prime,
        precision: args.precision,
        degree: args.degree,
        max_level: args.max_level,
        suites,
        seed: args.seed,
        samples: args.samples,
    };
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let text = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        }
        None => print!("{text}"),
    }
    let s = &report.summary;
    eprintln!("{} checks: {} passed, {} failed, {} errors", s.total, s.passed, s.failed, s.errors);
    if report.success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
