use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use abelian_cy::families::Family;
use abelian_cy::heisenberg::orbit;
use abelian_cy::scan::{stabilize_count, ScanConfig};
use abelian_cy::verify::{canonical_json, construct, report_all, verify, VerifyConfig, VerifyError};

#[derive(Parser)]
#[command(name = "abelian-cy", version, about = "Construct and check Calabi-Yau threefolds fibred by abelian surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a seeded instance of a family and print it.
    Construct(RunArgs),
    /// Run a family's checklist and print the verification report.
    Verify(RunArgs),
    /// Enumerate projective space and report every singular point.
    Scan(RunArgs),
    /// Print the group orbits of the instance's parameter points.
    Orbit(RunArgs),
    /// Verify every family at both of its default primes.
    Report(ReportArgs),
}

#[derive(Args)]
struct RunArgs {
    /// t14, hm, t16, t17, t18 or t110.
    #[arg(long)]
    family: Family,
    /// Base prime (defaults to the family's first default prime).
    #[arg(long)]
    prime: Option<u64>,
    /// Scan the extensions of degree 1 up to this bound.
    #[arg(long, default_value_t = 1)]
    ext: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Allow full scans of large ambient spaces.
    #[arg(long)]
    deep: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for scans.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl RunArgs {
    fn prime(&self) -> u64 {
        self.prime.unwrap_or(self.family.default_primes()[0])
    }

    fn config(&self) -> VerifyConfig {
        VerifyConfig {
            ext: self.ext,
            deep: self.deep,
            jobs: self.jobs,
            progress: true,
            ..VerifyConfig::new(self.family, self.prime(), self.seed)
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), VerifyError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| VerifyError::Config(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn scan_config(args: &RunArgs) -> ScanConfig {
    let mut c = ScanConfig { jobs: args.jobs.max(1), progress: true, ..ScanConfig::default() };
    if args.deep {
        c.max_points = ScanConfig::DEEP_MAX_POINTS;
    }
    c
}

/// Exit status for a run that completed: 0 when every asserted check passed.
fn run(cli: Cli) -> Result<u8, VerifyError> {
    match cli.command {
        Command::Construct(args) => {
            let (instance, retries) = construct(args.family, args.prime(), args.seed)?;
            for r in &retries {
                log::info!("attempt {} rejected: {}", r.attempt, r.reason);
            }
            emit(&canonical_json(&instance), args.out.as_ref())?;
            Ok(0)
        }
        Command::Verify(args) => {
            let report = verify(&args.config())?;
            for row in report.failures() {
                eprintln!("FAIL {}: expected {:?}, got {:?}", row.check_name, row.expected, row.actual);
            }
            emit(&canonical_json(&report), args.out.as_ref())?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Scan(args) => {
            let (instance, _) = construct(args.family, args.prime(), args.seed)?;
            let result = stabilize_count(&instance, args.ext.max(1), &scan_config(&args))?;
            emit(&canonical_json(&result), args.out.as_ref())?;
            Ok(0)
        }
        Command::Orbit(args) => {
            let (instance, _) = construct(args.family, args.prime(), args.seed)?;
            let orbits: Vec<_> = instance
                .expected
                .orbit_seed
                .iter()
                .map(|seed| {
                    let points = orbit(instance.group(), seed);
                    json!({ "seed": seed, "size": points.len(), "points": points })
                })
                .collect();
            let doc = json!({
                "family_id": instance.id,
                "group": instance.group().label,
                "orbits": orbits,
            });
            emit(&canonical_json(&doc), args.out.as_ref())?;
            Ok(0)
        }
        Command::Report(args) => {
            let reports = report_all(args.seed, args.jobs, true)?;
            let passed = reports.iter().all(|r| r.passed);
            for r in &reports {
                eprintln!("{} F_{}: {}", r.family, r.prime, if r.passed { "pass" } else { "FAIL" });
            }
            emit(&canonical_json(&reports), args.out.as_ref())?;
            Ok(if passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
