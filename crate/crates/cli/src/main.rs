//! Unified command-line entry point: character-identity checks, local
//! Euler-factor scans, cohomology computations, regulator determinant
//! identities, tower ledgers, and a deterministic self-test suite.
//!
//! Exit codes: 0 when every check passes, 2 for malformed arguments or
//! unreadable inputs, 3 when a verification check fails.

mod harness;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dihedral_core::tower::TowerInput;
use harness::{module_from_spec, ModuleSpecFile};
use report::RunReport;

#[derive(Parser)]
#[command(
    name = "dihedral",
    about = "Exact verification toolkit for dihedral class-number identities and anticyclotomic towers",
    version
)]
struct Cli {
    /// Emit the report as JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized harness (reports are byte-identical for
    /// identical arguments and seed)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Character table of the dihedral group of order 2q and the induced
    /// character identities
    Chars {
        /// odd q >= 3
        #[arg(long)]
        q: u64,
        /// verify the induction, zeta and reciprocity identities
        #[arg(long)]
        verify: bool,
    },
    /// Scan primes and verify local zeta-factor identities from
    /// factorization patterns
    Euler(EulerArgs),
    /// Tate cohomology of a finite module under a dihedral action
    Cohom(CohomArgs),
    /// Regulator block-matrix determinant identities
    Regulator {
        /// r = (q-1)/2 >= 1
        #[arg(long)]
        r: usize,
        /// base-field degree (1 gives the small block matrix)
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// number of random instances
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// print the elimination trace steps
        #[arg(long)]
        trace: bool,
    },
    /// Consistency ledger for a tower data file
    Tower {
        /// JSON file with the tower configuration and per-level records
        #[arg(long)]
        file: std::path::PathBuf,
        /// fit the growth laws and cross-check the derived invariants
        #[arg(long)]
        fit: bool,
    },
    /// Run the full verification suite
    Selftest,
}

#[derive(Args)]
struct EulerArgs {
    /// coefficients of the degree-q polynomial, constant term first,
    /// comma-separated
    #[arg(long, allow_hyphen_values = true)]
    fk: String,
    /// coefficients of the quadratic polynomial, constant term first
    #[arg(long = "fL", allow_hyphen_values = true)]
    fl: String,
    /// odd q >= 3
    #[arg(long)]
    q: u64,
    /// scan all primes up to this bound
    #[arg(long)]
    bound: u64,
}

#[derive(Args)]
struct CohomArgs {
    /// JSON module description: p, n, generator_orders, rho, sigma
    #[arg(long = "spec", conflicts_with = "random")]
    spec: Option<std::path::PathBuf>,
    /// run the randomized property harness instead of a single module
    #[arg(long)]
    random: bool,
    #[arg(long, requires = "random")]
    p: Option<u64>,
    #[arg(long, requires = "random")]
    n: Option<u32>,
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// size guard for the enumeration oracle (|A|^|G| at most this)
    #[arg(long, default_value_t = dihedral_core::cohomology::DEFAULT_ENUMERATION_GUARD)]
    guard: f64,
}

fn parse_coeffs(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad coefficient `{x}`: {e}"))
        })
        .collect()
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report: RunReport = match cli.command {
        Command::Chars { q, verify } => {
            if q < 3 || q % 2 == 0 {
                return usage_error(format!("q must be odd and >= 3, got {q}"));
            }
            if !cli.json {
                print!("{}", harness::chars_table_text(q));
            }
            harness::run_chars(q, verify)
        }
        Command::Euler(args) => {
            let fk = match parse_coeffs(&args.fk) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            let fl = match parse_coeffs(&args.fl) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            if args.q < 3 || args.q % 2 == 0 {
                return usage_error(format!("q must be odd and >= 3, got {}", args.q));
            }
            if fk.len() != args.q as usize + 1 {
                return usage_error(format!(
                    "fk must have degree q = {} (got {} coefficients)",
                    args.q,
                    fk.len()
                ));
            }
            if fl.len() != 3 {
                return usage_error("fL must be a quadratic (3 coefficients)");
            }
            harness::run_euler(&fk, &fl, args.q, args.bound)
        }
        Command::Cohom(args) => {
            if let Some(path) = args.spec {
                let text = match std::fs::read_to_string(&path) {
                    Ok(t) => t,
                    Err(e) => return usage_error(format!("cannot read {}: {e}", path.display())),
                };
                let spec: ModuleSpecFile = match serde_json::from_str(&text) {
                    Ok(s) => s,
                    Err(e) => return usage_error(format!("bad module file: {e}")),
                };
                match module_from_spec(&spec) {
                    Ok(module) => harness::run_cohom_spec(&module),
                    Err(e) => return usage_error(e),
                }
            } else if args.random {
                let (Some(p), Some(n)) = (args.p, args.n) else {
                    return usage_error("--random requires --p and --n");
                };
                harness::run_cohom_random(p, n, args.count, cli.seed, args.guard)
            } else {
                return usage_error("cohom needs either --spec FILE or --random --p P --n N");
            }
        }
        Command::Regulator {
            r,
            n,
            instances,
            trace,
        } => {
            if r < 1 {
                return usage_error("r must be >= 1");
            }
            if n < 1 {
                return usage_error("n must be >= 1");
            }
            harness::run_regulator(r, n, instances, cli.seed, trace)
        }
        Command::Tower { file, fit } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return usage_error(format!("cannot read {}: {e}", file.display())),
            };
            let input: TowerInput = match serde_json::from_str(&text) {
                Ok(i) => i,
                Err(e) => return usage_error(format!("bad tower file: {e}")),
            };
            harness::run_tower(&input, fit)
        }
        Command::Selftest => harness::run_selftest(cli.seed),
    };

    if cli.json {
        println!("{}", report.render_json());
    } else {
        print!("{}", report.render_text());
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}
