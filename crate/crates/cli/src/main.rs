use std::io::Write;
use std::process::ExitCode;

use ameso_cli::{bench, exit, CliError, CliResult, Outcome, OutputFormat, SolveOptions};
use clap::{Args, Parser, Subcommand};

/// Minimization over Ameso(C) pairs.
///
/// INPUT is a built-in (example3, example5, example6) or a table file
/// (.json with {"domain", "values", optional "C"}, or .csv with rows
/// x1,...,xn,value). Exit codes: 0 ok, 1 error, 2 not an Ameso set,
/// 3 oracle cap exceeded, 4 start outside the domain, 5 unsupported domain
/// shape, 64 bad usage.
#[derive(Parser)]
#[command(name = "ameso", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t)]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Print the minimal-C certificate. INPUT may also be a domain literal
    /// such as 'set{0,1,3}', or a .txt file holding one.
    Verify { input: String },
    /// One-dimensional sweep. CSV output is the step trace.
    Solve {
        input: String,
        #[command(flatten)]
        opts: SolverArgs,
    },
    /// Recursive procedure over a box. CSV output lists the top-level
    /// conditional minima.
    Arp {
        input: String,
        #[command(flatten)]
        opts: SolverArgs,
        #[command(flatten)]
        arp: ArpArgs,
    },
    /// Shipping-cost minimization for a JSON instance {"W", "w", "c"};
    /// C defaults to the option-3 cost.
    Knapsack {
        input: String,
        #[command(flatten)]
        opts: SolverArgs,
        #[command(flatten)]
        arp: ArpArgs,
    },
    /// Compare the solvers with exhaustion on a seeded suite:
    /// example5, knapsack or random.
    Bench {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances to generate (ignored by example5).
        #[arg(long)]
        count: Option<usize>,
    },
}

#[derive(Args)]
struct SolverArgs {
    /// Ameso constant; defaults to declared metadata, then the oracle.
    #[arg(long = "C")]
    c: Option<f64>,
    /// Start point: one value, or one per axis for arp.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct ArpArgs {
    /// Axes innermost first, e.g. 1,0; the last one is swept at the top.
    #[arg(long)]
    axis_order: Option<String>,
    /// Re-solve subproblems instead of reusing recorded values.
    #[arg(long)]
    no_memoize: bool,
}

fn options(s: SolverArgs, a: Option<ArpArgs>, format: OutputFormat) -> SolveOptions {
    let (axis_order, no_memoize) = a.map_or((None, false), |a| (a.axis_order, a.no_memoize));
    SolveOptions {
        c: s.c,
        start: s.start,
        tolerance: s.tolerance,
        axis_order,
        no_memoize,
        format,
    }
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let f = cli.format;
    let out = match cli.command {
        Command::Verify { input } => ameso_cli::cmd_verify(&input),
        Command::Solve { input, opts } => ameso_cli::cmd_solve(&input, &options(opts, None, f)),
        Command::Arp { input, opts, arp } => ameso_cli::cmd_arp(&input, &options(opts, Some(arp), f)),
        Command::Knapsack { input, opts, arp } => {
            ameso_cli::cmd_knapsack(&input, &options(opts, Some(arp), f))
        }
        Command::Bench { suite, seed, count } => {
            if !bench::SUITES.contains(&suite.as_str()) {
                return Err(CliError::new(exit::USAGE, format!("unknown suite '{suite}'")));
            }
            ameso_cli::cmd_bench(&suite, seed, count, f)
        }
    }?;
    match &cli.out {
        Some(path) => std::fs::write(path, &out.body)
            .map_err(|e| CliError::new(exit::FAILURE, format!("cannot write {path}: {e}")))?,
        None => std::io::stdout()
            .write_all(out.body.as_bytes())
            .map_err(|e| CliError::new(exit::FAILURE, e.to_string()))?,
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(o) => ExitCode::from(o.code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
