//! Batch command-line front end: binds a configuration file to the
//! analytic metrics and the Monte Carlo simulator, and writes CSV curves
//! plus a JSON manifest per run.

mod commands;
mod grid;
mod output;
mod validate;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{Context, ContourArgs, McRequest, ScaiuArgs};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Validation(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Validation(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Validation(m) => write!(f, "validation failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<emfcov::Error> for CliError {
    fn from(e: emfcov::Error) -> Self {
        match e {
            emfcov::Error::Config(_) | emfcov::Error::Unsupported(_) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "emfcov", version, about = "EMF exposure and coverage statistics of PPP beamforming networks")]
struct Cli {
    /// Flat TOML configuration; reference-scenario defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Caps the number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Doubles every quadrature node count.
    #[arg(long, global = true)]
    refined: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// CDF of the exposure of one user kind.
    Emfe {
        /// au, iu or ru.
        #[arg(long, default_value = "iu")]
        user: String,
        /// Overrides the configured antenna pattern.
        #[arg(long)]
        pattern: Option<String>,
        /// Thresholds in dBm, `start:stop:step` or a list.
        #[arg(long, default_value = "-100:-30:1", allow_hyphen_values = true)]
        te_grid: String,
        #[arg(long)]
        out: PathBuf,
        /// Adds a Monte Carlo companion curve with this many realizations.
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// SINR (and optionally SNR) CCDF of the active user.
    Coverage {
        #[arg(long)]
        pattern: Option<String>,
        /// Thresholds in dB.
        #[arg(long, default_value = "-10:30:1", allow_hyphen_values = true)]
        tc_grid: String,
        #[arg(long)]
        include_snr: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Joint coverage and idle-user exposure probability.
    Scaiu {
        #[arg(long)]
        pattern: Option<String>,
        /// SINR threshold in dB.
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        tc: f64,
        /// Exposure thresholds in dBm.
        #[arg(long, default_value = "-80:-40:5", allow_hyphen_values = true)]
        te_grid: String,
        /// Idle-user distances in m; the configured one when omitted.
        #[arg(long)]
        d_grid: Option<String>,
        /// Adds Frechet bound columns.
        #[arg(long)]
        bounds: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Metric over an (N, d) grid with level-set polylines.
    Contour {
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, default_value = "4,8,16,32,64")]
        n_list: String,
        #[arg(long, default_value = "2,10,30,60")]
        d_list: String,
        /// emfe, scaiu or cond_scaiu.
        #[arg(long, default_value = "emfe")]
        metric: String,
        /// Exposure threshold in dBm.
        #[arg(long, default_value_t = -40.0, allow_hyphen_values = true)]
        te: f64,
        /// SINR threshold in dB.
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        tc: f64,
        #[arg(long, default_value = "0.95")]
        levels: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Runs an oracle-equivalence suite and writes a pass/fail report.
    Validate {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        out: PathBuf,
        /// Realizations for the mc suite.
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Cf,
    Moments,
    Gilpelaez,
    Mc,
}

fn mc_request(n: Option<usize>, seed: u64) -> Option<McRequest> {
    n.map(|n| McRequest { n, seed })
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let started = Instant::now();
    let config = cli.config.as_deref();
    let (name, ctx, seed, out, files) = match &cli.cmd {
        Cmd::Emfe { user, pattern, te_grid, out, mc, seed } => {
            let ctx = Context::load(config, pattern.as_deref(), cli.refined)?;
            let files = commands::emfe(&ctx, user, te_grid, out, mc_request(*mc, *seed))?;
            ("emfe", ctx, mc.map(|_| *seed), out, files)
        }
        Cmd::Coverage { pattern, tc_grid, include_snr, out, mc, seed } => {
            let ctx = Context::load(config, pattern.as_deref(), cli.refined)?;
            let files = commands::coverage(&ctx, tc_grid, *include_snr, out, mc_request(*mc, *seed))?;
            ("coverage", ctx, mc.map(|_| *seed), out, files)
        }
        Cmd::Scaiu { pattern, tc, te_grid, d_grid, bounds, out, mc, seed } => {
            let ctx = Context::load(config, pattern.as_deref(), cli.refined)?;
            let args = ScaiuArgs {
                tc_db: *tc,
                te_dbm: te_grid,
                d_grid: d_grid.as_deref(),
                bounds: *bounds,
                mc: mc_request(*mc, *seed),
            };
            let files = commands::scaiu(&ctx, args, out)?;
            ("scaiu", ctx, mc.map(|_| *seed), out, files)
        }
        Cmd::Contour { pattern, n_list, d_list, metric, te, tc, levels, out } => {
            let ctx = Context::load(config, pattern.as_deref(), cli.refined)?;
            let args = ContourArgs { n_list, d_list, metric, te_dbm: *te, tc_db: *tc, levels };
            let files = commands::contour(&ctx, args, out)?;
            ("contour", ctx, None, out, files)
        }
        Cmd::Validate { suite, out, n, seed } => {
            let ctx = Context::load(config, None, cli.refined)?;
            let (label, checks) = match suite {
                Suite::Moments => ("moments", validate::moments(&ctx)?),
                Suite::Cf => ("cf", validate::cf(&ctx)?),
                Suite::Gilpelaez => ("gilpelaez", validate::gilpelaez(&ctx)?),
                Suite::Mc => {
                    if *n < 1000 {
                        return Err(CliError::Config(format!("--n {n} is below the minimum of 1000")));
                    }
                    ("mc", validate::mc(&ctx, McRequest { n: *n, seed: *seed })?)
                }
            };
            let mut report: String = checks.iter().map(|c| c.line(label) + "\n").collect();
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            report.push_str(&format!("suite={label} status={}\n", if failed.is_empty() { "PASS" } else { "FAIL" }));
            std::fs::write(out, &report).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
            print!("{report}");
            let seed = matches!(suite, Suite::Mc).then_some(*seed);
            ctx.manifest(label, seed, std::slice::from_ref(out), started).write(out)?;
            if !failed.is_empty() {
                return Err(CliError::Validation(failed.join(", ")));
            }
            return Ok(());
        }
    };
    let manifest = ctx.manifest(name, seed, &files, started).write(out)?;
    for f in files.iter().chain(std::iter::once(&manifest)) {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("emfcov: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
