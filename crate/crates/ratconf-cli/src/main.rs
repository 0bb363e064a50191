//! Command-line front end for the rationalizability confidence library.
//!
//! `run` executes a TOML experiment config and emits CSV or JSON rows;
//! `validate` checks a config without running it; `closed-form` and
//! `bounds` print single analytic values for quick inspection.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ratconf::closedforms::{
    self, trade_pbar_symmetric, BoundInputs, ClosedFormPair,
};
use ratconf_cli::config::ExperimentConfig;
use ratconf_cli::emit::{write_csv, write_json, Format};
use ratconf_cli::run::run_config;
use ratconf_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "ratconf", version, about = "Confidence sets for rationalizable actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute an experiment config and emit result rows.
    Run(RunArgs),
    /// Parse and validate a config, then exit.
    Validate {
        /// Path to the TOML experiment config.
        #[arg(long)]
        config: PathBuf,
    },
    /// Print an exact confidence pair for one scenario.
    #[command(subcommand)]
    ClosedForm(ClosedFormCmd),
    /// Print analytic probability bounds.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the TOML experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Worker threads for the replication loop; 0 picks automatically.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum ClosedFormCmd {
    /// Slope-interval coordination game.
    Coordination {
        /// Number of observations.
        #[arg(long)]
        n: u32,
        /// True slope.
        #[arg(long)]
        beta: f64,
        /// Noise standard deviation.
        #[arg(long)]
        sigma: f64,
        /// Interval miscoverage level.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Symmetric rectangle-classification market.
    Trade {
        /// Number of observations.
        #[arg(long)]
        n: u32,
        /// Attribute dimensions.
        #[arg(long)]
        m: u32,
        /// Half-width parameter of the symmetric rectangle.
        #[arg(long)]
        a: f64,
    },
}

#[derive(Args)]
struct BoundsArgs {
    /// Number of observations (location-learning bound).
    #[arg(long, requires = "beta", requires = "eta")]
    n: Option<u32>,
    /// True location (location-learning bound).
    #[arg(long, requires = "n")]
    beta: Option<f64>,
    /// Prior-mean half-range (location-learning bound).
    #[arg(long, requires = "n")]
    eta: Option<f64>,

    /// Payoff gap of the limit game (deviation bounds).
    #[arg(long, value_name = "DELTA")]
    delta_inf: Option<f64>,
    /// Payoff Lipschitz constant (deviation bounds).
    #[arg(long, value_name = "K", requires = "delta_inf")]
    lipschitz_k: Option<f64>,
    /// Metric comparison constant (deviation bounds).
    #[arg(long, requires = "delta_inf")]
    xi: Option<f64>,
    /// Payoff spread over the parameter box (deviation bounds).
    #[arg(long, value_name = "M", requires = "delta_inf")]
    payoff_spread: Option<f64>,
    /// Expected supremum belief deviation (deviation bounds).
    #[arg(long, value_name = "E", requires = "delta_inf")]
    deviation: Option<f64>,
    /// Mass the plausible beliefs put near the truth.
    #[arg(long, default_value_t = 1.0)]
    q_belief: f64,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Validate { config } => {
            load_config(&config, None)?;
            println!("ok");
            Ok(())
        }
        Command::ClosedForm(cmd) => cmd_closed_form(&cmd),
        Command::Bounds(args) => cmd_bounds(&args),
    }
}

fn load_config(path: &PathBuf, seed: Option<u64>) -> CliResult<ExperimentConfig> {
    let text = fs::read_to_string(path)?;
    let mut config = ExperimentConfig::from_toml_str(&text)?;
    if let Some(seed) = seed {
        config.master_seed = seed;
    }
    Ok(config)
}

fn cmd_run(args: &RunArgs) -> CliResult<()> {
    let config = load_config(&args.config, args.seed)?;
    let rows = if args.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build()
            .map_err(|e| CliError::Io(io::Error::other(e)))?;
        pool.install(|| run_config(&config))?
    } else {
        run_config(&config)?
    };
    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(fs::File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match Format::from(args.format) {
        Format::Csv => write_csv(&mut out, &rows)?,
        Format::Json => write_json(&mut out, &rows)?,
    }
    out.flush()?;
    Ok(())
}

fn print_pair(pair: &ClosedFormPair) {
    println!("p_lower={:.16e} p_upper={:.16e}", pair.p_lower, pair.p_upper);
}

fn cmd_closed_form(cmd: &ClosedFormCmd) -> CliResult<()> {
    match *cmd {
        ClosedFormCmd::Coordination { n, beta, sigma, alpha } => {
            let pair = closedforms::coord_closed_form(n, beta, sigma, alpha)?;
            print_pair(&pair);
        }
        ClosedFormCmd::Trade { n, m, a } => {
            let upper = trade_pbar_symmetric(n, m, a)?;
            let pair = ClosedFormPair::new(0.0, upper)?;
            print_pair(&pair);
        }
    }
    Ok(())
}

fn print_bound(name: &str, b: &closedforms::Bound) {
    println!(
        "{name} raw={:.16e} value={:.16e} clamped={}",
        b.raw, b.value, b.clamped
    );
}

fn cmd_bounds(args: &BoundsArgs) -> CliResult<()> {
    let gaussian = match (args.n, args.beta, args.eta) {
        (Some(n), Some(beta), Some(eta)) => Some((n, beta, eta)),
        (None, None, None) => None,
        _ => {
            return Err(CliError::Config(
                "the location-learning bound needs --n, --beta, and --eta together".into(),
            ))
        }
    };
    let deviation = match (
        args.delta_inf,
        args.lipschitz_k,
        args.xi,
        args.payoff_spread,
        args.deviation,
    ) {
        (Some(d), Some(k), Some(xi), Some(m), Some(e)) => Some((d, k, xi, m, e)),
        (None, None, None, None, None) => None,
        _ => {
            return Err(CliError::Config(
                "the deviation bounds need --delta-inf, --lipschitz-k, --xi, \
                 --payoff-spread, and --deviation together"
                    .into(),
            ))
        }
    };
    if gaussian.is_none() && deviation.is_none() {
        return Err(CliError::Config(
            "give the location-learning group (--n --beta --eta), the deviation \
             group (--delta-inf --lipschitz-k --xi --payoff-spread --deviation), or both"
                .into(),
        ));
    }
    if let Some((n, beta, eta)) = gaussian {
        let b = closedforms::gaussian_corollary_bound(n, beta, eta)?;
        print_bound("gaussian_lower", &b);
    }
    if let Some((d, k, xi, m, e)) = deviation {
        let inputs = BoundInputs::new(d, k, xi, m, e, args.q_belief)?;
        let markov = closedforms::markov_lower_bound(&inputs);
        let pbelief = closedforms::pbelief_lower_bound(&inputs)?;
        print_bound("markov_lower", &markov);
        print_bound("pbelief_lower", &pbelief);
    }
    Ok(())
}
