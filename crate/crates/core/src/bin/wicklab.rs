use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use wicklab::cli::{self, load_config, Outcome, Overrides};
use wicklab::Error;

#[derive(Parser)]
#[command(name = "wicklab", version, about = "Gaussian chaos, quantization and FLRW mode experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML config, or JSON when the extension is `.json`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Degree cutoff override.
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Rational arithmetic where supported.
    #[arg(long, global = true)]
    exact: bool,
    /// Worker threads for mode-parallel runs.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, env = "WICKLAB_OUT", default_value = "wicklab-out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Wick conversion tables, product formula and orthogonality checks.
    Chaos,
    /// Residual report over the transform web.
    TransformCheck,
    /// Ladder algebra, involution and star-product checks.
    QuantizeCheck,
    /// FLRW particle production.
    Cosmo {
        #[command(subcommand)]
        action: CosmoAction,
    },
    /// Quadrature, Monte-Carlo and pairing cross-checks.
    Oracle {
        /// Add Monte-Carlo columns.
        #[arg(long)]
        mc: bool,
    },
}

#[derive(Subcommand)]
enum CosmoAction {
    Run,
}

fn run(cli: &Cli) -> wicklab::Result<Outcome> {
    let c = &cli.common;
    let mut o = Overrides { cutoff: c.cutoff, seed: c.seed, exact: c.exact, workers: c.workers, mc: false };
    let path = c.config.as_deref();
    let out = &c.out;
    match &cli.command {
        Command::Chaos => {
            let mut cfg: cli::ChaosConfig = load_config(path)?;
            cfg.apply(&o);
            cli::cmd_chaos(&cfg, c.seed, out)
        }
        Command::TransformCheck => {
            let mut cfg: cli::TransformConfig = load_config(path)?;
            cfg.apply(&o);
            cli::cmd_transform_check(&cfg, c.seed, out)
        }
        Command::QuantizeCheck => {
            let mut cfg: cli::QuantizeConfig = load_config(path)?;
            cfg.apply(&o);
            cli::cmd_quantize_check(&cfg, out)
        }
        Command::Cosmo { action: CosmoAction::Run } => {
            let mut cfg: cli::CosmoConfig = load_config(path)?;
            if let Some(dir) = path.and_then(Path::parent) {
                cfg.rebase(dir);
            }
            cfg.apply(&o);
            cli::cmd_cosmo(&cfg, c.seed, out)
        }
        Command::Oracle { mc } => {
            o.mc = *mc;
            let mut cfg: cli::OracleConfig = load_config(path)?;
            cfg.apply(&o);
            cli::cmd_oracle(&cfg, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            println!("wrote {} file(s) to {}", outcome.files.len(), cli.common.out.display());
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            let code = cli::error_exit_code(&e);
            match e {
                Error::Config(_) => eprintln!("wicklab: {e}"),
                _ => eprintln!("wicklab: error: {e}"),
            }
            ExitCode::from(code)
        }
    }
}
