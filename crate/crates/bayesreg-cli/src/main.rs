//! `bayesreg`: Bayesian regularization toolkit CLI.
//!
//! Exit codes: 0 success, 1 reproduction thresholds failed, 2 usage or
//! validation error, 3 I/O error, 4 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use bayesreg::priors::PriorSpec;
use clap::{Args, Parser, Subcommand};

use bayesreg_cli::commands;
use bayesreg_cli::config::{parse_lambda_mode, FileConfig, PriorChoice, SamplerConfig};
use bayesreg_cli::error::CliError;
use bayesreg_cli::synth::SyntheticSpec;

#[derive(Parser)]
#[command(
    name = "bayesreg",
    version,
    about = "Bayesian regularization for linear regression: shrinkage-prior Gibbs samplers, \
             conditioning diagnostics, and a James-Stein risk laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Optional JSON config file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for artifacts (default: ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base seed; all randomness derives from it.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Default)]
struct SamplerArgs {
    /// Total Gibbs iterations per chain.
    #[arg(long)]
    iters: Option<usize>,
    /// Iterations discarded before retention.
    #[arg(long)]
    burn_in: Option<usize>,
    /// Keep every thin-th retained state.
    #[arg(long)]
    thin: Option<usize>,
    /// Number of independent chains.
    #[arg(long)]
    chains: Option<usize>,
    /// Lasso global rate: fixed:<v> or hyper.
    #[arg(long)]
    lambda_mode: Option<String>,
    /// Spike-and-slab prior inclusion probability.
    #[arg(long)]
    theta: Option<f64>,
    /// Spike-and-slab slab variance.
    #[arg(long)]
    slab_variance: Option<f64>,
    /// Ridge MAP penalty weight.
    #[arg(long)]
    ridge_lambda: Option<f64>,
    /// Prior scale tau (contours and penalty reporting).
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Fit shrinkage models to a CSV dataset (last column = response).
    Fit {
        /// Input CSV path.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Prior: ridge|lasso|horseshoe|spike-slab|all.
        #[arg(long)]
        prior: Option<String>,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Monte Carlo risk comparison of MLE, James-Stein, and thresholding.
    RiskSim {
        /// Dimension p of the mean vector.
        #[arg(long)]
        p: Option<usize>,
        /// Number of spikes r.
        #[arg(long)]
        r: Option<usize>,
        /// Spike energy parameter d (default: d = r).
        #[arg(long)]
        d: Option<f64>,
        /// Monte Carlo replications.
        #[arg(long)]
        replications: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Regenerate the synthetic shrinkage comparison and check thresholds.
    ReproducePaper {
        /// Number of seeds in the replication set.
        #[arg(long)]
        seeds: Option<usize>,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Condition numbers of the correlated 2x2 family over an eps grid.
    ConditionScan {
        #[arg(long)]
        eps_min: Option<f64>,
        #[arg(long)]
        eps_max: Option<f64>,
        /// Grid points (log-spaced).
        #[arg(long)]
        points: Option<usize>,
        /// Spectrum shift added to X'X.
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Penalty-surface grid for a prior on [grid-min, grid-max]^2.
    Contours {
        /// Prior: ridge|lasso|horseshoe|spike-slab.
        #[arg(long)]
        prior: Option<String>,
        #[arg(long)]
        grid_min: Option<f64>,
        #[arg(long)]
        grid_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Level of the constraint contour recorded in the artifact.
        #[arg(long)]
        budget: Option<f64>,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn resolve_sampler_config(
    args: &SamplerArgs,
    common: &CommonArgs,
    file: &FileConfig,
) -> Result<SamplerConfig, CliError> {
    let defaults = SamplerConfig::default();
    let lambda_mode = match args.lambda_mode.as_deref().or(file.lambda_mode.as_deref()) {
        Some(s) => parse_lambda_mode(s)?,
        None => defaults.lambda_mode,
    };
    Ok(SamplerConfig {
        iters: args.iters.or(file.iters).unwrap_or(defaults.iters),
        burn_in: args.burn_in.or(file.burn_in).unwrap_or(defaults.burn_in),
        thin: args.thin.or(file.thin).unwrap_or(defaults.thin),
        seed: common.seed.or(file.seed).unwrap_or(defaults.seed),
        chains: args.chains.or(file.chains).unwrap_or(defaults.chains),
        lambda_mode,
        theta: args.theta.or(file.theta).unwrap_or(defaults.theta),
        slab_variance: args
            .slab_variance
            .or(file.slab_variance)
            .unwrap_or(defaults.slab_variance),
        ridge_lambda: args
            .ridge_lambda
            .or(file.ridge_lambda)
            .unwrap_or(defaults.ridge_lambda),
        tau: args.tau.or(file.tau).unwrap_or(defaults.tau),
    })
}

fn out_dir(common: &CommonArgs) -> PathBuf {
    common.out.clone().unwrap_or_else(|| PathBuf::from("out"))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Fit { input, prior, sampler, common } => {
            let file = FileConfig::load(common.config.as_deref())?;
            let cfg = resolve_sampler_config(&sampler, &common, &file)?;
            let input = input
                .or(file.input.clone())
                .ok_or_else(|| CliError::Usage("fit needs --input <csv>".into()))?;
            let prior = match prior.as_deref().or(file.prior.as_deref()) {
                Some(s) => PriorChoice::parse(s)?,
                None => PriorChoice::All,
            };
            commands::cmd_fit(&input, prior, &cfg, &out_dir(&common))
        }
        Command::RiskSim { p, r, d, replications, common } => {
            let file = FileConfig::load(common.config.as_deref())?;
            let p = p.or(file.p).unwrap_or(10);
            let r = r.or(file.r).unwrap_or(0);
            let d = d.or(file.d);
            let replications = replications.or(file.replications).unwrap_or(10_000);
            let seed = common.seed.or(file.seed).unwrap_or(42);
            commands::cmd_risk_sim(p, r, d, replications, seed, &out_dir(&common))
        }
        Command::ReproducePaper { seeds, sampler, common } => {
            let file = FileConfig::load(common.config.as_deref())?;
            let cfg = resolve_sampler_config(&sampler, &common, &file)?;
            let seeds = seeds.or(file.seeds).unwrap_or(20);
            let spec = SyntheticSpec::reference();
            let summary = commands::cmd_reproduce_paper(seeds, &spec, &cfg, &out_dir(&common))?;
            for flag in &summary.seeds {
                eprintln!(
                    "seed {}: zero-modes<{} {}, hs<lasso {}, hs<ridge {}",
                    flag.seed,
                    commands::ZERO_MODE_THRESHOLD,
                    flag.hs_zero_modes_small,
                    flag.hs_median_below_lasso,
                    flag.hs_median_below_ridge
                );
            }
            eprintln!(
                "zero-mode seeds {}/{} (need {}), ordering {}, nonzero recovery {}",
                summary.zero_mode_pass_count,
                summary.seeds.len(),
                summary.zero_mode_pass_required,
                summary.median_ordering_all_seeds,
                summary.nonzero_recovery_ok
            );
            if summary.pass {
                Ok(())
            } else {
                Err(CliError::ThresholdFailure(
                    "reproduction thresholds not met; see acceptance.json".into(),
                ))
            }
        }
        Command::ConditionScan { eps_min, eps_max, points, alpha, common } => {
            let file = FileConfig::load(common.config.as_deref())?;
            commands::cmd_condition_scan(
                eps_min.or(file.eps_min).unwrap_or(1e-3),
                eps_max.or(file.eps_max).unwrap_or(10.0),
                points.or(file.points).unwrap_or(50),
                alpha.or(file.alpha).unwrap_or(1.0),
                common.seed.or(file.seed).unwrap_or(42),
                &out_dir(&common),
            )
        }
        Command::Contours { prior, grid_min, grid_max, points, budget, sampler, common } => {
            let file = FileConfig::load(common.config.as_deref())?;
            let cfg = resolve_sampler_config(&sampler, &common, &file)?;
            let choice = match prior.as_deref().or(file.prior.as_deref()) {
                Some(s) => PriorChoice::parse(s)?,
                None => PriorChoice::Ridge,
            };
            let spec = match choice {
                PriorChoice::Ridge => PriorSpec::Ridge { tau: cfg.tau },
                PriorChoice::Lasso => PriorSpec::Lasso { tau: cfg.tau },
                PriorChoice::Horseshoe => PriorSpec::Horseshoe { tau: cfg.tau },
                PriorChoice::SpikeSlab => PriorSpec::SpikeSlab {
                    theta: cfg.theta,
                    sigma_beta: cfg.slab_variance.sqrt(),
                },
                PriorChoice::All => {
                    return Err(CliError::Usage(
                        "contours needs a single prior, not all".into(),
                    ))
                }
            };
            commands::cmd_contours(
                &spec,
                grid_min.or(file.grid_min).unwrap_or(-2.0),
                grid_max.or(file.grid_max).unwrap_or(2.0),
                points.or(file.points).unwrap_or(50),
                budget.or(file.budget),
                common.seed.or(file.seed).unwrap_or(42),
                &out_dir(&common),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
