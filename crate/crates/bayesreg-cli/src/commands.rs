//! Subcommand implementations.

use std::path::Path;

use bayesreg::dataset::Dataset;
use bayesreg::model::{condition_scan, ols_fit, ridge_fit};
use bayesreg::priors::{penalty, penalty_contours, GridSpec, PriorSpec};
use bayesreg::risk::{js_vs_threshold_experiment, write_risk_csv};
use bayesreg::rng::RngStream;
use bayesreg::samplers::{
    horseshoe_gibbs_run, inclusion_probabilities, lasso_gibbs_run, spike_slab_gibbs_run,
    summarize_rescaled, PosteriorSamples, SummaryReport,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::artifacts::{
    prepare_out_dir, write_csv_artifact, write_json_artifact, ArtifactMeta,
};
use crate::config::{config_hash, PriorChoice, SamplerConfig};
use crate::csvio::load_csv;
use crate::error::CliError;
use crate::synth::{dataset_to_csv, generate_synthetic, SyntheticSpec};

/// Stream ids reserved per purpose so data generation and the samplers never
/// share a stream.
const STREAM_DATA: u64 = 1_000;
const STREAM_LASSO: u64 = 0;
const STREAM_HORSESHOE: u64 = 1;
const STREAM_SPIKE_SLAB: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SampledPrior {
    Lasso,
    Horseshoe,
    SpikeSlab,
}

impl SampledPrior {
    fn label(&self) -> &'static str {
        match self {
            SampledPrior::Lasso => "lasso",
            SampledPrior::Horseshoe => "horseshoe",
            SampledPrior::SpikeSlab => "spike-slab",
        }
    }

    fn base_stream(&self) -> u64 {
        match self {
            SampledPrior::Lasso => STREAM_LASSO,
            SampledPrior::Horseshoe => STREAM_HORSESHOE,
            SampledPrior::SpikeSlab => STREAM_SPIKE_SLAB,
        }
    }
}

/// Run `chains` independent chains of one sampler, each on its own stream.
fn run_chains(
    kind: SampledPrior,
    d: &Dataset,
    cfg: &SamplerConfig,
) -> Result<Vec<PosteriorSamples>, CliError> {
    (0..cfg.chains)
        .into_par_iter()
        .map(|c| {
            let stream = RngStream::new(cfg.seed, kind.base_stream() + 10 * c as u64);
            let run = match kind {
                SampledPrior::Lasso => lasso_gibbs_run(
                    stream,
                    d,
                    cfg.iters,
                    cfg.burn_in,
                    cfg.thin,
                    cfg.lambda_mode,
                ),
                SampledPrior::Horseshoe => {
                    horseshoe_gibbs_run(stream, d, cfg.iters, cfg.burn_in, cfg.thin)
                }
                SampledPrior::SpikeSlab => spike_slab_gibbs_run(
                    stream,
                    d,
                    cfg.theta,
                    cfg.slab_variance,
                    cfg.iters,
                    cfg.burn_in,
                    cfg.thin,
                ),
            };
            run.map_err(CliError::from)
        })
        .collect()
}

/// Pool retained states across chains into one sample set for summarizing.
fn pool_chains(chains: &[PosteriorSamples]) -> PosteriorSamples {
    let mut pooled = chains[0].clone();
    for c in &chains[1..] {
        pooled.states.extend(c.states.iter().cloned());
    }
    pooled
}

/// Samples CSV with a leading chain column.
fn samples_csv(chains: &[PosteriorSamples]) -> String {
    let mut out = String::new();
    out.push_str("chain,");
    out.push_str(&chains[0].csv_header());
    out.push('\n');
    for (k, chain) in chains.iter().enumerate() {
        for state in &chain.states {
            out.push_str(&format!("{k},{}\n", state.csv_row()));
        }
    }
    out
}

#[derive(Debug, Serialize)]
struct SummaryArtifact {
    prior: String,
    #[serde(flatten)]
    report: SummaryReport,
}

#[derive(Debug, Clone)]
struct EstimateRow {
    method: String,
    values: Vec<f64>,
}

fn estimates_csv(rows: &[EstimateRow]) -> String {
    let mut out = String::from("method,coef,estimate\n");
    for row in rows {
        for (j, v) in row.values.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", row.method, j + 1, v));
        }
    }
    out
}

fn modes_of(report: &SummaryReport) -> Vec<f64> {
    report.coefficients.iter().map(|c| c.mode).collect()
}

/// `fit`: sample the requested priors on a CSV dataset, write samples,
/// summaries, and the per-method point-estimate table.
pub fn cmd_fit(
    input: &Path,
    prior: PriorChoice,
    cfg: &SamplerConfig,
    out_dir: &Path,
) -> Result<(), CliError> {
    cfg.validate()?;
    prepare_out_dir(out_dir)?;
    let (x, y) = load_csv(input)?;
    let d = bayesreg::standardize(x, y)?;
    let meta = ArtifactMeta::new(cfg.seed, config_hash(cfg));

    let mut rows: Vec<EstimateRow> = Vec::new();
    let ols = ols_fit(&d)?;
    rows.push(EstimateRow { method: "ols".into(), values: ols.beta_raw.iter().copied().collect() });

    for choice in prior.expand() {
        match choice {
            PriorChoice::Ridge => {
                let fit = ridge_fit(&d, cfg.ridge_lambda)?;
                rows.push(EstimateRow {
                    method: "ridge-map".into(),
                    values: fit.beta_raw.iter().copied().collect(),
                });
            }
            PriorChoice::Lasso | PriorChoice::Horseshoe | PriorChoice::SpikeSlab => {
                let kind = match choice {
                    PriorChoice::Lasso => SampledPrior::Lasso,
                    PriorChoice::Horseshoe => SampledPrior::Horseshoe,
                    _ => SampledPrior::SpikeSlab,
                };
                let chains = run_chains(kind, &d, cfg)?;
                let pooled = pool_chains(&chains);
                let report = summarize_rescaled(&pooled, &d)?;
                write_csv_artifact(
                    out_dir,
                    &format!("samples_{}.csv", kind.label()),
                    &meta,
                    &samples_csv(&chains),
                )?;
                write_json_artifact(
                    out_dir,
                    &format!("summary_{}.json", kind.label()),
                    &meta,
                    &SummaryArtifact { prior: kind.label().into(), report: report.clone() },
                )?;
                rows.push(EstimateRow {
                    method: format!("{}-mode", kind.label()),
                    values: modes_of(&report),
                });
                if kind == SampledPrior::SpikeSlab {
                    let incl = inclusion_probabilities(&pooled).ok_or_else(|| {
                        CliError::Numerical("no spike-and-slab states retained".into())
                    })?;
                    rows.push(EstimateRow {
                        method: "spike-slab-inclusion".into(),
                        values: incl.iter().copied().collect(),
                    });
                }
            }
            PriorChoice::All => unreachable!("expand() never yields All"),
        }
    }

    write_csv_artifact(out_dir, "estimates.csv", &meta, &estimates_csv(&rows))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// reproduce-paper

/// Recovery tolerance for the nonzero coefficients (median over seeds).
pub const NONZERO_TOL: f64 = 0.75;
/// Zero-coefficient mode threshold for the horseshoe.
pub const ZERO_MODE_THRESHOLD: f64 = 0.15;
/// Fraction of seeds that must satisfy the zero-mode threshold.
pub const ZERO_SEED_FRACTION: f64 = 0.8;

#[derive(Debug, Serialize)]
pub struct SeedFlags {
    pub seed: u64,
    pub hs_zero_modes_small: bool,
    pub hs_median_below_lasso: bool,
    pub hs_median_below_ridge: bool,
    pub max_abs_zero_mode: f64,
}

#[derive(Debug, Serialize)]
pub struct ReproductionSummary {
    pub seeds: Vec<SeedFlags>,
    pub zero_mode_pass_count: usize,
    pub zero_mode_pass_required: usize,
    pub median_ordering_all_seeds: bool,
    pub nonzero_recovery_ok: bool,
    pub nonzero_recovery_detail: Vec<NonzeroRecovery>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct NonzeroRecovery {
    pub method: String,
    pub coef: usize,
    pub true_beta: f64,
    pub median_estimate: f64,
    pub within_tolerance: bool,
}

fn median(values: &mut Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

struct SeedFit {
    seed: u64,
    /// method label -> per-coefficient point estimates on the raw scale.
    estimates: Vec<(String, Vec<f64>)>,
}

fn fit_one_seed(
    base_seed: u64,
    k: u64,
    spec: &SyntheticSpec,
    cfg: &SamplerConfig,
    out_dir: &Path,
    meta: &ArtifactMeta,
) -> Result<SeedFit, CliError> {
    let seed = base_seed + k;
    let data_stream = RngStream::new(seed, STREAM_DATA);
    let (d, _truth) = generate_synthetic(data_stream, spec)?;
    write_csv_artifact(out_dir, &format!("data_seed{k}.csv"), meta, &dataset_to_csv(&d))?;

    let ols = ols_fit(&d)?;
    let ridge = ridge_fit(&d, cfg.ridge_lambda)?;
    let lasso = lasso_gibbs_run(
        RngStream::new(seed, STREAM_LASSO),
        &d,
        cfg.iters,
        cfg.burn_in,
        cfg.thin,
        cfg.lambda_mode,
    )?;
    let horseshoe = horseshoe_gibbs_run(
        RngStream::new(seed, STREAM_HORSESHOE),
        &d,
        cfg.iters,
        cfg.burn_in,
        cfg.thin,
    )?;
    let lasso_modes = modes_of(&summarize_rescaled(&lasso, &d)?);
    let hs_modes = modes_of(&summarize_rescaled(&horseshoe, &d)?);

    Ok(SeedFit {
        seed,
        estimates: vec![
            ("ols".into(), ols.beta_raw.iter().copied().collect()),
            ("ridge-map".into(), ridge.beta_raw.iter().copied().collect()),
            ("lasso-mode".into(), lasso_modes),
            ("horseshoe-mode".into(), hs_modes),
        ],
    })
}

/// `reproduce-paper`: run the synthetic experiment over a seed set, emit the
/// per-method mode table, and check the reproduction thresholds.
pub fn cmd_reproduce_paper(
    seeds: usize,
    spec: &SyntheticSpec,
    cfg: &SamplerConfig,
    out_dir: &Path,
) -> Result<ReproductionSummary, CliError> {
    cfg.validate()?;
    if seeds == 0 {
        return Err(CliError::Usage("need at least one seed".into()));
    }
    spec.validate()?;
    prepare_out_dir(out_dir)?;
    let meta = ArtifactMeta::new(cfg.seed, config_hash(cfg));

    let fits: Vec<SeedFit> = (0..seeds as u64)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| fit_one_seed(cfg.seed, k, spec, cfg, out_dir, &meta))
        .collect::<Result<Vec<_>, _>>()?;

    // Fig-3 style table: one row per (seed, method, coefficient).
    let mut table = String::from("seed,method,coef,estimate,true_beta\n");
    for fit in &fits {
        for (method, values) in &fit.estimates {
            for (j, v) in values.iter().enumerate() {
                table.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fit.seed,
                    method,
                    j + 1,
                    v,
                    spec.beta_true[j]
                ));
            }
        }
    }
    write_csv_artifact(out_dir, "reproduction.csv", &meta, &table)?;

    let zero_idx: Vec<usize> = spec
        .beta_true
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 0.0)
        .map(|(j, _)| j)
        .collect();
    let nonzero_idx: Vec<usize> = (0..spec.beta_true.len())
        .filter(|j| !zero_idx.contains(j))
        .collect();

    let estimates_for = |fit: &SeedFit, method: &str| -> Vec<f64> {
        fit.estimates
            .iter()
            .find(|(m, _)| m == method)
            .map(|(_, v)| v.clone())
            .expect("method present")
    };

    let mut seed_flags = Vec::with_capacity(seeds);
    for fit in &fits {
        let hs = estimates_for(fit, "horseshoe-mode");
        let lasso = estimates_for(fit, "lasso-mode");
        let ridge = estimates_for(fit, "ridge-map");
        let mut hs_abs: Vec<f64> = zero_idx.iter().map(|&j| hs[j].abs()).collect();
        let mut lasso_abs: Vec<f64> = zero_idx.iter().map(|&j| lasso[j].abs()).collect();
        let mut ridge_abs: Vec<f64> = zero_idx.iter().map(|&j| ridge[j].abs()).collect();
        let max_abs = hs_abs.iter().copied().fold(0.0, f64::max);
        let hs_med = median(&mut hs_abs);
        seed_flags.push(SeedFlags {
            seed: fit.seed,
            hs_zero_modes_small: max_abs < ZERO_MODE_THRESHOLD,
            hs_median_below_lasso: hs_med < median(&mut lasso_abs),
            hs_median_below_ridge: hs_med < median(&mut ridge_abs),
            max_abs_zero_mode: max_abs,
        });
    }

    let zero_mode_pass_count = seed_flags.iter().filter(|f| f.hs_zero_modes_small).count();
    let zero_mode_pass_required = (ZERO_SEED_FRACTION * seeds as f64).ceil() as usize;
    let median_ordering_all_seeds = seed_flags
        .iter()
        .all(|f| f.hs_median_below_lasso && f.hs_median_below_ridge);

    let methods = ["ols", "ridge-map", "lasso-mode", "horseshoe-mode"];
    let mut nonzero_recovery_detail = Vec::new();
    let mut nonzero_recovery_ok = true;
    for method in methods {
        for &j in &nonzero_idx {
            let mut vals: Vec<f64> = fits.iter().map(|f| estimates_for(f, method)[j]).collect();
            let med = median(&mut vals);
            let ok = (med - spec.beta_true[j]).abs() <= NONZERO_TOL;
            nonzero_recovery_ok &= ok;
            nonzero_recovery_detail.push(NonzeroRecovery {
                method: method.into(),
                coef: j + 1,
                true_beta: spec.beta_true[j],
                median_estimate: med,
                within_tolerance: ok,
            });
        }
    }

    let pass = zero_mode_pass_count >= zero_mode_pass_required
        && median_ordering_all_seeds
        && nonzero_recovery_ok;

    let summary = ReproductionSummary {
        seeds: seed_flags,
        zero_mode_pass_count,
        zero_mode_pass_required,
        median_ordering_all_seeds,
        nonzero_recovery_ok,
        nonzero_recovery_detail,
        pass,
    };
    write_json_artifact(out_dir, "acceptance.json", &meta, &summary)?;
    Ok(summary)
}

// ---------------------------------------------------------------------------
// risk-sim

/// `risk-sim`: the James-Stein versus thresholding comparison table.
pub fn cmd_risk_sim(
    p: usize,
    r: usize,
    d: Option<f64>,
    replications: usize,
    seed: u64,
    out_dir: &Path,
) -> Result<(), CliError> {
    prepare_out_dir(out_dir)?;
    let d = d.unwrap_or(r as f64);
    #[derive(Serialize)]
    struct RiskConfig {
        p: usize,
        r: usize,
        d: f64,
        replications: usize,
        seed: u64,
    }
    let cfg = RiskConfig { p, r, d, replications, seed };
    let meta = ArtifactMeta::new(seed, config_hash(&cfg));
    let reports =
        js_vs_threshold_experiment(RngStream::new(seed, 0), p, r, d, replications)?;
    let mut buf = Vec::new();
    write_risk_csv(&reports, &mut buf).map_err(CliError::from)?;
    write_csv_artifact(out_dir, "risk.csv", &meta, &String::from_utf8_lossy(&buf))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// condition-scan

/// `condition-scan`: κ(ε) and κ after the spectrum shift on a log grid.
pub fn cmd_condition_scan(
    eps_min: f64,
    eps_max: f64,
    points: usize,
    alpha: f64,
    seed: u64,
    out_dir: &Path,
) -> Result<(), CliError> {
    if !(eps_min > 0.0 && eps_max > eps_min) {
        return Err(CliError::Usage(format!(
            "need 0 < eps-min < eps-max, got [{eps_min}, {eps_max}]"
        )));
    }
    if points < 2 {
        return Err(CliError::Usage("need at least 2 grid points".into()));
    }
    if !(alpha >= 0.0) {
        return Err(CliError::Usage(format!("alpha must be >= 0, got {alpha}")));
    }
    prepare_out_dir(out_dir)?;
    #[derive(Serialize)]
    struct ScanConfig {
        eps_min: f64,
        eps_max: f64,
        points: usize,
        alpha: f64,
        seed: u64,
    }
    let cfg = ScanConfig { eps_min, eps_max, points, alpha, seed };
    let meta = ArtifactMeta::new(seed, config_hash(&cfg));
    let grid: Vec<f64> = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            (eps_min.ln() + t * (eps_max.ln() - eps_min.ln())).exp()
        })
        .collect();
    let rows = condition_scan(&grid, alpha);
    let mut data = String::from("eps,kappa,kappa_shifted\n");
    for row in rows {
        data.push_str(&format!("{},{},{}\n", row.eps, row.kappa, row.kappa_shifted));
    }
    write_csv_artifact(out_dir, "condition.csv", &meta, &data)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// contours

/// `contours`: the two-coefficient penalty surface as CSV grid data.
pub fn cmd_contours(
    prior: &PriorSpec,
    grid_min: f64,
    grid_max: f64,
    points: usize,
    budget: Option<f64>,
    seed: u64,
    out_dir: &Path,
) -> Result<(), CliError> {
    prepare_out_dir(out_dir)?;
    let budget = match budget {
        Some(b) => b,
        // Default level set: the penalty budget spent by beta = (1, 1).
        None => 2.0 * penalty(prior, 1.0)?,
    };
    #[derive(Serialize)]
    struct ContourConfig<'a> {
        prior: &'a PriorSpec,
        grid_min: f64,
        grid_max: f64,
        points: usize,
        budget: f64,
        seed: u64,
    }
    let cfg = ContourConfig { prior, grid_min, grid_max, points, budget, seed };
    let meta = ArtifactMeta::new(seed, config_hash(&cfg));
    let grid = GridSpec {
        beta1_range: (grid_min, grid_max),
        beta2_range: (grid_min, grid_max),
        points_per_axis: points,
    };
    let pg = penalty_contours(prior, &grid, budget)?;
    let mut buf = Vec::new();
    pg.write_csv(&mut buf).map_err(CliError::from)?;
    let mut data = format!("# budget={budget}\n");
    data.push_str(&String::from_utf8_lossy(&buf));
    write_csv_artifact(out_dir, "contours.csv", &meta, &data)?;
    Ok(())
}
