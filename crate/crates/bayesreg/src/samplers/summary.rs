//! Posterior summaries: mean, median, kernel-density mode, central interval,
//! and effective sample size.

use serde::Serialize;

use super::{PosteriorSamples, SamplerError};
use crate::dataset::Dataset;

/// Minimum retained states for a meaningful summary.
pub const MIN_RETAINED: usize = 100;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CoefficientSummary {
    pub mean: f64,
    pub median: f64,
    /// Argmax of a Gaussian kernel density estimate (Silverman bandwidth,
    /// 512-point grid over the sample range).
    pub mode: f64,
    pub lower95: f64,
    pub upper95: f64,
    pub ess: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryReport {
    pub retained: usize,
    pub coefficients: Vec<CoefficientSummary>,
    pub sigma2: CoefficientSummary,
}

/// Linear-interpolation quantile of a sorted slice.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Gaussian KDE argmax on a 512-point grid over the sample range.
fn kde_mode(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let sd = (sorted.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64).sqrt();
    let iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    let h = 0.9 * spread * (n as f64).powf(-0.2);
    if !(h > 0.0) {
        // Degenerate chain; the median is the mode.
        return quantile_sorted(sorted, 0.5);
    }
    let (lo, hi) = (sorted[0], sorted[n - 1]);
    const GRID: usize = 512;
    let window = 6.0 * h;
    let mut best = (f64::NEG_INFINITY, lo);
    for g in 0..GRID {
        let x = lo + (hi - lo) * g as f64 / (GRID - 1) as f64;
        // Only samples within the kernel window contribute materially.
        let start = sorted.partition_point(|&s| s < x - window);
        let end = sorted.partition_point(|&s| s <= x + window);
        let mut density = 0.0;
        for &s in &sorted[start..end] {
            let z = (x - s) / h;
            density += (-0.5 * z * z).exp();
        }
        if density > best.0 {
            best = (density, x);
        }
    }
    best.1
}

/// Effective sample size by Geyer's initial positive sequence: the
/// autocovariance pair sums Γ_m = γ_{2m} + γ_{2m+1} are accumulated while
/// they stay positive, giving the integrated autocorrelation time
/// τ = (2 ΣΓ_m − γ₀)/γ₀ and ESS = n/τ, clamped to (0, n].
///
/// A chain with zero variance reports ESS = n by convention.
fn ess_initial_positive(series: &[f64]) -> f64 {
    let n = series.len();
    let nf = n as f64;
    let mean = series.iter().sum::<f64>() / nf;
    let gamma0 = series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / nf;
    if gamma0 <= 0.0 || !gamma0.is_finite() {
        return nf;
    }
    let autocov = |k: usize| -> f64 {
        series[..n - k]
            .iter()
            .zip(&series[k..])
            .map(|(a, b)| (a - mean) * (b - mean))
            .sum::<f64>()
            / nf
    };
    let mut sum_pairs = 0.0;
    let mut m = 0;
    loop {
        let k0 = 2 * m;
        let k1 = 2 * m + 1;
        if k1 >= n {
            break;
        }
        let pair = autocov(k0) + autocov(k1);
        if pair <= 0.0 {
            break;
        }
        sum_pairs += pair;
        m += 1;
    }
    let tau = ((2.0 * sum_pairs - gamma0) / gamma0).max(1.0 / nf);
    (nf / tau).min(nf)
}

/// Summary of one scalar chain.
pub fn summarize_series(series: &[f64]) -> CoefficientSummary {
    let n = series.len();
    let mut sorted = series.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    CoefficientSummary {
        mean: series.iter().sum::<f64>() / n as f64,
        median: quantile_sorted(&sorted, 0.5),
        mode: kde_mode(&sorted),
        lower95: quantile_sorted(&sorted, 0.025),
        upper95: quantile_sorted(&sorted, 0.975),
        ess: ess_initial_positive(series),
    }
}

fn summarize_with_scale(
    samples: &PosteriorSamples,
    scale: Option<&Dataset>,
) -> Result<SummaryReport, SamplerError> {
    let retained = samples.retained();
    if retained < MIN_RETAINED {
        return Err(SamplerError::InsufficientSamples { got: retained, need: MIN_RETAINED });
    }
    let p = samples.states[0].beta.len();
    let mut coefficients = Vec::with_capacity(p);
    for j in 0..p {
        let factor = scale.map(|d| 1.0 / d.col_sds[j]).unwrap_or(1.0);
        let series: Vec<f64> = samples.states.iter().map(|s| s.beta[j] * factor).collect();
        coefficients.push(summarize_series(&series));
    }
    let sigma2_series: Vec<f64> = samples.states.iter().map(|s| s.sigma2).collect();
    Ok(SummaryReport { retained, coefficients, sigma2: summarize_series(&sigma2_series) })
}

/// Summaries of the coefficient chains on the scale they were sampled on.
pub fn summarize(samples: &PosteriorSamples) -> Result<SummaryReport, SamplerError> {
    summarize_with_scale(samples, None)
}

/// Summaries with each coefficient chain mapped back to the original
/// (unstandardized) scale of `d` before summarizing.
pub fn summarize_rescaled(
    samples: &PosteriorSamples,
    d: &Dataset,
) -> Result<SummaryReport, SamplerError> {
    summarize_with_scale(samples, Some(d))
}
