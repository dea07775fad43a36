//! James-Stein and thresholding estimators with Monte Carlo risk evaluation
//! on sparse r-spike signals.
//!
//! The observation model is y = θ + ε with ε ~ N(0, I) (unit noise; the risk
//! statements assume it). Risk is squared error E‖θ̂ − θ‖².

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::rng::RngStream;

#[derive(Debug, Error, PartialEq)]
pub enum RiskError {
    #[error("James-Stein needs dimension >= 3, got {0}")]
    DimensionTooSmall(usize),
    #[error("James-Stein is undefined at the zero vector")]
    ZeroVector,
    #[error("spike count r = {r} exceeds dimension p = {p}")]
    TooManySpikes { r: usize, p: usize },
    #[error("need at least {need} replications, got {got}")]
    TooFewReplications { got: usize, need: usize },
    #[error("signal energy must be nonnegative, got {0}")]
    NegativeEnergy(f64),
}

/// An r-spike signal: the first r coordinates equal √(d/p), the rest are 0,
/// so ‖θ‖² = r·d/p.
#[derive(Debug, Clone)]
pub struct SpikeSignal {
    pub p: usize,
    pub r: usize,
    /// The energy parameter d of the spike height √(d/p).
    pub total_energy: f64,
    pub theta: DVector<f64>,
}

impl SpikeSignal {
    pub fn new(p: usize, r: usize, d: f64) -> Result<Self, RiskError> {
        if r > p {
            return Err(RiskError::TooManySpikes { r, p });
        }
        if !(d >= 0.0) {
            return Err(RiskError::NegativeEnergy(d));
        }
        let height = (d / p as f64).sqrt();
        let theta = DVector::from_fn(p, |i, _| if i < r { height } else { 0.0 });
        Ok(SpikeSignal { p, r, total_energy: d, theta })
    }

    /// The default coupling d = r: unit-height spikes scaled by √(d/p).
    pub fn unit_spikes(p: usize, r: usize) -> Result<Self, RiskError> {
        Self::new(p, r, r as f64)
    }

    pub fn energy(&self) -> f64 {
        self.theta.norm_squared()
    }
}

/// Thresholding flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    Hard,
    Soft,
}

/// The estimators under study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    /// The identity estimator θ̂ = y.
    Mle,
    /// Plug-in global shrinkage (1 − (p−2)/‖y‖²)·y; `positive_part` clamps
    /// the shrinkage factor at zero.
    JamesStein { positive_part: bool },
    /// Coordinatewise thresholding at t.
    Threshold { t: f64, mode: ThresholdMode },
}

impl Estimator {
    pub fn label(&self) -> String {
        match self {
            Estimator::Mle => "mle".into(),
            Estimator::JamesStein { positive_part: false } => "james-stein".into(),
            Estimator::JamesStein { positive_part: true } => "james-stein-plus".into(),
            Estimator::Threshold { t, mode: ThresholdMode::Hard } => format!("hard({t:.4})"),
            Estimator::Threshold { t, mode: ThresholdMode::Soft } => format!("soft({t:.4})"),
        }
    }

    pub fn apply(&self, y: &DVector<f64>) -> Result<DVector<f64>, RiskError> {
        match *self {
            Estimator::Mle => Ok(y.clone()),
            Estimator::JamesStein { positive_part } => {
                james_stein_with(y, positive_part)
            }
            Estimator::Threshold { t, mode } => Ok(threshold_estimator(y, t, mode)),
        }
    }
}

fn james_stein_with(y: &DVector<f64>, positive_part: bool) -> Result<DVector<f64>, RiskError> {
    let p = y.len();
    if p < 3 {
        return Err(RiskError::DimensionTooSmall(p));
    }
    let norm_sq = y.norm_squared();
    if norm_sq == 0.0 {
        return Err(RiskError::ZeroVector);
    }
    let mut factor = 1.0 - (p as f64 - 2.0) / norm_sq;
    if positive_part {
        factor = factor.max(0.0);
    }
    Ok(y * factor)
}

/// The plain James-Stein estimator (no positive-part correction).
pub fn james_stein(y: &DVector<f64>) -> Result<DVector<f64>, RiskError> {
    james_stein_with(y, false)
}

/// Hard or soft coordinatewise thresholding at t ≥ 0.
pub fn threshold_estimator(y: &DVector<f64>, t: f64, mode: ThresholdMode) -> DVector<f64> {
    assert!(t >= 0.0, "threshold must be nonnegative");
    match mode {
        ThresholdMode::Hard => y.map(|v| if v.abs() > t { v } else { 0.0 }),
        ThresholdMode::Soft => y.map(|v| v.signum() * (v.abs() - t).max(0.0)),
    }
}

/// The universal threshold √(2 log p).
pub fn universal_threshold(p: usize) -> f64 {
    (2.0 * (p as f64).ln()).sqrt()
}

/// Monte Carlo risk of one estimator at a fixed signal.
#[derive(Debug, Clone)]
pub struct RiskReport {
    pub estimator: String,
    pub mc_risk: f64,
    pub mc_se: f64,
    /// James-Stein risk bounds when they apply to this estimator.
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    pub replications: usize,
}

/// The James-Stein risk sandwich evaluated exactly as printed:
/// p‖θ‖²/(p + ‖θ‖²) ≤ R ≤ 2 + p‖θ‖²/(d + ‖θ‖²).
#[derive(Debug, Clone, Copy)]
pub struct JsBounds {
    pub lower: f64,
    pub upper: f64,
}

impl JsBounds {
    /// The printed bounds can cross for some energy parameters d; downstream
    /// checks apply only where they are consistent.
    pub fn consistent(&self) -> bool {
        self.lower <= self.upper
    }
}

pub fn js_bounds(signal: &SpikeSignal) -> JsBounds {
    let p = signal.p as f64;
    let energy = signal.energy();
    // At the zero signal both ratio terms vanish (0/0 in the printed form
    // when d = 0 as well; the origin value is 2).
    let upper_ratio = if energy > 0.0 {
        p * energy / (signal.total_energy + energy)
    } else {
        0.0
    };
    JsBounds { lower: p * energy / (p + energy), upper: 2.0 + upper_ratio }
}

fn kahan_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for &v in values {
        let t = v - c;
        let s = sum + t;
        c = (s - sum) - t;
        sum = s;
    }
    sum
}

/// Monte Carlo risk estimate over `replications` draws of y = θ + ε.
///
/// Replications run in parallel, each on its own derived substream; the
/// reduction is a sequential compensated sum over the replication-ordered
/// losses, so results are independent of scheduling.
pub fn mc_risk(
    stream: RngStream,
    estimator: Estimator,
    signal: &SpikeSignal,
    replications: usize,
) -> Result<RiskReport, RiskError> {
    if replications < 1000 {
        return Err(RiskError::TooFewReplications { got: replications, need: 1000 });
    }
    let losses: Vec<f64> = (0..replications)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream.substream(rep as u64).rng();
            let y = DVector::from_fn(signal.p, |i, _| {
                signal.theta[i] + rng.sample::<f64, _>(StandardNormal)
            });
            let estimate = estimator
                .apply(&y)
                .expect("continuous noise cannot produce the zero vector");
            (estimate - &signal.theta).norm_squared()
        })
        .collect();
    let n = replications as f64;
    let mean = kahan_sum(&losses) / n;
    let centered_sq: Vec<f64> = losses.iter().map(|l| (l - mean) * (l - mean)).collect();
    let var = kahan_sum(&centered_sq) / (n - 1.0);
    let se = (var / n).sqrt();
    let bounds = match estimator {
        Estimator::JamesStein { positive_part: false } => Some(js_bounds(signal)),
        _ => None,
    };
    Ok(RiskReport {
        estimator: estimator.label(),
        mc_risk: mean,
        mc_se: se,
        lower_bound: bounds.map(|b| b.lower),
        upper_bound: bounds.map(|b| b.upper),
        replications,
    })
}

/// Risk comparison of MLE, James-Stein, and hard/soft thresholding at the
/// universal threshold, sorted by estimated risk.
pub fn js_vs_threshold_experiment(
    stream: RngStream,
    p: usize,
    r: usize,
    d: f64,
    replications: usize,
) -> Result<Vec<RiskReport>, RiskError> {
    if p < 3 {
        return Err(RiskError::DimensionTooSmall(p));
    }
    let signal = SpikeSignal::new(p, r, d)?;
    let t = universal_threshold(p);
    let estimators = [
        Estimator::Mle,
        Estimator::JamesStein { positive_part: false },
        Estimator::Threshold { t, mode: ThresholdMode::Hard },
        Estimator::Threshold { t, mode: ThresholdMode::Soft },
    ];
    let mut reports = estimators
        .iter()
        .enumerate()
        .map(|(k, est)| mc_risk(stream.substream(u64::MAX - k as u64), *est, &signal, replications))
        .collect::<Result<Vec<_>, _>>()?;
    reports.sort_by(|a, b| a.mc_risk.partial_cmp(&b.mc_risk).unwrap());
    Ok(reports)
}

/// Write reports as CSV with header `estimator,risk,se,lower,upper`.
pub fn write_risk_csv<W: std::io::Write>(
    reports: &[RiskReport],
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "estimator,risk,se,lower,upper")?;
    for r in reports {
        let fmt = |o: Option<f64>| o.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{}",
            r.estimator,
            r.mc_risk,
            r.mc_se,
            fmt(r.lower_bound),
            fmt(r.upper_bound)
        )?;
    }
    Ok(())
}
