//! Shrinkage priors and their penalty functions.
//!
//! Each prior is a per-coefficient density p(β|·) whose negative log, up to an
//! additive constant, is the penalty attached to that coefficient in the MAP
//! objective. The horseshoe has no closed-form density; it is represented by
//! its penalty bound −log log(1 + 2τ²/β²) for reporting, and by numerical
//! quadrature of its half-Cauchy scale mixture when an actual density value
//! is needed.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DVector;
use thiserror::Error;

use crate::dataset::Dataset;
use crate::quad::{self, QuadError};

#[derive(Debug, Error, PartialEq)]
pub enum PriorError {
    #[error("invalid prior hyperparameter: {0}")]
    InvalidSpec(String),
    #[error("horseshoe penalty is undefined at beta = 0")]
    UndefinedAtZero,
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A choice of shrinkage prior with its hyperparameters.
///
/// `SpikeSlab::sigma_beta` is the slab standard deviation; the slab variance
/// is written σ² in some displays and σ_β² in others, and a single
/// hyperparameter covers both.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PriorSpec {
    Ridge { tau: f64 },
    Lasso { tau: f64 },
    Cauchy { tau: f64 },
    Horseshoe { tau: f64 },
    SpikeSlab { theta: f64, sigma_beta: f64 },
}

impl PriorSpec {
    pub fn validate(&self) -> Result<(), PriorError> {
        let bad = |msg: String| Err(PriorError::InvalidSpec(msg));
        match *self {
            PriorSpec::Ridge { tau }
            | PriorSpec::Lasso { tau }
            | PriorSpec::Cauchy { tau }
            | PriorSpec::Horseshoe { tau } => {
                if !(tau > 0.0) {
                    return bad(format!("scale tau must be > 0, got {tau}"));
                }
            }
            PriorSpec::SpikeSlab { theta, sigma_beta } => {
                if !(theta > 0.0 && theta < 1.0) {
                    return bad(format!("theta must lie in (0,1), got {theta}"));
                }
                if !(sigma_beta > 0.0) {
                    return bad(format!("sigma_beta must be > 0, got {sigma_beta}"));
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &'static str {
        match self {
            PriorSpec::Ridge { .. } => "ridge",
            PriorSpec::Lasso { .. } => "lasso",
            PriorSpec::Cauchy { .. } => "cauchy",
            PriorSpec::Horseshoe { .. } => "horseshoe",
            PriorSpec::SpikeSlab { .. } => "spike-slab",
        }
    }
}

/// Log prior density at a single coefficient.
///
/// Exact for ridge, lasso, and Cauchy. The horseshoe returns the log of its
/// bound surrogate log(1 + 2τ²/β²), which carries no normalizing constant
/// and diverges to +∞ at the origin (the infinite spike). The spike-and-slab
/// returns the log of its absolutely continuous part θ·N(β; 0, σ_β²) away
/// from zero and +∞ at the point mass.
pub fn log_prior(prior: &PriorSpec, beta: f64) -> f64 {
    match *prior {
        PriorSpec::Ridge { tau } => {
            -0.5 * (2.0 * PI).ln() - tau.ln() - beta * beta / (2.0 * tau * tau)
        }
        PriorSpec::Lasso { tau } => -(2.0 * tau).ln() - beta.abs() / tau,
        PriorSpec::Cauchy { tau } => tau.ln() - PI.ln() - (tau * tau + beta * beta).ln(),
        PriorSpec::Horseshoe { tau } => {
            if beta == 0.0 {
                f64::INFINITY
            } else {
                (2.0 * tau * tau / (beta * beta)).ln_1p().ln()
            }
        }
        PriorSpec::SpikeSlab { theta, sigma_beta } => {
            if beta == 0.0 {
                f64::INFINITY
            } else {
                theta.ln() - 0.5 * (2.0 * PI).ln() - sigma_beta.ln()
                    - beta * beta / (2.0 * sigma_beta * sigma_beta)
            }
        }
    }
}

/// Penalty φ_τ(β): the negative log prior up to an additive constant.
///
/// Spike-and-slab uses the selection form β²/(2σ_β²) + log((1−θ)/θ)·1[β≠0],
/// i.e. the per-coefficient term of its negative log posterior.
pub fn penalty(prior: &PriorSpec, beta: f64) -> Result<f64, PriorError> {
    Ok(match *prior {
        PriorSpec::Ridge { tau } => beta * beta / (2.0 * tau * tau),
        PriorSpec::Lasso { tau } => beta.abs() / tau,
        PriorSpec::Cauchy { tau } => (tau * tau + beta * beta).ln(),
        PriorSpec::Horseshoe { tau } => horseshoe_penalty(tau, beta)?,
        PriorSpec::SpikeSlab { theta, sigma_beta } => {
            if beta == 0.0 {
                0.0
            } else {
                beta * beta / (2.0 * sigma_beta * sigma_beta) + ((1.0 - theta) / theta).ln()
            }
        }
    })
}

/// The horseshoe penalty bound −log log(1 + 2τ²/β²).
///
/// Monotone increasing in |β| and diverging to −∞ as β → 0.
pub fn horseshoe_penalty(tau: f64, beta: f64) -> Result<f64, PriorError> {
    if !(tau > 0.0) {
        return Err(PriorError::InvalidSpec(format!("tau must be > 0, got {tau}")));
    }
    if beta == 0.0 {
        return Err(PriorError::UndefinedAtZero);
    }
    Ok(-(2.0 * tau * tau / (beta * beta)).ln_1p().ln())
}

/// Horseshoe density by quadrature of its scale mixture
/// ∫₀^∞ N(β; 0, τ²λ²) · (2/π)/(1+λ²) dλ, to relative tolerance `tol`.
///
/// The substitution λ = tan(u) absorbs the half-Cauchy weight exactly:
/// p(β) = (2/π) ∫₀^{π/2} N(β; 0, τ² tan²u) du. Returns +∞ at β = 0 (the
/// infinite spike).
pub fn horseshoe_density_quadrature(tau: f64, beta: f64, tol: f64) -> Result<f64, PriorError> {
    if !(tau > 0.0) || !(tol > 0.0) {
        return Err(PriorError::InvalidSpec(format!(
            "need tau > 0 and tol > 0, got tau={tau}, tol={tol}"
        )));
    }
    if beta == 0.0 {
        return Ok(f64::INFINITY);
    }
    let b = beta.abs();
    let f = move |u: f64| {
        let s = tau * u.tan();
        if s <= 0.0 || !s.is_finite() {
            return 0.0;
        }
        (-(b * b) / (2.0 * s * s)).exp() / ((2.0 * PI).sqrt() * s)
    };
    // The integrand peaks where the mixture scale matches |β|; bracket it.
    let peak = (b / tau).atan();
    let breakpoints = [
        (0.25 * b / tau).atan(),
        peak,
        (4.0 * b / tau).atan(),
    ];
    let v = quad::integrate(f, 0.0, std::f64::consts::FRAC_PI_2, tol, &breakpoints)?;
    Ok(2.0 / PI * v)
}

/// Total mass of the horseshoe density, by an outer quadrature over β with the
/// same tan substitution. Used by tests and diagnostics; should be 1.
pub fn horseshoe_total_mass(tau: f64, inner_tol: f64, outer_tol: f64) -> Result<f64, PriorError> {
    let f = move |v: f64| {
        let beta = v.tan();
        if !beta.is_finite() {
            return 0.0;
        }
        let sec2 = 1.0 + beta * beta;
        horseshoe_density_quadrature(tau, beta, inner_tol).unwrap_or(0.0) * sec2
    };
    // Breakpoints cover the log-singular spike near 0 and the scale region.
    let breakpoints: Vec<f64> = [1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0]
        .iter()
        .map(|&b| (b * tau).atan())
        .collect();
    let half = quad::integrate(f, 0.0, std::f64::consts::FRAC_PI_2, outer_tol, &breakpoints)?;
    Ok(2.0 * half)
}

/// Verify the Laplace scale-mixture identity behind the lasso Gibbs sampler:
/// ∫₀^∞ (2πτ)^{-1/2} exp(−β²/(2σ²τ)) · (α²/2) exp(−α²τ/2) dτ
///   = (α/(2σ)) exp(−(α/σ)|β|).
///
/// Returns (numerically integrated mixture, closed form). Agreement within
/// the caller's tolerance certifies the identity on that point.
pub fn laplace_mixture_check(
    alpha: f64,
    sigma: f64,
    beta: f64,
    tol: f64,
) -> Result<(f64, f64), PriorError> {
    if !(alpha > 0.0 && sigma > 0.0) {
        return Err(PriorError::InvalidSpec(format!(
            "need alpha > 0 and sigma > 0, got alpha={alpha}, sigma={sigma}"
        )));
    }
    let closed_form = alpha / (2.0 * sigma) * (-(alpha / sigma) * beta.abs()).exp();
    // Substituting τ = w² removes the τ^{-1/2} singularity at the origin.
    let b2 = beta * beta;
    let f = move |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        (2.0 / PI).sqrt() * (alpha * alpha / 2.0)
            * (-b2 / (2.0 * sigma * sigma * w * w) - alpha * alpha * w * w / 2.0).exp()
    };
    let upper = 14.0 / alpha;
    let peak = (beta.abs() / (alpha * sigma)).sqrt();
    let breakpoints = [0.5 * peak, peak, 2.0 * peak, 0.1 * upper];
    let mixture = quad::integrate(f, 0.0, upper, tol, &breakpoints)?;
    Ok((mixture, closed_form))
}

/// The spike-and-slab negative log posterior
/// ‖y − X_γ α_γ‖²/(2σ_e²) + ‖α‖²/(2σ²) + log((1−θ)/θ) Σ γ_i
/// evaluated on the standardized problem, where X_γ keeps the columns with
/// γ_i = 1.
pub fn spike_slab_neg_log_posterior(
    gamma: &[bool],
    alpha_coef: &DVector<f64>,
    theta: f64,
    sigma2: f64,
    sigma2_e: f64,
    d: &Dataset,
) -> Result<f64, PriorError> {
    if gamma.len() != d.p || alpha_coef.len() != d.p {
        return Err(PriorError::DimensionMismatch(format!(
            "gamma has {} and alpha has {} entries for p = {}",
            gamma.len(),
            alpha_coef.len(),
            d.p
        )));
    }
    if !(theta > 0.0 && theta < 1.0) || !(sigma2 > 0.0) || !(sigma2_e > 0.0) {
        return Err(PriorError::InvalidSpec(
            "need theta in (0,1) and positive variances".into(),
        ));
    }
    let selected = DVector::from_fn(d.p, |i, _| if gamma[i] { alpha_coef[i] } else { 0.0 });
    let residual = &d.y_centered - &d.x_std * selected;
    let k = gamma.iter().filter(|&&g| g).count() as f64;
    Ok(residual.norm_squared() / (2.0 * sigma2_e)
        + alpha_coef.norm_squared() / (2.0 * sigma2)
        + ((1.0 - theta) / theta).ln() * k)
}

/// A 2-D evaluation grid for penalty contours.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub beta1_range: (f64, f64),
    pub beta2_range: (f64, f64),
    pub points_per_axis: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), PriorError> {
        let finite = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 < r.1;
        if !finite(self.beta1_range) || !finite(self.beta2_range) {
            return Err(PriorError::InvalidSpec("grid bounds must be finite".into()));
        }
        if self.points_per_axis < 2 {
            return Err(PriorError::InvalidSpec("grid needs at least 2 points per axis".into()));
        }
        Ok(())
    }
}

/// One evaluated grid point of φ(β₁) + φ(β₂).
#[derive(Debug, Clone, Copy)]
pub struct ContourPoint {
    pub beta1: f64,
    pub beta2: f64,
    pub value: f64,
}

/// Penalty surface φ(β₁) + φ(β₂) on a rectangular grid, with a budget level
/// marking the constraint contour Σφ(β_i) = s.
///
/// Where the penalty is undefined (horseshoe on the axes) the value is the
/// −∞ sentinel.
#[derive(Debug, Clone)]
pub struct PenaltyGrid {
    pub prior: PriorSpec,
    pub budget: f64,
    pub points: Vec<ContourPoint>,
}

/// Evaluate the two-coefficient penalty surface of `prior` on `grid`.
///
/// `budget` is the level s of the constraint contour; it is recorded on the
/// output for downstream plotting.
pub fn penalty_contours(
    prior: &PriorSpec,
    grid: &GridSpec,
    budget: f64,
) -> Result<PenaltyGrid, PriorError> {
    prior.validate()?;
    grid.validate()?;
    let m = grid.points_per_axis;
    let axis = |range: (f64, f64), i: usize| {
        range.0 + (range.1 - range.0) * i as f64 / (m - 1) as f64
    };
    let phi = |b: f64| match penalty(prior, b) {
        Ok(v) => v,
        Err(PriorError::UndefinedAtZero) => f64::NEG_INFINITY,
        Err(_) => f64::NEG_INFINITY,
    };
    let mut points = Vec::with_capacity(m * m);
    for i in 0..m {
        let b1 = axis(grid.beta1_range, i);
        let phi1 = phi(b1);
        for j in 0..m {
            let b2 = axis(grid.beta2_range, j);
            points.push(ContourPoint { beta1: b1, beta2: b2, value: phi1 + phi(b2) });
        }
    }
    Ok(PenaltyGrid { prior: *prior, budget, points })
}

impl PenaltyGrid {
    /// Write the grid as CSV with header `beta1,beta2,value`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "beta1,beta2,value")?;
        for pt in &self.points {
            writeln!(out, "{},{},{}", pt.beta1, pt.beta2, pt.value)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn log_prior_at_mode() {
        assert_relative_eq!(
            log_prior(&PriorSpec::Lasso { tau: 1.0 }, 0.0),
            0.5f64.ln(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            log_prior(&PriorSpec::Cauchy { tau: 1.0 }, 0.0),
            (1.0 / PI).ln(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            log_prior(&PriorSpec::Ridge { tau: 2.0 }, 0.0),
            -(2.0 * (2.0 * PI).sqrt()).ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn penalty_values() {
        assert_relative_eq!(penalty(&PriorSpec::Ridge { tau: 1.0 }, 2.0).unwrap(), 2.0);
        assert_relative_eq!(penalty(&PriorSpec::Lasso { tau: 0.5 }, -1.0).unwrap(), 2.0);
        assert_relative_eq!(
            penalty(&PriorSpec::Horseshoe { tau: 1.0 }, 2f64.sqrt()).unwrap(),
            -(2f64.ln().ln()),
            max_relative = 1e-12
        );
    }

    #[test]
    fn horseshoe_penalty_values_and_monotonicity() {
        assert_relative_eq!(
            horseshoe_penalty(1.0, 2f64.sqrt()).unwrap(),
            -(2f64.ln().ln()),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            horseshoe_penalty(2.0, 1.0).unwrap(),
            -(9f64.ln().ln()),
            max_relative = 1e-12
        );
        let grid: Vec<f64> = (1..200).map(|i| 0.05 * i as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&b| horseshoe_penalty(1.0, b).unwrap()).collect();
        for w in vals.windows(2) {
            assert!(w[1] > w[0]);
        }
        // Diverges upward like -log(2/b^2) for large |beta|.
        assert!(horseshoe_penalty(1.0, 1e8).unwrap() > 30.0);
        assert_eq!(horseshoe_penalty(1.0, 0.0), Err(PriorError::UndefinedAtZero));
    }

    #[test]
    fn penalties_are_even() {
        let priors = [
            PriorSpec::Ridge { tau: 0.7 },
            PriorSpec::Lasso { tau: 1.3 },
            PriorSpec::Cauchy { tau: 2.0 },
            PriorSpec::Horseshoe { tau: 1.0 },
            PriorSpec::SpikeSlab { theta: 0.3, sigma_beta: 1.0 },
        ];
        for prior in &priors {
            for i in 1..50 {
                let b = 0.1 * i as f64;
                assert_eq!(
                    penalty(prior, b).unwrap(),
                    penalty(prior, -b).unwrap(),
                    "{prior:?} at {b}"
                );
            }
        }
    }

    #[test]
    fn penalty_plus_log_prior_constant() {
        // Additive-constant duality, checked on a 100-point grid.
        let priors = [
            PriorSpec::Ridge { tau: 0.8 },
            PriorSpec::Lasso { tau: 1.5 },
            PriorSpec::Cauchy { tau: 0.6 },
        ];
        for prior in &priors {
            let reference = penalty(prior, 0.33).unwrap() + log_prior(prior, 0.33);
            for i in 0..100 {
                let b = -5.0 + 10.0 * i as f64 / 99.0;
                let s = penalty(prior, b).unwrap() + log_prior(prior, b);
                assert!(
                    (s - reference).abs() < 1e-10,
                    "{prior:?}: {s} vs {reference} at beta = {b}"
                );
            }
        }
    }

    #[test]
    fn exact_densities_integrate_to_one() {
        let priors = [
            PriorSpec::Ridge { tau: 1.4 },
            PriorSpec::Lasso { tau: 0.9 },
            PriorSpec::Cauchy { tau: 1.1 },
        ];
        for prior in &priors {
            // Cauchy tails need a wide range; map through tan for all three.
            let f = |v: f64| {
                let b = v.tan();
                if !b.is_finite() {
                    return 0.0;
                }
                log_prior(prior, b).exp() * (1.0 + b * b)
            };
            let mass = quad::integrate(
                f,
                -std::f64::consts::FRAC_PI_2,
                std::f64::consts::FRAC_PI_2,
                1e-9,
                &[-1.0, 0.0, 1.0],
            )
            .unwrap();
            assert!((mass - 1.0).abs() < 1e-6, "{prior:?} mass {mass}");
        }
    }

    #[test]
    fn horseshoe_quadrature_symmetric() {
        for b in [0.3, 1.0, 4.2] {
            let plus = horseshoe_density_quadrature(1.0, b, 1e-10).unwrap();
            let minus = horseshoe_density_quadrature(1.0, -b, 1e-10).unwrap();
            assert!((plus - minus).abs() <= 1e-12 * plus.abs());
        }
    }

    #[test]
    fn horseshoe_quadrature_dual_scheme_agreement() {
        // Second, independent scheme: adaptive Simpson on the raw lambda axis.
        fn simpson_rec(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                    + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
            }
        }
        let (tau, beta): (f64, f64) = (1.0, 1.0);
        let integrand = move |lam: f64| {
            if lam <= 0.0 {
                return 0.0;
            }
            let s = tau * lam;
            ((-(beta * beta) / (2.0 * s * s)).exp() / ((2.0 * PI).sqrt() * s))
                * (2.0 / PI)
                / (1.0 + lam * lam)
        };
        // The integrand decays like 0.254/lambda^3, so truncating at 2e5
        // leaves ~3e-12 of mass, well inside the 1e-8 comparison.
        let mut simpson = 0.0;
        for (a, b) in [(0.0, 1.0), (1.0, 50.0), (50.0, 2000.0), (2000.0, 2e5)] {
            let fa = integrand(a);
            let fb = integrand(b);
            let m = 0.5 * (a + b);
            let fm = integrand(m);
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            simpson += simpson_rec(&integrand, a, b, fa, fm, fb, whole, 1e-12, 40);
        }
        let gk = horseshoe_density_quadrature(tau, beta, 1e-10).unwrap();
        assert_relative_eq!(gk, simpson, max_relative = 1e-8);
    }

    #[test]
    fn horseshoe_mass_is_one() {
        let mass = horseshoe_total_mass(1.0, 1e-9, 1e-8).unwrap();
        assert!((mass - 1.0).abs() < 1e-6, "mass {mass}");
    }

    #[test]
    fn laplace_mixture_examples() {
        let (mix, cf) = laplace_mixture_check(1.0, 1.0, 0.0, 1e-10).unwrap();
        assert_relative_eq!(cf, 0.5, max_relative = 1e-14);
        assert!((mix - cf).abs() < 1e-8);

        let (mix, cf) = laplace_mixture_check(1.0, 1.0, 2.0, 1e-10).unwrap();
        assert_relative_eq!(cf, 0.5 * (-2.0f64).exp(), max_relative = 1e-14);
        assert!((mix - cf).abs() < 1e-6);

        let (_, cf) = laplace_mixture_check(2.0, 1.0, 1.0, 1e-10).unwrap();
        assert_relative_eq!(cf, (-2.0f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn spike_slab_objective_empty_model() {
        let x = nalgebra::DMatrix::from_column_slice(3, 2, &[1.0, 2.0, 3.0, -1.0, 0.5, 2.0]);
        let y = nalgebra::DVector::from_column_slice(&[1.0, -1.0, 0.5]);
        let d = crate::dataset::standardize(x, y).unwrap();
        let zero = nalgebra::DVector::zeros(2);
        let v = spike_slab_neg_log_posterior(&[false, false], &zero, 0.3, 1.0, 2.0, &d).unwrap();
        assert_relative_eq!(
            v,
            d.y_centered.norm_squared() / 4.0,
            max_relative = 1e-12
        );
        // theta = 1/2 makes the count term vanish.
        let v1 = spike_slab_neg_log_posterior(&[true, false], &zero, 0.5, 1.0, 2.0, &d).unwrap();
        let v0 = spike_slab_neg_log_posterior(&[false, false], &zero, 0.5, 1.0, 2.0, &d).unwrap();
        assert_relative_eq!(v0, v1, max_relative = 1e-12);
    }

    #[test]
    fn spike_slab_enumerated_minimum() {
        // p = 2, n = 3 toy: brute force over all 4 gamma patterns with the
        // conjugate alpha solve per pattern; the operation evaluated at the
        // enumerated optimum must equal the enumerated minimum.
        let x = nalgebra::DMatrix::from_column_slice(3, 2, &[1.0, 2.0, 3.0, -1.0, 0.5, 2.0]);
        let y = nalgebra::DVector::from_column_slice(&[2.0, -1.0, 1.5]);
        let d = crate::dataset::standardize(x, y).unwrap();
        let (theta, sigma2, sigma2_e) = (0.4, 1.5, 0.8);
        let mut best = f64::INFINITY;
        let mut best_args = (vec![false, false], nalgebra::DVector::zeros(2));
        for mask in 0..4u32 {
            let gamma = vec![mask & 1 != 0, mask & 2 != 0];
            // Conjugate solve for the selected alphas; excluded ones stay 0.
            let cols: Vec<usize> =
                (0..2).filter(|&i| gamma[i]).collect();
            let mut alpha = nalgebra::DVector::zeros(2);
            if !cols.is_empty() {
                let xg = nalgebra::DMatrix::from_fn(3, cols.len(), |r, c| d.x_std[(r, cols[c])]);
                let mut a = xg.transpose() * &xg / sigma2_e;
                for j in 0..cols.len() {
                    a[(j, j)] += 1.0 / sigma2;
                }
                let rhs = xg.transpose() * &d.y_centered / sigma2_e;
                let sol = nalgebra::Cholesky::new(a).unwrap().solve(&rhs);
                for (j, &col) in cols.iter().enumerate() {
                    alpha[col] = sol[j];
                }
            }
            let v =
                spike_slab_neg_log_posterior(&gamma, &alpha, theta, sigma2, sigma2_e, &d).unwrap();
            if v < best {
                best = v;
                best_args = (gamma, alpha);
            }
        }
        let v = spike_slab_neg_log_posterior(
            &best_args.0,
            &best_args.1,
            theta,
            sigma2,
            sigma2_e,
            &d,
        )
        .unwrap();
        assert_relative_eq!(v, best, max_relative = 1e-12);
    }

    #[test]
    fn contours_ridge_circle_lasso_diamond() {
        let ridge = PriorSpec::Ridge { tau: 1.0 };
        // Radial symmetry: constant on circles.
        let c = 1.3f64;
        let reference = penalty(&ridge, c).unwrap();
        for i in 0..32 {
            let angle = 2.0 * PI * i as f64 / 32.0;
            let (b1, b2) = (c * angle.cos(), c * angle.sin());
            let v = penalty(&ridge, b1).unwrap() + penalty(&ridge, b2).unwrap();
            assert!((v - reference).abs() < 1e-12);
        }
        let lasso = PriorSpec::Lasso { tau: 1.0 };
        let reference = penalty(&lasso, c).unwrap();
        for i in 1..20 {
            let b1 = c * i as f64 / 20.0;
            let b2 = c - b1;
            let v = penalty(&lasso, b1).unwrap() + penalty(&lasso, b2).unwrap();
            assert!((v - reference).abs() < 1e-12);
        }
    }

    #[test]
    fn contours_horseshoe_axis_sentinel() {
        let grid = GridSpec {
            beta1_range: (-2.0, 2.0),
            beta2_range: (-2.0, 2.0),
            points_per_axis: 5, // includes 0 on both axes
        };
        let pg = penalty_contours(&PriorSpec::Horseshoe { tau: 1.0 }, &grid, 1.0).unwrap();
        let on_axis: Vec<&ContourPoint> = pg
            .points
            .iter()
            .filter(|pt| pt.beta1 == 0.0 || pt.beta2 == 0.0)
            .collect();
        assert!(!on_axis.is_empty());
        assert!(on_axis.iter().all(|pt| pt.value == f64::NEG_INFINITY));
        let off_axis = pg.points.iter().filter(|pt| pt.beta1 != 0.0 && pt.beta2 != 0.0);
        assert!(off_axis.clone().count() > 0);
        for pt in off_axis {
            assert!(pt.value.is_finite());
        }
    }

    #[test]
    fn contour_csv_header() {
        let grid = GridSpec {
            beta1_range: (-1.0, 1.0),
            beta2_range: (-1.0, 1.0),
            points_per_axis: 2,
        };
        let pg = penalty_contours(&PriorSpec::Ridge { tau: 1.0 }, &grid, 1.0).unwrap();
        let mut buf = Vec::new();
        pg.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("beta1,beta2,value\n"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(PriorSpec::Ridge { tau: 0.0 }.validate().is_err());
        assert!(PriorSpec::SpikeSlab { theta: 1.0, sigma_beta: 1.0 }.validate().is_err());
        assert!(PriorSpec::SpikeSlab { theta: 0.5, sigma_beta: -1.0 }.validate().is_err());
        assert!(PriorSpec::Horseshoe { tau: 2.0 }.validate().is_ok());
    }
}
