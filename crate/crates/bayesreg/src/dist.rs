//! Random variate primitives the Gibbs samplers are built on.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

/// Draw from InverseGaussian(mean `mu`, shape `lam`) by the
/// Michael–Schucany–Haas transformation with rejection.
///
/// Both parameters must be strictly positive; the draw always is.
pub fn sample_inverse_gaussian<R: Rng + ?Sized>(rng: &mut R, mu: f64, lam: f64) -> f64 {
    assert!(mu > 0.0 && lam > 0.0, "inverse Gaussian needs mu, lam > 0");
    let v: f64 = rng.sample(StandardNormal);
    let y = v * v;
    // The candidate roots solve λ(x−μ)² = yμ²x. Computing the small root
    // directly cancels catastrophically when μ ≫ λ; form the large root
    // (pure addition) and use the root product x₊x₋ = μ².
    let x_plus = mu
        + mu * mu * y / (2.0 * lam)
        + mu / (2.0 * lam) * (4.0 * mu * lam * y + mu * mu * y * y).sqrt();
    let x_minus = mu * mu / x_plus;
    let u: f64 = rng.gen();
    let draw = if u <= mu / (mu + x_minus) { x_minus } else { x_plus };
    draw.max(f64::MIN_POSITIVE)
}

/// Draw from InverseGamma(shape, rate): the reciprocal of a
/// Gamma(shape, rate) draw. Mean is rate/(shape-1) for shape > 1.
pub fn sample_inverse_gamma<R: Rng + ?Sized>(rng: &mut R, shape: f64, rate: f64) -> f64 {
    assert!(shape > 0.0 && rate > 0.0, "inverse gamma needs shape, rate > 0");
    // rand_distr parametrizes Gamma by (shape, scale); scale = 1/rate.
    let g = Gamma::new(shape, 1.0 / rate).expect("valid gamma parameters");
    let draw: f64 = g.sample(rng);
    (1.0 / draw).min(f64::MAX)
}

/// Density of InverseGaussian(mu, lam) at x > 0.
pub fn inverse_gaussian_pdf(x: f64, mu: f64, lam: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (lam / (2.0 * std::f64::consts::PI * x.powi(3))).sqrt()
        * (-lam * (x - mu) * (x - mu) / (2.0 * mu * mu * x)).exp()
}

/// Density of InverseGamma(shape, rate) at x > 0.
pub fn inverse_gamma_pdf(x: f64, shape: f64, rate: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let log_pdf =
        shape * rate.ln() - ln_gamma(shape) - (shape + 1.0) * x.ln() - rate / x;
    log_pdf.exp()
}

/// Lanczos approximation of ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    // g = 7, n = 9 coefficients (standard Lanczos table).
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection formula.
        let pi = std::f64::consts::PI;
        return pi.ln() - (pi * x).sin().ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use approx::assert_relative_eq;

    fn moments(draws: &[f64]) -> (f64, f64) {
        let n = draws.len() as f64;
        let mean = draws.iter().sum::<f64>() / n;
        let var = draws.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn ln_gamma_known_values() {
        assert_relative_eq!(ln_gamma(1.0), 0.0, epsilon = 1e-12);
        assert_relative_eq!(ln_gamma(5.0), 24.0f64.ln(), max_relative = 1e-12);
        assert_relative_eq!(
            ln_gamma(0.5),
            std::f64::consts::PI.sqrt().ln(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn inverse_gaussian_moments_match() {
        // mean mu, variance mu^3/lam.
        for &(mu, lam) in &[(1.0, 1.0), (2.0, 4.0)] {
            let mut rng = RngStream::new(11, 0).rng();
            let n = 100_000;
            let draws: Vec<f64> = (0..n)
                .map(|_| sample_inverse_gaussian(&mut rng, mu, lam))
                .collect();
            let (mean, var) = moments(&draws);
            let true_var: f64 = mu * mu * mu / lam;
            let se_mean = (true_var / n as f64).sqrt();
            assert!(
                (mean - mu).abs() < 3.0 * se_mean,
                "IG({mu},{lam}) mean {mean} vs {mu} (3se {:.2e})",
                3.0 * se_mean
            );
            // Loose MC tolerance for the second moment.
            assert!(
                (var - true_var).abs() / true_var < 0.1,
                "IG({mu},{lam}) var {var} vs {true_var}"
            );
        }
    }

    #[test]
    fn inverse_gaussian_degenerate_limit() {
        // lam -> infinity with mu = 1 concentrates at 1.
        let mut rng = RngStream::new(12, 0).rng();
        let draws: Vec<f64> = (0..10_000)
            .map(|_| sample_inverse_gaussian(&mut rng, 1.0, 1e6))
            .collect();
        let (mean, var) = moments(&draws);
        assert!((mean - 1.0).abs() < 0.01);
        assert!(var.sqrt() < 0.01, "sd {} should be < 0.01", var.sqrt());
    }

    #[test]
    fn inverse_gamma_mean_matches() {
        // shape 3, rate 2 -> mean 1.
        let mut rng = RngStream::new(13, 0).rng();
        let n = 100_000;
        let draws: Vec<f64> = (0..n)
            .map(|_| sample_inverse_gamma(&mut rng, 3.0, 2.0))
            .collect();
        let (mean, _) = moments(&draws);
        // var = rate^2 / ((shape-1)^2 (shape-2)) = 4/4 = 1
        let se = (1.0 / n as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn inverse_gamma_heavy_tail_positive() {
        let mut rng = RngStream::new(14, 0).rng();
        for _ in 0..10_000 {
            assert!(sample_inverse_gamma(&mut rng, 0.5, 0.5) > 0.0);
        }
    }

    #[test]
    fn fixed_seed_reproduces_sequence() {
        let draw_all = || {
            let mut rng = RngStream::new(99, 5).rng();
            (0..100)
                .map(|_| sample_inverse_gamma(&mut rng, 2.0, 3.0))
                .collect::<Vec<f64>>()
        };
        assert_eq!(draw_all(), draw_all());
    }
}
