use rand::distr::Open01;
use rand::{Rng, RngCore};
use serde::Deserialize;

use super::{EffectDistribution, TAIL_MASS};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::numerics::Interval;

/// Smallest excess variance (sample variance minus the unit noise variance)
/// that a moment fit will attribute to the effects.
pub const EXCESS_VARIANCE_FLOOR: f64 = 1e-6;
/// Scale returned with a degenerate fit.
pub const TAU_FLOOR: f64 = 1e-4;
/// Skew clamp used when the sample mean is too large for its variance.
pub const Q_CLAMP: f64 = 1e-3;

/// Asymmetric Laplace distribution with location `mu`, scale `tau` and skew
/// `q`; `Pr(theta <= mu) = q`, so small `q` puts most mass above `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "RawAld")]
pub struct AldParams {
    pub mu: f64,
    pub tau: f64,
    pub q: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAld {
    #[serde(default)]
    mu: f64,
    tau: f64,
    q: f64,
}

impl TryFrom<RawAld> for AldParams {
    type Error = Error;

    fn try_from(r: RawAld) -> Result<Self> {
        AldParams::new(r.mu, r.tau, r.q)
    }
}

impl AldParams {
    pub fn new(mu: f64, tau: f64, q: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ALD location must be finite, got {mu}"
            )));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ALD scale must be > 0, got {tau}"
            )));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "ALD skew must be in (0, 1), got {q}"
            )));
        }
        Ok(Self { mu, tau, q })
    }

    /// Zero-location ALD, the family used for tight control.
    pub fn centered(tau: f64, q: f64) -> Result<Self> {
        Self::new(0.0, tau, q)
    }

    pub fn cdf(&self, theta: f64) -> f64 {
        let z = (theta - self.mu) / self.tau;
        if z <= 0.0 {
            self.q * ((1.0 - self.q) * z).exp()
        } else {
            1.0 - (1.0 - self.q) * (-self.q * z).exp()
        }
    }

    /// One draw by inversion of the CDF.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.sample::<f64, _>(Open01))
    }

    pub fn quantile(&self, u: f64) -> f64 {
        if u <= self.q {
            self.mu + self.tau * (u / self.q).ln() / (1.0 - self.q)
        } else {
            self.mu - self.tau * ((1.0 - u) / (1.0 - self.q)).ln() / self.q
        }
    }
}

/// `q(1-q)/tau * exp(-((theta-mu)/tau) * (q - 1{theta <= mu}))`
pub fn ald_density(theta: f64, p: &AldParams) -> f64 {
    let z = (theta - p.mu) / p.tau;
    let slope = if theta <= p.mu { p.q - 1.0 } else { p.q };
    p.q * (1.0 - p.q) / p.tau * (-z * slope).exp()
}

/// Mean and variance of `theta ~ ALD(mu, tau, q)`.
pub fn ald_moments(p: &AldParams) -> (f64, f64) {
    let (q, tau) = (p.q, p.tau);
    let qq = q * (1.0 - q);
    let mean = p.mu + tau * (1.0 - 2.0 * q) / qq;
    let variance = tau * tau * (1.0 - 2.0 * q + 2.0 * q * q) / (qq * qq);
    (mean, variance)
}

/// Method-of-moments fit of a zero-location ALD for the effects, given the
/// mean and variance of the observations `Y = theta + N(0, 1)`.
///
/// With `v = variance - 1`, eliminating `tau` between the two moment
/// equations leaves `(1 - 2q)^2 = mean^2 / (2v - mean^2)`, so
/// `q = (1 - mean / sqrt(2v - mean^2)) / 2` and
/// `tau = q(1 - q) sqrt(2v - mean^2)`. The expression is regular at
/// `mean = 0`, where it gives `q = 1/2` and `tau = sqrt(v / 8)`.
///
/// Fails with [`Error::DegenerateFit`] when there is no excess variance, or
/// when `v <= mean^2` (no ALD with these moments exists); the error carries
/// the parameters callers should fall back to.
pub fn fit_ald_from_moments(mean: f64, variance: f64) -> Result<AldParams> {
    let excess = variance - 1.0;
    if !(excess > EXCESS_VARIANCE_FLOOR) {
        return Err(Error::DegenerateFit {
            mean,
            variance,
            fallback: AldParams {
                mu: 0.0,
                tau: TAU_FLOOR,
                q: 0.5,
            },
        });
    }
    let disc = 2.0 * excess - mean * mean;
    if !(disc > mean * mean) {
        let q = if mean > 0.0 { Q_CLAMP } else { 1.0 - Q_CLAMP };
        let tau = (mean * q * (1.0 - q) / (1.0 - 2.0 * q)).max(TAU_FLOOR);
        return Err(Error::DegenerateFit {
            mean,
            variance,
            fallback: AldParams { mu: 0.0, tau, q },
        });
    }
    let root = disc.sqrt();
    let q = 0.5 * (1.0 - mean / root);
    let tau = q * (1.0 - q) * root;
    AldParams::centered(tau, q)
}

/// Moment fit of `ALD(0, tau, q)` to a dataset.
pub fn fit_ald_moments(y: &Dataset) -> Result<AldParams> {
    let variance = y.sample_variance().ok_or_else(|| {
        Error::InsufficientData("moment fit needs at least two observations".into())
    })?;
    fit_ald_from_moments(y.mean(), variance)
}

impl EffectDistribution for AldParams {
    fn density(&self, theta: f64) -> f64 {
        ald_density(theta, self)
    }

    fn prob_positive(&self) -> f64 {
        1.0 - self.cdf(0.0)
    }

    fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }

    fn kink_points(&self) -> Vec<f64> {
        vec![self.mu]
    }

    fn mass_interval(&self) -> Interval {
        let lo = self.mu + self.tau * (TAIL_MASS / self.q).ln() / (1.0 - self.q);
        let hi = self.mu - self.tau * (TAIL_MASS / (1.0 - self.q)).ln() / self.q;
        Interval { lo, hi }
    }

    fn moments(&self) -> Option<(f64, f64)> {
        Some(ald_moments(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{find_root, integrate_piecewise};

    #[test]
    fn density_examples() {
        let p = AldParams::new(0.0, 1.0, 0.5).unwrap();
        assert_eq!(ald_density(0.0, &p), 0.25);
        assert!((ald_density(1.0, &p) - 0.25 * (-0.5f64).exp()).abs() < 1e-15);
        assert!((ald_density(1.0, &p) - 0.15163).abs() < 1e-5);
    }

    #[test]
    fn density_normalizes() {
        for (tau, q) in [(0.05, 0.1), (0.2, 0.5), (0.15, 0.3), (3.0, 0.9)] {
            let p = AldParams::centered(tau, q).unwrap();
            let total =
                integrate_piecewise(|t| ald_density(t, &p), Interval::real_line(), &[0.0], 1e-12)
                    .unwrap();
            assert!((total - 1.0).abs() < 1e-8, "tau={tau} q={q}: {total}");
        }
    }

    #[test]
    fn moment_examples() {
        let (m, v) = ald_moments(&AldParams::centered(0.2, 0.5).unwrap());
        assert_eq!(m, 0.0);
        assert!((v - 0.32).abs() < 1e-15);
        let (m, _) = ald_moments(&AldParams::centered(0.05, 0.1).unwrap());
        assert!((m - 0.05 * 0.8 / 0.09).abs() < 1e-15);
        assert!((m - 0.4444).abs() < 1e-4);
    }

    #[test]
    fn moments_match_quadrature() {
        for (mu, tau, q) in [(0.0, 0.05, 0.1), (0.3, 0.2, 0.7), (-1.0, 1.5, 0.25)] {
            let p = AldParams::new(mu, tau, q).unwrap();
            let dom = Interval::real_line();
            let m1 = integrate_piecewise(|t| t * ald_density(t, &p), dom, &[mu], 1e-12).unwrap();
            let m2 =
                integrate_piecewise(|t| t * t * ald_density(t, &p), dom, &[mu], 1e-12).unwrap();
            let (mean, var) = ald_moments(&p);
            assert!((mean - m1).abs() < 1e-8);
            assert!((var - (m2 - m1 * m1)).abs() < 1e-6);
        }
    }

    #[test]
    fn cdf_quantile_roundtrip() {
        let p = AldParams::new(0.5, 0.3, 0.2).unwrap();
        for u in [1e-9, 0.01, 0.2, 0.5, 0.99, 1.0 - 1e-9] {
            assert!((p.cdf(p.quantile(u)) - u).abs() < 1e-12);
        }
        assert!((p.cdf(0.5) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn symmetric_fits() {
        let p = fit_ald_from_moments(0.0, 1.32).unwrap();
        assert!((p.q - 0.5).abs() < 1e-15);
        assert!((p.tau - 0.2).abs() < 1e-12);
        let p = fit_ald_from_moments(0.0, 9.0).unwrap();
        assert_eq!(p.q, 0.5);
        assert!((p.tau - 1.0).abs() < 1e-12);
    }

    // Independent route: substitute tau(q) from the mean equation into the
    // variance equation and root-find in q.
    #[test]
    fn closed_form_matches_root_find() {
        for (mean, variance) in [(0.4444, 1.5), (-0.3, 1.4), (0.05, 1.02), (1.2, 4.0)] {
            let fit = fit_ald_from_moments(mean, variance).unwrap();
            let excess = variance - 1.0;
            let g = |q: f64| {
                let tau = mean * q * (1.0 - q) / (1.0 - 2.0 * q);
                tau * tau * (1.0 - 2.0 * q + 2.0 * q * q) / (q * q * (1.0 - q) * (1.0 - q)) - excess
            };
            // tau > 0 needs 1 - 2q to share the sign of the mean.
            let bracket = if mean > 0.0 {
                Interval::new(1e-9, 0.5 - 1e-12).unwrap()
            } else {
                Interval::new(0.5 + 1e-12, 1.0 - 1e-9).unwrap()
            };
            let q = find_root(g, bracket, 1e-14).unwrap();
            assert!(
                (q - fit.q).abs() < 1e-9,
                "{mean} {variance}: {q} vs {}",
                fit.q
            );
        }
    }

    #[test]
    fn degenerate_fits_carry_fallback() {
        match fit_ald_from_moments(0.1, 0.9) {
            Err(Error::DegenerateFit { fallback, .. }) => {
                assert_eq!(fallback.q, 0.5);
                assert_eq!(fallback.tau, TAU_FLOOR);
            }
            other => panic!("{other:?}"),
        }
        // Mean too large for the variance: no ALD matches.
        match fit_ald_from_moments(2.0, 2.0) {
            Err(Error::DegenerateFit { fallback, .. }) => {
                assert_eq!(fallback.q, Q_CLAMP);
                assert!(fallback.tau > 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fit_needs_two_points() {
        let d = Dataset::new(vec![1.0]).unwrap();
        assert!(matches!(
            fit_ald_moments(&d),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn invalid_params() {
        assert!(AldParams::new(0.0, 0.0, 0.5).is_err());
        assert!(AldParams::new(0.0, 1.0, 1.0).is_err());
        assert!(AldParams::new(f64::NAN, 1.0, 0.5).is_err());
    }
}
