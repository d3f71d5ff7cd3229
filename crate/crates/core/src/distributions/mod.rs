//! Effect-size distributions `G` for the hierarchical normal-means model.
//!
//! Every distribution exposes its density, `Pr(theta > 0)`, a sampler driven
//! by a caller-owned RNG, the points where its density is not smooth, and a
//! finite interval holding all but a negligible amount of its mass. The
//! error-rate integrals only ever look at `G` through this interface.

mod ald;
mod chisq;
mod normal;
mod spike_slab;

use std::fmt;

use rand::RngCore;
use serde::Deserialize;

pub use ald::{
    ald_density, ald_moments, fit_ald_from_moments, fit_ald_moments, AldParams,
    EXCESS_VARIANCE_FLOOR, Q_CLAMP, TAU_FLOOR,
};
pub use chisq::ShiftedChiSqParams;
pub use normal::NormalParams;
pub use spike_slab::SpikeSlabParams;

use crate::error::Result;
use crate::numerics::{Interval, Quadrature};

/// Mass allowed outside each end of [`EffectDistribution::mass_interval`].
pub const TAIL_MASS: f64 = 1e-14;

pub trait EffectDistribution: fmt::Debug + Send + Sync {
    fn density(&self, theta: f64) -> f64;

    /// `Pr(theta > 0)`.
    fn prob_positive(&self) -> f64;

    fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<f64>;

    /// Points where the density has a kink or a jump.
    fn kink_points(&self) -> Vec<f64>;

    /// Finite interval holding at least `1 - 2 * TAIL_MASS` of the mass.
    fn mass_interval(&self) -> Interval;

    /// Closed-form `(mean, variance)` when one is available.
    fn moments(&self) -> Option<(f64, f64)> {
        None
    }
}

/// Any of the implemented effect distributions, optionally rescaled.
///
/// Deserializes from a single-key table: `{ald = {mu, tau, q}}`,
/// `{spike_slab = {spike, slab_intervals, slab_weight}}`,
/// `{shifted_chisq = {df, shift}}` or `{normal = {mean, sd}}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Effect {
    Ald(AldParams),
    SpikeSlab(SpikeSlabParams),
    ShiftedChisq(ShiftedChiSqParams),
    Normal(NormalParams),
    /// `theta / divisor` for `theta ~ inner`.
    #[serde(skip)]
    Scaled {
        inner: Box<Effect>,
        divisor: f64,
    },
}

impl Effect {
    /// The same effects measured in units of a noise standard deviation:
    /// `Y = theta + noise_sd * Z` is equivalent to the unit-noise model for
    /// `Y / noise_sd` with effects `theta / noise_sd`.
    pub fn in_noise_units(self, noise_sd: f64) -> Effect {
        if noise_sd == 1.0 {
            self
        } else {
            Effect::Scaled {
                inner: Box::new(self),
                divisor: noise_sd,
            }
        }
    }

    fn inner(&self) -> &dyn EffectDistribution {
        match self {
            Effect::Ald(p) => p,
            Effect::SpikeSlab(p) => p,
            Effect::ShiftedChisq(p) => p,
            Effect::Normal(p) => p,
            Effect::Scaled { .. } => unreachable!("scaled effects dispatch separately"),
        }
    }
}

impl From<AldParams> for Effect {
    fn from(p: AldParams) -> Self {
        Effect::Ald(p)
    }
}

impl From<SpikeSlabParams> for Effect {
    fn from(p: SpikeSlabParams) -> Self {
        Effect::SpikeSlab(p)
    }
}

impl From<ShiftedChiSqParams> for Effect {
    fn from(p: ShiftedChiSqParams) -> Self {
        Effect::ShiftedChisq(p)
    }
}

impl From<NormalParams> for Effect {
    fn from(p: NormalParams) -> Self {
        Effect::Normal(p)
    }
}

impl EffectDistribution for Effect {
    fn density(&self, theta: f64) -> f64 {
        match self {
            Effect::Scaled { inner, divisor } => inner.density(theta * divisor) * divisor,
            _ => self.inner().density(theta),
        }
    }

    fn prob_positive(&self) -> f64 {
        match self {
            Effect::Scaled { inner, .. } => inner.prob_positive(),
            _ => self.inner().prob_positive(),
        }
    }

    fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
        match self {
            Effect::Scaled { inner, divisor } => inner
                .sample(rng, n)
                .into_iter()
                .map(|t| t / divisor)
                .collect(),
            _ => self.inner().sample(rng, n),
        }
    }

    fn kink_points(&self) -> Vec<f64> {
        match self {
            Effect::Scaled { inner, divisor } => inner
                .kink_points()
                .into_iter()
                .map(|k| k / divisor)
                .collect(),
            _ => self.inner().kink_points(),
        }
    }

    fn mass_interval(&self) -> Interval {
        match self {
            Effect::Scaled { inner, divisor } => {
                let iv = inner.mass_interval();
                Interval {
                    lo: iv.lo / divisor,
                    hi: iv.hi / divisor,
                }
            }
            _ => self.inner().mass_interval(),
        }
    }

    fn moments(&self) -> Option<(f64, f64)> {
        match self {
            Effect::Scaled { inner, divisor } => inner
                .moments()
                .map(|(m, v)| (m / divisor, v / (divisor * divisor))),
            _ => self.inner().moments(),
        }
    }
}

/// `(mean, variance)` of `G` by quadrature over its mass interval.
pub fn quadrature_moments<G: EffectDistribution + ?Sized>(g: &G) -> Result<(f64, f64)> {
    let quad = Quadrature::with_tolerance(1e-11, 1e-12);
    let dom = g.mass_interval();
    let kinks = g.kink_points();
    let m0 = quad.integrate(|t| g.density(t), dom, &kinks)?;
    let m1 = quad.integrate(|t| t * g.density(t), dom, &kinks)? / m0;
    let m2 = quad.integrate(|t| t * t * g.density(t), dom, &kinks)? / m0;
    Ok((m1, m2 - m1 * m1))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn zoo() -> Vec<Effect> {
        let spike = AldParams::centered(0.1, 0.3).unwrap();
        let sym_spike = AldParams::centered(0.05, 0.5).unwrap();
        vec![
            AldParams::centered(0.05, 0.1).unwrap().into(),
            AldParams::centered(0.2, 0.5).unwrap().into(),
            AldParams::new(0.4, 1.0, 0.7).unwrap().into(),
            SpikeSlabParams::new(spike, vec![Interval::new(2.0, 4.0).unwrap()], 0.01)
                .unwrap()
                .into(),
            SpikeSlabParams::new(
                sym_spike,
                vec![
                    Interval::new(-4.0, -2.0).unwrap(),
                    Interval::new(2.0, 4.0).unwrap(),
                ],
                0.01,
            )
            .unwrap()
            .into(),
            ShiftedChiSqParams::new(3, 3.0).unwrap().into(),
            ShiftedChiSqParams::new(5, 1.0).unwrap().into(),
            NormalParams::new(0.0, 1.0).unwrap().into(),
            NormalParams::new(-0.5, 2.0).unwrap().into(),
            Effect::from(ShiftedChiSqParams::new(3, 3.0).unwrap()).in_noise_units(2.0),
        ]
    }

    #[test]
    fn densities_normalize_over_mass_interval() {
        let quad = Quadrature::with_tolerance(1e-10, 1e-15);
        for g in zoo() {
            let total = quad
                .integrate(|t| g.density(t), g.mass_interval(), &g.kink_points())
                .unwrap();
            assert!((total - 1.0).abs() < 1e-6, "{g:?}: {total}");
        }
    }

    #[test]
    fn prob_positive_matches_quadrature() {
        let quad = Quadrature::with_tolerance(1e-10, 1e-15);
        for g in zoo() {
            let iv = g.mass_interval();
            let mut kinks = g.kink_points();
            kinks.push(0.0);
            let neg = match iv.intersect(&Interval {
                lo: f64::NEG_INFINITY,
                hi: 0.0,
            }) {
                Some(d) => quad.integrate(|t| g.density(t), d, &kinks).unwrap(),
                None => 0.0,
            };
            let pos = match iv.intersect(&Interval {
                lo: 0.0,
                hi: f64::INFINITY,
            }) {
                Some(d) => quad.integrate(|t| g.density(t), d, &kinks).unwrap(),
                None => 0.0,
            };
            assert!((g.prob_positive() - pos).abs() < 1e-6, "{g:?}");
            assert!((g.prob_positive() + neg - 1.0).abs() < 1e-6, "{g:?}");
        }
    }

    #[test]
    fn closed_form_moments_match_quadrature() {
        for g in zoo() {
            let (m, v) = g.moments().unwrap();
            let (qm, qv) = quadrature_moments(&g).unwrap();
            assert!((m - qm).abs() < 1e-6, "{g:?}");
            assert!((v - qv).abs() < 1e-6 * v.max(1.0), "{g:?}");
        }
    }

    #[test]
    fn samplers_agree_with_quadrature_moments() {
        let n = 100_000;
        for (i, g) in zoo().into_iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
            let xs = g.sample(&mut rng, n);
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let fourth = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n as f64;
            let (qm, qv) = quadrature_moments(&g).unwrap();
            let se_mean = (var / n as f64).sqrt();
            let se_var = ((fourth - var * var) / n as f64).sqrt();
            assert!(
                (mean - qm).abs() < 5.0 * se_mean,
                "{g:?}: mean {mean} vs {qm}"
            );
            assert!((var - qv).abs() < 5.0 * se_var, "{g:?}: var {var} vs {qv}");
        }
    }

    #[test]
    fn deserializes_tagged_union() {
        let e: Effect = toml::from_str("[ald]\nmu = 0.0\ntau = 0.2\nq = 0.5\n").unwrap();
        assert_eq!(e, Effect::Ald(AldParams::centered(0.2, 0.5).unwrap()));
        let e: Effect = toml::from_str("[shifted_chisq]\ndf = 3\nshift = 3.0\n").unwrap();
        assert_eq!(
            e.prob_positive(),
            ShiftedChiSqParams::new(3, 3.0).unwrap().prob_positive()
        );
        let e: Effect = toml::from_str(
            "[spike_slab]\nslab_weight = 0.01\nslab_intervals = [[2.0, 4.0]]\n\
             [spike_slab.spike]\ntau = 0.1\nq = 0.3\n",
        )
        .unwrap();
        assert!(matches!(e, Effect::SpikeSlab(_)));
        let e: Effect = toml::from_str("[normal]\nmean = 1.0\nsd = 2.0\n").unwrap();
        assert_eq!(e, Effect::Normal(NormalParams::new(1.0, 2.0).unwrap()));
    }

    #[test]
    fn invalid_parameters_fail_deserialization() {
        assert!(toml::from_str::<Effect>("[ald]\ntau = -1.0\nq = 0.5\n").is_err());
        assert!(toml::from_str::<Effect>("[ald]\ntau = 1.0\nq = 0.5\nextra = 1\n").is_err());
        assert!(toml::from_str::<Effect>("[cauchy]\nscale = 1.0\n").is_err());
    }
}
