use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use serde::Deserialize;

use super::EffectDistribution;
use crate::error::{Error, Result};
use crate::numerics::{std_normal_cdf, std_normal_pdf, Interval};

// Each tail beyond 8.5 sd holds under 1e-17 of the mass.
const SD_SPAN: f64 = 8.5;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "RawNormal")]
pub struct NormalParams {
    pub mean: f64,
    pub sd: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNormal {
    #[serde(default)]
    mean: f64,
    sd: f64,
}

impl TryFrom<RawNormal> for NormalParams {
    type Error = Error;

    fn try_from(r: RawNormal) -> Result<Self> {
        NormalParams::new(r.mean, r.sd)
    }
}

impl NormalParams {
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        if !mean.is_finite() || !(sd > 0.0 && sd.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "normal needs finite mean and sd > 0, got ({mean}, {sd})"
            )));
        }
        Ok(Self { mean, sd })
    }
}

impl EffectDistribution for NormalParams {
    fn density(&self, theta: f64) -> f64 {
        std_normal_pdf((theta - self.mean) / self.sd) / self.sd
    }

    fn prob_positive(&self) -> f64 {
        std_normal_cdf(self.mean / self.sd)
    }

    fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let z: f64 = StandardNormal.sample(rng);
                self.mean + self.sd * z
            })
            .collect()
    }

    fn kink_points(&self) -> Vec<f64> {
        vec![]
    }

    fn mass_interval(&self) -> Interval {
        Interval {
            lo: self.mean - SD_SPAN * self.sd,
            hi: self.mean + SD_SPAN * self.sd,
        }
    }

    fn moments(&self) -> Option<(f64, f64)> {
        Some((self.mean, self.sd * self.sd))
    }
}
