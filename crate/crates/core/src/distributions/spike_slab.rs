use rand::{Rng, RngCore};
use serde::Deserialize;

use super::{AldParams, EffectDistribution};
use crate::error::{Error, Result};
use crate::numerics::Interval;

/// Mixture `(1 - w) * ALD spike + w * uniform(slab intervals)`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "RawSpikeSlab")]
pub struct SpikeSlabParams {
    pub spike: AldParams,
    pub slab_intervals: Vec<Interval>,
    pub slab_weight: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpikeSlab {
    spike: AldParams,
    slab_intervals: Vec<Interval>,
    slab_weight: f64,
}

impl TryFrom<RawSpikeSlab> for SpikeSlabParams {
    type Error = Error;

    fn try_from(r: RawSpikeSlab) -> Result<Self> {
        SpikeSlabParams::new(r.spike, r.slab_intervals, r.slab_weight)
    }
}

impl SpikeSlabParams {
    pub fn new(
        spike: AldParams,
        mut slab_intervals: Vec<Interval>,
        slab_weight: f64,
    ) -> Result<Self> {
        if !(slab_weight > 0.0 && slab_weight < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "slab weight must be in (0, 1), got {slab_weight}"
            )));
        }
        if slab_intervals.is_empty() {
            return Err(Error::InvalidParameter(
                "slab needs at least one interval".into(),
            ));
        }
        if slab_intervals.iter().any(|iv| !iv.is_finite()) {
            return Err(Error::InvalidParameter(
                "slab intervals must be finite".into(),
            ));
        }
        slab_intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        if slab_intervals.windows(2).any(|w| w[0].hi > w[1].lo) {
            return Err(Error::InvalidParameter("slab intervals overlap".into()));
        }
        Ok(Self {
            spike,
            slab_intervals,
            slab_weight,
        })
    }

    fn slab_length(&self) -> f64 {
        self.slab_intervals.iter().map(Interval::width).sum()
    }

    fn slab_density(&self, theta: f64) -> f64 {
        if self
            .slab_intervals
            .iter()
            .any(|iv| iv.lo < theta && theta < iv.hi)
        {
            1.0 / self.slab_length()
        } else {
            0.0
        }
    }

    fn sample_slab(&self, rng: &mut dyn RngCore) -> f64 {
        let mut offset = rng.random::<f64>() * self.slab_length();
        for iv in &self.slab_intervals {
            if offset < iv.width() {
                return iv.lo + offset;
            }
            offset -= iv.width();
        }
        // Rounding pushed the offset past the last interval.
        let last = self.slab_intervals[self.slab_intervals.len() - 1];
        last.hi - f64::EPSILON * last.hi.abs().max(1.0)
    }
}

impl EffectDistribution for SpikeSlabParams {
    fn density(&self, theta: f64) -> f64 {
        (1.0 - self.slab_weight) * self.spike.density(theta)
            + self.slab_weight * self.slab_density(theta)
    }

    fn prob_positive(&self) -> f64 {
        let positive: f64 = self
            .slab_intervals
            .iter()
            .map(|iv| (iv.hi.max(0.0) - iv.lo.max(0.0)).max(0.0))
            .sum();
        (1.0 - self.slab_weight) * self.spike.prob_positive()
            + self.slab_weight * positive / self.slab_length()
    }

    fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
        (0..n)
            .map(|_| {
                if rng.random::<f64>() < self.slab_weight {
                    self.sample_slab(rng)
                } else {
                    self.spike.draw(rng)
                }
            })
            .collect()
    }

    fn kink_points(&self) -> Vec<f64> {
        let mut k = vec![self.spike.mu];
        for iv in &self.slab_intervals {
            k.push(iv.lo);
            k.push(iv.hi);
        }
        k
    }

    fn mass_interval(&self) -> Interval {
        let spike = self.spike.mass_interval();
        let first = self.slab_intervals[0];
        let last = self.slab_intervals[self.slab_intervals.len() - 1];
        Interval {
            lo: spike.lo.min(first.lo),
            hi: spike.hi.max(last.hi),
        }
    }

    fn moments(&self) -> Option<(f64, f64)> {
        let (sm, sv) = self.spike.moments()?;
        let len = self.slab_length();
        let (mut m1, mut m2) = (0.0, 0.0);
        for iv in &self.slab_intervals {
            m1 += (iv.hi.powi(2) - iv.lo.powi(2)) / 2.0 / len;
            m2 += (iv.hi.powi(3) - iv.lo.powi(3)) / 3.0 / len;
        }
        let w = self.slab_weight;
        let mean = (1.0 - w) * sm + w * m1;
        let second = (1.0 - w) * (sv + sm * sm) + w * m2;
        Some((mean, second - mean * mean))
    }
}
