use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use serde::Deserialize;

use super::{EffectDistribution, TAIL_MASS};
use crate::error::{Error, Result};
use crate::numerics::{chi_square_pdf, chi_square_sf, find_root, Interval};

/// `theta = X - shift` with `X ~ chi-square(df)`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "RawChiSq")]
pub struct ShiftedChiSqParams {
    pub df: u32,
    pub shift: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChiSq {
    df: u32,
    shift: f64,
}

impl TryFrom<RawChiSq> for ShiftedChiSqParams {
    type Error = Error;

    fn try_from(r: RawChiSq) -> Result<Self> {
        ShiftedChiSqParams::new(r.df, r.shift)
    }
}

impl ShiftedChiSqParams {
    pub fn new(df: u32, shift: f64) -> Result<Self> {
        if df == 0 {
            return Err(Error::InvalidParameter("chi-square needs df >= 1".into()));
        }
        if !shift.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "shift must be finite, got {shift}"
            )));
        }
        Ok(Self { df, shift })
    }

    fn upper_quantile(&self, tail: f64) -> f64 {
        let df = self.df as f64;
        let mut hi = df + 10.0 * (2.0 * df).sqrt() + 10.0;
        while chi_square_sf(hi, df) > tail {
            hi *= 2.0;
        }
        find_root(
            |x| chi_square_sf(x, df).ln() - tail.ln(),
            Interval { lo: df, hi },
            1e-10,
        )
        .unwrap_or(hi)
    }
}

impl EffectDistribution for ShiftedChiSqParams {
    fn density(&self, theta: f64) -> f64 {
        let x = theta + self.shift;
        // The left endpoint is a null set; keep the integrand finite for df = 1.
        if x <= 0.0 {
            return 0.0;
        }
        chi_square_pdf(x, self.df as f64)
    }

    fn prob_positive(&self) -> f64 {
        if self.shift <= 0.0 {
            1.0
        } else {
            chi_square_sf(self.shift, self.df as f64)
        }
    }

    fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let x: f64 = (0..self.df)
                    .map(|_| {
                        let z: f64 = StandardNormal.sample(rng);
                        z * z
                    })
                    .sum();
                x - self.shift
            })
            .collect()
    }

    fn kink_points(&self) -> Vec<f64> {
        vec![-self.shift]
    }

    fn mass_interval(&self) -> Interval {
        Interval {
            lo: -self.shift,
            hi: self.upper_quantile(TAIL_MASS) - self.shift,
        }
    }

    fn moments(&self) -> Option<(f64, f64)> {
        let df = self.df as f64;
        Some((df - self.shift, 2.0 * df))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_chi_square_three() {
        let g = ShiftedChiSqParams::new(3, 3.0).unwrap();
        assert!((g.prob_positive() - 0.3916).abs() < 1e-4);
        assert!((g.prob_positive() - 0.391_625_176_271_089).abs() < 1e-12);
        assert_eq!(g.density(-3.0), 0.0);
        assert_eq!(g.density(-3.5), 0.0);
        let iv = g.mass_interval();
        assert_eq!(iv.lo, -3.0);
        assert!((chi_square_sf(iv.hi + 3.0, 3.0) / TAIL_MASS - 1.0).abs() < 1e-6);
    }

    #[test]
    fn zero_df_rejected() {
        assert!(ShiftedChiSqParams::new(0, 1.0).is_err());
    }
}
