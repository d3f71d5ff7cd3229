//! Marginal sign error rate (MSER), marginal sign discovery rate (MSDR) and
//! the sign-error numerator `gamma`, evaluated by quadrature against `G`.
//!
//! For an acceptance region `A(alpha, s) = (l, u)` with
//! `l = Phi^-1(alpha s)` and `u = Phi^-1(1 - alpha (1 - s))`:
//!
//! * `B1(theta) = Pr(Y < l | theta) = Phi(l - theta)`
//! * `B2(theta) = Pr(Y > u | theta) = Phi(theta - u)`
//! * `gamma = E_G[B1 1(theta > 0) + B2 1(theta < 0)]`
//! * `MSDR = E_G[B1 + B2]`, `MSER = gamma / MSDR`.

use crate::distributions::EffectDistribution;
use crate::error::{Error, Result};
use crate::numerics::{std_normal_cdf, std_normal_quantile, Interval, Quadrature};

/// Smallest MSDR accepted before a region is declared degenerate.
pub const MSDR_FLOOR: f64 = 1e-300;

/// The level-`alpha` acceptance region `A(alpha, s)`. `s` is the share of
/// the type I error spent in the lower tail; `s = 1/2` is the usual
/// symmetric two-sided region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptanceRegion {
    alpha: f64,
    s: f64,
    lower: f64,
    upper: f64,
}

impl AcceptanceRegion {
    pub fn new(alpha: f64, s: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be in (0, 1), got {alpha}"
            )));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "s must be in (0, 1), got {s}"
            )));
        }
        // Upper endpoint through the lower-tail quantile keeps s = 1/2 exactly symmetric.
        let lower = std_normal_quantile(alpha * s)?;
        let upper = -std_normal_quantile(alpha * (1.0 - s))?;
        Ok(Self {
            alpha,
            s,
            lower,
            upper,
        })
    }

    pub fn symmetric(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.5)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn is_symmetric(&self) -> bool {
        self.s == 0.5
    }

    /// `-1` below the region, `+1` above it, `0` inside.
    pub fn classify(&self, y: f64) -> i8 {
        if y < self.lower {
            -1
        } else if y > self.upper {
            1
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTriple {
    pub mser: f64,
    pub msdr: f64,
    pub gamma: f64,
}

/// `Pr(Y < l | theta)`: a negative sign is inferred.
pub fn b1(theta: f64, region: &AcceptanceRegion) -> f64 {
    std_normal_cdf(region.lower - theta)
}

/// `Pr(Y > u | theta)`: a positive sign is inferred.
pub fn b2(theta: f64, region: &AcceptanceRegion) -> f64 {
    std_normal_cdf(theta - region.upper)
}

fn rate_quadrature() -> Quadrature {
    Quadrature::with_tolerance(1e-10, 1e-17)
}

/// MSER, MSDR and `gamma` for effects drawn from `g` and the region `region`.
pub fn rate_triple<G>(g: &G, region: &AcceptanceRegion) -> Result<RateTriple>
where
    G: EffectDistribution + ?Sized,
{
    let quad = rate_quadrature();
    let support = g.mass_interval();
    let mut breaks = g.kink_points();
    breaks.push(0.0);

    let negative = support.intersect(&Interval {
        lo: f64::NEG_INFINITY,
        hi: 0.0,
    });
    let positive = support.intersect(&Interval {
        lo: 0.0,
        hi: f64::INFINITY,
    });

    let integral = |h: &dyn Fn(f64) -> f64, dom: Option<Interval>| -> Result<f64> {
        match dom {
            Some(d) => quad.integrate(|t| h(t) * g.density(t), d, &breaks),
            None => Ok(0.0),
        }
    };
    let wrong_pos = integral(&|t| b1(t, region), positive)?;
    let right_pos = integral(&|t| b2(t, region), positive)?;
    let wrong_neg = integral(&|t| b2(t, region), negative)?;
    let right_neg = integral(&|t| b1(t, region), negative)?;

    let gamma = wrong_pos + wrong_neg;
    let msdr = gamma + right_pos + right_neg;
    if !(msdr >= MSDR_FLOOR) {
        return Err(Error::DegenerateRegion { msdr });
    }
    Ok(RateTriple {
        mser: gamma / msdr,
        msdr,
        gamma,
    })
}

/// Rates for the region `A(alpha, s)`.
pub fn rates_at<G>(g: &G, alpha: f64, s: f64) -> Result<RateTriple>
where
    G: EffectDistribution + ?Sized,
{
    rate_triple(g, &AcceptanceRegion::new(alpha, s)?)
}

/// Distribution-free bound `gamma <= alpha s pi0 + alpha (1 - s)(1 - pi0)`
/// with `pi0 = Pr(theta > 0)`.
pub fn lemma_bound(region: &AcceptanceRegion, pi0: f64) -> f64 {
    let (alpha, s) = (region.alpha, region.s);
    alpha * s * pi0 + alpha * (1.0 - s) * (1.0 - pi0)
}
