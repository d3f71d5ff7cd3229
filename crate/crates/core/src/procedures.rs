//! Decision procedures: data-driven thresholds (BY, LC, NLC), model-based
//! tight control (TCO with a known `G`, TCE with a fitted ALD), and the
//! fixed-level acceptance-region optimizers.

use crate::dataset::Dataset;
use crate::distributions::{fit_ald_moments, AldParams, EffectDistribution};
use crate::error::{Error, Result};
use crate::error_rates::{rate_triple, rates_at, AcceptanceRegion, RateTriple};
use crate::numerics::{
    self, try_find_root, try_maximize_scalar, two_sided_p_value, Interval, RootError,
};

/// Search range for tight-control levels.
pub const ALPHA_MIN: f64 = 1e-10;
pub const ALPHA_MAX: f64 = 0.999_999;

/// The level(s) behind a set of decisions.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaUsed {
    Single(f64),
    /// One level per experiment (NLC).
    PerExperiment(Vec<f64>),
}

impl AlphaUsed {
    /// The single level, or the average of the per-experiment levels.
    pub fn summary(&self) -> f64 {
        match self {
            AlphaUsed::Single(a) => *a,
            AlphaUsed::PerExperiment(v) if v.is_empty() => 0.0,
            AlphaUsed::PerExperiment(v) => v.iter().sum::<f64>() / v.len() as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecisionNote {
    /// The moment fit was degenerate; the fallback model was used.
    DegenerateFit { mean: f64, variance: f64 },
    /// MSER stayed below the target over the whole search range.
    AlphaAtUpperCap,
    /// MSER exceeded the target over the whole search range.
    AlphaAtLowerCap,
}

/// Per-experiment outcomes `(R_i, S_i)` and the level that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionSet {
    pub rejected: Vec<bool>,
    pub sign: Vec<i8>,
    pub alpha_used: AlphaUsed,
    pub region: Option<AcceptanceRegion>,
    /// ALD fitted by the empirical procedure, if any.
    pub fitted: Option<AldParams>,
    pub notes: Vec<DecisionNote>,
}

impl DecisionSet {
    pub fn len(&self) -> usize {
        self.rejected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rejected.is_empty()
    }

    /// `R`, the number of signs inferred.
    pub fn rejections(&self) -> usize {
        self.rejected.iter().filter(|r| **r).count()
    }

    /// Sign errors `E` against the true effects.
    pub fn sign_errors(&self, theta: &[f64]) -> usize {
        self.sign
            .iter()
            .zip(theta)
            .filter(|(s, t)| f64::from(**s) * t.signum() == -1.0 && **t != 0.0)
            .count()
    }
}

fn sign_of(y: f64) -> i8 {
    if y > 0.0 {
        1
    } else if y < 0.0 {
        -1
    } else {
        0
    }
}

/// Reject exactly when `y` falls outside `region`.
pub fn decide(y: &Dataset, region: &AcceptanceRegion) -> DecisionSet {
    let sign: Vec<i8> = y.values().iter().map(|v| region.classify(*v)).collect();
    DecisionSet {
        rejected: sign.iter().map(|s| *s != 0).collect(),
        sign,
        alpha_used: AlphaUsed::Single(region.alpha()),
        region: Some(*region),
        fitted: None,
        notes: Vec::new(),
    }
}

fn check_alpha_s(alpha_s: f64, upper: f64) -> Result<()> {
    if alpha_s > 0.0 && alpha_s < upper {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha_s must be in (0, {upper}), got {alpha_s}"
        )))
    }
}

fn sorted_p_values(y: &Dataset) -> (Vec<f64>, Vec<f64>) {
    let p: Vec<f64> = y.values().iter().map(|v| two_sided_p_value(*v)).collect();
    let mut sorted = p.clone();
    sorted.sort_by(f64::total_cmp);
    (p, sorted)
}

/// Largest `k` with `p_(k) <= slope * k / m` (0 if none).
fn step_up_rank(sorted: &[f64], slope: f64) -> usize {
    let m = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .rev()
        .find(|(i, p)| **p <= slope * (*i + 1) as f64 / m)
        .map_or(0, |(i, _)| i + 1)
}

/// Largest `alpha` with `alpha <= slope * R(alpha) / m`, then reject every
/// `p_i <= alpha`. The supremum sits at the threshold value `slope k* / m`.
fn step_up(y: &Dataset, slope: f64) -> DecisionSet {
    let (p, sorted) = sorted_p_values(y);
    let k = step_up_rank(&sorted, slope);
    let alpha = slope * k as f64 / y.len() as f64;
    let rejected: Vec<bool> = p.iter().map(|pi| alpha > 0.0 && *pi <= alpha).collect();
    let sign = rejected
        .iter()
        .zip(y.values())
        .map(|(r, v)| if *r { sign_of(*v) } else { 0 })
        .collect();
    DecisionSet {
        rejected,
        sign,
        alpha_used: AlphaUsed::Single(alpha),
        region: None,
        fitted: None,
        notes: Vec::new(),
    }
}

/// Benjamini–Yekutieli directional step-up: the largest `alpha_by` with
/// `alpha_by <= alpha_s R(alpha_by) / m`.
pub fn by_procedure(y: &Dataset, alpha_s: f64) -> Result<DecisionSet> {
    check_alpha_s(alpha_s, 1.0)?;
    Ok(step_up(y, alpha_s))
}

/// Loose control: the largest `alpha_l` with `alpha_l <= 2 alpha_s R(alpha_l) / m`.
pub fn lc_procedure(y: &Dataset, alpha_s: f64) -> Result<DecisionSet> {
    check_alpha_s(alpha_s, 0.5)?;
    Ok(step_up(y, 2.0 * alpha_s))
}

/// Non-asymptotic loose control. Experiment `i` gets its own level
/// `alpha_i`, the largest value with
/// `alpha_i <= 2 alpha_s ((R^{-i}(alpha_i) - 1) v 0) / m`, where `R^{-i}`
/// counts rejections among the other experiments.
///
/// Removing the experiment at sorted rank `r` shifts every later order
/// statistic down one place, so the leave-one-out step-up rank is the larger
/// of a prefix maximum (ranks below `r`, unshifted) and a suffix maximum
/// (ranks above `r`, shifted). Both are tabulated once after a single sort.
pub fn nlc_procedure(y: &Dataset, alpha_s: f64) -> Result<DecisionSet> {
    check_alpha_s(alpha_s, 0.5)?;
    let m = y.len();
    let slope = 2.0 * alpha_s;
    let mf = m as f64;
    let p: Vec<f64> = y.values().iter().map(|v| two_sided_p_value(*v)).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|a, b| p[*a].total_cmp(&p[*b]));
    let sorted: Vec<f64> = order.iter().map(|i| p[*i]).collect();

    // prefix[r] = max{k < r : p_(k) <= slope (k - 1) / m}, ranks 1-based.
    let mut prefix = vec![0usize; m + 2];
    for r in 2..=m + 1 {
        let k = r - 1;
        let ok = sorted[k - 1] <= slope * (k as f64 - 1.0) / mf;
        prefix[r] = if ok { k } else { prefix[r - 1] };
    }
    // suffix[r] = max{j - 1 : j > r, p_(j) <= slope (j - 2) / m}.
    let mut suffix = vec![0usize; m + 2];
    for r in (1..m).rev() {
        let j = r + 1;
        let ok = sorted[j - 1] <= slope * (j as f64 - 2.0) / mf;
        suffix[r] = if ok {
            suffix[r + 1].max(j - 1)
        } else {
            suffix[r + 1]
        };
    }

    let mut alphas = vec![0.0; m];
    for (rank0, &i) in order.iter().enumerate() {
        let r = rank0 + 1;
        let k = prefix[r].max(suffix[r]);
        alphas[i] = if k >= 2 {
            slope * (k - 1) as f64 / mf
        } else {
            0.0
        };
    }
    let rejected: Vec<bool> = p
        .iter()
        .zip(&alphas)
        .map(|(pi, a)| *a > 0.0 && pi <= a)
        .collect();
    let sign = rejected
        .iter()
        .zip(y.values())
        .map(|(r, v)| if *r { sign_of(*v) } else { 0 })
        .collect();
    Ok(DecisionSet {
        rejected,
        sign,
        alpha_used: AlphaUsed::PerExperiment(alphas),
        region: None,
        fitted: None,
        notes: Vec::new(),
    })
}

/// Solution of `MSER(alpha, s) = alpha_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightAlpha {
    pub alpha: f64,
    /// Set when no interior solution exists and a search limit was returned.
    pub cap: Option<DecisionNote>,
}

/// Level `alpha` at which the region `A(alpha, s)` has `MSER = alpha_s`
/// under `g`, searched in `log(alpha)` over `[ALPHA_MIN, ALPHA_MAX]`.
pub fn tight_alpha<G>(g: &G, alpha_s: f64, s: f64) -> Result<TightAlpha>
where
    G: EffectDistribution + ?Sized,
{
    let excess =
        |log_alpha: f64| -> Result<f64> { Ok(rates_at(g, log_alpha.exp(), s)?.mser - alpha_s) };
    let (lo, hi) = (ALPHA_MIN.ln(), ALPHA_MAX.ln());
    if excess(hi)? <= 0.0 {
        return Ok(TightAlpha {
            alpha: ALPHA_MAX,
            cap: Some(DecisionNote::AlphaAtUpperCap),
        });
    }
    if excess(lo)? > 0.0 {
        return Ok(TightAlpha {
            alpha: ALPHA_MIN,
            cap: Some(DecisionNote::AlphaAtLowerCap),
        });
    }
    let root = try_find_root(excess, Interval { lo, hi }, 1e-10).map_err(Error::from)?;
    Ok(TightAlpha {
        alpha: root.exp(),
        cap: None,
    })
}

/// Tight-control oracle level `alpha_o`: `MSER(alpha_o) = alpha_s` for the
/// symmetric region under the true `g`.
pub fn tco_alpha<G>(g: &G, alpha_s: f64) -> Result<TightAlpha>
where
    G: EffectDistribution + ?Sized,
{
    check_alpha_s(alpha_s, 0.5)?;
    tight_alpha(g, alpha_s, 0.5)
}

fn decide_tight(y: &Dataset, level: TightAlpha) -> Result<DecisionSet> {
    let region = AcceptanceRegion::symmetric(level.alpha)?;
    let mut d = decide(y, &region);
    d.notes.extend(level.cap);
    Ok(d)
}

/// Tight control with a known effect distribution.
pub fn tco_procedure<G>(y: &Dataset, alpha_s: f64, g: &G) -> Result<DecisionSet>
where
    G: EffectDistribution + ?Sized,
{
    decide_tight(y, tco_alpha(g, alpha_s)?)
}

/// Tight control with an already computed `alpha_o`.
pub fn tco_decisions(y: &Dataset, level: TightAlpha) -> Result<DecisionSet> {
    decide_tight(y, level)
}

/// Tight control, empirical: fit `ALD(0, tau, q)` by moments, solve
/// `MSER(alpha_e) = alpha_s` under the fit and decide at `alpha_e`. A
/// degenerate fit is not an error; its fallback model is used and the fact
/// is recorded in `notes`.
pub fn tce_procedure(y: &Dataset, alpha_s: f64) -> Result<DecisionSet> {
    check_alpha_s(alpha_s, 0.5)?;
    let (fit, note) = match fit_ald_moments(y) {
        Ok(p) => (p, None),
        Err(Error::DegenerateFit {
            mean,
            variance,
            fallback,
        }) => (
            fallback,
            Some(DecisionNote::DegenerateFit { mean, variance }),
        ),
        Err(e) => return Err(e),
    };
    let level = tco_alpha(&fit, alpha_s)?;
    let region = AcceptanceRegion::symmetric(level.alpha)?;
    let mut d = decide(y, &region);
    d.fitted = Some(fit);
    d.notes.extend(note);
    d.notes.extend(level.cap);
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SObjective {
    MaximizeMsdr,
    MinimizeMser,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SOptimum {
    pub s: f64,
    pub rates: RateTriple,
}

/// Best split `s` of a fixed level `alpha` for the requested objective.
pub fn optimize_s<G>(g: &G, alpha: f64, objective: SObjective) -> Result<SOptimum>
where
    G: EffectDistribution + ?Sized,
{
    AcceptanceRegion::new(alpha, 0.5)?;
    let unit = Interval { lo: 0.0, hi: 1.0 };
    let (s, _) = try_maximize_scalar(
        |s| {
            let r = rates_at(g, alpha, s)?;
            Ok::<_, Error>(match objective {
                SObjective::MaximizeMsdr => r.msdr,
                SObjective::MinimizeMser => -r.mser,
            })
        },
        unit,
        numerics::OPT_TOL,
    )?;
    Ok(SOptimum {
        s,
        rates: rates_at(g, alpha, s)?,
    })
}

pub const JOINT_ALPHA_GRID: usize = 64;
pub const JOINT_S_GRID: usize = 33;
const JOINT_LOG_ALPHA_RANGE: (f64, f64) = (-18.420_680_743_952_367, -0.010_050_335_853_501_44); // ln 1e-8, ln 0.99
const JOINT_PASSES: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointOptimum {
    pub alpha: f64,
    pub s: f64,
    pub rates: RateTriple,
}

/// Maximize `MSDR(A(alpha, s))` subject to `MSER(A(alpha, s)) <= alpha_s`.
///
/// A 64 x 33 grid over `(log alpha, s)` locates the best feasible cell; the
/// symmetric tight-control point `(alpha_o, 1/2)` is added as a candidate.
/// Two refinement passes then alternate between the coordinates: at fixed
/// `s`, MSDR grows with `alpha`, so the best level in the neighbouring grid
/// cells is the largest feasible one (a root of `MSER = alpha_s` when the
/// constraint binds); at fixed `alpha`, golden-section search over the
/// neighbouring `s` cells. Only evaluated feasible points are ever returned.
pub fn joint_optimize<G>(g: &G, alpha_s: f64) -> Result<JointOptimum>
where
    G: EffectDistribution + ?Sized,
{
    check_alpha_s(alpha_s, 0.5)?;
    let (la_lo, la_hi) = JOINT_LOG_ALPHA_RANGE;
    let la_step = (la_hi - la_lo) / (JOINT_ALPHA_GRID - 1) as f64;
    let s_step = 1.0 / (JOINT_S_GRID + 1) as f64;

    let mut best: Option<JointOptimum> = None;
    let consider = |alpha: f64, s: f64, rates: RateTriple, best: &mut Option<JointOptimum>| {
        if rates.mser <= alpha_s && best.is_none_or(|b| rates.msdr > b.rates.msdr) {
            *best = Some(JointOptimum { alpha, s, rates });
        }
    };

    for i in 0..JOINT_ALPHA_GRID {
        let alpha = (la_lo + i as f64 * la_step).exp();
        for j in 0..JOINT_S_GRID {
            let s = (j + 1) as f64 * s_step;
            let rates = rates_at(g, alpha, s)?;
            consider(alpha, s, rates, &mut best);
        }
    }
    let baseline = tight_alpha(g, alpha_s, 0.5)?;
    if baseline.cap != Some(DecisionNote::AlphaAtLowerCap) {
        let rates = rates_at(g, baseline.alpha, 0.5)?;
        consider(baseline.alpha, 0.5, rates, &mut best);
    }
    let Some(mut current) = best else {
        return Err(Error::Infeasible { alpha_s });
    };

    for _ in 0..JOINT_PASSES {
        // Level: largest feasible alpha within one grid cell either side.
        let s = current.s;
        let la = current.alpha.ln();
        let top = (la + la_step).min(ALPHA_MAX.ln());
        let rates_top = rates_at(g, top.exp(), s)?;
        if rates_top.mser <= alpha_s {
            consider(top.exp(), s, rates_top, &mut best);
        } else {
            let excess = |x: f64| -> Result<f64> { Ok(rates_at(g, x.exp(), s)?.mser - alpha_s) };
            match try_find_root(excess, Interval { lo: la, hi: top }, 1e-12) {
                Ok(root) => {
                    let rates = rates_at(g, root.exp(), s)?;
                    consider(root.exp(), s, rates, &mut best);
                }
                // Current point sits exactly on the boundary or the cell is
                // not monotone; keep what we have.
                Err(RootError::Root(Error::Bracketing { .. })) => {}
                Err(e) => return Err(e.into()),
            }
        }
        current = best.expect("a feasible point was recorded");

        // Split: golden-section on the penalized MSDR.
        let alpha = current.alpha;
        let window = Interval {
            lo: (current.s - s_step).max(0.0),
            hi: (current.s + s_step).min(1.0),
        };
        let mut feasible_seen: Vec<(f64, RateTriple)> = Vec::new();
        try_maximize_scalar(
            |s| {
                let r = rates_at(g, alpha, s)?;
                if r.mser <= alpha_s {
                    feasible_seen.push((s, r));
                    Ok::<_, Error>(r.msdr)
                } else {
                    Ok(-1.0 - (r.mser - alpha_s))
                }
            },
            window,
            numerics::OPT_TOL,
        )?;
        for (s, r) in feasible_seen {
            consider(alpha, s, r, &mut best);
        }
        current = best.expect("a feasible point was recorded");
    }
    Ok(current)
}

/// MSER and MSDR at the symmetric region of level `alpha`.
pub fn symmetric_rates<G>(g: &G, alpha: f64) -> Result<RateTriple>
where
    G: EffectDistribution + ?Sized,
{
    rate_triple(g, &AcceptanceRegion::symmetric(alpha)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{Effect, NormalParams, ShiftedChiSqParams};
    use crate::numerics::std_normal_quantile;

    /// Statistics whose two-sided p-values are `p`.
    fn from_p(p: &[f64]) -> Dataset {
        Dataset::new(
            p.iter()
                .map(|p| -std_normal_quantile(p / 2.0).unwrap())
                .collect(),
        )
        .unwrap()
    }

    /// Largest alpha on a fine grid satisfying `alpha <= slope R(alpha) / m`.
    fn grid_fixed_point(p: &[f64], slope: f64) -> f64 {
        let m = p.len() as f64;
        let mut best = 0.0;
        for i in 1..=200_000 {
            let a = i as f64 / 200_000.0;
            let r = p.iter().filter(|pi| **pi <= a).count() as f64;
            if a <= slope * r / m + 1e-12 {
                best = a;
            }
        }
        best
    }

    #[test]
    fn decide_symmetric() {
        let y = Dataset::new(vec![2.5, -0.3, -2.2]).unwrap();
        let d = decide(&y, &AcceptanceRegion::symmetric(0.05).unwrap());
        assert_eq!(d.rejected, vec![true, false, true]);
        assert_eq!(d.sign, vec![1, 0, -1]);
    }

    #[test]
    fn decide_shifted_region() {
        let y = Dataset::new(vec![2.0]).unwrap();
        let d = decide(&y, &AcceptanceRegion::new(0.05, 0.829).unwrap());
        assert_eq!(d.rejected, vec![false]);
        let d = decide(&y, &AcceptanceRegion::symmetric(1e-300).unwrap());
        assert_eq!(d.rejections(), 0);
    }

    #[test]
    fn by_example() {
        let p = [0.001, 0.2, 0.9];
        let d = by_procedure(&from_p(&p), 0.1).unwrap();
        assert!((d.alpha_used.summary() - 0.1 / 3.0).abs() < 1e-15);
        assert_eq!(d.rejected, vec![true, false, false]);
        assert!((grid_fixed_point(&p, 0.1) - 1.0 / 30.0).abs() < 1e-5);
    }

    #[test]
    fn by_no_and_all_rejections() {
        let d = by_procedure(&from_p(&[0.5, 0.3, 0.2]), 0.1).unwrap();
        assert_eq!(d.rejections(), 0);
        assert_eq!(d.alpha_used, AlphaUsed::Single(0.0));
        let d = by_procedure(&from_p(&[0.01, 0.02, 0.03]), 0.1).unwrap();
        assert_eq!(d.rejections(), 3);
        assert!((d.alpha_used.summary() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn lc_examples() {
        let p = [0.001, 0.2, 0.9];
        let d = lc_procedure(&from_p(&p), 0.1).unwrap();
        assert!((d.alpha_used.summary() - 0.2 / 3.0).abs() < 1e-15);
        assert_eq!(d.rejections(), 1);
        assert!((grid_fixed_point(&p, 0.2) - 1.0 / 15.0).abs() < 1e-5);

        let p = [0.05, 0.12];
        let d = lc_procedure(&from_p(&p), 0.1).unwrap();
        assert!(matches!(d.alpha_used, AlphaUsed::Single(a) if (a - 0.2).abs() < 1e-15));
        assert_eq!(d.rejections(), 2);
        assert!((grid_fixed_point(&p, 0.2) - 0.2).abs() < 1e-5);
    }

    #[test]
    fn lc_precondition() {
        let y = from_p(&[0.01]);
        assert!(lc_procedure(&y, 0.5).is_err());
        assert!(nlc_procedure(&y, 0.0).is_err());
        assert!(by_procedure(&y, 1.0).is_err());
    }

    #[test]
    fn nlc_pair_rejects_nothing() {
        let d = nlc_procedure(&from_p(&[0.001, 0.001]), 0.1).unwrap();
        assert_eq!(d.rejections(), 0);
        let d = nlc_procedure(&from_p(&[0.001]), 0.1).unwrap();
        assert_eq!(d.rejections(), 0);
    }

    #[test]
    fn nlc_half_signal() {
        let mut p = vec![1e-12; 50];
        p.extend(vec![0.999; 50]);
        let d = nlc_procedure(&from_p(&p), 0.1).unwrap();
        let AlphaUsed::PerExperiment(alphas) = &d.alpha_used else {
            panic!()
        };
        assert!((alphas[0] - 0.096).abs() < 1e-15);
        assert!(d.rejected[..50].iter().all(|r| *r));
        assert!(d.rejected[50..].iter().all(|r| !*r));
    }

    #[test]
    fn tco_caps_for_large_effects() {
        let g = AldParams::centered(5.0, 0.5).unwrap();
        assert!(symmetric_rates(&g, 0.05).unwrap().mser < 0.1);
        let t = tco_alpha(&g, 0.1).unwrap();
        assert_eq!(t.cap, Some(DecisionNote::AlphaAtUpperCap));
        assert_eq!(t.alpha, ALPHA_MAX);
    }

    #[test]
    fn tco_hits_target() {
        for g in [
            Effect::from(AldParams::centered(0.5, 0.3).unwrap()),
            Effect::from(NormalParams::new(0.0, 1.0).unwrap()),
        ] {
            let t = tco_alpha(&g, 0.1).unwrap();
            assert!(t.cap.is_none());
            let r = symmetric_rates(&g, t.alpha).unwrap();
            assert!((r.mser - 0.1).abs() < 1e-6, "{g:?}: {r:?}");
        }
    }

    #[test]
    fn tce_degenerate_fit_rejects_nothing() {
        let y = Dataset::new((0..200).map(|i| ((i as f64) * 0.37).sin() * 0.5).collect()).unwrap();
        assert!(y.sample_variance().unwrap() < 1.0);
        let d = tce_procedure(&y, 0.1).unwrap();
        assert!(matches!(d.notes[0], DecisionNote::DegenerateFit { .. }));
        assert!(d.notes.contains(&DecisionNote::AlphaAtLowerCap));
        assert_eq!(d.rejections(), 0);
    }

    #[test]
    fn optimize_s_table_one() {
        let g = Effect::from(ShiftedChiSqParams::new(3, 3.0).unwrap()).in_noise_units(2.0);
        let d = optimize_s(&g, 0.05, SObjective::MaximizeMsdr).unwrap();
        assert!((d.s - 0.683).abs() < 0.02, "{d:?}");
        assert!((d.rates.msdr - 0.193).abs() < 0.002);
        let e = optimize_s(&g, 0.05, SObjective::MinimizeMser).unwrap();
        assert!((e.s - 0.829).abs() < 0.02, "{e:?}");
        assert!((e.rates.mser - 0.0271).abs() < 0.0005);
    }

    #[test]
    fn optimize_s_symmetric_g() {
        let g = NormalParams::new(0.0, 1.0).unwrap();
        for obj in [SObjective::MaximizeMsdr, SObjective::MinimizeMser] {
            let o = optimize_s(&g, 0.05, obj).unwrap();
            assert!((o.s - 0.5).abs() < 1e-3, "{obj:?}: {o:?}");
        }
    }

    #[test]
    fn joint_symmetric_collapses_to_tco() {
        let g = NormalParams::new(0.0, 1.0).unwrap();
        let j = joint_optimize(&g, 0.1).unwrap();
        let t = tco_alpha(&g, 0.1).unwrap();
        assert!((j.s - 0.5).abs() < 1.0 / 34.0, "{j:?}");
        assert!((j.alpha - t.alpha).abs() < 1e-3, "{j:?} vs {t:?}");
        assert!(j.rates.mser <= 0.1 + 1e-6);
    }

    #[test]
    fn joint_beats_symmetric_baseline() {
        let g = Effect::from(ShiftedChiSqParams::new(3, 3.0).unwrap());
        let j = joint_optimize(&g, 0.05).unwrap();
        let t = tco_alpha(&g, 0.05).unwrap();
        let base = symmetric_rates(&g, t.alpha).unwrap();
        assert!(j.rates.msdr >= base.msdr - 1e-9, "{j:?} vs {base:?}");
        assert!(rates_at(&g, j.alpha, j.s).unwrap().mser <= 0.05 + 1e-6);
    }

    #[test]
    fn joint_infeasible() {
        // Effects at ~0 put MSER near 1/2 for every region.
        let g = AldParams::centered(1e-9, 0.5).unwrap();
        assert!(matches!(
            joint_optimize(&g, 0.1),
            Err(Error::Infeasible { .. })
        ));
    }
}
