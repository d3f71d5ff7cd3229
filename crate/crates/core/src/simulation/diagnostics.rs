use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::distributions::EffectDistribution;
use crate::error::{Error, Result};
use crate::error_rates::{rate_triple, AcceptanceRegion};
use crate::numerics::{ln_gamma, regularized_gamma_q};

/// Fewest datasets with `R = r` accepted by [`lemma1_diagnostic`].
pub const LEMMA1_MIN_SAMPLES: usize = 100;
const MIN_EXPECTED_PER_BIN: f64 = 5.0;

/// `(R, E)` for one simulated dataset of `m` experiments at a fixed region.
fn simulate_counts<G, R>(g: &G, region: &AcceptanceRegion, m: usize, rng: &mut R) -> (usize, usize)
where
    G: EffectDistribution + ?Sized,
    R: rand::RngCore,
{
    let theta = g.sample(rng, m);
    let (mut r, mut e) = (0, 0);
    for t in theta {
        let z: f64 = StandardNormal.sample(rng);
        let s = region.classify(t + z);
        if s != 0 {
            r += 1;
            if f64::from(s) * t < 0.0 {
                e += 1;
            }
        }
    }
    (r, e)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Report {
    /// Datasets with exactly `r` rejections.
    pub conditioned: usize,
    /// `counts[k]`: conditioned datasets with `k` sign errors.
    pub counts: Vec<usize>,
    pub mser: f64,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

fn binomial_pmf(n: usize, k: usize, p: f64) -> f64 {
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let (n, kf) = (n as f64, k as f64);
    let ln_choose = ln_gamma(n + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(n - kf + 1.0);
    (ln_choose + kf * p.ln() + (n - kf) * (-p).ln_1p()).exp()
}

/// Pearson chi-square of `observed` against `expected`, pooling adjacent
/// cells left to right until each pooled cell expects at least 5.
fn pooled_chi_square(observed: &[usize], expected: &[f64]) -> (f64, usize) {
    if observed
        .iter()
        .zip(expected)
        .any(|(o, e)| *o > 0 && *e == 0.0)
    {
        return (f64::INFINITY, 0);
    }
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for (o, e) in observed.iter().zip(expected) {
        o_acc += *o as f64;
        e_acc += e;
        if e_acc >= MIN_EXPECTED_PER_BIN {
            cells.push((o_acc, e_acc));
            (o_acc, e_acc) = (0.0, 0.0);
        }
    }
    match cells.last_mut() {
        Some(last) => {
            last.0 += o_acc;
            last.1 += e_acc;
        }
        None => cells.push((o_acc, e_acc)),
    }
    let stat = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    (stat, cells.len() - 1)
}

/// Among simulated datasets of `m` experiments with exactly `r`
/// rejections, test the sign error count against Binomial(r, MSER).
pub fn lemma1_diagnostic<G>(
    g: &G,
    region: &AcceptanceRegion,
    m: usize,
    r: usize,
    trials: usize,
    seed: u64,
) -> Result<Lemma1Report>
where
    G: EffectDistribution + ?Sized,
{
    if r == 0 || r > m {
        return Err(Error::InvalidParameter(format!(
            "conditioning count r must be in 1..={m}, got {r}"
        )));
    }
    let mser = rate_triple(g, region)?.mser;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; r + 1];
    for _ in 0..trials {
        let (rej, err) = simulate_counts(g, region, m, &mut rng);
        if rej == r {
            counts[err] += 1;
        }
    }
    let conditioned: usize = counts.iter().sum();
    if conditioned < LEMMA1_MIN_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "only {conditioned} of {trials} datasets had {r} rejections, need {LEMMA1_MIN_SAMPLES}"
        )));
    }
    let expected: Vec<f64> = (0..=r)
        .map(|k| conditioned as f64 * binomial_pmf(r, k, mser))
        .collect();
    let (statistic, df) = pooled_chi_square(&counts, &expected);
    let p_value = if statistic.is_infinite() {
        0.0
    } else if df == 0 {
        1.0
    } else {
        regularized_gamma_q(0.5 * df as f64, 0.5 * statistic)
    };
    Ok(Lemma1Report {
        conditioned,
        counts,
        mser,
        statistic,
        df,
        p_value,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop1Row {
    pub m: usize,
    pub mean_sep: f64,
    /// Mean of `|SEP - MSER|`.
    pub mean_abs_deviation: f64,
    pub sep_variance: f64,
}

/// Spread of the sign error proportion around MSER as `m` grows.
pub fn prop1_diagnostic<G>(
    g: &G,
    region: &AcceptanceRegion,
    m_grid: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<Vec<Prop1Row>>
where
    G: EffectDistribution + ?Sized,
{
    if m_grid.is_empty() || m_grid.contains(&0) {
        return Err(Error::InvalidParameter(
            "m grid must be non-empty and positive".into(),
        ));
    }
    if replicates < 2 {
        return Err(Error::InvalidParameter("need at least 2 replicates".into()));
    }
    let mser = rate_triple(g, region)?.mser;
    let mut rows = Vec::with_capacity(m_grid.len());
    for (j, &m) in m_grid.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        let seps: Vec<f64> = (0..replicates)
            .map(|_| {
                let (r, e) = simulate_counts(g, region, m, &mut rng);
                e as f64 / r.max(1) as f64
            })
            .collect();
        let n = replicates as f64;
        let mean_sep = seps.iter().sum::<f64>() / n;
        rows.push(Prop1Row {
            m,
            mean_sep,
            mean_abs_deviation: seps.iter().map(|s| (s - mser).abs()).sum::<f64>() / n,
            sep_variance: seps.iter().map(|s| (s - mean_sep).powi(2)).sum::<f64>() / (n - 1.0),
        });
    }
    Ok(rows)
}
