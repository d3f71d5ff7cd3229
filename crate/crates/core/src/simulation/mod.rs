//! Seeded Monte Carlo harness: draw `theta ~ G`, observe `Y = theta + Z`,
//! apply each procedure and aggregate sign error proportions and counts.
//!
//! Replicate `i` of a scenario with master seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` on stream `i`: first the `m` effects, then
//! `m` standard normal noise terms. Results are gathered in replicate order
//! and summed sequentially, so reports do not depend on the worker count.

mod config;
mod diagnostics;
mod report;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Deserialize;

pub use config::{calibrate_tau_grid, expected_sep, ScenarioFile, TauSweep, SPIKE_TAU_GRID};
pub use diagnostics::{
    lemma1_diagnostic, prop1_diagnostic, Lemma1Report, Prop1Row, LEMMA1_MIN_SAMPLES,
};
pub use report::{format_g17, report_csv, REPORT_HEADER};

use crate::dataset::Dataset;
use crate::distributions::{Effect, EffectDistribution};
use crate::error::{Error, Result};
use crate::procedures::{
    by_procedure, lc_procedure, nlc_procedure, symmetric_rates, tce_procedure, tco_alpha,
    tco_decisions, DecisionSet, TightAlpha,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(try_from = "String")]
pub enum Procedure {
    By,
    Lc,
    Nlc,
    Tco,
    Tcea,
}

impl Procedure {
    pub const ALL: [Procedure; 5] = [Self::By, Self::Lc, Self::Nlc, Self::Tco, Self::Tcea];

    pub fn name(self) -> &'static str {
        match self {
            Self::By => "BY",
            Self::Lc => "LC",
            Self::Nlc => "NLC",
            Self::Tco => "TCO",
            Self::Tcea => "TCEA",
        }
    }
}

impl fmt::Display for Procedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Procedure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown procedure `{s}`, expected one of BY, LC, NLC, TCO, TCEA"
                ))
            })
    }
}

impl TryFrom<String> for Procedure {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// One simulation setting: `replicates` datasets of `m` experiments with
/// effects from `effect`, each analysed by every procedure in `procedures`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub m: usize,
    pub replicates: usize,
    pub effect: Effect,
    pub alpha_s: f64,
    pub procedures: Vec<Procedure>,
    pub master_seed: u64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidParameter(
                "replicates must be at least 1".into(),
            ));
        }
        if !(self.alpha_s > 0.0 && self.alpha_s < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "alpha_s must be in (0, 0.5), got {}",
                self.alpha_s
            )));
        }
        if self.procedures.is_empty() {
            return Err(Error::InvalidParameter("no procedures requested".into()));
        }
        Ok(())
    }

    /// The RNG for one replicate.
    pub fn replicate_rng(&self, replicate: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(replicate as u64);
        rng
    }

    /// True effects and observations for one replicate.
    pub fn draw(&self, replicate: usize) -> (Vec<f64>, Vec<f64>) {
        let mut rng = self.replicate_rng(replicate);
        let theta = self.effect.sample(&mut rng, self.m);
        let y = theta
            .iter()
            .map(|t| {
                let z: f64 = StandardNormal.sample(&mut rng);
                t + z
            })
            .collect();
        (theta, y)
    }
}

/// A scenario with the oracle level solved once for all replicates.
#[derive(Debug, Clone)]
pub struct PreparedScenario {
    pub scenario: Scenario,
    pub oracle: Option<TightAlpha>,
    /// Model value of the oracle's mean SEP, `alpha_s * Pr(R > 0)`.
    pub oracle_expected_sep: Option<f64>,
}

impl PreparedScenario {
    pub fn new(scenario: Scenario) -> Result<Self> {
        scenario.validate()?;
        let oracle = if scenario.procedures.contains(&Procedure::Tco) {
            Some(tco_alpha(&scenario.effect, scenario.alpha_s)?)
        } else {
            None
        };
        let oracle_expected_sep = match oracle {
            Some(level) => {
                let r = symmetric_rates(&scenario.effect, level.alpha)?;
                let p_any = -(scenario.m as f64 * (-r.msdr).ln_1p()).exp_m1();
                Some(r.mser * p_any)
            }
            None => None,
        };
        Ok(Self {
            scenario,
            oracle,
            oracle_expected_sep,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub procedure: Procedure,
    /// `R`.
    pub signs_inferred: usize,
    /// `E`.
    pub sign_errors: usize,
    /// `E / (R v 1)`.
    pub sep: f64,
    pub alpha_chosen: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateResult {
    pub replicate: usize,
    pub outcomes: Vec<Outcome>,
    /// Experiments rejected by BY or NLC but not by LC, when those ran.
    pub dominance_violations: usize,
}

impl ReplicateResult {
    pub fn outcome(&self, p: Procedure) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.procedure == p)
    }
}

fn outcome(procedure: Procedure, d: &DecisionSet, theta: &[f64]) -> Outcome {
    let r = d.rejections();
    let e = d.sign_errors(theta);
    Outcome {
        procedure,
        signs_inferred: r,
        sign_errors: e,
        sep: e as f64 / r.max(1) as f64,
        alpha_chosen: d.alpha_used.summary(),
    }
}

fn not_subset(a: &DecisionSet, b: &DecisionSet) -> usize {
    a.rejected
        .iter()
        .zip(&b.rejected)
        .filter(|(x, y)| **x && !**y)
        .count()
}

pub fn run_replicate(prepared: &PreparedScenario, replicate: usize) -> Result<ReplicateResult> {
    let sc = &prepared.scenario;
    let (theta, y) = sc.draw(replicate);
    let y = Dataset::new(y)?;
    let mut decisions = Vec::with_capacity(sc.procedures.len());
    for p in &sc.procedures {
        let d = match p {
            Procedure::By => by_procedure(&y, sc.alpha_s)?,
            Procedure::Lc => lc_procedure(&y, sc.alpha_s)?,
            Procedure::Nlc => nlc_procedure(&y, sc.alpha_s)?,
            Procedure::Tco => {
                let level = prepared
                    .oracle
                    .expect("oracle level is solved on preparation");
                tco_decisions(&y, level)?
            }
            Procedure::Tcea => tce_procedure(&y, sc.alpha_s)?,
        };
        decisions.push((*p, d));
    }
    let find = |p: Procedure| decisions.iter().find(|(q, _)| *q == p).map(|(_, d)| d);
    let mut dominance_violations = 0;
    if let Some(lc) = find(Procedure::Lc) {
        for other in [Procedure::By, Procedure::Nlc] {
            if let Some(d) = find(other) {
                dominance_violations += not_subset(d, lc);
            }
        }
    }
    Ok(ReplicateResult {
        replicate,
        outcomes: decisions
            .iter()
            .map(|(p, d)| outcome(*p, d, &theta))
            .collect(),
        dominance_violations,
    })
}

/// Monte Carlo summary of one procedure across replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcedureSummary {
    pub procedure: Procedure,
    pub mean_sep: f64,
    pub se_sep: f64,
    pub mean_signs: f64,
    pub se_signs: f64,
    pub mean_alpha: f64,
    pub replicates: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub scenario_id: String,
    pub rows: Vec<ProcedureSummary>,
    pub dominance_violations: usize,
    pub oracle: Option<TightAlpha>,
    pub oracle_expected_sep: Option<f64>,
}

impl ScenarioReport {
    pub fn summary(&self, p: Procedure) -> Option<&ProcedureSummary> {
        self.rows.iter().find(|r| r.procedure == p)
    }
}

/// Mean and Monte Carlo standard error (sample SD over `sqrt(n)`).
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn summarize(prepared: &PreparedScenario, results: &[ReplicateResult]) -> ScenarioReport {
    let sc = &prepared.scenario;
    let rows = sc
        .procedures
        .iter()
        .map(|p| {
            let outs: Vec<&Outcome> = results.iter().filter_map(|r| r.outcome(*p)).collect();
            let seps: Vec<f64> = outs.iter().map(|o| o.sep).collect();
            let signs: Vec<f64> = outs.iter().map(|o| o.signs_inferred as f64).collect();
            let alphas: Vec<f64> = outs.iter().map(|o| o.alpha_chosen).collect();
            let (mean_sep, se_sep) = mean_and_se(&seps);
            let (mean_signs, se_signs) = mean_and_se(&signs);
            ProcedureSummary {
                procedure: *p,
                mean_sep,
                se_sep,
                mean_signs,
                se_signs,
                mean_alpha: mean_and_se(&alphas).0,
                replicates: outs.len(),
            }
        })
        .collect();
    ScenarioReport {
        scenario_id: sc.id.clone(),
        rows,
        dominance_violations: results.iter().map(|r| r.dominance_violations).sum(),
        oracle: prepared.oracle,
        oracle_expected_sep: prepared.oracle_expected_sep,
    }
}

/// Every replicate of a prepared scenario, in replicate order.
pub fn run_replicates(prepared: &PreparedScenario, workers: usize) -> Result<Vec<ReplicateResult>> {
    let n = prepared.scenario.replicates;
    if workers <= 1 {
        return (0..n).map(|i| run_replicate(prepared, i)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| {
        (0..n)
            .into_par_iter()
            .map(|i| run_replicate(prepared, i))
            .collect()
    })
}

/// Run and summarize a scenario on `workers` threads.
pub fn run_scenario(scenario: &Scenario, workers: usize) -> Result<ScenarioReport> {
    let prepared = PreparedScenario::new(scenario.clone())?;
    let results = run_replicates(&prepared, workers)?;
    Ok(summarize(&prepared, &results))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::AldParams;

    fn scenario() -> Scenario {
        Scenario {
            id: "t".into(),
            m: 300,
            replicates: 6,
            effect: AldParams::centered(0.8, 0.3).unwrap().into(),
            alpha_s: 0.1,
            procedures: Procedure::ALL.to_vec(),
            master_seed: 42,
        }
    }

    #[test]
    fn procedure_names_round_trip() {
        for p in Procedure::ALL {
            assert_eq!(p.name().parse::<Procedure>().unwrap(), p);
            assert_eq!(p.name().to_lowercase().parse::<Procedure>().unwrap(), p);
        }
        assert!("BH".parse::<Procedure>().is_err());
    }

    #[test]
    fn replicate_is_reproducible() {
        let p = PreparedScenario::new(scenario()).unwrap();
        assert_eq!(run_replicate(&p, 3).unwrap(), run_replicate(&p, 3).unwrap());
        assert_ne!(p.scenario.draw(3), p.scenario.draw(4));
    }

    #[test]
    fn replicate_invariants() {
        let p = PreparedScenario::new(scenario()).unwrap();
        for i in 0..6 {
            let r = run_replicate(&p, i).unwrap();
            assert_eq!(r.dominance_violations, 0);
            for o in &r.outcomes {
                assert!(o.sign_errors <= o.signs_inferred && o.signs_inferred <= 300);
                assert!((0.0..=1.0).contains(&o.sep));
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_report() {
        let a = run_scenario(&scenario(), 1).unwrap();
        let b = run_scenario(&scenario(), 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mean_and_se_of_constant() {
        assert_eq!(mean_and_se(&[2.0, 2.0, 2.0]), (2.0, 0.0));
        let (m, se) = mean_and_se(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_scenarios() {
        let mut s = scenario();
        s.alpha_s = 0.5;
        assert!(PreparedScenario::new(s).is_err());
        let mut s = scenario();
        s.replicates = 0;
        assert!(s.validate().is_err());
    }
}
