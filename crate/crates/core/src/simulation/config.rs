//! Scenario files.
//!
//! ```toml
//! name = "ald_q05"
//! m = 5000
//! replicates = 1000
//! alpha_s = 0.1
//! seed = 17
//! procedures = ["BY", "LC", "TCO", "TCEA"]
//!
//! # either a fixed effect distribution, optionally swept over `tau_grid`
//! # (the ALD scale, or the spike scale of a spike-and-slab) ...
//! [effect.ald]
//! tau = 0.2
//! q = 0.5
//!
//! # ... or ALD(0, tau, q) effects on a calibrated grid of five scales
//! [auto_tau]
//! q = 0.5
//! m = 5000
//! ```

use serde::de::DeserializeOwned;
use serde::Deserialize;

use super::{Procedure, Scenario};
use crate::distributions::{AldParams, Effect, SpikeSlabParams};
use crate::error::{Error, Result};
use crate::error_rates::{rate_triple, AcceptanceRegion};
use crate::numerics::{find_root, Interval, ROOT_TOL};

/// Spike scales swept for spike-and-slab effects when none are given.
pub const SPIKE_TAU_GRID: [f64; 5] = [0.01, 0.05, 0.1, 0.15, 0.2];

pub const DEFAULT_REPLICATES: usize = 1000;
pub const DEFAULT_SEED: u64 = 1;

/// Level of the plain test used to place calibrated scale grids.
pub const CALIBRATION_ALPHA: f64 = 0.05;
pub const CALIBRATION_SEP: (f64, f64) = (0.3, 0.1);
const CALIBRATION_TAU_RANGE: (f64, f64) = (1e-3, 50.0);
const CALIBRATION_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub enum TauSweep {
    None,
    Grid(Vec<f64>),
    Auto { q: f64, m: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutoTau {
    q: f64,
    m: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub name: String,
    pub m: usize,
    pub replicates: usize,
    pub alpha_s: f64,
    pub seed: u64,
    pub effect: Option<Effect>,
    pub procedures: Vec<Procedure>,
    pub sweep: TauSweep,
}

fn config_error(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_owned(),
        message: message.into(),
    }
}

fn take<T: DeserializeOwned>(table: &mut toml::Table, key: &str) -> Result<Option<T>> {
    table
        .remove(key)
        .map(|v| {
            v.try_into::<T>()
                .map_err(|e| config_error(key, e.message().trim()))
        })
        .transpose()
}

fn require<T: DeserializeOwned>(table: &mut toml::Table, key: &str) -> Result<T> {
    take(table, key)?.ok_or_else(|| config_error(key, "missing required key"))
}

impl ScenarioFile {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let mut t: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| config_error("<file>", e.to_string().trim()))?;
        let name = take(&mut t, "name")?.unwrap_or_else(|| "scenario".to_owned());
        let m: usize = require(&mut t, "m")?;
        let replicates = take(&mut t, "replicates")?.unwrap_or(DEFAULT_REPLICATES);
        let alpha_s: f64 = require(&mut t, "alpha_s")?;
        let seed = take(&mut t, "seed")?.unwrap_or(DEFAULT_SEED);
        let effect: Option<Effect> = take(&mut t, "effect")?;
        let procedures: Vec<Procedure> = require(&mut t, "procedures")?;
        let grid: Option<Vec<f64>> = take(&mut t, "tau_grid")?;
        let auto: Option<AutoTau> = take(&mut t, "auto_tau")?;
        if let Some(key) = t.keys().next() {
            return Err(config_error(key, "unknown key"));
        }

        if m == 0 {
            return Err(config_error("m", "must be at least 1"));
        }
        if replicates == 0 {
            return Err(config_error("replicates", "must be at least 1"));
        }
        if !(alpha_s > 0.0 && alpha_s < 0.5) {
            return Err(config_error(
                "alpha_s",
                format!("must be in (0, 0.5), got {alpha_s}"),
            ));
        }
        if procedures.is_empty() {
            return Err(config_error(
                "procedures",
                "at least one procedure is required",
            ));
        }
        let sweep = match (grid, auto) {
            (Some(_), Some(_)) => {
                return Err(config_error("auto_tau", "cannot be combined with tau_grid"))
            }
            (Some(g), None) => {
                if g.is_empty() || g.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(config_error("tau_grid", "needs positive finite scales"));
                }
                match &effect {
                    Some(Effect::Ald(_) | Effect::SpikeSlab(_)) => {}
                    Some(_) => {
                        return Err(config_error(
                            "tau_grid",
                            "only ald and spike_slab effects have a scale to sweep",
                        ))
                    }
                    None => return Err(config_error("effect", "missing required key")),
                }
                TauSweep::Grid(g)
            }
            (None, Some(a)) => {
                if effect.is_some() {
                    return Err(config_error("effect", "cannot be combined with auto_tau"));
                }
                if !(a.q > 0.0 && a.q < 1.0) {
                    return Err(config_error(
                        "auto_tau",
                        format!("q must be in (0, 1), got {}", a.q),
                    ));
                }
                if a.m == 0 {
                    return Err(config_error("auto_tau", "m must be at least 1"));
                }
                TauSweep::Auto { q: a.q, m: a.m }
            }
            (None, None) => match &effect {
                Some(Effect::SpikeSlab(_)) => TauSweep::Grid(SPIKE_TAU_GRID.to_vec()),
                Some(_) => TauSweep::None,
                None => return Err(config_error("effect", "missing required key")),
            },
        };
        Ok(Self {
            name,
            m,
            replicates,
            alpha_s,
            seed,
            effect,
            procedures,
            sweep,
        })
    }

    /// The concrete scenarios, one per swept scale. Each gets its own
    /// master seed derived from the file's seed and its position.
    pub fn scenarios(&self) -> Result<Vec<Scenario>> {
        let effects: Vec<(String, Effect)> = match &self.sweep {
            TauSweep::None => {
                let e = self.effect.clone().expect("validated on load");
                vec![(self.name.clone(), e)]
            }
            TauSweep::Grid(grid) => {
                let template = self.effect.as_ref().expect("validated on load");
                grid.iter()
                    .map(|tau| Ok((self.sub_id(*tau), with_scale(template, *tau)?)))
                    .collect::<Result<_>>()?
            }
            TauSweep::Auto { q, m } => calibrate_tau_grid(*q, *m)?
                .into_iter()
                .map(|tau| Ok((self.sub_id(tau), AldParams::centered(tau, *q)?.into())))
                .collect::<Result<_>>()?,
        };
        Ok(effects
            .into_iter()
            .enumerate()
            .map(|(j, (id, effect))| Scenario {
                id,
                m: self.m,
                replicates: self.replicates,
                effect,
                alpha_s: self.alpha_s,
                procedures: self.procedures.clone(),
                master_seed: splitmix64(self.seed.wrapping_add(j as u64)),
            })
            .collect())
    }

    fn sub_id(&self, tau: f64) -> String {
        format!("{}/tau={}", self.name, tau)
    }
}

fn with_scale(template: &Effect, tau: f64) -> Result<Effect> {
    Ok(match template {
        Effect::Ald(p) => AldParams::new(p.mu, tau, p.q)?.into(),
        Effect::SpikeSlab(p) => SpikeSlabParams::new(
            AldParams::new(p.spike.mu, tau, p.spike.q)?,
            p.slab_intervals.clone(),
            p.slab_weight,
        )?
        .into(),
        other => {
            return Err(Error::InvalidParameter(format!(
                "{other:?} has no scale parameter"
            )))
        }
    })
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Expected sign error proportion of the plain level-`alpha` test over `m`
/// experiments. Given `R = r >= 1` the errors are Binomial(r, MSER), so
/// `E[SEP] = MSER * Pr(R > 0) = MSER * (1 - (1 - MSDR)^m)`.
pub fn expected_sep(effect: &Effect, alpha: f64, m: usize) -> Result<f64> {
    let r = rate_triple(effect, &AcceptanceRegion::symmetric(alpha)?)?;
    let p_any = -(m as f64 * (-r.msdr).ln_1p()).exp_m1();
    Ok(r.mser * p_any)
}

/// Five equally spaced ALD scales spanning expected SEP from 30% down to
/// 10% for the plain test at level 0.05 with `m` experiments.
pub fn calibrate_tau_grid(q: f64, m: usize) -> Result<Vec<f64>> {
    let solve = |target: f64| -> Result<f64> {
        let f = |log_tau: f64| -> f64 {
            let g: Effect = match AldParams::centered(log_tau.exp(), q) {
                Ok(p) => p.into(),
                Err(_) => return f64::NAN,
            };
            expected_sep(&g, CALIBRATION_ALPHA, m).map_or(f64::NAN, |s| s - target)
        };
        let (lo, hi) = CALIBRATION_TAU_RANGE;
        Ok(find_root(f, Interval::new(lo.ln(), hi.ln())?, ROOT_TOL)?.exp())
    };
    let lo = solve(CALIBRATION_SEP.0)?;
    let hi = solve(CALIBRATION_SEP.1)?;
    let n = CALIBRATION_POINTS - 1;
    Ok((0..=n)
        .map(|k| lo + (hi - lo) * k as f64 / n as f64)
        .collect())
}
