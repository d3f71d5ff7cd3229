use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use signgate::distributions::{AldParams, EffectDistribution};
use signgate::numerics::two_sided_p_value;
use signgate::procedures::*;
use signgate::Dataset;

fn rejected_count(p: &[f64], alpha: f64) -> usize {
    p.iter().filter(|pi| **pi <= alpha).count()
}

/// `sup{alpha : alpha <= slope * R(alpha) / m}` by scanning every rank: the
/// supremum can only sit at a threshold value `slope k / m` with `R >= k`.
fn fixed_point_by_rank_scan(p: &[f64], slope: f64) -> f64 {
    let m = p.len();
    (1..=m)
        .map(|k| slope * k as f64 / m as f64)
        .filter(|a| rejected_count(p, *a) as f64 >= *a * m as f64 / slope - 1e-9)
        .fold(0.0, f64::max)
}

/// Per-experiment NLC levels by running the leave-one-out step-up directly.
fn nlc_levels_brute(p: &[f64], slope: f64) -> Vec<f64> {
    let m = p.len();
    (0..m)
        .map(|i| {
            let others: Vec<f64> = p
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| *v)
                .collect();
            (2..=m)
                .map(|k| slope * (k - 1) as f64 / m as f64)
                .filter(|a| {
                    let r = rejected_count(&others, *a);
                    *a <= slope * (r.saturating_sub(1)) as f64 / m as f64 + 1e-15
                })
                .fold(0.0, f64::max)
        })
        .collect()
}

fn statistics() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![3 => -1.5f64..1.5, 2 => -6.0f64..6.0, 1 => Just(3.0), 1 => Just(-3.0)],
        1..60,
    )
}

proptest! {
    #[test]
    fn step_up_matches_fixed_point(y in statistics(), alpha_s in 0.01f64..0.45) {
        let data = Dataset::new(y.clone()).unwrap();
        let p: Vec<f64> = y.iter().map(|v| two_sided_p_value(*v)).collect();
        for (d, slope) in [
            (by_procedure(&data, alpha_s).unwrap(), alpha_s),
            (lc_procedure(&data, alpha_s).unwrap(), 2.0 * alpha_s),
        ] {
            let a = d.alpha_used.summary();
            let m = y.len() as f64;
            prop_assert!(a <= slope * d.rejections() as f64 / m + 1e-15);
            prop_assert!((a - fixed_point_by_rank_scan(&p, slope)).abs() <= 1e-12);
            // Any larger level on a dense grid breaks the inequality.
            for i in 1..=400 {
                let b = a + (1.0 - a) * i as f64 / 400.0;
                prop_assert!(b > slope * rejected_count(&p, b) as f64 / m - 1e-12);
            }
        }
    }

    #[test]
    fn nlc_matches_leave_one_out_brute_force(y in statistics(), alpha_s in 0.01f64..0.45) {
        let data = Dataset::new(y.clone()).unwrap();
        let p: Vec<f64> = y.iter().map(|v| two_sided_p_value(*v)).collect();
        let d = nlc_procedure(&data, alpha_s).unwrap();
        let AlphaUsed::PerExperiment(levels) = &d.alpha_used else { panic!("per-experiment levels expected") };
        let brute = nlc_levels_brute(&p, 2.0 * alpha_s);
        for (a, b) in levels.iter().zip(&brute) {
            prop_assert!((a - b).abs() <= 1e-12, "{levels:?} vs {brute:?}");
        }
        for i in 0..y.len() {
            prop_assert_eq!(d.rejected[i], levels[i] > 0.0 && p[i] <= levels[i]);
        }
    }

    #[test]
    fn dominance_chain(y in statistics(), alpha_s in 0.01f64..0.45) {
        let data = Dataset::new(y).unwrap();
        let by = by_procedure(&data, alpha_s).unwrap();
        let lc = lc_procedure(&data, alpha_s).unwrap();
        let nlc = nlc_procedure(&data, alpha_s).unwrap();
        prop_assert!(by.alpha_used.summary() <= lc.alpha_used.summary());
        for i in 0..data.len() {
            prop_assert!(!by.rejected[i] || lc.rejected[i]);
            prop_assert!(!nlc.rejected[i] || lc.rejected[i]);
        }
    }

    #[test]
    fn permutation_equivariance(y in statistics(), alpha_s in 0.01f64..0.45, seed in any::<u64>()) {
        let m = y.len();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let permuted = Dataset::new(perm.iter().map(|i| y[*i]).collect()).unwrap();
        let data = Dataset::new(y).unwrap();
        type Proc = fn(&Dataset, f64) -> signgate::Result<DecisionSet>;
        for f in [by_procedure as Proc, lc_procedure, nlc_procedure] {
            let a = f(&data, alpha_s).unwrap();
            let b = f(&permuted, alpha_s).unwrap();
            for (k, i) in perm.iter().enumerate() {
                prop_assert_eq!(a.sign[*i], b.sign[k]);
            }
        }
    }

    #[test]
    fn signs_follow_statistics(y in statistics(), alpha_s in 0.01f64..0.45) {
        let data = Dataset::new(y.clone()).unwrap();
        for d in [
            by_procedure(&data, alpha_s).unwrap(),
            lc_procedure(&data, alpha_s).unwrap(),
            nlc_procedure(&data, alpha_s).unwrap(),
        ] {
            for i in 0..y.len() {
                let expected = if d.rejected[i] { y[i].signum() as i8 } else { 0 };
                prop_assert_eq!(d.sign[i], expected);
            }
        }
    }

    #[test]
    fn asymmetric_region_signs(y in statistics(), alpha in 0.001f64..0.5, s in 0.01f64..0.99) {
        let region = signgate::error_rates::AcceptanceRegion::new(alpha, s).unwrap();
        let d = decide(&Dataset::new(y.clone()).unwrap(), &region);
        for i in 0..y.len() {
            prop_assert_eq!(d.sign[i] == -1, y[i] < region.lower());
            prop_assert_eq!(d.sign[i] == 1, y[i] > region.upper());
            prop_assert_eq!(d.rejected[i], d.sign[i] != 0);
        }
    }
}

fn ald_dataset(g: &AldParams, m: usize, seed: u64) -> (Vec<f64>, Dataset) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = g.sample(&mut rng, m);
    let y = theta
        .iter()
        .map(|t| {
            t + {
                let z: f64 = StandardNormal.sample(&mut rng);
                z
            }
        })
        .collect();
    (theta, Dataset::new(y).unwrap())
}

#[test]
fn tce_agrees_with_tco_under_the_fitted_model() {
    let g = AldParams::centered(0.8, 0.3).unwrap();
    for seed in 0..4 {
        let (_, y) = ald_dataset(&g, 2000, seed);
        let tce = tce_procedure(&y, 0.1).unwrap();
        let fit = tce.fitted.unwrap();
        let tco = tco_procedure(&y, 0.1, &fit).unwrap();
        assert_eq!(tce.rejected, tco.rejected);
        assert_eq!(tce.sign, tco.sign);
        assert_eq!(tce.alpha_used, tco.alpha_used);
    }
}

#[test]
fn empirical_level_approaches_oracle_level() {
    let g = AldParams::centered(0.2, 0.3).unwrap();
    let oracle = tco_alpha(&g, 0.1).unwrap();
    assert!(oracle.cap.is_none());
    let (_, y) = ald_dataset(&g, 100_000, 7);
    let tce = tce_procedure(&y, 0.1).unwrap();
    let rel = (tce.alpha_used.summary() / oracle.alpha - 1.0).abs();
    assert!(
        rel < 0.1,
        "alpha_e {} vs alpha_o {}",
        tce.alpha_used.summary(),
        oracle.alpha
    );
}

#[test]
fn large_effects_give_no_sign_errors() {
    let theta: Vec<f64> = (0..50).map(|i| 6.0 + i as f64 * 0.1).collect();
    let y = Dataset::new(theta.iter().map(|t| t - 0.5).collect()).unwrap();
    for d in [
        by_procedure(&y, 0.1).unwrap(),
        lc_procedure(&y, 0.1).unwrap(),
        nlc_procedure(&y, 0.1).unwrap(),
    ] {
        assert_eq!(d.rejections(), 50);
        assert_eq!(d.sign_errors(&theta), 0);
    }
}
