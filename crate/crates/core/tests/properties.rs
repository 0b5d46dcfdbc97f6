use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use squashfitts_core::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Independent oracle: `1 - SSE / SST` from the fitted line.
fn r_squared_oracle(points: &[(f64, f64)], fit: &LinearFit) -> f64 {
    let n = points.len() as f64;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sst: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let sse: f64 = points
        .iter()
        .map(|p| (p.1 - fit.predict(p.0)).powi(2))
        .sum();
    1.0 - sse / sst
}

fn noisy_points() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 3..40).prop_filter(
        "x and y must vary",
        |pts| {
            let var = |f: fn(&(f64, f64)) -> f64| {
                let first = f(&pts[0]);
                pts.iter().any(|p| (f(p) - first).abs() > 1e-3)
            };
            var(|p| p.0) && var(|p| p.1)
        },
    )
}

proptest! {
    #[test]
    fn doubling_speed_adds_one_bit(v in 1e-3f64..1e3, d in 1e-3f64..1e2) {
        let base = index_of_difficulty(v, d).unwrap();
        prop_assert!(close(index_of_difficulty(2.0 * v, d).unwrap(), base + 1.0, 1e-9));
        prop_assert!(close(index_of_difficulty(v, 2.0 * d).unwrap(), base + 1.0, 1e-9));
    }

    #[test]
    fn id_strictly_increasing(v in 1e-2f64..1e3, d in 1e-2f64..1e2, k in 1.001f64..10.0) {
        let base = index_of_difficulty(v, d).unwrap();
        prop_assert!(index_of_difficulty(v * k, d).unwrap() > base);
        prop_assert!(index_of_difficulty(v, d * k).unwrap() > base);
    }

    #[test]
    fn information_rate_times_mt_is_id(id in -10.0f64..20.0, mt in 1e-3f64..10.0) {
        prop_assert!(close(information_rate(id, mt).unwrap() * mt, id, 1e-9));
    }

    #[test]
    fn derive_is_deterministic(db in 100.0f64..1500.0, t in 0.05f64..2.0, dp in 50.0f64..700.0, mt in 0.3f64..3.0) {
        let rec = TrialRecord {
            person_id: 1, shot: ShotKind::Lob, trial_index: 1,
            ball_distance_cm: db, ball_time_s: t, player_distance_cm: dp, movement_time_s: mt,
        };
        let a = derive_trial(&rec).unwrap();
        let b = derive_trial(&rec).unwrap();
        prop_assert_eq!(a.id_bits.to_bits(), b.id_bits.to_bits());
        prop_assert_eq!(a.info_rate_bps.to_bits(), b.info_rate_bps.to_bits());
        prop_assert!(close(a.ball_speed_mps, db / 100.0 / t, 1e-12));
        prop_assert_eq!(a.base, rec);
    }

    #[test]
    fn mackenzie_never_negative(a in 0.0f64..1e4, w in 1e-3f64..1e3) {
        prop_assert!(id_mackenzie(a, w).unwrap() >= 0.0);
    }

    #[test]
    fn original_negative_iff_twice_amplitude_below_width(a in 1e-3f64..1e3, w in 1e-3f64..1e3) {
        let id = id_fitts_original(a, w).unwrap();
        prop_assert_eq!(id < 0.0, 2.0 * a < w);
    }

    #[test]
    fn welford_equal_slopes_reduce_to_log_ratio(a0 in -1.0f64..1.0, b in -2.0f64..2.0, amp in 1e-2f64..1e3, w in 1e-2f64..1e2) {
        let got = predict_mt_welford(a0, b, b, amp, w).unwrap();
        let want = a0 + b * (amp / w).log2();
        prop_assert!(close(got, want, 1e-12 * (1.0 + want.abs()) + 1e-12));
    }

    #[test]
    fn ols_shift_invariance(pts in noisy_points(), c in -100.0f64..100.0) {
        let f = ols_simple(&pts).unwrap();
        let shifted: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x + c, y)).collect();
        let g = ols_simple(&shifted).unwrap();
        prop_assert!(close(g.slope, f.slope, 1e-9 * (1.0 + f.slope.abs())));
        prop_assert!(close(g.intercept, f.intercept - f.slope * c, 1e-9 * (1.0 + f.intercept.abs() + (f.slope * c).abs())));
    }

    #[test]
    fn ols_scale_equivariance(pts in noisy_points(), k in prop::sample::select(vec![-4.0, -0.5, 0.25, 2.0, 8.0])) {
        // Powers of two keep the scaling exact in floating point.
        let f = ols_simple(&pts).unwrap();
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x, k * y)).collect();
        let g = ols_simple(&scaled).unwrap();
        prop_assert_eq!(g.slope, k * f.slope);
        prop_assert_eq!(g.intercept, k * f.intercept);
    }

    #[test]
    fn ols_goodness_of_fit_identities(pts in noisy_points()) {
        let f = ols_simple(&pts).unwrap();
        prop_assert!(close(f.r_squared, f.pearson_r * f.pearson_r, 1e-12));
        prop_assert!(close(f.r_squared, r_squared_oracle(&pts, &f), 1e-9));
        prop_assert!(close(f.pearson_r, pearson_r(&pts).unwrap(), 1e-12));
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        prop_assert!(close(f.predict(mx), my, 1e-9 * (1.0 + my.abs() + f.slope.abs() * mx.abs())));
    }

    #[test]
    fn ols_noiseless_recovery(slope in -5.0f64..5.0, intercept in -5.0f64..5.0, xs in prop::collection::btree_set(-1000i32..1000, 2..30)) {
        let pts: Vec<(f64, f64)> = xs.iter().map(|&x| { let x = x as f64 / 10.0; (x, intercept + slope * x) }).collect();
        let f = ols_simple(&pts).unwrap();
        prop_assert!(close(f.slope, slope, 1e-9));
        prop_assert!(close(f.intercept, intercept, 1e-9));
    }

    #[test]
    fn two_predictor_noiseless_recovery(
        a in -2.0f64..2.0, b1 in -2.0f64..2.0, b2 in -2.0f64..2.0,
        rows in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 6..40),
    ) {
        let data: Vec<(f64, f64, f64)> = rows.iter().map(|&(x1, x2)| (x1, x2, a + b1 * x1 + b2 * x2)).collect();
        // Skip near-collinear draws; the recovery claim is about well-posed designs.
        let cond_ok = {
            let n = rows.len() as f64;
            let m1 = rows.iter().map(|r| r.0).sum::<f64>() / n;
            let m2 = rows.iter().map(|r| r.1).sum::<f64>() / n;
            let s11: f64 = rows.iter().map(|r| (r.0 - m1).powi(2)).sum();
            let s22: f64 = rows.iter().map(|r| (r.1 - m2).powi(2)).sum();
            let s12: f64 = rows.iter().map(|r| (r.0 - m1) * (r.1 - m2)).sum();
            s11 * s22 - s12 * s12 > 1e-2 * s11 * s22
        };
        prop_assume!(cond_ok);
        let f = ols_two_predictor(&data).unwrap();
        prop_assert!(close(f.a, a, 1e-9));
        prop_assert!(close(f.b1, b1, 1e-9));
        prop_assert!(close(f.b2, b2, 1e-9));
    }

    #[test]
    fn population_sd_bounds(values in prop::collection::vec(-100.0f64..100.0, 1..30)) {
        let sd = population_sd(&values).unwrap();
        let max = values.iter().cloned().fold(f64::MIN, f64::max);
        let min = values.iter().cloned().fold(f64::MAX, f64::min);
        prop_assert!(sd >= 0.0);
        prop_assert!(sd <= max - min + 1e-12);
        prop_assert_eq!(sd == 0.0, max == min);
    }
}

fn synthetic_trials(seed: u64) -> Vec<TrialRecord> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for person in 1..=3 {
        for shot in ShotKind::ALL {
            for trial in 1..=3 {
                out.push(TrialRecord {
                    person_id: person,
                    shot,
                    trial_index: trial,
                    ball_distance_cm: rng.gen_range(550.0..1000.0),
                    ball_time_s: rng.gen_range(0.18..1.1),
                    player_distance_cm: rng.gen_range(250.0..500.0),
                    movement_time_s: rng.gen_range(1.0..1.9),
                });
            }
        }
    }
    out
}

#[test]
fn group_counts_sum_to_total() {
    let records = synthetic_trials(7);
    let derived: Vec<DerivedTrial> = records.iter().map(|r| derive_trial(r).unwrap()).collect();
    for grouping in [Grouping::PersonShot, Grouping::ShotOnly] {
        let groups = group_stats(&derived, grouping).unwrap();
        assert_eq!(groups.iter().map(|g| g.n).sum::<usize>(), derived.len());
    }
    let single = group_stats(&derived[..1], Grouping::PersonShot).unwrap();
    assert_eq!(single[0].sd_id, 0.0);
    assert!(group_stats(&[], Grouping::ShotOnly).is_err());
}

#[test]
fn group_order_is_person_then_shot() {
    let mut records = synthetic_trials(3);
    records.reverse();
    let derived: Vec<DerivedTrial> = records.iter().map(|r| derive_trial(r).unwrap()).collect();
    let groups = group_stats(&derived, Grouping::PersonShot).unwrap();
    let keys: Vec<(Option<u32>, Option<ShotKind>)> = groups
        .iter()
        .map(|g| (g.key.person_id, g.key.shot))
        .collect();
    let mut expected = Vec::new();
    for p in 1..=3 {
        for s in ShotKind::ALL {
            expected.push((Some(p), Some(s)));
        }
    }
    assert_eq!(keys, expected);
}

#[test]
fn pipeline_is_order_invariant() {
    use rand::seq::SliceRandom;
    let records = synthetic_trials(11);
    let base = run_analysis(&records, &AnalysisOptions::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let mut shuffled = records.clone();
        shuffled.shuffle(&mut rng);
        assert_eq!(
            run_analysis(&shuffled, &AnalysisOptions::default()).unwrap(),
            base
        );
    }
}

#[test]
fn pipeline_overall_fit_matches_direct_ols() {
    let records = synthetic_trials(5);
    let report = run_analysis(&records, &AnalysisOptions::default()).unwrap();
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|r| {
            let d = derive_trial(r).unwrap();
            (d.id_bits, d.base.movement_time_s)
        })
        .collect();
    let direct = ols_simple(&pts).unwrap();
    assert!(close(report.overall_fit.slope, direct.slope, 1e-12));
    assert!(close(report.overall_fit.intercept, direct.intercept, 1e-12));

    let total: usize = [Figure::Drives, Figure::Boasts, Figure::Lobs, Figure::Drops]
        .iter()
        .map(|&f| figure_series(&report, f).unwrap().points.len())
        .sum();
    assert_eq!(total, records.len());
}

/// Planted Welford model with Gaussian noise. Standard errors come from an
/// explicit cofactor inverse of `X^T X`, independent of the QR path.
#[test]
fn two_predictor_noisy_within_three_standard_errors() {
    use rand::Rng;
    let (a, b1, b2, sigma) = (0.2, 0.1, 0.3, 0.01);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let noise = Normal::new(0.0, sigma).unwrap();
    let rows: Vec<(f64, f64, f64)> = (0..200)
        .map(|_| {
            let x1: f64 = rng.gen_range(0.0..8.0);
            let x2: f64 = rng.gen_range(-4.0..4.0);
            (x1, x2, a + b1 * x1 + b2 * x2 + noise.sample(&mut rng))
        })
        .collect();
    let fit = ols_two_predictor(&rows).unwrap();

    let mut xtx = [[0.0f64; 3]; 3];
    for &(x1, x2, _) in &rows {
        let r = [1.0, x1, x2];
        for i in 0..3 {
            for j in 0..3 {
                xtx[i][j] += r[i] * r[j];
            }
        }
    }
    let m = xtx;
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let diag_inv = [
        (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det,
        (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det,
        (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det,
    ];
    let sse: f64 = rows
        .iter()
        .map(|&(x1, x2, y)| (y - fit.predict(x1, x2)).powi(2))
        .sum();
    let s2 = sse / (rows.len() as f64 - 3.0);
    let se: Vec<f64> = diag_inv.iter().map(|d| (s2 * d).sqrt()).collect();

    assert!((fit.a - a).abs() <= 3.0 * se[0], "a {} se {}", fit.a, se[0]);
    assert!(
        (fit.b1 - b1).abs() <= 3.0 * se[1],
        "b1 {} se {}",
        fit.b1,
        se[1]
    );
    assert!(
        (fit.b2 - b2).abs() <= 3.0 * se[2],
        "b2 {} se {}",
        fit.b2,
        se[2]
    );
}

#[test]
fn fit_model_welford_recovers_planted_coefficients() {
    let (a, b1, b2) = (0.15, 0.12, 0.08);
    let trials: Vec<PointingTrial> = [
        (2.0, 0.5),
        (4.0, 0.5),
        (8.0, 1.0),
        (16.0, 0.25),
        (32.0, 2.0),
        (5.0, 1.5),
        (12.0, 0.75),
    ]
    .iter()
    .map(|&(amp, w)| {
        PointingTrial::new(amp, w, predict_mt_welford(a, b1, b2, amp, w).unwrap()).unwrap()
    })
    .collect();
    match fit_model(ModelKind::Welford, TrialSet::Pointing(&trials)).unwrap() {
        FitResult::Welford(f) => {
            assert!(close(f.a, a, 1e-9));
            assert!(close(f.b1, b1, 1e-9));
            assert!(close(f.b2, b2, 1e-9));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn fit_model_steering_and_fitts() {
    let trials: Vec<PointingTrial> = [(1.0, 1.0), (3.0, 1.0), (10.0, 2.0), (7.0, 0.5)]
        .iter()
        .map(|&(amp, w)| {
            PointingTrial::new(amp, w, predict_mt_steering(0.3, 0.05, amp, w).unwrap()).unwrap()
        })
        .collect();
    let FitResult::Linear(f) = fit_model(ModelKind::Steering, TrialSet::Pointing(&trials)).unwrap()
    else {
        panic!("steering is single-predictor");
    };
    assert!(close(f.slope, 0.05, 1e-9));
    assert!(close(f.intercept, 0.3, 1e-9));

    let trials: Vec<PointingTrial> = [(1.0, 1.0), (4.0, 1.0), (16.0, 1.0), (8.0, 4.0)]
        .iter()
        .map(|&(amp, w)| {
            PointingTrial::new(amp, w, 0.05 + 0.1 * id_fitts_original(amp, w).unwrap()).unwrap()
        })
        .collect();
    let FitResult::Linear(f) =
        fit_model(ModelKind::FittsOriginal, TrialSet::Pointing(&trials)).unwrap()
    else {
        panic!("fitts is single-predictor");
    };
    assert!(close(f.slope, 0.1, 1e-9));
    assert!(close(f.intercept, 0.05, 1e-9));
}
