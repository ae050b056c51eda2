mod common;

use dctnorm::harness::{gen_mask, smooth_image, MaskSpec};
use dctnorm::lowrank::{nuclear_norm, truncated_nuclear_norm};
use dctnorm::metrics::psnr;
use dctnorm::regularizers::{dct_norm_multiscale, ScaleSpec};
use dctnorm::solver::{
    objective_value, recover, recover_color, recover_dct_only, recover_ltvnn, recover_svt, solve_inner, DctMode,
    ObservationMask, ObservedImage, RecoveryConfig, TauSchedule,
};
use dctnorm::Image;
use nalgebra::{DMatrix, DVector};

use common::{
    constrained_quadratic_minimizer, max_abs_diff, observe, quadratic_form_matrix, random_mask, random_matrix, rng,
};

fn random_instance(seed: u64, n: usize, observed: f64) -> (Image, ObservedImage) {
    let mut r = rng(seed);
    let truth = random_matrix(&mut r, n, n, 0.0, 255.0);
    let mask = random_mask(&mut r, n, n, ((n * n) as f64 * observed).round() as usize);
    let obs = observe(&truth, &mask);
    (truth, obs)
}

fn rank_one_smooth(n: usize) -> Image {
    let u = DVector::from_fn(n, |i, _| 0.55 + 0.4 * (i as f64 * 0.09).sin());
    let v = DVector::from_fn(n, |j, _| 0.6 + 0.35 * (j as f64 * 0.05 + 0.7).cos());
    &u * v.transpose() * 255.0
}

#[test]
fn objective_is_the_sum_of_its_terms() {
    for seed in 0..5 {
        let (truth, obs) = random_instance(seed, 16, 0.3);
        let mut cfg = RecoveryConfig::for_dims((16, 16));
        cfg.nuclear_weight = 0.7;
        let x = &truth + random_matrix(&mut rng(seed + 100), 16, 16, -5.0, 5.0);
        let fidelity = obs.mask().project(&(&x - obs.data())).norm_squared();
        let want = 0.7 * truncated_nuclear_norm(&x, cfg.rank_r).unwrap()
            + dct_norm_multiscale(&x, &cfg.scales).unwrap()
            + 0.5 * cfg.gamma * fidelity;
        assert!((objective_value(&x, &obs, &cfg).unwrap() - want).abs() < 1e-9 * want);

        cfg.scales.clear();
        cfg.rank_r = 16;
        assert!((objective_value(&x, &obs, &cfg).unwrap() - 0.5 * cfg.gamma * fidelity).abs() < 1e-9 * fidelity);
    }
}

#[test]
fn inner_solve_fully_observed_returns_m() {
    let m = random_matrix(&mut rng(40), 12, 12, 0.0, 255.0);
    let obs = ObservedImage::new(m.clone(), ObservationMask::all(12, 12)).unwrap();
    let mut cfg = RecoveryConfig::for_dims((12, 12));
    cfg.scales.clear();
    cfg.rank_r = 12;
    let (x, _) = solve_inner(&obs, &m, &cfg).unwrap();
    assert!(max_abs_diff(&x, &m) < 1e-9);
    let (x, _) = solve_inner(&obs, &Image::zeros(12, 12), &cfg).unwrap();
    assert!(max_abs_diff(&x, &m) < 1e-9);
}

#[test]
fn inner_solve_recovers_a_constant() {
    let truth = Image::from_element(16, 16, 90.0);
    let mask = random_mask(&mut rng(41), 16, 16, 26);
    let obs = observe(&truth, &mask);
    let mut cfg = RecoveryConfig::for_dims((16, 16));
    cfg.rank_r = 16;
    cfg.inner_tol = 1e-12;
    cfg.inner_max_iters = 20_000;
    let (x, trace) = solve_inner(&obs, obs.data(), &cfg).unwrap();
    assert!(max_abs_diff(&x, &truth) < 1e-3, "error {}", max_abs_diff(&x, &truth));
    assert!(trace.is_monotone(1e-9));
}

#[test]
fn inner_objective_decreases_strictly_at_first() {
    let (_, obs) = random_instance(42, 32, 0.2);
    let cfg = RecoveryConfig::for_dims((32, 32));
    let (_, trace) = solve_inner(&obs, obs.data(), &cfg).unwrap();
    let values = trace.inner_segments()[0];
    assert!(values.len() >= 6);
    assert!(values[..6].windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn inner_fixed_point_is_stable() {
    let (_, obs) = random_instance(43, 16, 0.4);
    let mut cfg = RecoveryConfig::for_dims((16, 16));
    cfg.inner_tol = 1e-15;
    cfg.inner_max_iters = 20_000;
    let (x, _) = solve_inner(&obs, obs.data(), &cfg).unwrap();
    cfg.inner_max_iters = 1;
    let (y, _) = solve_inner(&obs, &x, &cfg).unwrap();
    assert!((&y - &x).norm() < 1e-8 * x.norm(), "moved {}", (&y - &x).norm() / x.norm());
}

#[test]
fn recover_contracts() {
    let m = Image::from_element(16, 16, 120.0);
    let obs = ObservedImage::new(m.clone(), ObservationMask::all(16, 16)).unwrap();
    let (x, trace) = recover(&obs, &RecoveryConfig::for_dims((16, 16))).unwrap();
    assert_eq!(x, m);
    assert_eq!(trace.outer_iterations(), 1);

    let (_, obs) = random_instance(44, 24, 0.3);
    let mut cfg = RecoveryConfig::for_dims((24, 24));
    cfg.delta = 0.0;
    let (_, trace) = recover(&obs, &cfg).unwrap();
    assert_eq!(trace.outer_iterations(), 1);
    assert_eq!(trace.outer_change, vec![0.0]);

    cfg.delta = 0.1;
    cfg.outer_max_iters = 7;
    let (x, trace) = recover(&obs, &cfg).unwrap();
    assert!(trace.outer_iterations() <= 7);
    assert!(trace.outer_residual.iter().all(|r| r.is_finite()));
    assert!(x.iter().all(|v| (0.0..=255.0).contains(v)));
    assert!(recover(&ObservedImage::new(Image::zeros(8, 8), ObservationMask::none(8, 8)).unwrap(), &cfg).is_err());
}

#[test]
fn rank_one_smooth_recovery() {
    let truth = rank_one_smooth(64);
    let mask = gen_mask((64, 64), &MaskSpec::random(0.9, 0)).unwrap();
    let (x, _) = recover(&observe(&truth, &mask), &RecoveryConfig::for_dims((64, 64))).unwrap();
    let score = psnr(&x, &truth).unwrap();
    assert!(score > 30.0, "PSNR {score}");
}

#[test]
fn color_examples() {
    let gray = smooth_image((32, 32), 5);
    let mask = gen_mask((32, 32), &MaskSpec::random(0.95, 1)).unwrap();
    let channels: Vec<ObservedImage> = (0..3).map(|_| observe(&gray, &mask)).collect();
    let mut cfg = RecoveryConfig::for_dims((32, 32));

    let (joint, _) = recover_color(&channels, &cfg).unwrap();
    assert!(max_abs_diff(&joint[0], &joint[1]) < 1e-9 && max_abs_diff(&joint[0], &joint[2]) < 1e-9);
    let coupled = psnr(&joint[0], &gray).unwrap();

    cfg.alpha = 0.0;
    let (separate, _) = recover_color(&channels, &cfg).unwrap();
    assert!(coupled >= psnr(&separate[0], &gray).unwrap() - 0.1);

    let tinted: Vec<ObservedImage> = (0..3).map(|c| observe(&smooth_image((32, 32), 10 + c), &mask)).collect();
    let (together, _) = recover_color(&tinted, &cfg).unwrap();
    for (c, obs) in tinted.iter().enumerate() {
        assert!(max_abs_diff(&together[c], &recover(obs, &cfg).unwrap().0) < 1e-6);
    }
}

#[test]
fn svt_examples() {
    let u = DVector::from_fn(20, |i, _| 1.0 + (i as f64 * 0.7).sin());
    let v = DVector::from_fn(20, |j, _| 2.0 + (j as f64 * 0.3).cos());
    let truth = &u * v.transpose() * 30.0;
    let mask = gen_mask((20, 20), &MaskSpec::random(0.5, 0)).unwrap();
    let obs = observe(&truth, &mask);
    let x = recover_svt(&obs, &TauSchedule::for_observation(&obs).unwrap(), 500).unwrap();
    let error = (&x - &truth).norm() / truth.norm();
    assert!(error < 1e-2, "relative error {error}");

    let full = ObservedImage::new(truth.clone(), ObservationMask::all(20, 20)).unwrap();
    assert_eq!(recover_svt(&full, &TauSchedule::constant(5.0), 10).unwrap(), truth);
    let zero = observe(&Image::zeros(20, 20), &mask);
    assert_eq!(recover_svt(&zero, &TauSchedule::constant(1.0), 10).unwrap(), Image::zeros(20, 20));
}

#[test]
fn svt_is_row_permutation_equivariant() {
    let (_, obs) = random_instance(45, 12, 0.5);
    let perm: Vec<usize> = (0..12).map(|i| (i * 5 + 3) % 12).collect();
    let data = DMatrix::from_fn(12, 12, |i, j| obs.data()[(perm[i], j)]);
    let mask = ObservationMask::from_fn(12, 12, |i, j| obs.mask().is_observed(perm[i], j));
    let permuted = ObservedImage::new(data, mask).unwrap();
    let schedule = TauSchedule::for_observation(&obs).unwrap();
    let x = recover_svt(&obs, &schedule, 100).unwrap();
    let y = recover_svt(&permuted, &schedule, 100).unwrap();
    let x_permuted = DMatrix::from_fn(12, 12, |i, j| x[(perm[i], j)]);
    assert!((y - x_permuted).norm() < 1e-8 * x.norm());
}

#[test]
fn ltvnn_examples() {
    let (_, obs) = random_instance(46, 32, 0.2);
    let mut cfg = RecoveryConfig::for_dims((32, 32));
    cfg.outer_max_iters = 3;
    let (_, trace) = recover_ltvnn(&obs, &cfg).unwrap();
    assert!(trace.is_monotone(1e-9));

    cfg.ltv_lambda = 0.0;
    let (_, trace) = recover_ltvnn(&obs, &cfg).unwrap();
    assert!((trace.objective[0] - nuclear_norm(obs.data()).unwrap()).abs() < 1e-9 * trace.objective[0]);

    // A constant is only the minimizer once smoothness dominates the nuclear norm.
    let truth = Image::from_element(32, 32, 77.0);
    let obs = observe(&truth, &random_mask(&mut rng(47), 32, 32, 102));
    let mut cfg = RecoveryConfig::for_dims((32, 32));
    cfg.ltv_lambda = 1000.0;
    cfg.gamma = 16_000.0;
    cfg.inner_tol = 1e-8;
    let (x, _) = recover_ltvnn(&obs, &cfg).unwrap();
    assert!(max_abs_diff(&x, &truth) < 1e-3, "error {}", max_abs_diff(&x, &truth));
}

#[test]
fn dct_only_matches_exact_solve() {
    for seed in 0..5 {
        let (_, obs) = random_instance(50 + seed, 8, 0.25);
        for scales in [
            vec![ScaleSpec::new(2, 1, 1.0).unwrap()],
            vec![ScaleSpec::new(2, 1, 1.0).unwrap(), ScaleSpec::new(8, 3, 0.5).unwrap()],
        ] {
            let a = quadratic_form_matrix(|v| dct_norm_multiscale(v, &scales).unwrap(), 8, 8);
            let want = constrained_quadratic_minimizer(&a, &obs);
            let mut cfg = RecoveryConfig::for_dims((8, 8));
            cfg.scales = scales;
            let (x, _) = recover_dct_only(&obs, DctMode::Multiscale, &cfg).unwrap();
            assert!(max_abs_diff(&x, &want) < 1e-6, "error {}", max_abs_diff(&x, &want));
        }
    }
}

#[test]
fn dct_only_constants_and_full_observation() {
    let truth = Image::from_element(24, 24, 33.0);
    let obs = observe(&truth, &random_mask(&mut rng(55), 24, 24, 29));
    let cfg = RecoveryConfig::for_dims((24, 24));
    for mode in [DctMode::Global, DctMode::Local, DctMode::Multiscale] {
        let (x, _) = recover_dct_only(&obs, mode, &cfg).unwrap();
        assert!(max_abs_diff(&x, &truth) < 1e-3);
    }
    let m = random_matrix(&mut rng(56), 24, 24, 0.0, 255.0);
    let full = ObservedImage::new(m.clone(), ObservationMask::all(24, 24)).unwrap();
    assert_eq!(recover_dct_only(&full, DctMode::Multiscale, &cfg).unwrap().0, m);
}

#[test]
fn hard_constraints_and_determinism() {
    for seed in 0..3 {
        let (_, obs) = random_instance(60 + seed, 24, 0.15);
        let mut cfg = RecoveryConfig::for_dims((24, 24));
        cfg.outer_max_iters = 4;
        let svt = recover_svt(&obs, &TauSchedule::for_observation(&obs).unwrap(), 60).unwrap();
        let dct = recover_dct_only(&obs, DctMode::Local, &cfg).unwrap().0;
        for x in [&svt, &dct] {
            for (k, &observed) in obs.mask().flags().iter().enumerate() {
                if observed {
                    assert_eq!(x[k].to_bits(), obs.data()[k].to_bits());
                }
            }
        }
        assert_eq!(svt, recover_svt(&obs, &TauSchedule::for_observation(&obs).unwrap(), 60).unwrap());
        assert_eq!(dct, recover_dct_only(&obs, DctMode::Local, &cfg).unwrap().0);
        assert_eq!(recover(&obs, &cfg).unwrap().0, recover(&obs, &cfg).unwrap().0);
        assert_eq!(recover_ltvnn(&obs, &cfg).unwrap().0, recover_ltvnn(&obs, &cfg).unwrap().0);
    }
}
