use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superball::bounds::*;
use superball::geometry::*;
use superball::specialfn::{half_log2_pi, try_log2_gamma};
use superball::volumes::*;
use superball::{Angle, LpVector, PNorm};

fn pn(p: f64) -> PNorm {
    PNorm::new(p).unwrap()
}

fn unit(coords: Vec<f64>, p: f64) -> Option<LpVector> {
    let x = LpVector::new(coords).ok()?;
    let n = lp_norm(&x, pn(p));
    if n < 1e-3 {
        return None;
    }
    LpVector::new(x.coords().iter().map(|c| c / n).collect()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_duplication(x in 0.5f64..50.0) {
        let lhs = try_log2_gamma(2.0 * x).unwrap();
        let rhs = try_log2_gamma(x).unwrap() + try_log2_gamma(x + 0.5).unwrap()
            + (2.0 * x - 1.0) - half_log2_pi();
        prop_assert!((lhs - rhs).abs() <= 1e-10, "x={} lhs={} rhs={}", x, lhs, rhs);
    }

    #[test]
    fn transfer_inequality(x in -2.0f64..2.0, y in -2.0f64..2.0, p in 2.0f64..64.0) {
        prop_assert!(transfer_margin(x, y, pn(p)).unwrap() >= -1e-10);
    }

    #[test]
    fn superadditivity(w in 1e-6f64..10.0, z in 1e-6f64..10.0, p in 2.0f64..64.0) {
        let h = p / 2.0;
        let lhs = (w + z).powf(h);
        let rhs = w.powf(h) + z.powf(h);
        prop_assert!(lhs >= rhs * (1.0 - 1e-12));
    }

    #[test]
    fn twist_preserves_sphere(coords in prop::collection::vec(-1.0f64..1.0, 2..8), p in 2.0f64..64.0, qf in 0.0f64..1.0) {
        let q = 1.0 + qf * (p - 1.0);
        if let Some(x) = unit(coords, p) {
            let t = twist(&x, pn(p), pn(q)).unwrap();
            prop_assert!((lp_norm(&t, pn(q)) - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn pairwise_transfer_for_twisted_points(
        a in prop::collection::vec(-1.0f64..1.0, 3),
        b in prop::collection::vec(-1.0f64..1.0, 3),
        p in 2.0f64..32.0,
    ) {
        if let (Some(x), Some(y)) = (unit(a, p), unit(b, p)) {
            let two = pn(2.0);
            let tx = twist(&x, pn(p), two).unwrap();
            let ty = twist(&y, pn(p), two).unwrap();
            let lhs = lp_distance(&tx, &ty, two).unwrap();
            let rhs = (1.0 - p / 2.0).exp2() * lp_distance(&x, &y, pn(p)).unwrap().powf(p / 2.0);
            prop_assert!(lhs >= rhs - 1e-9);
        }
    }

    #[test]
    fn lift_never_shrinks_distances(
        pts in prop::collection::vec(prop::collection::vec(-0.7f64..0.7, 2), 2..10),
        p in 1.0f64..16.0,
    ) {
        let centers: Vec<LpVector> = pts
            .into_iter()
            .map(|c| LpVector::new(c).unwrap())
            .filter(|x| lp_norm(x, pn(p)) <= 1.0)
            .collect();
        let lifted = lift_to_sphere(&centers, pn(p)).unwrap();
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                let before = lp_distance(&centers[i], &centers[j], pn(p)).unwrap();
                let after = lp_distance(&lifted.points()[i], &lifted.points()[j], pn(p)).unwrap();
                prop_assert!(after >= before - 1e-12);
            }
        }
    }

    #[test]
    fn power_mean_nonnegative(coords in prop::collection::vec(-5.0f64..5.0, 1..12), p in 1.0f64..8.0, qf in 0.0f64..1.0) {
        let q = p + qf * (8.0 - p);
        let x = LpVector::new(coords).unwrap();
        prop_assert!(power_mean_check(&x, pn(p), pn(q)).unwrap() >= -1e-12);
    }

    #[test]
    fn superball_minimum_beats_random_angles(p in 2.0f64..100.0, t in 1e-3f64..FRAC_PI_2) {
        let best = minimize_superball(pn(p)).unwrap();
        let theta = best.argmin.unwrap();
        prop_assert!(theta > 0.0 && theta <= FRAC_PI_2);
        let at = superball_exponent(pn(p), Angle::new(t).unwrap()).unwrap();
        prop_assert!(best.value <= at + 1e-15);
    }

    #[test]
    fn rankin_argmin_is_feasible(p in 1.0f64..2.0) {
        let r = rankin_bound(pn(p)).unwrap();
        let (lo, hi) = rankin_interval(pn(p));
        let x = r.argmin.unwrap();
        prop_assert!(x >= lo && x <= hi);
    }

    #[test]
    fn transferred_bound_minus_b_is_constant(p in 1.0f64..=2.0) {
        let k = kl_transfer_bound(pn(p)).unwrap().value - b_exponent(pn(p));
        prop_assert!((k - (kappa_kl() - b_exponent(pn(2.0)))).abs() <= 1e-12);
    }
}

#[test]
fn endpoint_identity() {
    for p in [2.0, 2.5, 3.0, 7.0, 64.0, 1e3, 1e6] {
        let v = superball_exponent(pn(p), Angle::right()).unwrap();
        assert!((v + 1.0 / p).abs() <= 1e-12, "p={p}");
    }
}

#[test]
fn continuity_stitch_at_two() {
    let a = minimize_superball(pn(2.0)).unwrap().value;
    let b = kl_transfer_bound(pn(2.0)).unwrap().value;
    assert!((a - b).abs() <= 1e-12);
}

#[test]
fn uniform_sampler_lands_on_sphere() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in [1.0, 2.0, 4.0, 64.0, 1e6] {
        let s = SphereSampler::new(5, pn(p));
        for _ in 0..200 {
            let x = s.sample(&mut rng);
            assert!((lp_norm(&x, pn(p)) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn circle_chain_grid() {
    for p in [2.0, 3.0, 4.0, 6.0, 8.0] {
        for d in [0.2, 0.3, 0.5, 0.7, 0.9] {
            let params = GreedyParams { n: 2, p: pn(p), d, trials: 5_000, seed: 11 };
            let code = greedy_code(&params).unwrap();
            let chain = circle_chain(&code, d).unwrap();
            assert!(chain.pass, "p={p} d={d}: {chain:?}");
            assert!(code.len() >= 2);
            if code.len() >= 2 {
                assert!(code.min_distance().unwrap() >= 2.0 * d - ACCEPT_SLACK);
            }
        }
    }
}

#[test]
fn twisted_greedy_code_keeps_shrunk_separation() {
    let params = GreedyParams { n: 3, p: pn(4.0), d: 0.3, trials: 20_000, seed: 5 };
    let code = greedy_code(&params).unwrap();
    assert!(code.len() >= 20, "{}", code.len());
    let twisted = code_twist(&code, pn(2.0)).unwrap();
    assert_eq!(twisted.len(), code.len());
    assert!(twisted.min_distance().unwrap() >= 2.0 * 0.3f64.powi(2) - 1e-9);
}

#[test]
fn lifted_ball_packing_keeps_separation() {
    // 20 centers of the 0.4-spaced grid inside the unit ℓ4 ball; the grid
    // corner (0.8, 0.8) has ℓ4 norm 0.951.
    let centers: Vec<LpVector> = (-2..=2)
        .flat_map(|i| (-2..=2).map(move |j| (i, j)))
        .map(|(i, j)| LpVector::new(vec![0.4 * i as f64, 0.4 * j as f64]).unwrap())
        .take(20)
        .collect();
    assert!(centers.iter().all(|x| lp_norm(x, pn(4.0)) <= 1.0));
    let lifted = lift_to_sphere(&centers, pn(4.0)).unwrap();
    assert_eq!(lifted.len(), 20);
    assert_eq!(lifted.dim(), 3);
    assert!(lifted.min_distance().unwrap() >= 0.4 - 1e-15);
}

#[test]
fn containment_of_scaled_balls() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 6usize;
    for (p, q) in [(1.0, 2.0), (1.5, 4.0), (2.0, 8.0)] {
        let sampler = SphereSampler::new(n, pn(q));
        for _ in 0..2000 {
            // A point with n^{-1/q}‖x‖_q = 1: boundary of the smaller scaled ball.
            let x = sampler.sample(&mut rng);
            let scale = (n as f64).powf(1.0 / q);
            let x = LpVector::new(x.coords().iter().map(|c| c * scale).collect()).unwrap();
            let inner = lp_norm(&x, pn(p)) * (n as f64).powf(-1.0 / p);
            assert!(inner <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn normalized_volume_converges() {
    for p in [1.0, 1.5, 2.0, 4.0] {
        let b = b_exponent(pn(p));
        let r: Vec<f64> = [100, 1000, 10_000]
            .iter()
            .map(|&n| (normalized_log_volume(n, pn(p)).unwrap() - b).abs())
            .collect();
        assert!(r[0] > r[1] && r[1] > r[2], "p={p}: {r:?}");
    }
    assert!((normalized_log_volume(10_000, pn(2.0)).unwrap() - b_exponent(pn(2.0))).abs() < 1e-3);
    for i in 0..=14 {
        let p = 1.0 + 0.5 * i as f64;
        let r = (normalized_log_volume(10_000, pn(p)).unwrap() - b_exponent(pn(p))).abs();
        assert!(r < 2e-3, "p={p}: {r}");
    }
}

#[test]
fn monte_carlo_matches_closed_form() {
    for (n, p) in [(2usize, 2.0), (3, 4.0), (2, 1.0), (4, 1.5)] {
        let est = monte_carlo_volume(n, pn(p), 1_000_000, 0x5EED).unwrap();
        let exact = log2_ball_volume(n, pn(p), 1.0).unwrap().log2_volume;
        assert!(
            (est.log2_volume - exact).abs() <= 3.0 * est.std_error,
            "n={n} p={p}: {} vs {exact} (se {})",
            est.log2_volume,
            est.std_error
        );
    }
    let est = monte_carlo_volume(2, pn(2.0), 1_000_000, 1).unwrap();
    assert!((est.log2_volume - PI.log2()).abs() <= 3.0 * est.std_error);
}
