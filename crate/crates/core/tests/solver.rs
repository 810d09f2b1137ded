mod common;

use rand::Rng;
use tvp_bilevel::denoise::energy;
use tvp_bilevel::oracle1d::{exact_tv1d, StepSignal};
use tvp_bilevel::trainer::compute_alpha_max;
use tvp_bilevel::{
    denoise, denoise_from, denoise_smoothed, tv_p, AnisotropicMetric, DenoiseParams, ImageGrid,
    PExponent,
};

const TOL: f64 = 1e-7;

fn solve(u: &ImageGrid, alpha: f64, p: PExponent) -> ImageGrid {
    let r = denoise(u, &DenoiseParams::lp(alpha, p).with_tol(TOL).with_max_iter(200_000)).unwrap();
    assert!(r.converged, "alpha={alpha} p={p} residual={}", r.residual);
    r.u
}

fn tv(u: &ImageGrid, p: PExponent) -> f64 {
    tv_p(u, &AnisotropicMetric::lp(p)).unwrap()
}

#[test]
fn minimizer_beats_perturbations() {
    let u_eta = common::add_noise(&common::disk(12), 0.2, 1);
    let mut rng = common::rng(2);
    for p in [PExponent::ONE, PExponent::new(1.5).unwrap(), PExponent::TWO, PExponent::INFINITY] {
        let m = AnisotropicMetric::lp(p);
        let r = denoise(&u_eta, &DenoiseParams::lp(0.05, p).with_tol(TOL)).unwrap();
        let e = energy(&r.u, &u_eta, 0.05, &m).unwrap();
        assert!((e - r.energy(0.05)).abs() < 1e-12);
        let mean = ImageGrid::constant(u_eta.dims().to_vec(), u_eta.mean()).unwrap();
        assert!(e <= energy(&u_eta, &u_eta, 0.05, &m).unwrap());
        assert!(e <= energy(&mean, &u_eta, 0.05, &m).unwrap());
        for _ in 0..20 {
            let v = r
                .u
                .with_values(r.u.values().iter().map(|x| x + 1e-2 * rng.gen_range(-1.0..1.0)).collect())
                .unwrap();
            assert!(e <= energy(&v, &u_eta, 0.05, &m).unwrap() + 1e-9);
        }
        assert!(r.duality_gap >= -1e-12 && r.duality_gap < 1e-6);
    }
}

#[test]
fn start_point_does_not_matter() {
    let u_eta = common::add_noise(&common::shapes(16), 0.3, 3);
    let zeros = ImageGrid::constant(u_eta.dims().to_vec(), 0.0).unwrap();
    for p in [PExponent::ONE, PExponent::TWO, PExponent::INFINITY] {
        let params = DenoiseParams::lp(0.08, p).with_tol(TOL);
        let a = denoise_from(&u_eta, &params, &zeros).unwrap();
        let b = denoise_from(&u_eta, &params, &u_eta).unwrap();
        let d = a.u.l2_distance(&b.u);
        assert!(d <= a.error_bound() + b.error_bound() + 1e-9, "p={p} d={d}");
    }
}

#[test]
fn one_dimensional_solves_ignore_p() {
    let u_eta = common::random_grid(vec![40], 4);
    let base = solve(&u_eta, 0.05, PExponent::TWO);
    for p in [PExponent::ONE, PExponent::new(3.0).unwrap(), PExponent::INFINITY] {
        assert!(solve(&u_eta, 0.05, p).l2_distance(&base) < 1e-6);
    }
}

#[test]
fn one_dimensional_solves_match_taut_string() {
    let mut rng = common::rng(5);
    for _ in 0..5 {
        let levels: Vec<f64> = (0..32).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let f = StepSignal::uniform(levels.clone()).unwrap();
        let alpha = rng.gen_range(0.01..0.5);
        let exact = exact_tv1d(&f, alpha).rasterize(32).unwrap();
        let got = solve(&ImageGrid::signal(levels).unwrap(), alpha, PExponent::TWO);
        assert!(got.l2_distance(&exact) < 1e-5, "alpha={alpha}");
    }
}

#[test]
fn smoothed_solve_is_close() {
    let u_eta = common::add_noise(&common::disk(10), 0.2, 6);
    let params = DenoiseParams::lp(1.0, PExponent::TWO).with_tol(TOL);
    let exact = denoise(&u_eta, &params).unwrap();
    let smooth = denoise_smoothed(&u_eta, &params, 1e-6).unwrap();
    assert!(exact.u.l2_distance(&smooth.u) < 1e-2);
}

#[test]
fn tv_and_fidelity_are_monotone_in_alpha() {
    let u_eta = common::add_noise(&common::shapes(12), 0.2, 7);
    for p in [PExponent::ONE, PExponent::TWO, PExponent::INFINITY] {
        let mut prev_tv = f64::INFINITY;
        let mut prev_fid = 0.0;
        for alpha in [0.0, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2] {
            let u = solve(&u_eta, alpha, p);
            let t = tv(&u, p);
            let fid = u.l2_distance_sq(&u_eta);
            assert!(t <= prev_tv + 1e-6, "p={p} alpha={alpha}");
            assert!(fid >= prev_fid - 1e-8, "p={p} alpha={alpha}");
            prev_tv = t;
            prev_fid = fid;
        }
    }
}

#[test]
fn stability_in_alpha() {
    let u_eta = common::add_noise(&common::disk(12), 0.2, 8);
    let slack = 1e-3 * u_eta.l2_norm_sq();
    let mut rng = common::rng(9);
    for _ in 0..8 {
        let p = PExponent::from_inv(rng.gen_range(0.0..=1.0)).unwrap();
        let a = rng.gen_range(0.0..0.1);
        let eps = rng.gen_range(0.0..0.05);
        let ua = solve(&u_eta, a, p);
        let ub = solve(&u_eta, a + eps, p);
        assert!(ub.l2_distance_sq(&ua) <= eps * tv(&ua, p) + slack);
    }
}

#[test]
fn stability_in_p() {
    let u_eta = common::add_noise(&common::disk(12), 0.2, 10);
    let n = 2.0f64;
    let slack = 1e-3 * u_eta.l2_norm_sq();
    let mut rng = common::rng(11);
    for _ in 0..8 {
        let alpha = rng.gen_range(0.01..0.1);
        let s1 = rng.gen_range(0.0..=1.0);
        let s2 = rng.gen_range(0.0..=s1);
        let (p, q) = (PExponent::from_inv(s1).unwrap(), PExponent::from_inv(s2).unwrap());
        let up = solve(&u_eta, alpha, p);
        let uq = solve(&u_eta, alpha, q);
        let bound = alpha * (1.0 - n.powf(s2 - s1)) * (tv(&up, q) + tv(&uq, q));
        assert!(uq.l2_distance_sq(&up) <= bound + slack);
    }
}

#[test]
fn joint_stability() {
    let u_eta = common::add_noise(&common::disk(10), 0.2, 12);
    let alpha_max = compute_alpha_max(&u_eta, 1e-3).unwrap();
    let tv1 = tv(&u_eta, PExponent::ONE);
    let slack = 1e-3 * u_eta.l2_norm();
    let mut rng = common::rng(13);
    for _ in 0..6 {
        let (a1, a2) = (rng.gen_range(0.0..alpha_max), rng.gen_range(0.0..alpha_max));
        let (s1, s2) = (rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0f64));
        let u1 = solve(&u_eta, a1, PExponent::from_inv(s1).unwrap());
        let u2 = solve(&u_eta, a2, PExponent::from_inv(s2).unwrap());
        let bound = ((a1 - a2).abs().sqrt()
            + 2.0 * (alpha_max * (1.0 - 2f64.powf(-(s2 - s1).abs()))).sqrt())
            * tv1.sqrt();
        assert!(u2.l2_distance(&u1) <= bound + slack);
    }
}
