mod common;

use proptest::prelude::*;
use tvp_bilevel::lp::{dual_exponent, equivalence_factor, lp_norm, metric_dual_project, project_dual_ball};
use tvp_bilevel::trainer::{build_training_ground, relax_image, required_level};
use tvp_bilevel::{divergence, gradient, tv_p, AnisotropicMetric, ImageGrid, PExponent};

/// Reference norm, written out without scaling tricks.
fn naive_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn exponent() -> impl Strategy<Value = PExponent> {
    prop_oneof![
        Just(PExponent::ONE),
        Just(PExponent::TWO),
        Just(PExponent::INFINITY),
        (0.0f64..=1.0).prop_map(|s| PExponent::from_inv(s).unwrap()),
    ]
}

fn vector(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, n)
}

/// Independent TV: loops over cells and axes by explicit index arithmetic.
fn tv_oracle(u: &ImageGrid, p: f64) -> f64 {
    let dims = u.dims();
    let n = dims.len();
    let h: Vec<f64> = dims.iter().map(|&d| 1.0 / d as f64).collect();
    let area: f64 = h.iter().product();
    let total = u.len();
    let mut sum = 0.0;
    for cell in 0..total {
        let mut idx = vec![0usize; n];
        let mut rest = cell;
        for a in (0..n).rev() {
            idx[a] = rest % dims[a];
            rest /= dims[a];
        }
        let mut g = vec![0.0; n];
        for a in 0..n {
            if idx[a] + 1 < dims[a] {
                let mut j = idx.clone();
                j[a] += 1;
                let mut flat = 0;
                for b in 0..n {
                    flat = flat * dims[b] + j[b];
                }
                g[a] = (u.values()[flat] - u.values()[cell]) / h[a];
            }
        }
        sum += naive_norm(&g, p);
    }
    sum * area
}

fn small_grid() -> impl Strategy<Value = ImageGrid> {
    prop_oneof![
        (2usize..12).prop_flat_map(|n| vector(n..=n).prop_map(|v| ImageGrid::signal(v).unwrap())),
        (2usize..7, 2usize..7).prop_flat_map(|(r, c)| {
            vector(r * c..=r * c).prop_map(move |v| ImageGrid::image(r, c, v).unwrap())
        }),
        (2usize..4, 2usize..4, 2usize..4).prop_flat_map(|(a, b, c)| {
            vector(a * b * c..=a * b * c).prop_map(move |v| ImageGrid::new(vec![a, b, c], v).unwrap())
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn norm_matches_naive(x in vector(1..=8), p in exponent()) {
        let got = lp_norm(&x, p).unwrap();
        let want = naive_norm(&x, p.value());
        prop_assert!((got - want).abs() <= 1e-10 * (1.0 + want));
    }

    #[test]
    fn holder_sandwich(x in vector(1..=8), p1 in exponent(), p2 in exponent()) {
        let (lo, hi) = if p1.cmp_p(p2).is_le() { (p1, p2) } else { (p2, p1) };
        let c = equivalence_factor(lo, hi, x.len()).unwrap();
        let a = lp_norm(&x, lo).unwrap();
        let b = lp_norm(&x, hi).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-12) + 1e-12);
        prop_assert!(a <= c * b * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn equivalence_rejects_reversed_order(n in 1usize..10) {
        prop_assert!(equivalence_factor(PExponent::INFINITY, PExponent::ONE, n).is_err());
    }

    #[test]
    fn holder_duality(x in vector(3..=3), y in vector(3..=3), p in exponent()) {
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let bound = lp_norm(&x, p).unwrap() * lp_norm(&y, dual_exponent(p)).unwrap();
        prop_assert!(dot <= bound * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn projection_feasible_idempotent_optimal(
        v in vector(1..=6),
        z in vector(1..=6),
        p in exponent(),
    ) {
        let q = dual_exponent(p);
        let w = project_dual_ball(&v, p, 1e-12).unwrap();
        prop_assert!(lp_norm(&w, q).unwrap() <= 1.0 + 1e-9);
        let again = project_dual_ball(&w, p, 1e-12).unwrap();
        for (a, b) in w.iter().zip(&again) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
        // <v - w, z' - w> <= 0 for any feasible z'
        let n = v.len().min(z.len());
        let mut zf: Vec<f64> = z[..n].to_vec();
        zf.resize(v.len(), 0.0);
        let zn = lp_norm(&zf, q).unwrap();
        if zn > 1.0 {
            zf.iter_mut().for_each(|c| *c /= zn);
        }
        let vi: f64 = v.iter().zip(&w).zip(&zf).map(|((a, b), c)| (a - b) * (c - b)).sum();
        prop_assert!(vi <= 1e-7 * (1.0 + lp_norm(&v, PExponent::TWO).unwrap()));
    }

    #[test]
    fn skewed_projection_feasible(
        v in vector(2..=2),
        w0 in 0.05f64..0.95,
        p in exponent(),
    ) {
        let m = AnisotropicMetric::skewed(p, vec![w0, 1.0 - w0]).unwrap();
        let w = metric_dual_project(&v, &m, 1e-12).unwrap();
        prop_assert!(m.dual_norm(&w) <= 1.0 + 1e-9);
        if m.dual_norm(&v) <= 1.0 {
            for (a, b) in v.iter().zip(&w) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn divergence_is_negative_adjoint(u in small_grid(), seed in any::<u64>()) {
        let g = gradient(&u);
        let phi = common::random_grid(vec![g.data().len()], seed);
        let phi = tvp_bilevel::DualField::from_data(u.dims().to_vec(), phi.values().to_vec()).unwrap();
        let div = divergence(&phi, u.dims(), u.spacing()).unwrap();
        let a = u.cell_area();
        let lhs = common::inner(g.data(), phi.data(), a);
        let rhs = -common::inner(u.values(), div.values(), a);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()) * 1e3);
    }

    #[test]
    fn tv_matches_oracle(u in small_grid(), p in exponent()) {
        let got = tv_p(&u, &AnisotropicMetric::lp(p)).unwrap();
        let want = tv_oracle(&u, p.value());
        prop_assert!((got - want).abs() <= 1e-10 * (1.0 + want));
    }

    #[test]
    fn tv_equivalence(u in small_grid(), p1 in exponent(), p2 in exponent()) {
        let (lo, hi) = if p1.cmp_p(p2).is_le() { (p1, p2) } else { (p2, p1) };
        let c = equivalence_factor(lo, hi, u.ndim()).unwrap();
        let a = tv_p(&u, &AnisotropicMetric::lp(lo)).unwrap();
        let b = tv_p(&u, &AnisotropicMetric::lp(hi)).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-12) + 1e-12);
        prop_assert!(a <= c * b * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn tv_homogeneous_and_shift_invariant(u in small_grid(), p in exponent(), s in -5.0f64..5.0, t in -5.0f64..5.0) {
        let m = AnisotropicMetric::lp(p);
        let base = tv_p(&u, &m).unwrap();
        let scaled = tv_p(&u.map(|v| s * v).unwrap(), &m).unwrap();
        let shifted = tv_p(&u.map(|v| v + t).unwrap(), &m).unwrap();
        prop_assert!((scaled - s.abs() * base).abs() <= 1e-9 * (1.0 + base * s.abs()));
        prop_assert!((shifted - base).abs() <= 1e-9 * (1.0 + base));
    }

    #[test]
    fn grounds_are_nested(alpha_max in 0.1f64..20.0, l in 1u64..6, m in 1u64..4) {
        let small = build_training_ground(alpha_max, l).unwrap();
        let big = build_training_ground(alpha_max, l * m).unwrap();
        for a in &small.alphas {
            prop_assert!(big.alphas.iter().any(|b| (a - b).abs() <= 1e-12));
        }
        for p in &small.ps {
            prop_assert!(big.ps.iter().any(|q| (p.inv() - q.inv()).abs() <= 1e-12));
        }
        prop_assert!(small.alphas.first() == Some(&0.0));
        prop_assert!(small.alphas.last() == Some(&alpha_max));
    }

    #[test]
    fn required_level_is_monotone(
        e1 in 0.5f64..50.0,
        e2 in 0.5f64..50.0,
        alpha_max in 0.5f64..20.0,
        tv1 in 0.5f64..20.0,
        dim in 1usize..4,
    ) {
        let (small, large) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let ls = required_level(small, alpha_max, tv1, dim).unwrap();
        let ll = required_level(large, alpha_max, tv1, dim).unwrap();
        prop_assert!(ls >= ll);
        prop_assert!(tvp_bilevel::trainer::error_bound(ll, alpha_max, tv1, dim) <= large);
        if ll > 1 {
            prop_assert!(tvp_bilevel::trainer::error_bound(ll - 1, alpha_max, tv1, dim) > large);
        }
    }

    #[test]
    fn relaxation_refines_along_divisors(seed in any::<u64>()) {
        let u = common::random_grid(vec![16, 16], seed);
        let mut prev = f64::INFINITY;
        for k in [1usize, 2, 4, 8, 16] {
            let d = relax_image(&u, k).unwrap().l2_distance(&u);
            prop_assert!(d <= prev + 1e-12);
            prev = d;
        }
        prop_assert!(prev <= 1e-12);
        let r = relax_image(&u, 4).unwrap();
        prop_assert!((r.mean() - u.mean()).abs() <= 1e-12);
    }
}
