//! Sweep a level-l training ground and pick (alpha, p).

use tvp_bilevel::oracle1d::counterexample_pair;
use tvp_bilevel::trainer::{build_training_ground, compute_alpha_max, train, TrainingPairSet};
use tvp_bilevel::{DenoiseParams, ImageGrid, PExponent};

fn main() -> tvp_bilevel::Result<()> {
    let (noisy, clean) = counterexample_pair();
    let pairs = TrainingPairSet::single(noisy.rasterize(4)?, clean.rasterize(4)?)?;
    let solver = DenoiseParams::lp(1.0, PExponent::TWO).with_tol(1e-9).with_max_iter(100_000);
    let alpha_max = compute_alpha_max(&pairs.pairs()[0].0, 1e-6)?;
    for level in [1, 2, 4] {
        let ground = build_training_ground(alpha_max, level)?;
        let report = train(&pairs, &ground, &solver, 4)?;
        println!(
            "level {level}: {} points, argmin alpha = {} p = {}, assessment {:.6}, bound {:.3}",
            ground.len(),
            report.argmin_alpha,
            report.argmin_p,
            report.min_value,
            report.error_bound.unwrap_or(f64::NAN)
        );
    }

    // two pairs on a 2D grid share one ground
    let clean = ImageGrid::from_fn(vec![12, 12], |i| if i[1] < 6 { 10.0 } else { 30.0 })?;
    let noisy_a = clean.map(|v| v + 2.0)?;
    let noisy_b = ImageGrid::from_fn(vec![12, 12], |i| clean.values()[i[0] * 12 + i[1]] + if (i[0] + i[1]) % 2 == 0 { 3.0 } else { -3.0 })?;
    let pairs = TrainingPairSet::new(vec![(noisy_a, clean.clone()), (noisy_b, clean)])?;
    let ground = build_training_ground(4.0, 2)?;
    let report = train(&pairs, &ground, &DenoiseParams::lp(1.0, PExponent::TWO), 4)?;
    println!(
        "two pairs: argmin alpha = {} p = {}, summed assessment {:.4}",
        report.argmin_alpha, report.argmin_p, report.min_value
    );
    Ok(())
}
