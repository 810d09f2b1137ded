//! Certified training for a target accuracy epsilon.

use tvp_bilevel::trainer::{run_practical_strategy, StrategyConfig};
use tvp_bilevel::ImageGrid;

fn main() -> tvp_bilevel::Result<()> {
    let clean = ImageGrid::from_fn(vec![8, 8], |i| if i[0] < 4 && i[1] < 5 { 100.0 } else { 20.0 })?;
    let noisy = ImageGrid::from_fn(vec![8, 8], |i| {
        let v = clean.values()[i[0] * 8 + i[1]];
        v + if (i[0] * 8 + i[1]) % 3 == 0 { 12.0 } else { -6.0 }
    })?;
    let config = StrategyConfig {
        workers: 4,
        ..StrategyConfig::default()
    };
    // the level bound is conservative: once it is affordable, the flat K = 1
    // relaxation is usually close enough too
    let outcome = run_practical_strategy(&clean, &noisy, 400.0, &config)?;
    let c = &outcome.certificate;
    println!(
        "K = {}, ||u^K - u|| = {:.4}, alpha_U = {:.4}, TV_1 = {:.4}, level {} (bound {:.4})",
        c.resolution, c.relaxation_distance, c.alpha.alpha_max, c.tv1_relaxed, c.level, c.level_bound
    );
    let r = &outcome.report;
    println!(
        "argmin alpha = {:.4} p = {}, assessment {:.4}, {} points",
        r.argmin_alpha,
        r.argmin_p,
        r.min_value,
        r.records.len()
    );

    // asking for more than max_level allows is refused with the level needed
    match run_practical_strategy(&clean, &noisy, 1.0, &config) {
        Err(e) => println!("epsilon = 1: {e}"),
        Ok(_) => println!("epsilon = 1 fits"),
    }
    Ok(())
}
