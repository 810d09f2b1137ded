//! The four-level 1D pair whose assessment has two strict local minima.

use tvp_bilevel::oracle1d::{counterexample_assessment, counterexample_pair, exact_tv1d, strict_local_minima};

fn main() {
    let (noisy, clean) = counterexample_pair();
    println!("noisy {:?}", noisy.levels());
    println!("clean {:?}", clean.levels());

    for alpha in [0.0, 2.0, 5.0, 10.0, 14.0, 40.0, 60.0] {
        let u = exact_tv1d(&noisy, alpha);
        println!(
            "alpha {alpha:>5}: u = {:?}  assessment {:.4}",
            u.levels(),
            counterexample_assessment(alpha)
        );
    }

    let step = 0.01;
    let scan: Vec<f64> = (0..=6000).map(|i| counterexample_assessment(i as f64 * step)).collect();
    for i in strict_local_minima(&scan) {
        println!("strict local minimum {:.4} at alpha = {:.2}", scan[i], i as f64 * step);
    }
}
