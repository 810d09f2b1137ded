//! Norms, equivalence constants and dual-ball projections.

use tvp_bilevel::lp::{dual_exponent, equivalence_factor, lp_norm, metric_dual_project, project_dual_ball};
use tvp_bilevel::{AnisotropicMetric, PExponent};

fn main() -> tvp_bilevel::Result<()> {
    let x = [3.0, -4.0];
    for p in ["1", "1.5", "2", "4", "inf"] {
        let p: PExponent = p.parse()?;
        let w = project_dual_ball(&x, p, 1e-12)?;
        println!(
            "p = {p:<4} |x|_p = {:.6}  p* = {:<6.4} proj = [{:.6}, {:.6}]  |proj|_p* = {:.3}",
            lp_norm(&x, p)?,
            dual_exponent(p).value(),
            w[0],
            w[1],
            lp_norm(&w, dual_exponent(p))?,
        );
    }

    // |x|_2 <= |x|_1 <= sqrt(2) |x|_2 in the plane
    let c = equivalence_factor(PExponent::ONE, PExponent::TWO, 2)?;
    println!("N^(1/1 - 1/2) for N = 2: {c:.6}");

    // weights favour the first axis
    let m = AnisotropicMetric::skewed(PExponent::new(3.0)?, vec![0.8, 0.2])?;
    let w = metric_dual_project(&x, &m, 1e-12)?;
    println!("{m}: proj = [{:.6}, {:.6}], dual norm {:.3}", w[0], w[1], m.dual_norm(&w));
    Ok(())
}
