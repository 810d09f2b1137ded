//! Block-average relaxations u^K and how far each is from the data.

use tvp_bilevel::trainer::{admissible_resolutions, choose_resolution, relax_image};
use tvp_bilevel::{tv_p, AnisotropicMetric, ImageGrid, PExponent};

fn main() -> tvp_bilevel::Result<()> {
    let u = ImageGrid::from_fn(vec![24, 24], |i| ((i[0] * 7 + i[1] * 13) % 17) as f64)?;
    let one = AnisotropicMetric::lp(PExponent::ONE);
    for k in admissible_resolutions(u.dims()) {
        let r = relax_image(&u, k)?;
        println!("K = {k:>2}: ||u^K - u|| = {:.4}, TV_1(u^K) = {:.4}", r.l2_distance(&u), tv_p(&r, &one)?);
    }
    for eps in [40.0, 10.0, 1.0] {
        println!("epsilon {eps}: K = {}", choose_resolution(&u, eps)?);
    }
    Ok(())
}
