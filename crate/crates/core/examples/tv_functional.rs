//! TV_p of a small image, and the gradient / divergence pair.

use tvp_bilevel::{divergence, gradient, tv_p, AnisotropicMetric, ImageGrid, PExponent};

fn main() -> tvp_bilevel::Result<()> {
    // a diagonal edge: the p = 1 and p = inf values differ by the factor 2
    let u = ImageGrid::from_fn(vec![32, 32], |i| if i[0] + i[1] < 32 { 1.0 } else { 0.0 })?;
    for p in [PExponent::ONE, PExponent::new(1.5)?, PExponent::TWO, PExponent::INFINITY] {
        println!("TV_{p:<4} = {:.6}", tv_p(&u, &AnisotropicMetric::lp(p))?);
    }

    let g = gradient(&u);
    let div = divergence(&g, u.dims(), u.spacing())?;
    // <grad u, grad u> = -<u, div grad u>
    let a = u.cell_area();
    let lhs: f64 = g.data().iter().map(|v| v * v).sum::<f64>() * a;
    let rhs: f64 = -u.values().iter().zip(div.values()).map(|(x, y)| x * y).sum::<f64>() * a;
    println!("|grad u|^2 = {lhs:.6}, -<u, div grad u> = {rhs:.6}");
    Ok(())
}
