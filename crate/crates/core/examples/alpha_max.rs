//! Upper bound alpha_U past which every reconstruction is flat.

use tvp_bilevel::denoise::DEFAULT_TOL;
use tvp_bilevel::oracle1d::counterexample_pair;
use tvp_bilevel::trainer::compute_alpha_max_certified;
use tvp_bilevel::{DenoiseParams, ImageGrid, PExponent};

fn main() -> tvp_bilevel::Result<()> {
    let solver = DenoiseParams::lp(1.0, PExponent::INFINITY).with_tol(DEFAULT_TOL);

    let signal = counterexample_pair().0.rasterize(4)?;
    let cert = compute_alpha_max_certified(&signal, 1e-6, &solver)?;
    println!("1D signal: alpha_U = {:.6} ({} solves)", cert.alpha_max, cert.solves);

    let image = ImageGrid::from_fn(vec![16, 16], |i| ((i[0] / 4 + i[1] / 4) % 2) as f64)?;
    let cert = compute_alpha_max_certified(&image, 1e-4, &solver)?;
    println!("{}", tvp_bilevel::io::to_json(&cert)?);
    Ok(())
}
