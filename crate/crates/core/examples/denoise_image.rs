//! Denoise a synthetic image (or a PGM given on the command line) for a few exponents.
//!
//! cargo run --example denoise_image -- [input.pgm] [alpha]

use std::path::PathBuf;

use tvp_bilevel::io::{read_image, write_image};
use tvp_bilevel::{denoise, DenoiseParams, ImageGrid, PExponent};

fn synthetic() -> tvp_bilevel::Result<ImageGrid> {
    let mut state = 0x2545_f491_u64;
    ImageGrid::from_fn(vec![48, 48], |i| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let noise = (state % 1000) as f64 / 1000.0 - 0.5;
        let (y, x) = (i[0] as f64 - 24.0, i[1] as f64 - 20.0);
        let clean = if x * x + y * y < 150.0 { 200.0 } else { 50.0 };
        clean + 60.0 * noise
    })
}

fn main() -> tvp_bilevel::Result<()> {
    let mut args = std::env::args().skip(1);
    let u_eta = match args.next() {
        Some(path) => read_image(&PathBuf::from(path))?,
        None => synthetic()?,
    };
    let alpha: f64 = args.next().map_or(5.0, |a| a.parse().expect("alpha"));

    for p in [PExponent::ONE, PExponent::TWO, PExponent::INFINITY] {
        let r = denoise(&u_eta, &DenoiseParams::lp(alpha, p))?;
        println!(
            "p = {p:<3} iterations {:>5}  energy {:>12.4}  TV {:>10.4}  gap {:.2e}  converged {}",
            r.iterations,
            r.energy(alpha),
            r.tv_value,
            r.duality_gap,
            r.converged
        );
        let out = std::env::temp_dir().join(format!("denoised_p{p}.pgm"));
        write_image(&r.u.map(|v| v.clamp(0.0, 255.0))?, &out)?;
        println!("        wrote {}", out.display());
    }
    Ok(())
}
