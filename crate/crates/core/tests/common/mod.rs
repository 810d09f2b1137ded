#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvp_bilevel::ImageGrid;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A bright disk on a dark background.
pub fn disk(n: usize) -> ImageGrid {
    let c = n as f64 / 2.0;
    let r2 = (n as f64 * 0.3).powi(2);
    ImageGrid::from_fn(vec![n, n], |i| {
        let dy = i[0] as f64 + 0.5 - c;
        let dx = i[1] as f64 + 0.5 - 0.8 * c;
        if dx * dx + dy * dy < r2 {
            1.0
        } else {
            0.0
        }
    })
    .unwrap()
}

/// A disk plus a bar, two intensity levels.
pub fn shapes(n: usize) -> ImageGrid {
    let d = disk(n);
    d.with_values(
        d.values()
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let (r, c) = (k / n, k % n);
                if r >= n * 3 / 4 && c >= n / 8 && c < n * 7 / 8 {
                    0.5
                } else {
                    *v
                }
            })
            .collect(),
    )
    .unwrap()
}

/// Adds uniform noise of amplitude `sigma`.
pub fn add_noise(u: &ImageGrid, sigma: f64, seed: u64) -> ImageGrid {
    let mut r = rng(seed);
    u.with_values(u.values().iter().map(|v| v + sigma * r.gen_range(-1.0..1.0)).collect())
        .unwrap()
}

pub fn random_grid(dims: Vec<usize>, seed: u64) -> ImageGrid {
    let mut r = rng(seed);
    ImageGrid::from_fn(dims, |_| r.gen_range(-1.0..1.0)).unwrap()
}

/// Area-weighted inner product.
pub fn inner(a: &[f64], b: &[f64], area: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * area
}
