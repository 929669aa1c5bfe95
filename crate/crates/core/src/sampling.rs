//! Seeded low-discrepancy sampling of coordinate boxes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 4] = [2, 3, 5, 7];

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    r
}

/// Halton points in `[0,1)^4` with a seeded Cranley–Patterson rotation.
pub fn halton(count: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
    (1..=count as u64)
        .map(|i| {
            let mut p = [0.0; 4];
            for k in 0..4 {
                p[k] = (radical_inverse(i, PRIMES[k]) + shift[k]).fract();
            }
            p
        })
        .collect()
}

/// Maps unit-cube samples into the box `lo..hi` componentwise.
pub fn scale_to_box(unit: &[[f64; 4]], lo: &[f64; 4], hi: &[f64; 4]) -> Vec<[f64; 4]> {
    unit.iter()
        .map(|u| {
            let mut p = [0.0; 4];
            for k in 0..4 {
                p[k] = lo[k] + u[k] * (hi[k] - lo[k]);
            }
            p
        })
        .collect()
}

/// Tensor-product grid with `counts[k]` nodes per axis (cell midpoints).
pub fn regular(lo: &[f64; 4], hi: &[f64; 4], counts: &[usize; 4]) -> Vec<[f64; 4]> {
    let mut out = Vec::new();
    let axis = |k: usize, i: usize| lo[k] + (i as f64 + 0.5) / counts[k] as f64 * (hi[k] - lo[k]);
    for a in 0..counts[0] {
        for b in 0..counts[1] {
            for c in 0..counts[2] {
                for d in 0..counts[3] {
                    out.push([axis(0, a), axis(1, b), axis(2, c), axis(3, d)]);
                }
            }
        }
    }
    out
}
