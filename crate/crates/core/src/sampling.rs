//! Deterministic point sets on the unit sphere of a source norm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::norm::SourceNorm;

/// `count` points of the unit sphere in `R^d`, `1 ≤ d ≤ 4`, fixed by `seed`.
///
/// The plane uses equally spaced angles with a seeded phase, `R^3` a
/// Fibonacci lattice with a seeded twist, `R^4` seeded Gaussian directions.
/// Every direction is then rescaled onto the sphere of `n`.
pub fn sphere_samples(n: &SourceNorm, d: usize, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs: Vec<Vec<f64>> = match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => {
            let phase: f64 = rng.gen();
            (0..count)
                .map(|j| {
                    let t = std::f64::consts::TAU * (j as f64 + phase) / count as f64;
                    vec![t.cos(), t.sin()]
                })
                .collect()
        }
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            let twist: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            (0..count)
                .map(|j| {
                    let z = 1.0 - 2.0 * (j as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let a = golden * j as f64 + twist;
                    vec![r * a.cos(), r * a.sin(), z]
                })
                .collect()
        }
        4 => (0..count)
            .map(|_| loop {
                let v: Vec<f64> = (0..4).map(|_| rng.sample(StandardNormal)).collect();
                if v.iter().any(|c: &f64| c.abs() > 1e-12) {
                    break v;
                }
            })
            .collect(),
        _ => return Err(Error::Unsupported(format!("sphere sampling in dimension {d}"))),
    };
    Ok(dirs.iter().filter_map(|v| n.project_f64(v)).collect())
}
