//! Brute-force check of `ρ(K) = cch(ρ(K)) ∩ S^(0)` on sampled sphere points.

use serde::{Deserialize, Serialize};

use crate::cone::ConeSpec;
use crate::decision::Verdict;
use crate::error::{Error, Result};
use crate::hulls::{in_convex_hull, origin_in_hull_of};
use crate::norm::SourceNorm;
use crate::par::map_indices;
use crate::sampling::sphere_samples;
use crate::scalar::Field;
use crate::vector::dot;

/// Witnesses kept in a report.
const MAX_WITNESSES: usize = 8;
/// Points of `ρ(K)` used for the origin test.
const ORIGIN_TEST_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { samples: 10_000, tol: 1e-6, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    /// Sphere samples that fall in `K`.
    pub in_image: usize,
    /// Sphere samples in the hull but away from `ρ(K)`.
    pub excess_count: usize,
    /// `0 ∈ conv(ρ(K))` while `0 ∉ K`.
    pub origin_excess: bool,
    pub witnesses: Vec<Vec<f64>>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agrees_with_exact: Option<bool>,
}

fn linf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Samples the sphere of `n` and reports points of `cch(ρ(K)) ∩ S^(0)` that
/// are farther than `tol` from the sampled `ρ(K)`.
pub fn sampling_oracle<F: Field>(k: &ConeSpec<F>, n: &SourceNorm, cfg: &OracleConfig) -> Result<OracleReport> {
    let d = k.dim();
    if d > 4 {
        return Err(Error::Unsupported("the sampling oracle handles dimensions up to 4".into()));
    }
    if cfg.samples < 1000 {
        return Err(Error::InvalidInput("the sampling oracle needs at least 1000 samples".into()));
    }
    let kf = k.to_float();
    let sphere = sphere_samples(n, d, cfg.samples, cfg.seed)?;
    let inside: Vec<bool> = map_indices(sphere.len(), |j| kf.contains(&sphere[j]).unwrap_or(false));

    let mut image: Vec<Vec<f64>> = kf.generators().unwrap_or_default().iter().filter_map(|g| n.project_f64(g)).collect();
    image.extend(sphere.iter().zip(&inside).filter(|(_, &i)| i).map(|(s, _)| s.clone()));

    // Only points on the face exposed by a subgradient at `s` can carry weight
    // in a convex combination equal to `s`.
    let flags: Vec<bool> = map_indices(sphere.len(), |j| {
        if inside[j] {
            return false;
        }
        let s = &sphere[j];
        let phi = n.subgradient(s);
        let face: Vec<Vec<f64>> = image.iter().filter(|p| dot(&phi, p) >= 1.0 - cfg.tol).cloned().collect();
        !face.is_empty()
            && image.iter().all(|p| linf_dist(p, s) > cfg.tol)
            && in_convex_hull(&face, s)
    });

    let step = (image.len() / ORIGIN_TEST_POINTS).max(1);
    let thinned: Vec<Vec<f64>> = image.iter().step_by(step).cloned().collect();
    let origin_in_hull = kf.origin_status() || (!thinned.is_empty() && origin_in_hull_of(&thinned, d).0);
    let origin_excess = origin_in_hull && !kf.origin_status();

    let excess: Vec<&Vec<f64>> = sphere.iter().zip(&flags).filter(|(_, &f)| f).map(|(s, _)| s).collect();
    let mut witnesses: Vec<Vec<f64>> = Vec::new();
    if origin_excess {
        witnesses.push(vec![0.0; d]);
    }
    witnesses.extend(excess.iter().take(MAX_WITNESSES - witnesses.len()).map(|s| (*s).clone()));
    let verdict = if excess.is_empty() && !origin_excess { Verdict::CapraConvex } else { Verdict::NotCapraConvex };
    Ok(OracleReport {
        samples: sphere.len(),
        tol: cfg.tol,
        seed: cfg.seed,
        in_image: inside.iter().filter(|&&i| i).count(),
        excess_count: excess.len(),
        origin_excess,
        witnesses,
        verdict,
        agrees_with_exact: None,
    })
}
