//! Empirical search for heavy caps around a centroid.
//!
//! Given a weighted point cloud in the ball whose centroid lies in a cap of
//! height `Δ` (equivalently `‖cg‖ ≥ 1 − Δ`), look for a cap of height `2Δ`
//! holding at least half the mass. No proof backs the claim that one always
//! exists; this module only reports what the search finds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapSearch {
    /// Unit direction of the best cap found.
    pub direction: Vec<f64>,
    /// Cap height, `2Δ`.
    pub height: f64,
    /// Mass inside the cap over the total mass.
    pub mass_fraction: f64,
    /// Whether `mass_fraction ≥ ½`.
    pub found: bool,
    pub directions_tried: usize,
}

fn mass_in_cap(points: &[Vec<f64>], weights: &[f64], u: &[f64], level: f64) -> f64 {
    points
        .iter()
        .zip(weights)
        .filter(|(p, _)| dot(p, u) >= level)
        .map(|(_, w)| w)
        .sum()
}

/// Searches caps of height `2Δ`, first around `cg/‖cg‖`, then over
/// `directions` seeded candidates: perturbations of the centroid direction at
/// several angular scales plus uniform directions.
pub fn heavy_cap_search(
    points: &[Vec<f64>],
    weights: &[f64],
    delta: f64,
    directions: usize,
    seed: u64,
) -> Result<CapSearch> {
    if points.is_empty() || points.len() != weights.len() {
        return Err(Error::PreconditionViolated("cloud needs one weight per point".into()));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::OutOfRange { what: "cap height", value: delta });
    }
    let d = points[0].len();
    if weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::PreconditionViolated("negative weight".into()));
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::PreconditionViolated("cloud has zero mass".into()));
    }
    let mut cg = vec![0.0; d];
    for (p, w) in points.iter().zip(weights) {
        if p.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: p.len() });
        }
        cg.iter_mut().zip(p).for_each(|(c, x)| *c += w * x / total);
    }
    let cg_norm = norm(&cg);
    if cg_norm < 1.0 - delta {
        return Err(Error::PreconditionViolated(format!(
            "centroid norm {cg_norm} is below 1 - Δ = {}",
            1.0 - delta
        )));
    }
    let height = (2.0 * delta).min(2.0);
    let level = 1.0 - height;
    let center: Vec<f64> = cg.iter().map(|x| x / cg_norm).collect();

    let mut best_dir = center.clone();
    let mut best = mass_in_cap(points, weights, &center, level);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..directions {
        // scales cycle through 0.05, 0.2, 0.8 and uniform
        let scale = [0.05, 0.2, 0.8, f64::INFINITY][k % 4];
        let noise: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut u: Vec<f64> = if scale.is_finite() {
            center.iter().zip(&noise).map(|(c, z)| c + scale * z).collect()
        } else {
            noise
        };
        let n = norm(&u);
        if n == 0.0 {
            continue;
        }
        u.iter_mut().for_each(|x| *x /= n);
        let m = mass_in_cap(points, weights, &u, level);
        if m > best {
            best = m;
            best_dir = u;
        }
    }
    let mass_fraction = best / total;
    Ok(CapSearch {
        direction: best_dir,
        height,
        mass_fraction,
        found: mass_fraction >= 0.5,
        directions_tried: directions + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_cloud() {
        let delta = 0.2;
        let pts = vec![vec![1.0 - delta / 2.0, 0.0, 0.0]];
        let r = heavy_cap_search(&pts, &[1.0], delta, 0, 1).unwrap();
        assert_eq!(r.mass_fraction, 1.0);
        assert!(r.found);
        assert!((r.height - 0.4).abs() < 1e-15);
        assert!((r.direction[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_cap_cloud() {
        let delta = 0.3;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pts = Vec::new();
        while pts.len() < 2000 {
            let p: Vec<f64> = (0..3).map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0)).collect();
            if dot(&p, &p) <= 1.0 && p[2] >= 1.0 - delta {
                pts.push(p);
            }
        }
        let w = vec![1.0; pts.len()];
        let r = heavy_cap_search(&pts, &w, delta, 16, 2).unwrap();
        assert_eq!(r.mass_fraction, 1.0);
    }

    #[test]
    fn precondition_checked() {
        let pts = vec![vec![0.1, 0.0], vec![-0.1, 0.0]];
        assert!(matches!(
            heavy_cap_search(&pts, &[1.0, 1.0], 0.5, 4, 1),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(heavy_cap_search(&pts, &[1.0], 0.5, 4, 1).is_err());
    }
}
