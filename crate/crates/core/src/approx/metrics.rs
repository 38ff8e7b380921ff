//! Distances between the unit ball and an inscribed polytope.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::{ball_volume, MIN_SAMPLES};
use crate::cone::umbrella_gap_serial;
use crate::error::{Error, Result};
use crate::hull::Polytope;
use crate::linalg::dot;
use crate::mc::{self, McEstimate};

/// Lower limit on Monte Carlo samples spent on each facet's umbrella gap.
pub const MIN_FACET_SAMPLES: u64 = MIN_SAMPLES;

/// Hausdorff distance between an inscribed, origin-containing polytope and
/// the ball: the deepest facet cap, `max_j (1 - offset_j)`.
pub fn hausdorff_gap(p: &Polytope) -> Result<f64> {
    p.require_origin_interior()?;
    Ok(1.0 - p.min_offset())
}

/// Support-function estimate `max_u (1 - max_i ⟨u, x_i⟩)` over random unit
/// directions `u`. It approaches [`hausdorff_gap`] from below as the number
/// of directions grows.
pub fn hausdorff_gap_sampled(p: &Polytope, directions: u64, seed: u64) -> f64 {
    let d = p.dim();
    let mut on_hull = vec![true; p.vertices().len()];
    p.interior().iter().for_each(|&i| on_hull[i] = false);
    let verts: Vec<&[f64]> = p
        .vertices()
        .iter()
        .zip(&on_hull)
        .filter(|(_, &keep)| keep)
        .map(|(v, _)| v.coords())
        .collect();
    (0..mc::DEFAULT_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed.wrapping_add(shard));
            let count = directions / mc::DEFAULT_SHARDS + u64::from(shard < directions % mc::DEFAULT_SHARDS);
            let mut worst = 0.0f64;
            let mut u = vec![0.0; d];
            for _ in 0..count {
                u.iter_mut().for_each(|x| *x = StandardNormal.sample(&mut rng));
                let n = dot(&u, &u).sqrt();
                let support = verts.iter().map(|v| dot(&u, v)).fold(f64::NEG_INFINITY, f64::max) / n;
                worst = worst.max(1.0 - support);
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

/// Two independent estimates of `vol(B) − vol(P)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricDifference {
    /// Sum of per-facet umbrella gaps.
    pub decomposition: McEstimate,
    /// Ball volume times the fraction of uniform ball points outside `P`.
    pub rejection: McEstimate,
}

impl SymmetricDifference {
    pub fn z_score(&self) -> f64 {
        self.decomposition.z_score(&self.rejection)
    }
}

/// Samples per facet for a total budget of `samples`.
pub fn facet_samples(p: &Polytope, samples: u64) -> u64 {
    (samples / p.num_facets().max(1) as u64).max(MIN_FACET_SAMPLES)
}

/// Umbrella gap of every facet, in facet order. Facet `j` uses its own stream
/// derived from `(seed, j)`.
pub fn facet_gaps(p: &Polytope, per_facet: u64, seed: u64) -> Result<Vec<McEstimate>> {
    p.require_origin_interior()?;
    (0..p.num_facets())
        .into_par_iter()
        .map(|j| umbrella_gap_serial(&p.simplex(j)?, per_facet, mc::derive_seed(seed, j as u64)))
        .collect()
}

/// Whether `x` lies in `P` (up to rounding), testing only points outside the
/// inscribed ball of radius `min_offset`.
fn inside(p: &Polytope, x: &[f64], r: f64, min_offset: f64) -> bool {
    r <= min_offset || p.facets().iter().all(|f| f.plane.signed_distance(x) <= 0.0)
}

/// `vol(B)` times the fraction of `samples` uniform ball points satisfying `keep`.
fn ball_fraction<F>(p: &Polytope, samples: u64, seed: u64, keep: F) -> McEstimate
where
    F: Fn(bool) -> bool + Sync,
{
    let d = p.dim();
    let vol = ball_volume(d);
    let min_offset = p.min_offset();
    mc::estimate(samples, seed, mc::DEFAULT_SHARDS, |rng| {
        let mut x = [0.0f64; crate::cone::MAX_DIM];
        let x = &mut x[..d];
        x.iter_mut().for_each(|v| *v = StandardNormal.sample(rng));
        let n = dot(x, x).sqrt();
        let r = rng.random::<f64>().powf(1.0 / d as f64);
        x.iter_mut().for_each(|v| *v *= r / n);
        if keep(inside(p, x, r, min_offset)) {
            vol
        } else {
            0.0
        }
    })
}

/// Volume of `P` by rejection sampling in the ball.
pub fn ball_rejection_volume(p: &Polytope, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::OutOfRange { what: "sample count", value: samples as f64 });
    }
    p.require_origin_interior()?;
    Ok(ball_fraction(p, samples, seed, |inside| inside))
}

/// `vol(B △ P) = vol(B) − vol(P)` by the facet decomposition and by ball
/// rejection sampling. `samples` is the rejection budget; the decomposition
/// spends `facet_samples(p, samples)` per facet.
pub fn symmetric_difference(p: &Polytope, samples: u64, seed: u64) -> Result<SymmetricDifference> {
    if samples < MIN_SAMPLES {
        return Err(Error::OutOfRange { what: "sample count", value: samples as f64 });
    }
    p.require_origin_interior()?;
    let gaps = facet_gaps(p, facet_samples(p, samples), seed)?;
    let decomposition = McEstimate::sum(gaps);
    let rejection = ball_fraction(p, samples, seed ^ 0xA5A5_A5A5, |inside| !inside);
    Ok(SymmetricDifference { decomposition, rejection })
}
