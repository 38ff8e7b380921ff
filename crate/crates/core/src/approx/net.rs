//! Separated nets on the sphere by greedy farthest-point selection.
//!
//! Points are chosen from a seeded uniform candidate pool, each new point
//! being the pool point farthest from everything chosen so far. The selection
//! distances `δ_1 ≥ δ_2 ≥ …` never increase, so the first `k` points are
//! `δ_k`-separated and every pool point lies within `δ_{k+1} ≤ δ_k` of one of
//! them: the prefix is a maximal `δ_k`-separated subset of the pool. Asking
//! for a separation `θ` stops once `δ_{k+1} < θ`; asking for a count `n`
//! stops after `n` points and reports `θ = δ_n`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::SpherePoint;
use crate::hull::{convex_hull, Polytope};
use crate::linalg::dist2;

/// Default candidate pool size per requested net point.
pub const POOL_FACTOR: usize = 200;
/// Smallest accepted pool size per net point.
pub const MIN_POOL_FACTOR: usize = 50;
/// Pool size used with a separation target and no explicit pool.
pub const DEFAULT_SEPARATION_POOL: usize = 100_000;

/// What the net should achieve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NetTarget {
    /// Pairwise distance at least `θ`, `0 < θ ≤ 2`.
    Separation(f64),
    /// Exactly `n` points, `n ≥ 2d`.
    Count(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetConfig {
    pub dim: usize,
    pub target: NetTarget,
    pub seed: u64,
    /// Candidate pool size; defaults to `POOL_FACTOR · n`.
    pub pool_size: Option<usize>,
    /// Put `±e_i` at the front of the pool (the first one seeds the selection).
    pub seed_axes: bool,
}

impl NetConfig {
    pub fn with_count(dim: usize, n: usize, seed: u64) -> Self {
        Self { dim, target: NetTarget::Count(n), seed, pool_size: None, seed_axes: false }
    }

    pub fn with_separation(dim: usize, theta: f64, seed: u64) -> Self {
        Self { dim, target: NetTarget::Separation(theta), seed, pool_size: None, seed_axes: false }
    }

    fn validate(&self) -> Result<usize> {
        if self.dim < 2 {
            return Err(Error::OutOfRange { what: "dimension", value: self.dim as f64 });
        }
        match self.target {
            NetTarget::Count(n) => {
                if n < 2 * self.dim {
                    return Err(Error::PreconditionViolated(format!(
                        "net needs n >= 2d = {}, got {n}",
                        2 * self.dim
                    )));
                }
                let pool = self.pool_size.unwrap_or(POOL_FACTOR * n);
                if pool < MIN_POOL_FACTOR * n {
                    return Err(Error::PoolTooSmall { pool, n, needed: MIN_POOL_FACTOR * n });
                }
                Ok(pool)
            }
            NetTarget::Separation(theta) => {
                if !(theta > 0.0 && theta <= 2.0) {
                    return Err(Error::OutOfRange { what: "net separation", value: theta });
                }
                Ok(self.pool_size.unwrap_or(DEFAULT_SEPARATION_POOL))
            }
        }
    }
}

/// A net and the distances that certify it against its pool.
#[derive(Debug, Clone, PartialEq)]
pub struct Net {
    pub points: Vec<SpherePoint>,
    /// Minimum pairwise distance among `points`.
    pub separation: f64,
    /// Largest distance from a pool point to its nearest net point.
    pub covering_radius: f64,
    pub pool_size: usize,
}

fn candidate_pool(cfg: &NetConfig, size: usize) -> Vec<SpherePoint> {
    let d = cfg.dim;
    let mut pool = Vec::with_capacity(size + 2 * d);
    if cfg.seed_axes {
        for i in 0..d {
            pool.push(SpherePoint::axis(d, i, false));
            pool.push(SpherePoint::axis(d, i, true));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    while pool.len() < size {
        let c: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        if let Ok(p) = SpherePoint::new(c) {
            pool.push(p);
        }
    }
    pool
}

/// Greedy farthest-point net; see the module docs for the guarantees.
pub fn greedy_net(cfg: &NetConfig) -> Result<Net> {
    let pool_size = cfg.validate()?;
    let pool = candidate_pool(cfg, pool_size);
    let (limit, min_sep2) = match cfg.target {
        NetTarget::Count(n) => (n, 0.0),
        NetTarget::Separation(t) => (pool.len(), t * t),
    };
    if limit > pool.len() {
        return Err(Error::PoolTooSmall { pool: pool.len(), n: limit, needed: limit });
    }

    let mut nearest = vec![f64::INFINITY; pool.len()];
    let mut chosen: Vec<usize> = Vec::new();
    let mut last_sep2 = f64::INFINITY;
    let mut next = 0usize;
    loop {
        chosen.push(next);
        let c = pool[next].coords();
        let (far, far2) = nearest
            .par_iter_mut()
            .enumerate()
            .with_min_len(4096)
            .map(|(i, m)| {
                let d2 = dist2(pool[i].coords(), c);
                if d2 < *m {
                    *m = d2;
                }
                (i, *m)
            })
            .reduce(|| (usize::MAX, f64::NEG_INFINITY), |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
        if chosen.len() >= limit || far2 < min_sep2 || far2 <= 0.0 {
            let separation = if chosen.len() == 1 { f64::INFINITY } else { last_sep2.sqrt() };
            if let NetTarget::Count(n) = cfg.target {
                if chosen.len() < n {
                    return Err(Error::PoolTooSmall { pool: pool.len(), n, needed: n });
                }
            }
            if pool.len() < MIN_POOL_FACTOR * chosen.len() {
                return Err(Error::PoolTooSmall {
                    pool: pool.len(),
                    n: chosen.len(),
                    needed: MIN_POOL_FACTOR * chosen.len(),
                });
            }
            return Ok(Net {
                points: chosen.iter().map(|&i| pool[i].clone()).collect(),
                separation,
                covering_radius: far2.max(0.0).sqrt(),
                pool_size: pool.len(),
            });
        }
        last_sep2 = far2;
        next = far;
    }
}

/// Hull of a count-`n` net: the inscribed polytope with `n` vertices.
pub fn build_qn(dim: usize, n: usize, seed: u64) -> Result<Polytope> {
    build_qn_with(&NetConfig::with_count(dim, n, seed))
}

pub fn build_qn_with(cfg: &NetConfig) -> Result<Polytope> {
    let net = greedy_net(cfg)?;
    let p = convex_hull(&net.points)?;
    p.require_origin_interior()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antipodal_pair() {
        let mut cfg = NetConfig::with_separation(3, 2.0, 1);
        cfg.pool_size = Some(5_000);
        let net = greedy_net(&cfg).unwrap();
        assert!(net.points.len() <= 2);
    }

    #[test]
    fn count_is_exact_and_separated() {
        let net = greedy_net(&NetConfig::with_count(3, 120, 9)).unwrap();
        assert_eq!(net.points.len(), 120);
        let mut min = f64::INFINITY;
        for i in 0..net.points.len() {
            for j in 0..i {
                min = min.min(dist2(net.points[i].coords(), net.points[j].coords()).sqrt());
            }
        }
        assert!((min - net.separation).abs() < 1e-12);
        assert!(net.covering_radius <= net.separation);
    }

    #[test]
    fn axes_seed_gives_octahedron() {
        let mut cfg = NetConfig::with_count(3, 6, 2);
        cfg.seed_axes = true;
        let net = greedy_net(&cfg).unwrap();
        for p in &net.points {
            assert!(p.coords().iter().filter(|x| x.abs() == 1.0).count() == 1);
        }
        assert!((net.separation - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(greedy_net(&NetConfig::with_count(3, 5, 1)), Err(Error::PreconditionViolated(_))));
        let mut cfg = NetConfig::with_count(3, 100, 1);
        cfg.pool_size = Some(4_000);
        assert!(matches!(greedy_net(&cfg), Err(Error::PoolTooSmall { .. })));
        assert!(greedy_net(&NetConfig::with_separation(3, 0.0, 1)).is_err());
        assert!(greedy_net(&NetConfig::with_separation(3, 2.5, 1)).is_err());
    }

    #[test]
    fn reproducible() {
        let a = greedy_net(&NetConfig::with_count(4, 40, 11)).unwrap();
        let b = greedy_net(&NetConfig::with_count(4, 40, 11)).unwrap();
        assert_eq!(a, b);
    }
}
