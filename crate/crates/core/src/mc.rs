//! Seeded Monte Carlo estimates with standard errors.
//!
//! Samples are split into a fixed number of shards. Shard `i` draws from a
//! ChaCha8 stream seeded with `seed + i`, shards run in parallel, and the
//! per-shard moments are merged in shard order. The result depends only on
//! `(seed, samples, shards)`, never on the worker count.
//!
//! Base seeds closer than `shards` share streams, so independent estimates
//! should use well-separated seeds such as those from [`derive_seed`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Shard count used when the caller does not choose one.
pub const DEFAULT_SHARDS: u64 = 16;

/// A Monte Carlo estimate and its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    /// Sample standard deviation over `sqrt(samples)`.
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub shards: u64,
}

impl McEstimate {
    /// A deterministic value carrying zero uncertainty.
    pub fn exact(value: f64) -> Self {
        Self { value, stderr: 0.0, samples: 0, seed: 0, shards: 0 }
    }

    pub fn scaled(self, c: f64) -> Self {
        Self { value: self.value * c, stderr: self.stderr * c.abs(), ..self }
    }

    pub fn shifted(self, c: f64) -> Self {
        Self { value: self.value + c, ..self }
    }

    /// `|self - other| / sqrt(se_1^2 + se_2^2)`. When both are exact, 0 if they
    /// agree to rounding (relative 1e-12) and infinite otherwise.
    pub fn z_score(&self, other: &McEstimate) -> f64 {
        let se = self.stderr.hypot(other.stderr);
        let diff = (self.value - other.value).abs();
        if se == 0.0 {
            if diff <= 1e-12 * self.value.abs().max(other.value.abs()) {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / se
        }
    }

    /// `|self - target| / stderr`.
    pub fn z_against(&self, target: f64) -> f64 {
        self.z_score(&McEstimate::exact(target))
    }

    /// Sum of independent estimates, errors added in quadrature. Metadata of
    /// the first term is kept; `samples` is the total.
    pub fn sum<I: IntoIterator<Item = McEstimate>>(terms: I) -> Self {
        let mut value = 0.0;
        let mut var = 0.0;
        let mut samples = 0;
        let mut first: Option<McEstimate> = None;
        for t in terms {
            value += t.value;
            var += t.stderr * t.stderr;
            samples += t.samples;
            first.get_or_insert(t);
        }
        let f = first.unwrap_or(McEstimate::exact(0.0));
        Self { value, stderr: var.sqrt(), samples, seed: f.seed, shards: f.shards }
    }
}

/// Running mean and variance (Welford).
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Accumulator) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.n as f64) * (other.n as f64) / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }

    pub fn into_estimate(self, seed: u64, shards: u64) -> McEstimate {
        McEstimate { value: self.mean, stderr: self.stderr(), samples: self.n, seed, shards }
    }
}

/// Mean of `draw` over `samples` draws, sharded as described in the module docs.
pub fn estimate<F>(samples: u64, seed: u64, shards: u64, draw: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let shards = shards.clamp(1, samples.max(1));
    let base = samples / shards;
    let extra = samples % shards;
    let parts: Vec<Accumulator> = (0..shards)
        .into_par_iter()
        .map(|i| {
            let count = base + u64::from(i < extra);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            let mut acc = Accumulator::default();
            for _ in 0..count {
                acc.push(draw(&mut rng));
            }
            acc
        })
        .collect();
    let mut total = Accumulator::default();
    for p in &parts {
        total.merge(p);
    }
    total.into_estimate(seed, shards)
}

/// Single-stream estimate; used when the caller already parallelizes at a
/// coarser grain (one facet per task).
pub fn estimate_serial<F>(samples: u64, seed: u64, mut draw: F) -> McEstimate
where
    F: FnMut(&mut ChaCha8Rng) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Accumulator::default();
    for _ in 0..samples {
        acc.push(draw(&mut rng));
    }
    acc.into_estimate(seed, 1)
}

/// SplitMix64 finalizer; derives independent per-task seeds from a base seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
