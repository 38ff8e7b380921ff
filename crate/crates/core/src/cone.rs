//! Spherical simplices and umbrella gaps.
//!
//! For unit vectors `x_1..x_d` forming the columns of `X`, the spherical
//! simplex they span has measure
//!
//! ```text
//! vol_{d-1}(rp(S)) = 2/Γ(d/2) · |det X| · ∫_{R₊^d} exp(-yᵀ G y) dy,   G = XᵀX,
//! ```
//!
//! and the solid sector over it has volume `1/d` of that. The cone over the
//! flat simplex has volume `|det X|/d!`, which equals the same prefactor
//! applied to `∫ exp(-(Σy)²)`. The umbrella gap is therefore the prefactor
//! times `∫ exp(-(Σy)²) (exp(q(y)) - 1) dy` with
//! `q(y) = Σ_{i≠j} (1 - ⟨x_i, x_j⟩) y_i y_j ≥ 0`. Estimating that difference
//! directly keeps the Monte Carlo error proportional to the gap itself, which
//! matters for shallow facets where the gap is a tiny fraction of the sector.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::ball::{log_factorial, log_gamma, sphere_surface, MIN_SAMPLES};
use crate::error::{Error, Result};
use crate::geometry::{facet_stats, SimplexFacet};
use crate::linalg::{dist2, dot, min_eigenvalue, norm};
use crate::mc::{self, McEstimate};
use crate::EPS_HULL;

/// Cone, spherical simplex and solid sector volumes of one facet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeResult {
    /// `vol_d([0,S])`
    pub cone_volume: f64,
    /// `vol_{d-1}(rp(S))`
    pub spherical_measure: McEstimate,
    /// `vol_d([0,rp(S)])`, always `spherical_measure / d`.
    pub solid_volume: McEstimate,
}

/// Largest dimension the stack-buffered samplers accept.
pub const MAX_DIM: usize = 32;

fn check_facet(facet: &SimplexFacet) -> Result<f64> {
    if facet.dim() > MAX_DIM {
        return Err(Error::OutOfRange { what: "dimension", value: facet.dim() as f64 });
    }
    let log_det = facet.log_abs_det();
    let det = log_det.exp();
    if !(det >= EPS_HULL) {
        return Err(Error::DegenerateFacet { det, tol: EPS_HULL });
    }
    Ok(log_det)
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::OutOfRange { what: "sample count", value: samples as f64 });
    }
    Ok(())
}

/// `|det X| / d!`
pub fn cone_volume(facet: &SimplexFacet) -> Result<f64> {
    let log_det = check_facet(facet)?;
    Ok((log_det - log_factorial(facet.dim())).exp())
}

/// `2 / Γ(d/2)`, the factor turning `|det X| · ∫ exp(-yᵀGy)` into a sphere measure.
pub fn measure_prefactor(d: usize) -> f64 {
    2.0 * (-log_gamma(d as f64 / 2.0).expect("d >= 1")).exp()
}

/// Mixture proposal on the orthant for the gap integrand.
///
/// With probability ½ draw from the density `exp(-(Σy)²)/Z` (a Gamma(d/2)
/// radius squared times a uniform simplex direction); otherwise draw
/// independent half-normals with density `2√(λ/π) exp(-λy²)`. `λ` is 1 when
/// every pairwise inner product is nonnegative, else the smallest eigenvalue
/// of `G`; in both cases `yᵀGy ≥ λ‖y‖²` on the orthant, which bounds the
/// weights through the half-normal component.
#[derive(Debug, Clone)]
pub(crate) struct GapSampler {
    d: usize,
    /// `1 - ⟨x_i, x_j⟩ = ‖x_i - x_j‖²/2`, row-major.
    one_minus_gram: Vec<f64>,
    lambda: f64,
    radius_sq: Gamma<f64>,
    ln_simplex_weight: f64,
    ln_halfnormal_weight: f64,
}

const SIMPLEX_SHARE: f64 = 0.5;

impl GapSampler {
    pub(crate) fn new(facet: &SimplexFacet) -> Self {
        let d = facet.dim();
        let v = facet.vertices();
        let mut one_minus_gram = vec![0.0; d * d];
        let mut acute = true;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    let c = 0.5 * dist2(&v[i], &v[j]);
                    one_minus_gram[i * d + j] = c;
                    acute &= dot(&v[i], &v[j]) >= 0.0;
                }
            }
        }
        let lambda = if acute { 1.0 } else { min_eigenvalue(d, &facet.gram()).clamp(1e-12, 1.0) };
        let df = d as f64;
        // Z = Γ(d/2) / (2 (d-1)!)
        let ln_z = log_gamma(df / 2.0).expect("d >= 1") - 2f64.ln() - log_factorial(d - 1);
        Self {
            d,
            one_minus_gram,
            lambda,
            radius_sq: Gamma::new(df / 2.0, 1.0).expect("valid shape"),
            ln_simplex_weight: SIMPLEX_SHARE.ln() - ln_z,
            ln_halfnormal_weight: (1.0 - SIMPLEX_SHARE).ln()
                + df * (2.0 * (lambda / PI).sqrt()).ln(),
        }
    }

    /// One draw of `exp(-(Σy)²) expm1(q(y)) / proposal(y)`.
    pub(crate) fn draw(&self, rng: &mut ChaCha8Rng, y: &mut [f64]) -> f64 {
        let d = self.d;
        if rng.random::<f64>() < SIMPLEX_SHARE {
            let t = self.radius_sq.sample(rng).sqrt();
            let mut total = 0.0;
            for yi in y.iter_mut() {
                *yi = Exp1.sample(rng);
                total += *yi;
            }
            let s = t / total;
            y.iter_mut().for_each(|yi| *yi *= s);
        } else {
            let scale = 1.0 / (2.0 * self.lambda).sqrt();
            for yi in y.iter_mut() {
                let z: f64 = StandardNormal.sample(rng);
                *yi = z.abs() * scale;
            }
        }
        let sum: f64 = y.iter().sum();
        let sq: f64 = y.iter().map(|v| v * v).sum();
        let mut q = 0.0;
        for i in 0..d {
            let row = &self.one_minus_gram[i * d..(i + 1) * d];
            for j in i + 1..d {
                q += row[j] * y[i] * y[j];
            }
        }
        q *= 2.0;
        if q <= 0.0 {
            return 0.0;
        }
        let a = self.ln_simplex_weight;
        let b = self.ln_halfnormal_weight + sum * sum - self.lambda * sq;
        let ln_den = a.max(b) + (-(a - b).abs()).exp().ln_1p();
        // ln(e^q − 1) without overflow; q ≤ (Σy)² − λ‖y‖² keeps the difference bounded.
        let ln_num = if q > 1.0 { q + (-(-q).exp_m1()).ln() } else { q.exp_m1().ln() };
        (ln_num - ln_den).exp()
    }

    /// Serial estimate of `∫ exp(-(Σy)²) (exp(q) - 1)` on one seeded stream.
    pub(crate) fn estimate_serial(&self, samples: u64, seed: u64) -> McEstimate {
        let mut y = vec![0.0; self.d];
        mc::estimate_serial(samples, seed, |rng| self.draw(rng, &mut y))
    }

    pub(crate) fn estimate(&self, samples: u64, seed: u64) -> McEstimate {
        mc::estimate(samples, seed, mc::DEFAULT_SHARDS, |rng| {
            let mut y = [0.0f64; MAX_DIM];
            self.draw(rng, &mut y[..self.d])
        })
    }
}

fn gap_integral(facet: &SimplexFacet, samples: u64, seed: u64) -> McEstimate {
    GapSampler::new(facet).estimate(samples, seed)
}

/// Monte Carlo estimate of `vol_{d-1}(rp(S))`.
pub fn spherical_measure(facet: &SimplexFacet, samples: u64, seed: u64) -> Result<McEstimate> {
    let log_det = check_facet(facet)?;
    check_samples(samples)?;
    let d = facet.dim();
    let pre = measure_prefactor(d) * log_det.exp();
    let base = crate::ball::orthant_moment_power(d, 0)?;
    Ok(gap_integral(facet, samples, seed).shifted(base).scaled(pre))
}

/// `vol_d([0,rp(S)]) − vol_d([0,S])`, the volume between the facet and the
/// sphere inside the cone over the facet.
pub fn umbrella_gap(facet: &SimplexFacet, samples: u64, seed: u64) -> Result<McEstimate> {
    let log_det = check_facet(facet)?;
    check_samples(samples)?;
    let d = facet.dim();
    let pre = measure_prefactor(d) * log_det.exp() / d as f64;
    Ok(gap_integral(facet, samples, seed).scaled(pre))
}

/// Serial umbrella gap for callers that parallelize across facets.
pub(crate) fn umbrella_gap_serial(facet: &SimplexFacet, samples: u64, seed: u64) -> Result<McEstimate> {
    let log_det = check_facet(facet)?;
    let d = facet.dim();
    let pre = measure_prefactor(d) * log_det.exp() / d as f64;
    Ok(GapSampler::new(facet).estimate_serial(samples, seed).scaled(pre))
}

/// Cone, sphere measure and sector volume from one shared estimate.
pub fn cone_result(facet: &SimplexFacet, samples: u64, seed: u64) -> Result<ConeResult> {
    let measure = spherical_measure(facet, samples, seed)?;
    Ok(ConeResult {
        cone_volume: cone_volume(facet)?,
        spherical_measure: measure,
        solid_volume: measure.scaled(1.0 / facet.dim() as f64),
    })
}

/// Independent estimate of `vol_{d-1}(rp(S))`: the fraction of uniform sphere
/// directions `ξ` with `X⁻¹ξ ≥ 0`, times the sphere surface.
pub fn sphere_sampling_oracle(facet: &SimplexFacet, samples: u64, seed: u64) -> Result<McEstimate> {
    check_facet(facet)?;
    check_samples(samples)?;
    let d = facet.dim();
    let lu = facet.lu();
    let surface = sphere_surface(d);
    Ok(mc::estimate(samples, seed, mc::DEFAULT_SHARDS, |rng| {
        let xi: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let n = norm(&xi);
        let xi: Vec<f64> = xi.iter().map(|v| v / n).collect();
        match lu.solve(&xi) {
            Some(y) if y.iter().all(|&v| v >= -1e-12) => surface,
            _ => 0.0,
        }
    }))
}

/// `d²/(2(d+1)) · (1 − ‖cg‖²) · vol_d([0,S])`
pub fn gap_lower_bound_vertex(facet: &SimplexFacet) -> Result<f64> {
    let s = facet_stats(facet)?;
    let d = facet.dim() as f64;
    let cg2 = dot(&s.cg_facet, &s.cg_facet);
    Ok(d * d / (2.0 * (d + 1.0)) * (1.0 - cg2).max(0.0) * s.cone_volume)
}

/// `d√(1−r²)/(2(d+1)) · (1 − ‖cg‖²) · vol_{d-1}(S)`
pub fn gap_lower_bound_facet(facet: &SimplexFacet) -> Result<f64> {
    let s = facet_stats(facet)?;
    let d = facet.dim() as f64;
    let cg2 = dot(&s.cg_facet, &s.cg_facet);
    Ok(d * (1.0 - s.r * s.r).max(0.0).sqrt() / (2.0 * (d + 1.0)) * (1.0 - cg2).max(0.0) * s.area)
}
