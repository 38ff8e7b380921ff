//! Facet classes used by the lower-bound argument.
//!
//! * shallow: cap height at most `ρ = ⅛ (S_P / S_B · 1/(4m))^{2/(d-1)}`,
//!   where `S_P`, `S_B` are the polytope and sphere surfaces and `m` the
//!   effective vertex count;
//! * off-center: facet centroid at distance `≥ (1 − 2⁻²²) r` from the center
//!   of its cutting disk;
//! * good: neither of the above, and cap height at most
//!   `(16/7) (S_B / vol_{d-1}(B^{d-1}) · 1/n)^{2/(d-1)}`.
//!
//! With `m = 2n` the shallow threshold equals the lower height limit of the
//! good class, matching the argument applied to a polytope with up to `2n`
//! vertices.

use serde::{Deserialize, Serialize};

use crate::ball::{ball_volume, sphere_surface};
use crate::error::Result;
use crate::geometry::FacetStats;
use crate::hull::{surface_area, Polytope};

/// `(2²² − 1) / 2²²`
pub const OFF_CENTER_RATIO: f64 = (4_194_304.0 - 1.0) / 4_194_304.0;

/// Vertex count plugged into the shallow and off-center thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EffectiveCount {
    /// `m = n`
    #[serde(rename = "n")]
    Single,
    /// `m = 2n`, for a polytope merged from two `n`-vertex polytopes.
    #[serde(rename = "2n")]
    Double,
}

impl EffectiveCount {
    pub fn apply(self, n: usize) -> usize {
        match self {
            EffectiveCount::Single => n,
            EffectiveCount::Double => 2 * n,
        }
    }
}

impl std::str::FromStr for EffectiveCount {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "n" => Ok(EffectiveCount::Single),
            "2n" => Ok(EffectiveCount::Double),
            other => Err(format!("effective count must be `n` or `2n`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FacetLabel {
    Shallow,
    OffCenter,
    Good,
    Other,
}

/// Class of one facet. `label` resolves overlaps in the order
/// shallow, off-center, good, other; the flags keep every membership.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetClass {
    pub facet: usize,
    pub label: FacetLabel,
    pub shallow: bool,
    pub off_center: bool,
    pub good: bool,
    pub h: f64,
    pub r: f64,
    pub offset_norm: f64,
    pub area: f64,
    pub thresholds: Thresholds,
}

/// Thresholds in force for one classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub n: usize,
    pub effective_n: usize,
    /// Shallow iff `h ≤ shallow_height`.
    pub shallow_height: f64,
    /// Off-center iff `offset_norm ≥ off_center_ratio · r`.
    pub off_center_ratio: f64,
    /// Upper height limit of the good class.
    pub good_upper: f64,
    /// Height bound assumed for every facet by the off-center estimate,
    /// `(16/7)(2 S_B / vol_{d-1}(B^{d-1}) / m)^{2/(d-1)}`.
    pub off_center_height_hypothesis: f64,
}

impl Thresholds {
    pub fn new(d: usize, n: usize, eff: EffectiveCount, polytope_surface: f64) -> Self {
        let m = eff.apply(n);
        let e = 2.0 / (d as f64 - 1.0);
        let ratio = sphere_surface(d) / ball_volume(d - 1);
        Self {
            n,
            effective_n: m,
            shallow_height: 0.125 * (polytope_surface / sphere_surface(d) / (4.0 * m as f64)).powf(e),
            off_center_ratio: OFF_CENTER_RATIO,
            good_upper: 16.0 / 7.0 * (ratio / n as f64).powf(e),
            off_center_height_hypothesis: 16.0 / 7.0 * (2.0 * ratio / m as f64).powf(e),
        }
    }
}

/// Classification of all facets with the union areas of each class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub thresholds: Thresholds,
    pub surface: f64,
    pub shallow_area: f64,
    pub off_center_area: f64,
    pub good_area: f64,
    pub classes: Vec<FacetClass>,
}

pub fn classify_stats(stats: &[FacetStats], d: usize, n: usize, eff: EffectiveCount, surface: f64) -> Classification {
    let t = Thresholds::new(d, n, eff, surface);
    let classes: Vec<FacetClass> = stats
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let shallow = s.h <= t.shallow_height;
            let off_center = s.offset_norm >= t.off_center_ratio * s.r;
            let good = !shallow && !off_center && s.h <= t.good_upper;
            let label = if shallow {
                FacetLabel::Shallow
            } else if off_center {
                FacetLabel::OffCenter
            } else if good {
                FacetLabel::Good
            } else {
                FacetLabel::Other
            };
            FacetClass {
                facet: j,
                label,
                shallow,
                off_center,
                good,
                h: s.h,
                r: s.r,
                offset_norm: s.offset_norm,
                area: s.area,
                thresholds: t,
            }
        })
        .collect();
    let area = |f: fn(&FacetClass) -> bool| classes.iter().filter(|c| f(c)).fold(0.0, |acc, c| acc + c.area);
    Classification {
        thresholds: t,
        surface,
        shallow_area: area(|c| c.shallow),
        off_center_area: area(|c| c.off_center),
        good_area: area(|c| c.good),
        classes,
    }
}

/// Labels every facet of `p`, with thresholds computed for `n` vertices and
/// the given effective count.
pub fn classify_facets(p: &Polytope, n: usize, eff: EffectiveCount) -> Result<Classification> {
    let stats = p.facet_stats()?;
    Ok(classify_stats(&stats, p.dim(), n, eff, surface_area(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SpherePoint;
    use crate::hull::convex_hull;

    #[test]
    fn octahedron_classes() {
        let pts: Vec<SpherePoint> =
            (0..3).flat_map(|i| [SpherePoint::axis(3, i, false), SpherePoint::axis(3, i, true)]).collect();
        let p = convex_hull(&pts).unwrap();
        let c = classify_facets(&p, 6, EffectiveCount::Single).unwrap();
        let rho = 0.125 * (4.0 * 3f64.sqrt() / (4.0 * std::f64::consts::PI)) / 24.0;
        assert!((c.thresholds.shallow_height - rho).abs() < 1e-15);
        assert!((rho - 0.002_871).abs() < 1e-6);
        assert!(c.classes.iter().all(|f| !f.shallow && !f.off_center));
        assert_eq!(c.shallow_area, 0.0);
        assert_eq!(c.off_center_area, 0.0);
        // good_upper = (16/7)·4/6 ≈ 1.52 is above h ≈ 0.42
        assert!(c.classes.iter().all(|f| f.label == FacetLabel::Good));
    }

    #[test]
    fn double_count_matches_good_lower_limit() {
        // with m = 2n the shallow threshold is ⅛ (S_P/S_B · 1/(8n))^{2/(d-1)}
        let t = Thresholds::new(3, 700, EffectiveCount::Double, 12.0);
        let expect = 0.125 * (12.0 / (4.0 * std::f64::consts::PI) / (8.0 * 700.0));
        assert!((t.shallow_height - expect).abs() < 1e-18);
        // and the off-center height hypothesis collapses to the good upper limit
        assert!((t.off_center_height_hypothesis - t.good_upper).abs() < 1e-15);
    }

    #[test]
    fn parse_effective_count() {
        assert_eq!("n".parse::<EffectiveCount>().unwrap(), EffectiveCount::Single);
        assert_eq!("2n".parse::<EffectiveCount>().unwrap(), EffectiveCount::Double);
        assert!("3n".parse::<EffectiveCount>().is_err());
    }
}
