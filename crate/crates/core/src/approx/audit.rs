//! Inequality audits: every link of the lower-bound chain and the
//! net-based upper bounds, evaluated on a concrete polytope.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ball::{ball_volume, sphere_surface};
use crate::error::Result;
use crate::geometry::SpherePoint;
use crate::hull::{convex_hull, polytope_volume, surface_area, Polytope};
use crate::linalg::{dot, norm};
use crate::mc::McEstimate;

use super::classify::{classify_stats, EffectiveCount};
use super::metrics::{facet_gaps, facet_samples, hausdorff_gap};

/// Lower end of the normalized-gap sandwich, `2⁻³⁶`.
pub const C_HAT_LOWER: f64 = 1.0 / 68_719_476_736.0;
/// Upper end of the normalized-gap sandwich, `(64/7)π`.
pub const C_HAT_UPPER: f64 = 64.0 / 7.0 * PI;
/// Relative tolerance for checks without Monte Carlo input.
pub const EXACT_TOL: f64 = 1e-12;
/// Monte Carlo checks tolerate this many standard errors.
pub const MC_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        })
    }
}

/// One inequality `lhs (relation) rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// Slack in the direction of the inequality; negative when violated.
    pub margin: f64,
    /// Violations up to this size still count as holding.
    pub tolerance: f64,
    /// Raw outcome, `margin ≥ −tolerance`.
    pub holds: bool,
    /// False when the hypotheses of this inequality are not met for the input.
    pub applicable: bool,
    /// `holds || !applicable`
    pub pass: bool,
}

impl AuditCheck {
    pub fn new(name: &str, lhs: f64, relation: Relation, rhs: f64, tolerance: f64, applicable: bool) -> Self {
        let margin = match relation {
            Relation::Le => rhs - lhs,
            Relation::Ge => lhs - rhs,
        };
        let holds = margin >= -tolerance;
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            relation,
            margin,
            tolerance,
            holds,
            applicable,
            pass: holds || !applicable,
        }
    }

    fn exact(name: &str, lhs: f64, relation: Relation, rhs: f64) -> Self {
        Self::new(name, lhs, relation, rhs, EXACT_TOL * lhs.abs().max(rhs.abs()), true)
    }

    fn mc(name: &str, lhs: &McEstimate, relation: Relation, rhs: f64) -> Self {
        let tol = MC_SIGMAS * lhs.stderr + EXACT_TOL * lhs.value.abs().max(rhs.abs());
        Self::new(name, lhs.value, relation, rhs, tol, true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditMeta {
    pub dimension: usize,
    pub n: usize,
    pub effective_n: Option<usize>,
    pub vertices: usize,
    pub facets: usize,
    pub samples: u64,
    pub facet_samples: u64,
    pub seed: u64,
    pub shards: u64,
    /// Smallest `n` for which the audited statement claims to hold.
    pub regime_threshold: f64,
    pub in_regime: bool,
}

/// Ordered inequality checks with an overall verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub kind: String,
    pub checks: Vec<AuditCheck>,
    pub pass: bool,
    pub meta: AuditMeta,
}

impl AuditReport {
    fn new(kind: &str, checks: Vec<AuditCheck>, meta: AuditMeta) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self { kind: kind.to_string(), checks, pass, meta }
    }

    pub fn check(&self, name: &str) -> Option<&AuditCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn exponent(d: usize) -> f64 {
    2.0 / (d as f64 - 1.0)
}

/// `S_B / vol_{d-1}(B^{d-1})`
pub fn surface_ratio(d: usize) -> f64 {
    sphere_surface(d) / ball_volume(d - 1)
}

/// Hausdorff bound of an `n`-point net polytope,
/// `(16/7)(S_B / vol_{d-1}(B^{d-1}))^{2/(d-1)} n^{-2/(d-1)}`.
pub fn net_hausdorff_bound(d: usize, n: usize) -> f64 {
    16.0 / 7.0 * (surface_ratio(d) / n as f64).powf(exponent(d))
}

/// `(64/7) π d n^{-2/(d-1)} vol(B)`
pub fn net_volume_bound(d: usize, n: usize) -> f64 {
    64.0 / 7.0 * PI * d as f64 * (n as f64).powf(-exponent(d)) * ball_volume(d)
}

/// `(32/7)(S_B / vol_{d-1}(B^{d-1}))^{2/(d-1)}`, the upper bound on the
/// Delone-triangulation constant in dimension `d - 1`.
pub fn del_bound(d: usize) -> f64 {
    32.0 / 7.0 * surface_ratio(d).powf(exponent(d))
}

/// Vertex count from which the lower-bound argument applies, `(512πd/7)^{(d-1)/2}`.
pub fn lower_bound_regime(d: usize) -> f64 {
    (512.0 * PI * d as f64 / 7.0).powf((d as f64 - 1.0) / 2.0)
}

/// Vertex count from which a net polytope has at least half the sphere's surface, `(128πd/7)^{(d-1)/2}`.
pub fn surface_regime(d: usize) -> f64 {
    (128.0 * PI * d as f64 / 7.0).powf((d as f64 - 1.0) / 2.0)
}

/// `gap · n^{2/(d-1)} / (d · vol(B))`
pub fn c_hat(gap: f64, d: usize, n: usize) -> f64 {
    gap * (n as f64).powf(exponent(d)) / (d as f64 * ball_volume(d))
}

/// Audits every link of the lower-bound chain on `p`, treating `n` as the
/// vertex count in the thresholds. `samples` is the Monte Carlo budget for
/// the umbrella gaps (at least `MIN_FACET_SAMPLES` per facet).
pub fn lower_bound_audit(
    p: &Polytope,
    n: usize,
    eff: EffectiveCount,
    samples: u64,
    seed: u64,
) -> Result<AuditReport> {
    let d = p.dim();
    let stats = p.facet_stats()?;
    let surf_p = surface_area(p);
    let surf_b = sphere_surface(d);
    let cls = classify_stats(&stats, d, n, eff, surf_p);
    let per_facet = facet_samples(p, samples);
    let gaps = facet_gaps(p, per_facet, seed)?;
    let total_gap = McEstimate::sum(gaps.iter().copied());
    let good: Vec<usize> = cls.classes.iter().filter(|c| c.good).map(|c| c.facet).collect();
    let depth = |j: usize| 1.0 - dot(&stats[j].cg_facet, &stats[j].cg_facet);
    let d_f = d as f64;

    let good_gap = McEstimate::sum(good.iter().map(|&j| gaps[j]));
    let facet_bound: f64 = good
        .iter()
        .map(|&j| {
            let s = &stats[j];
            d_f * (1.0 - s.r * s.r).max(0.0).sqrt() / (2.0 * (d_f + 1.0)) * depth(j) * s.area
        })
        .sum();
    let quarter: f64 = good
        .iter()
        .map(|&j| (1.0 - stats[j].r.powi(2)).max(0.0).sqrt() / 4.0 * depth(j) * stats[j].area)
        .sum();
    let eighth: f64 = good.iter().map(|&j| depth(j) * stats[j].area / 8.0).sum();
    let min_depth_ratio = good
        .iter()
        .map(|&j| depth(j) / stats[j].h)
        .fold(f64::INFINITY, f64::min);
    let sum_h_area: f64 = good.iter().map(|&j| stats[j].h * stats[j].area).sum();
    let scale = (surf_p / surf_b / (8.0 * n as f64)).powf(exponent(d));
    let max_h = stats.iter().map(|s| s.h).fold(0.0, f64::max);
    let max_r = stats.iter().map(|s| s.r).fold(0.0, f64::max);

    let checks = vec![
        AuditCheck::exact("cap_height_le_1/8", max_h, Relation::Le, 0.125),
        AuditCheck::exact("cap_radius_le_1/2", max_r, Relation::Le, 0.5),
        AuditCheck::exact("sphere_surface_le_2x_polytope_surface", surf_b, Relation::Le, 2.0 * surf_p),
        AuditCheck::exact("shallow_union_le_quarter_surface", cls.shallow_area, Relation::Le, surf_p / 4.0),
        AuditCheck::exact("off_center_union_le_quarter_surface", cls.off_center_area, Relation::Le, surf_p / 4.0),
        AuditCheck::exact("good_union_ge_half_surface", cls.good_area, Relation::Ge, surf_p / 2.0),
        AuditCheck::mc("total_gap_ge_good_umbrella_gaps", &total_gap, Relation::Ge, good_gap.value),
        AuditCheck::mc("good_umbrella_gaps_ge_facet_bound", &good_gap, Relation::Ge, facet_bound),
        AuditCheck::exact("facet_bound_ge_quarter_depth_area", facet_bound, Relation::Ge, quarter),
        AuditCheck::exact("quarter_depth_area_ge_eighth_depth_area", quarter, Relation::Ge, eighth),
        AuditCheck::exact("centroid_depth_ge_2^-21_h", min_depth_ratio, Relation::Ge, 2f64.powi(-21)),
        AuditCheck::mc("gap_ge_2^-24_sum_h_area", &total_gap, Relation::Ge, 2f64.powi(-24) * sum_h_area),
        AuditCheck::mc(
            "gap_ge_2^-27_scaled_good_area",
            &total_gap,
            Relation::Ge,
            2f64.powi(-27) * scale * cls.good_area,
        ),
        AuditCheck::mc("gap_ge_2^-29_scaled_surface", &total_gap, Relation::Ge, 2f64.powi(-29) * scale * surf_p),
        AuditCheck::mc(
            "gap_ge_2^-36_sphere_surface",
            &total_gap,
            Relation::Ge,
            2f64.powi(-36) * surf_b * (n as f64).powf(-exponent(d)),
        ),
    ];
    let threshold = lower_bound_regime(d);
    let meta = AuditMeta {
        dimension: d,
        n,
        effective_n: Some(eff.apply(n)),
        vertices: p.num_vertices(),
        facets: p.num_facets(),
        samples,
        facet_samples: per_facet,
        seed,
        shards: 1,
        regime_threshold: threshold,
        in_regime: n as f64 >= threshold,
    };
    Ok(AuditReport::new("lower_bound", checks, meta))
}

/// Audits the net upper bounds on `p`: the Hausdorff bound, the
/// symmetric-difference bound (also in its inner-ball form) and the surface
/// doubling, the latter only for `n ≥ (128πd/7)^{(d-1)/2}`.
pub fn upper_bound_audit(p: &Polytope, n: usize, samples: u64, seed: u64) -> Result<AuditReport> {
    let d = p.dim();
    let dh = hausdorff_gap(p)?;
    let gaps = facet_gaps(p, facet_samples(p, samples), seed)?;
    let ds = McEstimate::sum(gaps);
    let surf_p = surface_area(p);
    let surf_b = sphere_surface(d);
    let vol_b = ball_volume(d);
    let hb = net_hausdorff_bound(d, n);
    let surf_ok = n as f64 >= surface_regime(d);
    let checks = vec![
        AuditCheck::exact("hausdorff_le_net_bound", dh, Relation::Le, hb),
        AuditCheck::mc("symmetric_difference_le_inner_ball_bound", &ds, Relation::Le, vol_b * (1.0 - (1.0 - dh).powi(d as i32))),
        AuditCheck::mc("symmetric_difference_le_net_bound", &ds, Relation::Le, net_volume_bound(d, n)),
        AuditCheck::new(
            "polytope_surface_ge_shrunk_sphere",
            surf_p,
            Relation::Ge,
            (1.0 - hb).max(0.0).powi(d as i32 - 1) * surf_b,
            EXACT_TOL * surf_b,
            hb < 1.0,
        ),
        AuditCheck::new(
            "sphere_surface_le_2x_polytope_surface",
            surf_b,
            Relation::Le,
            2.0 * surf_p,
            EXACT_TOL * surf_b,
            surf_ok,
        ),
    ];
    let meta = AuditMeta {
        dimension: d,
        n,
        effective_n: None,
        vertices: p.num_vertices(),
        facets: p.num_facets(),
        samples,
        facet_samples: facet_samples(p, samples),
        seed,
        shards: 1,
        regime_threshold: 2.0 * d as f64,
        in_regime: n >= 2 * d,
    };
    Ok(AuditReport::new("upper_bound", checks, meta))
}

/// Volume gradient of an inscribed polytope with respect to each vertex,
/// projected onto the sphere's tangent space.
fn volume_gradients(p: &Polytope) -> Vec<Vec<f64>> {
    let d = p.dim();
    let mut grads = vec![vec![0.0; d]; p.vertices().len()];
    for j in 0..p.num_facets() {
        let Ok(f) = p.simplex(j) else { continue };
        let lu = f.lu();
        let vol = (f.log_abs_det() - crate::ball::log_factorial(d)).exp();
        // ∂|det X| / ∂x_k = |det X| · X^{-T} e_k
        for (k, &v) in f.vertex_ids.iter().enumerate() {
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            if let Some(g) = lu.solve_transpose(&e) {
                grads[v].iter_mut().zip(&g).for_each(|(a, b)| *a += vol * b);
            }
        }
    }
    for (g, x) in grads.iter_mut().zip(p.vertices()) {
        let c = dot(g, x.coords());
        g.iter_mut().zip(x.coords()).for_each(|(a, b)| *a -= c * b);
    }
    grads
}

/// Local volume improvement of an inscribed polytope: each round moves every
/// vertex by `step` along its tangential volume gradient and keeps the move
/// only if the hull volume grows, halving the step otherwise.
pub fn improve_inscribed(points: &[SpherePoint], rounds: usize, step: f64) -> Result<Polytope> {
    let mut p = convex_hull(points)?;
    let mut vol = polytope_volume(&p)?;
    let mut step = step;
    for _ in 0..rounds {
        let grads = volume_gradients(&p);
        let moved = p
            .vertices()
            .iter()
            .zip(&grads)
            .map(|(x, g)| {
                let gn = norm(g);
                if gn == 0.0 {
                    return Ok(x.clone());
                }
                SpherePoint::new(x.coords().iter().zip(g).map(|(a, b)| a + step * b / gn).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        match convex_hull(&moved) {
            Ok(q) if q.origin_interior() && q.num_vertices() == p.num_vertices() => {
                let v = polytope_volume(&q)?;
                if v > vol {
                    p = q;
                    vol = v;
                    continue;
                }
                step /= 2.0;
            }
            _ => step /= 2.0,
        }
    }
    Ok(p)
}

/// Hull of the union of the vertex sets of `a` and `b`.
pub fn merged_hull(a: &Polytope, b: &Polytope) -> Result<Polytope> {
    let mut pts: Vec<SpherePoint> = a.vertices().to_vec();
    pts.extend_from_slice(b.vertices());
    convex_hull(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::net::build_qn;

    fn octahedron() -> Polytope {
        let pts: Vec<SpherePoint> =
            (0..3).flat_map(|i| [SpherePoint::axis(3, i, false), SpherePoint::axis(3, i, true)]).collect();
        convex_hull(&pts).unwrap()
    }

    #[test]
    fn constants() {
        assert!((del_bound(2) - 32.0 / 7.0 * PI * PI).abs() < 1e-12);
        assert!((del_bound(3) - 128.0 / 7.0).abs() < 1e-12);
        assert!((lower_bound_regime(3) - 689.4).abs() < 0.1);
        assert!((lower_bound_regime(2) - 21.44).abs() < 0.01);
        assert_eq!(surface_regime(3).ceil(), 173.0);
        assert!((net_hausdorff_bound(3, 1000) - 64.0 / 7000.0).abs() < 1e-15);
        assert_eq!(C_HAT_LOWER, 2f64.powi(-36));
    }

    #[test]
    fn check_semantics() {
        let c = AuditCheck::new("x", 1.0, Relation::Le, 2.0, 0.0, true);
        assert!(c.pass && c.margin == 1.0);
        let c = AuditCheck::new("x", 3.0, Relation::Le, 2.0, 0.5, true);
        assert!(!c.holds && !c.pass);
        let c = AuditCheck::new("x", 3.0, Relation::Le, 2.0, 0.5, false);
        assert!(!c.holds && c.pass);
        let c = AuditCheck::new("x", 1.9, Relation::Ge, 2.0, 0.2, true);
        assert!(c.pass && c.margin < 0.0);
    }

    #[test]
    fn octahedron_is_out_of_regime() {
        let r = lower_bound_audit(&octahedron(), 6, EffectiveCount::Double, 100_000, 1).unwrap();
        assert!(!r.meta.in_regime);
        assert!(!r.check("cap_height_le_1/8").unwrap().pass);
        let u = upper_bound_audit(&octahedron(), 6, 100_000, 1).unwrap();
        let b = u.check("symmetric_difference_le_net_bound").unwrap();
        assert!((b.rhs - 128.0 / 21.0 * PI * PI).abs() < 1e-10);
        assert!(b.pass);
        assert!(!u.check("sphere_surface_le_2x_polytope_surface").unwrap().applicable);
    }

    #[test]
    fn planar_audit_passes() {
        let p = build_qn(2, 300, 1).unwrap();
        let r = lower_bound_audit(&p, 300, EffectiveCount::Double, 1_000_000, 1).unwrap();
        assert!(r.meta.in_regime);
        for c in &r.checks {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn improvement_never_loses_volume() {
        let p = build_qn(3, 40, 3).unwrap();
        let v0 = polytope_volume(&p).unwrap();
        let q = improve_inscribed(p.vertices(), 10, 0.1 / 40f64.sqrt()).unwrap();
        assert!(polytope_volume(&q).unwrap() >= v0);
        let m = merged_hull(&p, &q).unwrap();
        assert!(polytope_volume(&m).unwrap() >= polytope_volume(&q).unwrap() - 1e-12);
    }
}
