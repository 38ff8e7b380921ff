//! Property tests for the library's structural invariants.

mod common;

use ballgap::approx::{greedy_net, NetConfig};
use ballgap::ball::{ball_volume, cap_volume, log_gamma, sphere_surface, stirling_bounds};
use ballgap::cone::{cone_volume, spherical_measure, umbrella_gap};
use ballgap::hull::{convex_hull, polytope_volume, surface_area};
use ballgap::{Polytope, SimplexFacet, SpherePoint};
use common::*;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 32, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn log_gamma_recurrence(x in 0.01f64..150.0) {
        let lhs = log_gamma(x + 1.0).unwrap();
        let rhs = log_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn stirling_brackets_gamma(x in 0.01f64..150.0) {
        let (lo, hi) = stirling_bounds(x).unwrap();
        let g = log_gamma(x + 1.0).unwrap();
        prop_assert!(lo.ln() <= g + 1e-13 && g <= hi.ln() + 1e-13);
    }

    #[test]
    fn cap_volume_monotone_and_bounded(d in 1usize..10, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (vl, vh) = (cap_volume(d, lo).unwrap(), cap_volume(d, hi).unwrap());
        prop_assert!(vl <= vh + 1e-14);
        prop_assert!(vh <= ball_volume(d) / 2.0 + 1e-12);
    }

    #[test]
    fn facet_volumes_are_ordered(d in 2usize..6, seed in any::<u64>()) {
        let f = random_facet(&mut rng(seed), d, 1.3);
        let m = spherical_measure(&f, 20_000, seed).unwrap();
        let g = umbrella_gap(&f, 20_000, seed).unwrap();
        prop_assert!(g.value >= 0.0);
        prop_assert!(m.value >= 0.0 && m.value <= sphere_surface(d));
        prop_assert!(cone_volume(&f).unwrap() > 0.0);
    }

    #[test]
    fn estimates_are_reproducible(seed in any::<u64>()) {
        let f = random_facet(&mut rng(seed), 3, 1.0);
        prop_assert_eq!(umbrella_gap(&f, 10_000, seed).unwrap(), umbrella_gap(&f, 10_000, seed).unwrap());
    }

    #[test]
    fn random_hulls_are_valid(d in 2usize..6, extra in 1usize..40, seed in any::<u64>()) {
        let pts = random_sphere_points(&mut rng(seed), d, d + 1 + extra);
        let p = convex_hull(&pts).unwrap();
        prop_assert!(p.ridges_regular());
        prop_assert!(p.max_orientation_violation() <= 1e-9);
        prop_assert_eq!(p.num_vertices() + p.interior().len(), pts.len());
        if p.origin_interior() {
            prop_assert!(polytope_volume(&p).unwrap() < ball_volume(d));
            prop_assert!(surface_area(&p) < sphere_surface(d));
        }
        let q = Polytope::from_json(&p.to_json()).unwrap();
        prop_assert_eq!(q.num_facets(), p.num_facets());
    }

    #[test]
    fn nets_are_separated(d in 2usize..5, extra in 0usize..50, seed in any::<u64>()) {
        let n = 2 * d + extra;
        let net = greedy_net(&NetConfig::with_count(d, n, seed)).unwrap();
        prop_assert_eq!(net.points.len(), n);
        for (i, a) in net.points.iter().enumerate() {
            for b in &net.points[..i] {
                prop_assert!(chord(a, b) >= net.separation - 1e-12);
            }
        }
        prop_assert!(net.covering_radius <= net.separation + 1e-12);
    }
}

fn chord(a: &SpherePoint, b: &SpherePoint) -> f64 {
    a.coords().iter().zip(b.coords()).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn hull_is_invariant_under_point_order() {
    let mut pts = random_sphere_points(&mut rng(3), 4, 40);
    let a = convex_hull(&pts).unwrap();
    pts.reverse();
    let b = convex_hull(&pts).unwrap();
    assert_eq!(a.num_facets(), b.num_facets());
    assert!((polytope_volume(&a).unwrap() - polytope_volume(&b).unwrap()).abs() < 1e-12);
    let _ = SimplexFacet::from_points(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
}
