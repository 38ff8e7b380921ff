//! Library results against independent reference computations.

mod common;

use std::f64::consts::PI;

use ballgap::approx::{ball_rejection_volume, build_qn};
use ballgap::ball::{cap_volume, log_gamma, sphere_surface};
use ballgap::cone::{cone_volume, sphere_sampling_oracle, spherical_measure, umbrella_gap};
use ballgap::geometry::{facet_hyperplane, facet_stats};
use ballgap::hull::{convex_hull, polytope_volume, surface_area};
use ballgap::mc::derive_seed;
use ballgap::{Polytope, SimplexFacet};
use common::*;

#[test]
fn log_gamma_matches_statrs() {
    for i in 1..2000 {
        let x = i as f64 * 0.085;
        let ours = log_gamma(x).unwrap();
        let theirs = statrs::function::gamma::ln_gamma(x);
        assert!((ours - theirs).abs() <= 1e-12 * theirs.abs().max(1.0), "x={x}: {ours} vs {theirs}");
    }
}

#[test]
fn sphere_surface_is_derivative_of_volume() {
    for d in 1..=12 {
        assert!((sphere_surface(d) - d as f64 * ball_volume_recurrence(d)).abs() < 1e-12 * sphere_surface(d));
    }
}

#[test]
fn cap_volume_closed_forms() {
    for i in 0..=20 {
        let h = i as f64 / 20.0;
        let c3 = PI * h * h * (3.0 - h) / 3.0;
        assert!((cap_volume(3, h).unwrap() - c3).abs() < 1e-11, "h={h}");
        // circular segment with half-angle φ = acos(1 - h)
        let phi = (1.0 - h).acos();
        let c2 = phi - phi.sin() * phi.cos();
        assert!((cap_volume(2, h).unwrap() - c2).abs() < 1e-11, "h={h}");
    }
}

#[test]
fn facet_geometry_against_svd() {
    let mut r = rng(21);
    for d in 2..=6 {
        for _ in 0..20 {
            let f = random_facet(&mut r, d, 1.2);
            let s = facet_stats(&f).unwrap();
            let area = simplex_area_svd(f.vertices());
            assert!((s.area - area).abs() < 1e-9 * area, "d={d}: {} vs {area}", s.area);
            let offset = affine_offset(f.vertices());
            assert!((facet_hyperplane(&f).unwrap().offset - offset).abs() < 1e-9);
            assert!((s.h - (1.0 - offset)).abs() < 1e-9);
        }
    }
}

#[test]
fn planar_measure_is_the_angle() {
    let mut r = rng(22);
    for i in 0..20 {
        let f = random_facet(&mut r, 2, 2.5);
        let v = f.vertices();
        let m = spherical_measure(&f, 200_000, derive_seed(22, i)).unwrap();
        assert!(m.z_against(angle(&v[0], &v[1])) <= 4.0, "{m:?}");
    }
}

#[test]
fn measure_agrees_with_direction_sampling() {
    let mut r = rng(23);
    for d in 3..=5 {
        for i in 0..5 {
            let f = random_facet(&mut r, d, 1.5);
            let a = spherical_measure(&f, 400_000, derive_seed(d as u64, i)).unwrap();
            let b = sphere_sampling_oracle(&f, 4_000_000, derive_seed(100 + d as u64, i)).unwrap();
            assert!(a.z_score(&b) <= 4.0, "d={d}: {a:?} vs {b:?}");
        }
    }
}

#[test]
fn gap_of_tiny_planar_arc() {
    // segment area (θ − sin θ)/2 between a chord and its arc
    let t: f64 = 0.3;
    let f = SimplexFacet::from_points(&[vec![1.0, 0.0], vec![t.cos(), t.sin()]]).unwrap();
    let g = umbrella_gap(&f, 1_000_000, 3).unwrap();
    assert!(g.z_against((t - t.sin()) / 2.0) <= 4.0, "{g:?}");
    assert!((cone_volume(&f).unwrap() - t.sin() / 2.0).abs() < 1e-15);
}

fn volume_by_rejection(p: &Polytope, seed: u64) {
    let exact = polytope_volume(p).unwrap();
    let mc = ball_rejection_volume(p, 1_000_000, seed).unwrap();
    assert!(mc.z_against(exact) <= 4.0, "{exact} vs {mc:?}");
}

#[test]
fn hull_volume_against_rejection() {
    let mut r = rng(24);
    for d in 2..=5 {
        let pts = random_sphere_points(&mut r, d, 30 + 10 * d);
        let p = convex_hull(&pts).unwrap();
        if p.origin_interior() {
            volume_by_rejection(&p, derive_seed(24, d as u64));
        }
    }
    volume_by_rejection(&build_qn(3, 100, 5).unwrap(), 77);
}

#[test]
fn surface_of_regular_polygon() {
    let n = 37;
    let p = build_qn(2, n, 1).unwrap();
    // FPS polygon perimeter sits below the circle and above the inscribed square
    let s = surface_area(&p);
    assert!(s < 2.0 * PI && s > 4.0 * 2f64.sqrt());
    let chord_sum: f64 = p
        .facets()
        .iter()
        .map(|f| {
            let v = p.vertices();
            let (a, b) = (v[f.vertices[0]].coords(), v[f.vertices[1]].coords());
            ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
        })
        .sum();
    assert!((s - chord_sum).abs() < 1e-12);
}
