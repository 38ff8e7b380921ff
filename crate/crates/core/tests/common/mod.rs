//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use ballgap::{SimplexFacet, SpherePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

pub fn random_sphere_points(rng: &mut impl Rng, d: usize, n: usize) -> Vec<SpherePoint> {
    (0..n).map(|_| SpherePoint::new(gaussian(rng, d)).unwrap()).collect()
}

/// Point at a uniform random angle up to `spread` from `pole`, in a random direction.
pub fn cap_point(rng: &mut impl Rng, pole: &[f64], spread: f64) -> Vec<f64> {
    let g = gaussian(rng, pole.len());
    let c: f64 = g.iter().zip(pole).map(|(a, b)| a * b).sum();
    let t = unit(&g.iter().zip(pole).map(|(a, b)| a - c * b).collect::<Vec<_>>());
    let a = spread * rng.random::<f64>();
    unit(&pole.iter().zip(&t).map(|(p, t)| p * a.cos() + t * a.sin()).collect::<Vec<_>>())
}

/// `d` points clustered around a random pole within `spread` radians.
pub fn cap_points(rng: &mut impl Rng, d: usize, spread: f64) -> Vec<Vec<f64>> {
    let pole = unit(&gaussian(rng, d));
    (0..d).map(|_| cap_point(rng, &pole, spread)).collect()
}

/// Random facet with `d` vertices inside a cap of random size, rejecting
/// nearly flat simplices.
pub fn random_facet(rng: &mut impl Rng, d: usize, max_spread: f64) -> SimplexFacet {
    loop {
        let spread = max_spread * (0.05 + 0.95 * rng.random::<f64>());
        let pts = cap_points(rng, d, spread);
        if let Ok(f) = SimplexFacet::from_points(&pts) {
            if f.abs_det() > 1e-4 * spread.powi(d as i32 - 1) {
                return f;
            }
        }
    }
}

pub fn angle(a: &[f64], b: &[f64]) -> f64 {
    let c: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    c.clamp(-1.0, 1.0).acos()
}

/// Area of the spherical triangle with unit vertices `a, b, c` by l'Huilier's
/// formula on the side lengths.
pub fn lhuilier(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let (x, y, z) = (angle(b, c), angle(a, c), angle(a, b));
    let s = (x + y + z) / 2.0;
    let t = (s / 2.0).tan() * ((s - x) / 2.0).tan() * ((s - y) / 2.0).tan() * ((s - z) / 2.0).tan();
    4.0 * t.max(0.0).sqrt().atan()
}

/// `(d−1)`-volume of the simplex spanned by `pts` from the singular values of
/// its edge matrix.
pub fn simplex_area_svd(pts: &[Vec<f64>]) -> f64 {
    let d = pts[0].len();
    let k = pts.len() - 1;
    let m = nalgebra::DMatrix::from_fn(d, k, |i, j| pts[j + 1][i] - pts[0][i]);
    let prod: f64 = m.svd(false, false).singular_values.iter().product();
    prod / (1..=k).map(|i| i as f64).product::<f64>()
}

/// Distance from the origin to the affine hull of `pts`, by least squares.
pub fn affine_offset(pts: &[Vec<f64>]) -> f64 {
    let d = pts[0].len();
    let k = pts.len() - 1;
    let m = nalgebra::DMatrix::from_fn(d, k, |i, j| pts[j + 1][i] - pts[0][i]);
    let p0 = nalgebra::DVector::from_column_slice(&pts[0]);
    let coef = m.clone().svd(true, true).solve(&(-&p0), 1e-14).unwrap();
    (p0 + m * coef).norm()
}

/// `V(d) = 2π/d · V(d−2)` from `V(0) = 1`, `V(1) = 2`.
pub fn ball_volume_recurrence(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / d as f64 * ball_volume_recurrence(d - 2),
    }
}
