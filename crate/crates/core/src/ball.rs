//! Gamma function, ball and cap volumes, and Gaussian moments over the
//! positive orthant.
//!
//! All factorials and gamma values are handled in log space and exponentiated
//! once at the end.

use std::f64::consts::PI;

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::mc::{self, McEstimate};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Bernoulli coefficients B_{2k} / (2k (2k-1)) of the Stirling series.
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

/// `ln Γ(x)` for `x > 0`.
///
/// Arguments below 10 are shifted up with the recurrence `Γ(x+1) = xΓ(x)`,
/// then the asymptotic Stirling series is summed through the `z^-13` term.
/// Absolute error is a few ulps of the result's magnitude.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::OutOfRange { what: "log_gamma argument", value: x });
    }
    let mut z = x;
    let mut prod = 1.0;
    while z < 10.0 {
        prod *= z;
        z += 1.0;
    }
    let zinv = 1.0 / z;
    let zinv2 = zinv * zinv;
    let mut series = 0.0;
    let mut pow = zinv;
    for c in STIRLING {
        series += c * pow;
        pow *= zinv2;
    }
    Ok((z - 0.5) * z.ln() - z + LN_SQRT_2PI + series - prod.ln())
}

fn lgamma(x: f64) -> f64 {
    log_gamma(x).expect("positive gamma argument")
}

/// `ln n!`.
pub fn log_factorial(n: usize) -> f64 {
    lgamma(n as f64 + 1.0)
}

/// Volume of the d-dimensional unit ball, `π^{d/2} / Γ(d/2 + 1)`.
pub fn ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    (h * PI.ln() - lgamma(h + 1.0)).exp()
}

/// Surface area of the unit sphere in R^d, `d · vol_d(B)`.
pub fn sphere_surface(d: usize) -> f64 {
    d as f64 * ball_volume(d)
}

/// Upper estimate `π^{(d-1)/2} (2e)^{d/2} / d^{(d+1)/2}` for the ball volume.
pub fn ball_volume_upper(d: usize) -> f64 {
    let df = d as f64;
    ((df - 1.0) / 2.0 * PI.ln() + df / 2.0 * (2.0 * std::f64::consts::E).ln()
        - (df + 1.0) / 2.0 * df.ln())
    .exp()
}

/// Bracket `(√(2π) x^{x+½} e^{-x}, same · e^{1/(12x)})` around `Γ(x+1)`.
pub fn stirling_bounds(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::OutOfRange { what: "stirling argument", value: x });
    }
    let log_lower = LN_SQRT_2PI + (x + 0.5) * x.ln() - x;
    Ok((log_lower.exp(), (log_lower + 1.0 / (12.0 * x)).exp()))
}

/// Volume of the cap `{x ∈ B : ⟨x, u⟩ ≥ 1 - h}` of the d-ball.
///
/// With `t = cos φ` the integrand `(1 - t²)^{(d-1)/2} dt` becomes `sin^d φ dφ`,
/// which is smooth up to the pole, so plain adaptive Simpson converges fast.
pub fn cap_volume(d: usize, h: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::OutOfRange { what: "cap height", value: h });
    }
    if d == 0 {
        return Err(Error::OutOfRange { what: "dimension", value: 0.0 });
    }
    if h == 0.0 {
        return Ok(0.0);
    }
    let slice = ball_volume(d - 1);
    let tol = 1e-12 * ball_volume(d) / slice;
    let phi0 = (1.0 - h).acos();
    let f = |phi: f64| phi.sin().powi(d as i32);
    Ok(slice * adaptive_simpson(&f, 0.0, phi0, tol))
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Lower bound `(½θ√(1 - θ²/16))^{d-1} · vol_{d-1}(B^{d-1})` on the surface
/// of a sphere cap around a net point, as used in the packing count.
pub fn cap_surface_packing_bound(d: usize, theta: f64) -> Result<f64> {
    if !(theta >= 0.0) || theta > 2f64.sqrt() + 1e-15 {
        return Err(Error::OutOfRange { what: "net separation", value: theta });
    }
    if d < 2 {
        return Err(Error::OutOfRange { what: "dimension", value: d as f64 });
    }
    let base = 0.5 * theta * (1.0 - theta * theta / 16.0).sqrt();
    Ok(base.powi(d as i32 - 1) * ball_volume(d - 1))
}

/// `∫_{R₊^d} (Σyᵢ)^k exp(-(Σyᵢ)²) dy = Γ((k+d)/2) / (2 (d-1)!)`.
pub fn orthant_moment_power(d: usize, k: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::OutOfRange { what: "dimension", value: 0.0 });
    }
    Ok((lgamma((k as f64 + d as f64) / 2.0) - log_factorial(d - 1)).exp() / 2.0)
}

/// `∫_{R₊^d} (Σyᵢ²) exp(-(Σyᵢ)²) dy = d² Γ(d/2) / (2 (d+1)!)`.
pub fn orthant_moment_square(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::OutOfRange { what: "dimension", value: 0.0 });
    }
    let df = d as f64;
    Ok(df * df * (lgamma(df / 2.0) - log_factorial(d + 1)).exp() / 2.0)
}

/// `∫_{R₊^d} yᵢ yⱼ exp(-(Σyᵢ)²) dy = Γ(d/2) / (4 (d+1) (d-1)!)` for `i ≠ j`.
pub fn orthant_moment_cross(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::OutOfRange { what: "dimension", value: d as f64 });
    }
    let df = d as f64;
    Ok((lgamma(df / 2.0) - log_factorial(d - 1)).exp() / (4.0 * (df + 1.0)))
}

/// Polynomial weight multiplying `exp(-(Σy)²)` in an orthant moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    /// `(Σyᵢ)^k`
    Power(u32),
    /// `Σyᵢ²`
    Square,
    /// `yᵢ yⱼ`, zero-based indices, `i ≠ j`
    Cross(usize, usize),
}

impl MomentKind {
    pub fn closed_form(&self, d: usize) -> Result<f64> {
        match *self {
            MomentKind::Power(k) => orthant_moment_power(d, k),
            MomentKind::Square => orthant_moment_square(d),
            MomentKind::Cross(..) => orthant_moment_cross(d),
        }
    }
}

/// Minimum sample count accepted by the Monte Carlo estimators.
pub const MIN_SAMPLES: u64 = 10_000;

/// Importance-sampled orthant moment.
///
/// Each coordinate is drawn from the half-normal with density
/// `(2/√π) e^{-y²}`, so the weight is
/// `w(y) (√π/2)^d exp(Σyᵢ² - (Σyᵢ)²)`. The exponent is never positive on
/// the orthant, so weights grow at most polynomially.
pub fn mc_orthant_moment(d: usize, kind: MomentKind, samples: u64, seed: u64) -> Result<McEstimate> {
    if d == 0 {
        return Err(Error::OutOfRange { what: "dimension", value: 0.0 });
    }
    if samples < MIN_SAMPLES {
        return Err(Error::OutOfRange { what: "sample count", value: samples as f64 });
    }
    if let MomentKind::Cross(i, j) = kind {
        if i == j || i >= d || j >= d {
            return Err(Error::PreconditionViolated(format!(
                "cross moment needs distinct indices below {d}, got ({i}, {j})"
            )));
        }
    }
    let norm = (0.5 * PI.sqrt()).powi(d as i32);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    Ok(mc::estimate(samples, seed, mc::DEFAULT_SHARDS, |rng| {
        let mut sum = 0.0;
        let mut sq = 0.0;
        let mut cross = 1.0;
        for i in 0..d {
            let z: f64 = StandardNormal.sample(rng);
            let yi = z.abs() * scale;
            sum += yi;
            sq += yi * yi;
            if let MomentKind::Cross(a, b) = kind {
                if i == a || i == b {
                    cross *= yi;
                }
            }
        }
        let w = match kind {
            MomentKind::Power(k) => sum.powi(k as i32),
            MomentKind::Square => sq,
            MomentKind::Cross(..) => cross,
        };
        w * norm * (sq - sum * sum).exp()
    }))
}
