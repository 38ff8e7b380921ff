//! Points on the unit sphere, simplicial facets and the hyperplane/cap data
//! derived from them.

use serde::{Deserialize, Serialize};

use crate::ball::log_factorial;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, Lu};
use crate::{EPS_HULL, EPS_UNIT};

/// A point of the unit sphere in R^d, d >= 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpherePoint(Vec<f64>);

impl SpherePoint {
    /// Normalizes `coords` onto the sphere.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::OutOfRange { what: "dimension", value: coords.len() as f64 });
        }
        let n = norm(&coords);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::OutOfRange { what: "point norm", value: n });
        }
        let mut c = coords;
        c.iter_mut().for_each(|x| *x /= n);
        Ok(Self(c))
    }

    /// Standard basis vector `±e_axis`.
    pub fn axis(dim: usize, axis: usize, negative: bool) -> Self {
        let mut c = vec![0.0; dim];
        c[axis] = if negative { -1.0 } else { 1.0 };
        Self(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn is_unit(&self) -> bool {
        (norm(&self.0) - 1.0).abs() <= EPS_UNIT
    }
}

impl AsRef<[f64]> for SpherePoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Hyperplane `{x : ⟨normal, x⟩ = offset}` with a unit normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Hyperplane {
    /// Signed distance of `x` from the plane, positive on the normal side.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }
}

/// A cap of the unit ball cut off by a hyperplane at distance `1 - height`
/// from the origin. The radius of the cutting disk is derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub height: f64,
}

impl Cap {
    pub fn new(height: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&height) {
            return Err(Error::OutOfRange { what: "cap height", value: height });
        }
        Ok(Self { height })
    }

    /// Cap cut by a hyperplane at distance `offset` from the origin.
    pub fn from_offset(offset: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&offset) {
            return Err(Error::OutOfRange { what: "hyperplane offset", value: offset });
        }
        Ok(Self { height: 1.0 - offset })
    }

    /// `√(2h − h²)`
    pub fn radius(&self) -> f64 {
        let h = self.height;
        (2.0 * h - h * h).max(0.0).sqrt()
    }

    /// Hyperplane through the origin; allowed but outside the regime of interest.
    pub fn is_central(&self) -> bool {
        self.height == 1.0
    }
}

/// Cap cut off by `plane`.
pub fn cap_of(plane: &Hyperplane) -> Result<Cap> {
    Cap::from_offset(plane.offset)
}

/// A (d-1)-simplex with d vertices on the unit sphere of R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexFacet {
    pub vertex_ids: Vec<usize>,
    vertices: Vec<Vec<f64>>,
}

impl SimplexFacet {
    /// Facet with the given vertices; `vertex_ids` index into the caller's table.
    pub fn new(vertex_ids: Vec<usize>, vertices: Vec<Vec<f64>>) -> Result<Self> {
        let d = vertices.len();
        if d < 2 {
            return Err(Error::OutOfRange { what: "dimension", value: d as f64 });
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: v.len() });
        }
        if vertex_ids.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: vertex_ids.len() });
        }
        let f = Self { vertex_ids, vertices };
        let det = f.abs_det();
        if !(det >= EPS_HULL) {
            return Err(Error::DegenerateFacet { det, tol: EPS_HULL });
        }
        Ok(f)
    }

    /// Facet on points `ids` of a vertex table.
    pub fn from_table(ids: &[usize], table: &[SpherePoint]) -> Result<Self> {
        let verts = ids.iter().map(|&i| table[i].coords().to_vec()).collect();
        Self::new(ids.to_vec(), verts)
    }

    /// Facet on raw coordinates, normalized onto the sphere; ids are `0..d`.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let verts = points
            .iter()
            .map(|p| SpherePoint::new(p.clone()).map(SpherePoint::into_coords))
            .collect::<Result<Vec<_>>>()?;
        Self::new((0..verts.len()).collect(), verts)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Row-major `X` whose columns are the vertices.
    pub fn matrix(&self) -> Vec<f64> {
        let d = self.dim();
        let mut m = vec![0.0; d * d];
        for (c, v) in self.vertices.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                m[r * d + c] = *x;
            }
        }
        m
    }

    /// Row-major Gram matrix `XᵀX`.
    pub fn gram(&self) -> Vec<f64> {
        let d = self.dim();
        let mut g = vec![0.0; d * d];
        for i in 0..d {
            for j in i..d {
                let v = dot(&self.vertices[i], &self.vertices[j]);
                g[i * d + j] = v;
                g[j * d + i] = v;
            }
        }
        g
    }

    pub(crate) fn lu(&self) -> Lu {
        Lu::new(self.dim(), self.matrix())
    }

    pub fn log_abs_det(&self) -> f64 {
        self.lu().log_abs_det()
    }

    pub fn abs_det(&self) -> f64 {
        self.log_abs_det().exp()
    }

    /// Arithmetic mean of the vertices.
    pub fn centroid(&self) -> Vec<f64> {
        let d = self.dim();
        let mut c = vec![0.0; d];
        for v in &self.vertices {
            c.iter_mut().zip(v).for_each(|(a, b)| *a += b);
        }
        c.iter_mut().for_each(|a| *a /= d as f64);
        c
    }
}

/// Hyperplane through the facet, normal pointing away from the origin.
///
/// Solves `Xᵀw = 1`, so `⟨w, xᵢ⟩ = 1` for every vertex; then the unit normal
/// is `w/‖w‖` and the distance from the origin is `1/‖w‖`.
pub fn facet_hyperplane(facet: &SimplexFacet) -> Result<Hyperplane> {
    let lu = facet.lu();
    let det = lu.log_abs_det().exp();
    if !(det >= EPS_HULL) {
        return Err(Error::DegenerateFacet { det, tol: EPS_HULL });
    }
    let w = lu
        .solve_transpose(&vec![1.0; facet.dim()])
        .ok_or(Error::DegenerateFacet { det, tol: EPS_HULL })?;
    let wn = norm(&w);
    Ok(Hyperplane { normal: w.iter().map(|x| x / wn).collect(), offset: 1.0 / wn })
}

/// Cap, centroid and area data of one facet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetStats {
    pub hyperplane: Hyperplane,
    /// Cap height `h = 1 - offset`.
    pub h: f64,
    /// Radius of the disk `H ∩ B`.
    pub r: f64,
    pub cg_facet: Vec<f64>,
    /// Center of the disk `H ∩ B`, i.e. `offset · normal`.
    pub cg_disk: Vec<f64>,
    /// `‖cg_facet − cg_disk‖`
    pub offset_norm: f64,
    /// (d-1)-volume of the facet.
    pub area: f64,
    /// d-volume of the cone from the origin over the facet, `|det X| / d!`.
    pub cone_volume: f64,
}

/// Computes [`FacetStats`]. The area comes from the cone-volume identity
/// `vol_d([0,F]) = area · offset / d`, reusing the one determinant.
pub fn facet_stats(facet: &SimplexFacet) -> Result<FacetStats> {
    let d = facet.dim();
    let plane = facet_hyperplane(facet)?;
    let cap = cap_of(&plane)?;
    let log_det = facet.log_abs_det();
    let cg_facet = facet.centroid();
    let cg_disk: Vec<f64> = plane.normal.iter().map(|n| n * plane.offset).collect();
    let offset_norm = cg_facet
        .iter()
        .zip(&cg_disk)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let area = (log_det - log_factorial(d - 1)).exp() / plane.offset;
    let cone_volume = (log_det - log_factorial(d)).exp();
    Ok(FacetStats {
        h: cap.height,
        r: cap.radius(),
        cg_facet,
        cg_disk,
        offset_norm,
        area,
        cone_volume,
        hyperplane: plane,
    })
}
