//! Convex hulls of points on the sphere.
//!
//! Incremental beneath-beyond construction: start from a d-simplex of extreme
//! points, keep for every facet the list of unprocessed points lying beyond
//! it (the conflict lists), and repeatedly insert the farthest conflicting
//! point. The facets it sees are found by walking facet adjacency from the
//! conflicting facet; they are replaced by the cone from the new point over
//! the horizon ridges. All facets are simplices.
//!
//! Orientation decisions use a fixed tolerance `EPS_HULL`. If the finished
//! hull fails validation, the build is retried once on a copy of the input
//! perturbed by at most 1e-10 (seeded, deterministic) and renormalized.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::log_factorial;
use crate::error::{Error, Result};
use crate::geometry::{facet_stats, FacetStats, Hyperplane, SimplexFacet, SpherePoint};
use crate::linalg::{dist2, dot, orthogonal_complement, Lu};
use crate::EPS_HULL;

/// Points closer than this are merged before hulling.
pub const DUPLICATE_TOL: f64 = 1e-10;
/// Magnitude of the retry perturbation.
pub const PERTURBATION: f64 = 1e-10;
const PERTURBATION_SEED: u64 = 0x5eed_b417;

/// A simplicial facet of a [`Polytope`] with its outward hyperplane.
#[derive(Debug, Clone, PartialEq)]
pub struct HullFacet {
    pub vertices: Vec<usize>,
    pub plane: Hyperplane,
    /// `neighbors[k]` shares the ridge opposite `vertices[k]`.
    pub neighbors: Vec<usize>,
}

/// A simplicial polytope whose vertices lie on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<SpherePoint>,
    facets: Vec<HullFacet>,
    interior: Vec<usize>,
    perturbed: bool,
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertex table. Entries listed in [`Polytope::interior`] are not on any facet.
    pub fn vertices(&self) -> &[SpherePoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[HullFacet] {
        &self.facets
    }

    /// Input points that ended up inside the hull or on its boundary without
    /// being a vertex.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    /// Whether the build needed the perturbed retry.
    pub fn perturbed(&self) -> bool {
        self.perturbed
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len() - self.interior.len()
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// Number of (d-2)-faces; each is shared by two facets.
    pub fn num_ridges(&self) -> usize {
        self.facets.len() * self.dim / 2
    }

    /// Facet `j` as a simplex over the vertex table.
    pub fn simplex(&self, j: usize) -> Result<SimplexFacet> {
        SimplexFacet::from_table(&self.facets[j].vertices, &self.vertices)
    }

    pub fn min_offset(&self) -> f64 {
        self.facets.iter().map(|f| f.plane.offset).fold(f64::INFINITY, f64::min)
    }

    pub fn origin_interior(&self) -> bool {
        self.min_offset() > 0.0
    }

    pub(crate) fn require_origin_interior(&self) -> Result<()> {
        let m = self.min_offset();
        if m > 0.0 {
            Ok(())
        } else {
            Err(Error::OriginNotInterior { min_offset: m })
        }
    }

    /// Every ridge has exactly two incident facets and adjacency is symmetric.
    pub fn ridges_regular(&self) -> bool {
        let mut count: HashMap<Vec<usize>, usize> = HashMap::new();
        for f in &self.facets {
            for k in 0..self.dim {
                *count.entry(ridge_key(&f.vertices, k)).or_default() += 1;
            }
        }
        if count.values().any(|&c| c != 2) {
            return false;
        }
        self.facets.iter().enumerate().all(|(i, f)| {
            f.neighbors.iter().enumerate().all(|(k, &g)| {
                let key = ridge_key(&f.vertices, k);
                let other = &self.facets[g];
                g != i
                    && (0..self.dim).any(|m| other.neighbors[m] == i && ridge_key(&other.vertices, m) == key)
            })
        })
    }

    /// Alternating face count `Σ_k (−1)^k f_k` of the boundary complex, where
    /// `f_k` counts the distinct `(k+1)`-subsets of facet vertex sets. Equals
    /// `1 + (−1)^{d−1}` for the boundary of any simplicial d-polytope.
    pub fn euler_characteristic(&self) -> i64 {
        let mut faces: HashSet<Vec<usize>> = HashSet::new();
        for f in &self.facets {
            let mut vs = f.vertices.clone();
            vs.sort_unstable();
            for mask in 1u32..(1 << vs.len()) {
                faces.insert((0..vs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| vs[i]).collect());
            }
        }
        faces.iter().map(|f| if f.len() % 2 == 1 { 1 } else { -1 }).sum()
    }

    /// Largest signed distance of any vertex beyond any facet plane.
    pub fn max_orientation_violation(&self) -> f64 {
        self.facets
            .par_iter()
            .map(|f| {
                self.vertices
                    .iter()
                    .map(|v| f.plane.signed_distance(v.coords()))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .reduce(|| f64::NEG_INFINITY, f64::max)
    }

    /// Per-facet cap and centroid data, in facet order.
    pub fn facet_stats(&self) -> Result<Vec<FacetStats>> {
        self.require_origin_interior()?;
        (0..self.facets.len())
            .into_par_iter()
            .map(|j| facet_stats(&self.simplex(j)?))
            .collect()
    }

    pub fn to_document(&self) -> PolytopeDocument {
        PolytopeDocument {
            dimension: self.dim,
            vertices: self.vertices.iter().map(|v| v.coords().to_vec()).collect(),
            facets: self.facets.iter().map(|f| f.vertices.clone()).collect(),
        }
    }

    /// Rebuilds a polytope from its document, recomputing outward planes and
    /// adjacency. Vertices are renormalized onto the sphere.
    pub fn from_document(doc: &PolytopeDocument) -> Result<Self> {
        let d = doc.dimension;
        if d < 2 {
            return Err(Error::Parse(format!("dimension {d} < 2")));
        }
        let vertices = doc
            .vertices
            .iter()
            .map(|v| {
                if v.len() != d {
                    return Err(Error::Parse(format!("vertex of length {} in dimension {d}", v.len())));
                }
                SpherePoint::new(v.clone()).map_err(|e| Error::Parse(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        if doc.facets.len() < d + 1 {
            return Err(Error::Parse(format!("{} facets cannot bound a {d}-polytope", doc.facets.len())));
        }
        let mut used = vec![false; vertices.len()];
        for f in &doc.facets {
            if f.len() != d {
                return Err(Error::Parse(format!("facet with {} vertices in dimension {d}", f.len())));
            }
            for &i in f {
                if i >= vertices.len() {
                    return Err(Error::Parse(format!("vertex index {i} out of range")));
                }
                used[i] = true;
            }
        }
        let pts: Vec<&[f64]> = vertices.iter().map(|v| v.coords()).collect();
        let mut center = vec![0.0; d];
        let nused = used.iter().filter(|&&u| u).count() as f64;
        for (i, p) in pts.iter().enumerate() {
            if used[i] {
                center.iter_mut().zip(p.iter()).for_each(|(c, x)| *c += x / nused);
            }
        }
        let mut facets = Vec::with_capacity(doc.facets.len());
        let mut ridges: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
        for (j, f) in doc.facets.iter().enumerate() {
            let plane = oriented_plane(f, &pts, &center)
                .ok_or_else(|| Error::Parse(format!("facet {j} is degenerate")))?;
            for k in 0..d {
                ridges.entry(ridge_key(f, k)).or_default().push((j, k));
            }
            facets.push(HullFacet { vertices: f.clone(), plane, neighbors: vec![usize::MAX; d] });
        }
        for (key, inc) in &ridges {
            if inc.len() != 2 {
                return Err(Error::Parse(format!(
                    "ridge {key:?} has {} incident facets, expected 2",
                    inc.len()
                )));
            }
            let (a, ka) = inc[0];
            let (b, kb) = inc[1];
            facets[a].neighbors[ka] = b;
            facets[b].neighbors[kb] = a;
        }
        let interior = (0..vertices.len()).filter(|&i| !used[i]).collect();
        let p = Self { dim: d, vertices, facets, interior, perturbed: false };
        let viol = p.max_orientation_violation();
        if viol > EPS_HULL {
            return Err(Error::Parse(format!("facets do not bound a convex polytope (violation {viol:e})")));
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serializable document")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PolytopeDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// On-disk polytope: dimension, vertex coordinates and facet index lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDocument {
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<Vec<usize>>,
}

fn ridge_key(verts: &[usize], skip: usize) -> Vec<usize> {
    let mut k: Vec<usize> = verts
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, &v)| v)
        .collect();
    k.sort_unstable();
    k
}

/// Hyperplane through `verts` with the normal pointing away from `inside`.
fn oriented_plane(verts: &[usize], pts: &[&[f64]], inside: &[f64]) -> Option<Hyperplane> {
    let d = inside.len();
    let base = pts[verts[0]];
    let edges: Vec<Vec<f64>> = verts[1..]
        .iter()
        .map(|&v| pts[v].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let mut normal = orthogonal_complement(&edges, d, EPS_HULL)?;
    let mut offset = dot(&normal, base);
    if dot(&normal, inside) - offset > 0.0 {
        normal.iter_mut().for_each(|x| *x = -*x);
        offset = -offset;
    }
    Some(Hyperplane { normal, offset })
}

struct WorkFacet {
    verts: Vec<usize>,
    plane: Hyperplane,
    neighbors: Vec<usize>,
    outside: Vec<usize>,
    alive: bool,
}

fn fail(msg: impl Into<String>) -> Error {
    Error::NumericalFailure(msg.into())
}

/// Indices of a d-simplex of far-apart points, or the affine rank reached.
fn initial_simplex(pts: &[&[f64]], d: usize) -> std::result::Result<Vec<usize>, usize> {
    let i0 = (0..pts.len())
        .max_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]))
        .expect("non-empty");
    let mut chosen = vec![i0];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while chosen.len() < d + 1 {
        let mut best = (0.0, usize::MAX, Vec::new());
        for (i, p) in pts.iter().enumerate() {
            let mut v: Vec<f64> = p.iter().zip(pts[i0]).map(|(a, b)| a - b).collect();
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&v, b);
                    v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let r = dot(&v, &v).sqrt();
            if r > best.0 {
                best = (r, i, v);
            }
        }
        if best.0 <= EPS_HULL {
            return Err(chosen.len() - 1);
        }
        let (r, i, mut v) = best;
        v.iter_mut().for_each(|x| *x /= r);
        basis.push(v);
        chosen.push(i);
    }
    Ok(chosen)
}

fn build(pts: &[&[f64]], d: usize) -> Result<(Vec<HullFacet>, Vec<usize>)> {
    let n = pts.len();
    let simplex = initial_simplex(pts, d).map_err(|rank| Error::DegenerateInput { rank, dim: d })?;
    let mut center = vec![0.0; d];
    for &i in &simplex {
        center.iter_mut().zip(pts[i]).for_each(|(c, x)| *c += x / (d + 1) as f64);
    }

    let mut facets: Vec<WorkFacet> = Vec::new();
    for skip in 0..=d {
        let verts: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &v)| v)
            .collect();
        // facet omitting simplex vertex `skip` is facet index `skip`; its
        // vertex at position k is simplex vertex `k'`, and the neighbor
        // across the opposite ridge is the facet omitting `k'`.
        let neighbors = (0..=d).filter(|&i| i != skip).collect();
        let plane = oriented_plane(&verts, pts, &center).ok_or_else(|| fail("degenerate initial simplex"))?;
        facets.push(WorkFacet { verts, plane, neighbors, outside: Vec::new(), alive: true });
    }

    let mut is_simplex = vec![false; n];
    simplex.iter().for_each(|&i| is_simplex[i] = true);
    let all_facets: Vec<usize> = (0..facets.len()).collect();
    for (p, _) in is_simplex.iter().enumerate().filter(|(_, &s)| !s) {
        assign(&mut facets, &all_facets, pts, p);
    }

    let mut stamp = vec![0u32; facets.len()];
    let mut round = 0u32;
    let mut pending: Vec<usize> = (0..facets.len()).filter(|&f| !facets[f].outside.is_empty()).collect();
    while let Some(f0) = pending.pop() {
        if !facets[f0].alive || facets[f0].outside.is_empty() {
            continue;
        }
        let apex = *facets[f0]
            .outside
            .iter()
            .max_by(|&&a, &&b| {
                let pl = &facets[f0].plane;
                pl.signed_distance(pts[a]).total_cmp(&pl.signed_distance(pts[b]))
            })
            .expect("non-empty");

        round += 1;
        stamp.resize(facets.len(), 0);
        let mut visible = vec![f0];
        stamp[f0] = round;
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        let mut head = 0;
        while head < visible.len() {
            let f = visible[head];
            head += 1;
            for k in 0..d {
                let g = facets[f].neighbors[k];
                if stamp[g] == round {
                    continue;
                }
                if facets[g].plane.signed_distance(pts[apex]) > EPS_HULL {
                    stamp[g] = round;
                    visible.push(g);
                } else {
                    horizon.push((f, k));
                }
            }
        }
        // a facet seen both as visible and across the horizon is impossible;
        // drop horizon entries whose far side became visible later in the walk
        horizon.retain(|&(f, k)| stamp[facets[f].neighbors[k]] != round);

        let first_new = facets.len();
        let mut ridge_map: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for &(f, k) in &horizon {
            let mut verts = facets[f].verts.clone();
            verts[k] = apex;
            let across = facets[f].neighbors[k];
            let plane = oriented_plane(&verts, pts, &center)
                .ok_or_else(|| fail(format!("degenerate cone facet at point {apex}")))?;
            if plane.signed_distance(&center) >= -EPS_HULL {
                return Err(fail("interior reference point lies on a new facet"));
            }
            let id = facets.len();
            let mut neighbors = vec![usize::MAX; d];
            neighbors[k] = across;
            let back = facets[across]
                .neighbors
                .iter()
                .position(|&x| x == f)
                .ok_or_else(|| fail("asymmetric adjacency"))?;
            facets[across].neighbors[back] = id;
            for m in (0..d).filter(|&m| m != k) {
                let key = ridge_key(&verts, m);
                match ridge_map.remove(&key) {
                    Some((other, om)) => {
                        neighbors[m] = other;
                        facets[other].neighbors[om] = id;
                    }
                    None => {
                        ridge_map.insert(key, (id, m));
                    }
                }
            }
            facets.push(WorkFacet { verts, plane, neighbors, outside: Vec::new(), alive: true });
        }
        if !ridge_map.is_empty() {
            return Err(fail(format!("horizon of point {apex} is not a closed ridge cycle")));
        }

        let new_ids: Vec<usize> = (first_new..facets.len()).collect();
        let mut orphans = Vec::new();
        for &f in &visible {
            facets[f].alive = false;
            orphans.append(&mut facets[f].outside);
        }
        for p in orphans.into_iter().filter(|&p| p != apex) {
            assign(&mut facets, &new_ids, pts, p);
        }
        pending.extend(new_ids.iter().copied().filter(|&f| !facets[f].outside.is_empty()));
    }

    let mut remap = vec![usize::MAX; facets.len()];
    let mut out = Vec::new();
    for (i, _) in facets.iter().enumerate().filter(|(_, f)| f.alive) {
        remap[i] = out.len();
        out.push(i);
    }
    let mut on_hull = vec![false; n];
    let result: Vec<HullFacet> = out
        .iter()
        .map(|&i| {
            let f = &facets[i];
            f.verts.iter().for_each(|&v| on_hull[v] = true);
            HullFacet {
                vertices: f.verts.clone(),
                plane: f.plane.clone(),
                neighbors: f.neighbors.iter().map(|&g| remap[g]).collect(),
            }
        })
        .collect();
    if result.iter().any(|f| f.neighbors.contains(&usize::MAX)) {
        return Err(fail("dangling adjacency"));
    }
    let interior = (0..n).filter(|&i| !on_hull[i]).collect();
    Ok((result, interior))
}

/// Puts `p` in the conflict list of the candidate facet it lies farthest beyond.
fn assign(facets: &mut [WorkFacet], candidates: &[usize], pts: &[&[f64]], p: usize) {
    let mut best = (EPS_HULL, usize::MAX);
    for &f in candidates {
        let dist = facets[f].plane.signed_distance(pts[p]);
        if dist > best.0 {
            best = (dist, f);
        }
    }
    if best.1 != usize::MAX {
        facets[best.1].outside.push(p);
    }
}

fn dedupe(points: &[SpherePoint]) -> Vec<SpherePoint> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].coords()[0].total_cmp(&points[b].coords()[0]));
    let mut dup = vec![false; points.len()];
    let tol2 = DUPLICATE_TOL * DUPLICATE_TOL;
    for (pos, &i) in order.iter().enumerate() {
        if dup[i] {
            continue;
        }
        for &j in &order[pos + 1..] {
            if points[j].coords()[0] - points[i].coords()[0] > DUPLICATE_TOL {
                break;
            }
            if dist2(points[i].coords(), points[j].coords()) < tol2 {
                dup[j.max(i)] = true;
            }
        }
    }
    points.iter().zip(&dup).filter(|(_, &d)| !d).map(|(p, _)| p.clone()).collect()
}

fn validate(p: &Polytope) -> Result<()> {
    if !p.ridges_regular() {
        return Err(fail("ridge with other than two incident facets"));
    }
    let viol = p.max_orientation_violation();
    if viol > EPS_HULL {
        return Err(fail(format!("vertex beyond a facet by {viol:e}")));
    }
    Ok(())
}

fn try_build(points: Vec<SpherePoint>, d: usize, perturbed: bool) -> Result<Polytope> {
    let pts: Vec<&[f64]> = points.iter().map(|p| p.coords()).collect();
    let (facets, interior) = build(&pts, d)?;
    let p = Polytope { dim: d, vertices: points, facets, interior, perturbed };
    validate(&p)?;
    Ok(p)
}

/// Convex hull of points on the unit sphere, as a simplicial polytope.
///
/// Duplicates (closer than [`DUPLICATE_TOL`]) are merged first, so vertex
/// indices refer to the deduplicated table returned by [`Polytope::vertices`].
pub fn convex_hull(points: &[SpherePoint]) -> Result<Polytope> {
    let d = points.first().map(SpherePoint::dim).ok_or(Error::TooFewPoints { needed: 3, got: 0, dim: 2 })?;
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: p.dim() });
    }
    let points = dedupe(points);
    if points.len() < d + 1 {
        return Err(Error::TooFewPoints { needed: d + 1, got: points.len(), dim: d });
    }
    match try_build(points.clone(), d, false) {
        Ok(p) => Ok(p),
        Err(Error::NumericalFailure(first)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(PERTURBATION_SEED);
            let jittered = points
                .iter()
                .map(|p| {
                    let c = p.coords().iter().map(|x| x + PERTURBATION * rng.random_range(-1.0..1.0)).collect();
                    SpherePoint::new(c)
                })
                .collect::<Result<Vec<_>>>()?;
            try_build(jittered, d, true)
                .map_err(|e| fail(format!("{first}; after perturbation: {e}")))
        }
        Err(e) => Err(e),
    }
}

/// `Σ_j |det X_j| / d!`, the cone decomposition from the origin.
pub fn polytope_volume(p: &Polytope) -> Result<f64> {
    p.require_origin_interior()?;
    let d = p.dim();
    let lf = log_factorial(d);
    Ok(p.facets
        .par_iter()
        .map(|f| {
            let mut m = vec![0.0; d * d];
            for (c, &v) in f.vertices.iter().enumerate() {
                for (r, x) in p.vertices[v].coords().iter().enumerate() {
                    m[r * d + c] = *x;
                }
            }
            (Lu::new(d, m).log_abs_det() - lf).exp()
        })
        .sum())
}

/// Total (d-1)-volume of the facets.
pub fn surface_area(p: &Polytope) -> f64 {
    let d = p.dim();
    p.facets
        .par_iter()
        .map(|f| {
            if f.plane.offset > EPS_HULL {
                // cone identity: |det X| / ((d-1)! · offset)
                let mut m = vec![0.0; d * d];
                for (c, &v) in f.vertices.iter().enumerate() {
                    for (r, x) in p.vertices[v].coords().iter().enumerate() {
                        m[r * d + c] = *x;
                    }
                }
                (Lu::new(d, m).log_abs_det() - log_factorial(d - 1)).exp() / f.plane.offset
            } else {
                gram_area(p, f)
            }
        })
        .sum()
}

fn gram_area(p: &Polytope, f: &HullFacet) -> f64 {
    let d = p.dim();
    let base = p.vertices[f.vertices[0]].coords();
    let edges: Vec<Vec<f64>> = f.vertices[1..]
        .iter()
        .map(|&v| p.vertices[v].coords().iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let k = d - 1;
    let mut g = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            g[i * k + j] = dot(&edges[i], &edges[j]);
        }
    }
    (0.5 * Lu::new(k, g).log_abs_det() - log_factorial(k)).exp()
}
