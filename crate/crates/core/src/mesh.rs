//! Halfspace intersection for small bounded polytopes, with face extraction,
//! volume by the divergence theorem, and ASCII OFF export.
//!
//! Vertex enumeration is brute force over plane triples, which is exact
//! enough and fast at the sizes used here (a dozen or two halfspaces).

use crate::rotations::{Mat3, Vec3};
use rand::Rng;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("halfspace intersection needs at least 4 halfspaces, got {0}")]
    TooFewHalfspaces(usize),
    #[error("halfspace intersection is empty or degenerate ({0} vertices)")]
    Degenerate(usize),
}

/// The halfspace `{p : <p, normal> <= offset}`.
#[derive(Clone, Copy, Debug)]
pub struct Halfspace {
    pub normal: Vec3,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec3, offset: f64) -> Self {
        Halfspace { normal, offset }
    }

    /// Signed distance of `p` to the boundary plane, positive outside.
    pub fn violation(&self, p: &Vec3) -> f64 {
        (self.normal.dot(p) - self.offset) / self.normal.norm()
    }
}

/// Checks membership in the intersection within `tol` (absolute signed
/// distance), returning the worst violation.
pub fn max_violation(halfspaces: &[Halfspace], p: &Vec3) -> f64 {
    halfspaces
        .iter()
        .map(|h| h.violation(p))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Enumerates the vertices of a bounded halfspace intersection: solve every
/// plane triple, keep feasible points, deduplicate.
pub fn enumerate_vertices(halfspaces: &[Halfspace]) -> Result<Vec<Vec3>, MeshError> {
    if halfspaces.len() < 4 {
        return Err(MeshError::TooFewHalfspaces(halfspaces.len()));
    }
    let feas_tol = 1e-9;
    let dedupe_tol = 1e-8;
    let mut vertices: Vec<Vec3> = Vec::new();
    let n = halfspaces.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let a = Mat3::from_rows(&[
                    halfspaces[i].normal.transpose(),
                    halfspaces[j].normal.transpose(),
                    halfspaces[k].normal.transpose(),
                ]);
                let det = a.determinant();
                // scale-aware threshold for near-parallel triples
                let scale = halfspaces[i].normal.norm()
                    * halfspaces[j].normal.norm()
                    * halfspaces[k].normal.norm();
                if det.abs() <= 1e-10 * scale.max(1e-300) {
                    continue;
                }
                let b = Vec3::new(
                    halfspaces[i].offset,
                    halfspaces[j].offset,
                    halfspaces[k].offset,
                );
                let Some(inv) = a.try_inverse() else {
                    continue;
                };
                let p = inv * b;
                if max_violation(halfspaces, &p) > feas_tol {
                    continue;
                }
                if !vertices.iter().any(|v| (v - p).norm() < dedupe_tol) {
                    vertices.push(p);
                }
            }
        }
    }
    if vertices.len() < 4 {
        return Err(MeshError::Degenerate(vertices.len()));
    }
    Ok(vertices)
}

/// A closed convex polytope as vertices plus faces (vertex index loops,
/// counterclockwise seen from outside).
#[derive(Clone, Debug)]
pub struct PolyMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<Vec<usize>>,
}

/// Builds the full mesh of a bounded halfspace intersection.
pub fn halfspace_intersection(halfspaces: &[Halfspace]) -> Result<PolyMesh, MeshError> {
    let vertices = enumerate_vertices(halfspaces)?;
    let tight_tol = 1e-7;
    let mut faces = Vec::new();
    for h in halfspaces {
        let scale = h.normal.norm();
        let mut ids: Vec<usize> = (0..vertices.len())
            .filter(|&v| h.violation(&vertices[v]).abs() * scale < tight_tol * scale.max(1.0))
            .collect();
        if ids.len() < 3 {
            continue; // halfspace inactive or touches in an edge/vertex only
        }
        // order around the face centroid
        let centroid: Vec3 = ids.iter().map(|&v| vertices[v]).sum::<Vec3>() / ids.len() as f64;
        let normal = h.normal.normalize();
        let t1 = pick_orthogonal(&normal);
        let t2 = normal.cross(&t1);
        ids.sort_by(|&p, &q| {
            let dp = vertices[p] - centroid;
            let dq = vertices[q] - centroid;
            let ap = dp.dot(&t2).atan2(dp.dot(&t1));
            let aq = dq.dot(&t2).atan2(dq.dot(&t1));
            ap.partial_cmp(&aq).unwrap_or(std::cmp::Ordering::Equal)
        });
        // orient counterclockwise as seen from outside (against the normal)
        let a = vertices[ids[1]] - vertices[ids[0]];
        let b = vertices[ids[2]] - vertices[ids[1]];
        if a.cross(&b).dot(&normal) < 0.0 {
            ids.reverse();
        }
        faces.push(ids);
    }
    Ok(PolyMesh { vertices, faces })
}

fn pick_orthogonal(n: &Vec3) -> Vec3 {
    let candidate = if n.x.abs() < 0.9 {
        Vec3::x()
    } else {
        Vec3::y()
    };
    (candidate - n * candidate.dot(n)).normalize()
}

impl PolyMesh {
    /// Max pairwise vertex distance. For convex polytopes this is the
    /// diameter of the whole body.
    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                best = best.max((self.vertices[i] - self.vertices[j]).norm_squared());
            }
        }
        best.sqrt()
    }

    /// Volume by the divergence theorem: signed tetrahedra from the origin
    /// over fan-triangulated faces, which is exact for closed oriented
    /// meshes regardless of where the origin sits.
    pub fn volume(&self) -> f64 {
        let mut six_v = 0.0;
        for face in &self.faces {
            let v0 = self.vertices[face[0]];
            for k in 1..(face.len() - 1) {
                let v1 = self.vertices[face[k]];
                let v2 = self.vertices[face[k + 1]];
                six_v += v0.dot(&v1.cross(&v2));
            }
        }
        six_v / 6.0
    }

    pub fn edge_count(&self) -> usize {
        self.faces.iter().map(|f| f.len()).sum::<usize>() / 2
    }

    /// Deterministic point sample over the faces (area-weighted fan
    /// triangulation), used by coverage certificates.
    pub fn sample_faces<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<Vec3> {
        let mut triangles: Vec<([Vec3; 3], f64)> = Vec::new();
        let mut total_area = 0.0;
        for face in &self.faces {
            let v0 = self.vertices[face[0]];
            for k in 1..(face.len() - 1) {
                let v1 = self.vertices[face[k]];
                let v2 = self.vertices[face[k + 1]];
                let area = 0.5 * (v1 - v0).cross(&(v2 - v0)).norm();
                total_area += area;
                triangles.push(([v0, v1, v2], area));
            }
        }
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let mut pick = rng.random_range(0.0..total_area);
            let mut tri = &triangles[triangles.len() - 1].0;
            for (t, area) in &triangles {
                if pick <= *area {
                    tri = t;
                    break;
                }
                pick -= area;
            }
            let (mut u, mut v): (f64, f64) = (rng.random(), rng.random());
            if u + v > 1.0 {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            out.push(tri[0] + (tri[1] - tri[0]) * u + (tri[2] - tri[0]) * v);
        }
        out
    }

    /// ASCII OFF document: counts header, vertex lines, face index lines.
    pub fn write_off<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "OFF")?;
        writeln!(
            w,
            "{} {} {}",
            self.vertices.len(),
            self.faces.len(),
            self.edge_count()
        )?;
        for v in &self.vertices {
            writeln!(w, "{:.16e} {:.16e} {:.16e}", v.x, v.y, v.z)?;
        }
        for f in &self.faces {
            write!(w, "{}", f.len())?;
            for idx in f {
                write!(w, " {idx}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}
