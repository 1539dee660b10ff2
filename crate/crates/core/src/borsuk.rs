//! Partition harness for the cover polytope: cut the width-1 rhombic
//! dodecahedron into four convex pieces (an offset cap plus three wedges
//! about an axis) and minimize the maximum piece diameter by pattern search.
//!
//! The six 4-valent vertices of the polytope are pairwise at distance >= 1,
//! so any four-piece cover of all of them keeps one piece at diameter >= 1;
//! the optimizer chases that floor and reports whatever it achieves.

use crate::cover::TetraFrame;
use crate::groups;
use crate::mesh::{enumerate_vertices, halfspace_intersection, max_violation, Halfspace, PolyMesh};
use crate::rotations::Vec3;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BorsukError {
    #[error("cut produces an empty or degenerate piece {piece}")]
    DegenerateCut { piece: usize },
    #[error(transparent)]
    Mesh(#[from] crate::mesh::MeshError),
}

/// The eight cut parameters: a cap plane (unit normal from two angles plus
/// an offset) and three wedge planes sharing the line through `line offset`
/// parallel to the wedge axis, at mutual 120 degrees starting from `phase`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutParams {
    pub cap_polar: f64,
    pub cap_azimuth: f64,
    pub cap_offset: f64,
    pub axis_polar: f64,
    pub axis_azimuth: f64,
    pub line_u: f64,
    pub line_v: f64,
    pub phase: f64,
}

impl CutParams {
    pub fn to_array(&self) -> [f64; 8] {
        [
            self.cap_polar,
            self.cap_azimuth,
            self.cap_offset,
            self.axis_polar,
            self.axis_azimuth,
            self.line_u,
            self.line_v,
            self.phase,
        ]
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        CutParams {
            cap_polar: a[0],
            cap_azimuth: a[1],
            cap_offset: a[2],
            axis_polar: a[3],
            axis_azimuth: a[4],
            line_u: a[5],
            line_v: a[6],
            phase: a[7],
        }
    }
}

fn spherical(polar: f64, azimuth: f64) -> Vec3 {
    Vec3::new(
        polar.sin() * azimuth.cos(),
        polar.sin() * azimuth.sin(),
        polar.cos(),
    )
}

impl Default for CutParams {
    /// Symmetric default: cap and wedge axis along a diagonal (3-fold) axis
    /// of the polytope, wedge planes through the center at mutual 120
    /// degrees, cap offset between the 4-valent vertex ring and the apex.
    fn default() -> Self {
        let axis = groups::tetra_vertices()[0];
        let polar = axis.z.acos();
        let azimuth = axis.y.atan2(axis.x);
        CutParams {
            cap_polar: polar,
            cap_azimuth: azimuth,
            cap_offset: 0.5,
            axis_polar: polar,
            axis_azimuth: azimuth,
            line_u: 0.0,
            line_v: 0.0,
            phase: 0.0,
        }
    }
}

/// Canonical halfspace list of the width-1 rhombic dodecahedron (identity
/// placement, centered at the origin).
pub fn cover_halfspaces() -> Vec<Halfspace> {
    let frame = TetraFrame::standard();
    let mut hs = Vec::with_capacity(12);
    for u in &frame.edges {
        hs.push(Halfspace::new(*u, 0.5));
        hs.push(Halfspace::new(-*u, 0.5));
    }
    hs
}

/// Halfspace lists of the four pieces (cap first).
pub fn piece_halfspaces(params: &CutParams) -> [Vec<Halfspace>; 4] {
    let base = cover_halfspaces();
    let cap_normal = spherical(params.cap_polar, params.cap_azimuth);
    let axis = spherical(params.axis_polar, params.axis_azimuth);
    // orthonormal frame (t1, t2, axis), right handed
    let t1 = {
        let probe = if axis.z.abs() < 0.9 {
            Vec3::z()
        } else {
            Vec3::x()
        };
        (probe - axis * probe.dot(&axis)).normalize()
    };
    let t2 = axis.cross(&t1);
    let line_point = t1 * params.line_u + t2 * params.line_v;

    // sector boundary rays at phase + 120k degrees; sector k lies between
    // rays k and k+1, carved by the two planes spanned by each ray and the
    // axis
    let ray = |k: usize| -> Vec3 {
        let angle = params.phase + k as f64 * std::f64::consts::TAU / 3.0;
        t1 * angle.cos() + t2 * angle.sin()
    };
    let side = |r: &Vec3| axis.cross(r); // in-plane normal 90 degrees ccw of the ray

    let mut cap = base.clone();
    cap.push(Halfspace::new(-cap_normal, -params.cap_offset)); // <p, c> >= d
    let mut pieces = [cap, base.clone(), base.clone(), base];
    for k in 0..3 {
        let piece = &mut pieces[k + 1];
        piece.push(Halfspace::new(cap_normal, params.cap_offset)); // <p, c> <= d
        let lo = side(&ray(k));
        let hi = side(&ray(k + 1));
        // ccw of ray k: <p - q, lo> >= 0; cw of ray k+1: <p - q, hi> <= 0
        piece.push(Halfspace::new(-lo, -lo.dot(&line_point)));
        piece.push(Halfspace::new(hi, hi.dot(&line_point)));
    }
    pieces
}

/// Four convex polytopes whose union is the cover polytope.
#[derive(Clone, Debug)]
pub struct Partition4 {
    pub pieces: [PolyMesh; 4],
    pub halfspaces: [Vec<Halfspace>; 4],
    pub params: CutParams,
}

/// Builds the full partition, with face extraction per piece. Errors when a
/// piece is empty or lower-dimensional.
pub fn partition_u3(params: &CutParams) -> Result<Partition4, BorsukError> {
    let halfspaces = piece_halfspaces(params);
    let mut meshes = Vec::with_capacity(4);
    for (k, hs) in halfspaces.iter().enumerate() {
        let mesh =
            halfspace_intersection(hs).map_err(|_| BorsukError::DegenerateCut { piece: k })?;
        meshes.push(mesh);
    }
    let pieces: [PolyMesh; 4] = meshes.try_into().expect("four pieces");
    Ok(Partition4 {
        pieces,
        halfspaces,
        params: *params,
    })
}

/// Max over pieces of the exact vertex-pair diameter (pieces are convex, so
/// the diameter is attained at vertices).
pub fn max_piece_diameter(partition: &Partition4) -> f64 {
    partition
        .pieces
        .iter()
        .map(|p| p.diameter())
        .fold(0.0, f64::max)
}

impl Partition4 {
    /// Coverage certificate: worst distance from a cover-polytope sample
    /// point (mesh vertices plus a face sampling) to its nearest piece.
    pub fn coverage_defect(&self, face_samples: usize, seed: u64) -> f64 {
        let cover = halfspace_intersection(&cover_halfspaces()).expect("cover mesh");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = cover.vertices.clone();
        points.extend(cover.sample_faces(face_samples, &mut rng));
        let mut worst: f64 = f64::NEG_INFINITY;
        for p in &points {
            let nearest = self
                .halfspaces
                .iter()
                .map(|hs| max_violation(hs, p))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(nearest);
        }
        worst
    }

    /// Total piece volume against the cover polytope volume.
    pub fn volume_balance(&self) -> (f64, f64) {
        let total: f64 = self.pieces.iter().map(|p| p.volume()).sum();
        let cover = halfspace_intersection(&cover_halfspaces()).expect("cover mesh");
        (total, cover.volume())
    }
}

/// Objective for the search: max piece diameter from vertex enumeration
/// only (no face extraction), infinite when a piece degenerates.
fn evaluate(params: &CutParams) -> f64 {
    let mut worst: f64 = 0.0;
    for hs in piece_halfspaces(params) {
        let Ok(vertices) = enumerate_vertices(&hs) else {
            return f64::INFINITY;
        };
        for i in 0..vertices.len() {
            for j in (i + 1)..vertices.len() {
                worst = worst.max((vertices[i] - vertices[j]).norm());
            }
        }
    }
    worst
}

#[derive(Clone, Copy, Debug)]
pub struct OptimizeConfig {
    /// Total objective evaluations beyond the initial one.
    pub budget: usize,
    pub seed: u64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig {
            budget: 10_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OptimizeReport {
    pub params: CutParams,
    pub value: f64,
    pub evaluations: usize,
    /// Value recomputed from a fresh full partition of the final cut.
    pub certified_value: f64,
    /// Best value after each accepted improvement (non-increasing).
    pub history: Vec<f64>,
}

const INITIAL_STEPS: [f64; 8] = [0.25, 0.25, 0.06, 0.25, 0.25, 0.05, 0.05, 0.25];

/// Derivative-free minimization of the max piece diameter: coordinate
/// pattern search with step halving, restarted from seeded jitter around
/// the incumbent until the budget is exhausted. Deterministic for a fixed
/// seed.
pub fn optimize_partition(config: &OptimizeConfig) -> OptimizeReport {
    let start = CutParams::default();
    let mut evaluations = 0usize;
    let eval_counted = |p: &CutParams, evaluations: &mut usize| -> f64 {
        *evaluations += 1;
        evaluate(p)
    };

    let mut best = start;
    let mut best_value = eval_counted(&start, &mut evaluations);
    let mut history = vec![best_value];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    while evaluations <= config.budget {
        // restart point: incumbent on the first pass, jittered incumbent after
        let mut current = if evaluations == 1 {
            best
        } else {
            let mut a = best.to_array();
            for (k, v) in a.iter_mut().enumerate() {
                *v += INITIAL_STEPS[k] * rng.random_range(-1.0..1.0);
            }
            CutParams::from_array(a)
        };
        let mut current_value = if evaluations == 1 {
            best_value
        } else {
            let v = eval_counted(&current, &mut evaluations);
            if v.is_finite() {
                v
            } else {
                continue;
            }
        };
        let mut steps = INITIAL_STEPS;

        'search: loop {
            if evaluations > config.budget {
                break 'search;
            }
            let mut improved = false;
            for k in 0..8 {
                for sign in [1.0, -1.0] {
                    if evaluations > config.budget {
                        break 'search;
                    }
                    let mut a = current.to_array();
                    a[k] += sign * steps[k];
                    let cand = CutParams::from_array(a);
                    let v = eval_counted(&cand, &mut evaluations);
                    if v < current_value {
                        current = cand;
                        current_value = v;
                        improved = true;
                        if current_value < best_value {
                            best = current;
                            best_value = current_value;
                            history.push(best_value);
                        }
                        break;
                    }
                }
            }
            if !improved {
                for s in steps.iter_mut() {
                    *s *= 0.5;
                }
                if steps.iter().all(|s| *s < 1e-5) {
                    break 'search;
                }
            }
        }
    }

    let certified_value = partition_u3(&best)
        .map(|p| max_piece_diameter(&p))
        .unwrap_or(f64::INFINITY);
    OptimizeReport {
        params: best,
        value: best_value,
        evaluations,
        certified_value,
        history,
    }
}
