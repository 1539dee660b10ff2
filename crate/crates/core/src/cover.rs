//! The universal-cover solver: build the 6-coordinate odd-width map over the
//! edge directions of a unit regular tetrahedron, find a rotation whose
//! W-projection vanishes, recover the concurrency point of the six
//! mid-planes by least squares, and certify containment of the input in the
//! rhombic dodecahedron cover. A 2-D regular-hexagon analogue serves as a
//! cheap oracle.

use crate::bodies::{GeneralSet, SupportFunction};
use crate::descent;
use crate::groups::{self, Vec6, EDGE_PAIRS};
use crate::mesh::{halfspace_intersection, Halfspace, PolyMesh};
use crate::rotations::{Rotation, SymmetryGroup, Vec3};
use nalgebra::{DMatrix, DVector, Vector2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("input diameter {0} exceeds 1")]
    DiameterExceeded(f64),
    #[error("odd-width function returned a non-finite value")]
    NonFiniteValue,
    #[error("function is not odd: |F(u) + F(-u)| = {0:.3e} at a sampled direction")]
    NotOdd(f64),
    #[error("config requires starts >= 1")]
    BadConfig,
    #[error(
        "no start reached the W-residual tolerance {tol:.1e} (best {best:.3e}); \
         a vanishing rotation exists for every odd function, so this indicates a config problem"
    )]
    NoConvergence { tol: f64, best: f64 },
    #[error(transparent)]
    Body(#[from] crate::bodies::BodyError),
    #[error(transparent)]
    Mesh(#[from] crate::mesh::MeshError),
}

/// Vertices of the regular tetrahedron with unit edge length centered at the
/// origin, and its six edge vectors `u_ij = v_j - v_i` (unit length), in the
/// index order `(12, 13, 14, 23, 24, 34)`.
#[derive(Clone, Debug)]
pub struct TetraFrame {
    pub vertices: [Vec3; 4],
    pub edges: [Vec3; 6],
}

impl TetraFrame {
    pub fn standard() -> Self {
        let scale = (3.0f64 / 8.0).sqrt();
        let unit = groups::tetra_vertices();
        let vertices = [
            unit[0] * scale,
            unit[1] * scale,
            unit[2] * scale,
            unit[3] * scale,
        ];
        let mut edges = [Vec3::zeros(); 6];
        for (k, &(i, j)) in EDGE_PAIRS.iter().enumerate() {
            edges[k] = vertices[j] - vertices[i];
        }
        TetraFrame { vertices, edges }
    }
}

/// The 6-vector `(F0(A u_ij))` over the tetrahedron edges.
pub fn phi<F>(f0: &F, a: &Rotation) -> Result<Vec6, CoverError>
where
    F: Fn(&Vec3) -> f64,
{
    let frame = TetraFrame::standard();
    let mut out = Vec6::zeros();
    for k in 0..6 {
        let val = f0(&a.apply(&frame.edges[k]));
        if !val.is_finite() {
            return Err(CoverError::NonFiniteValue);
        }
        out[k] = val;
    }
    Ok(out)
}

/// Coordinates of `phi` in the orthonormal basis of the invariant
/// complement W; the solver drives this to zero.
pub fn w_residual<F>(f0: &F, a: &Rotation) -> Result<Vec3, CoverError>
where
    F: Fn(&Vec3) -> f64,
{
    let p = phi(f0, a)?;
    let d = groups::vw_decomposition();
    Ok(Vec3::new(
        p.dot(&d.w_basis[0]),
        p.dot(&d.w_basis[1]),
        p.dot(&d.w_basis[2]),
    ))
}

#[derive(Clone, Copy, Debug)]
pub struct CoverConfig {
    pub starts: usize,
    pub seed: u64,
    /// Containment slack: boundary-tight inputs sit exactly on the strip
    /// planes, so the certificate allows this much overshoot.
    pub tol: f64,
    /// Residual norm below which a refined start counts as a zero.
    pub w_tol: f64,
    pub max_iter: usize,
    pub cluster_radius: f64,
}

impl Default for CoverConfig {
    fn default() -> Self {
        CoverConfig {
            starts: 64,
            seed: 0,
            tol: 1e-9,
            w_tol: 1e-8,
            max_iter: 150,
            cluster_radius: 1e-3,
        }
    }
}

/// Placement certificate for `A U + x` covering the input set.
#[derive(Clone, Debug)]
pub struct CoverResult {
    pub rotation: Rotation,
    /// Concurrency point of the six mid-planes.
    pub point: Vec3,
    pub w_residual_norm: f64,
    /// Least-squares defect of the six plane equations; independent of the
    /// W-projection route, though the two agree when the planes concur.
    pub ls_residual: f64,
    pub contained: bool,
    pub max_violation: f64,
    /// Representatives of every solution cluster found (modulo the cover's
    /// rotation group), best first. Completeness is not claimed.
    pub all_rotations: Vec<Rotation>,
    /// True when the zero set fills the rotation group instead of isolating
    /// (symmetric inputs such as a single point).
    pub degenerate: bool,
    pub starts_converged: usize,
    /// Total descent iterations spent across all starts.
    pub iterations_spent: usize,
}

/// Solves for a placement of the width-1 rhombic dodecahedron covering `x`:
/// multistart zero-finding of the W-residual over SO(3), concurrency point
/// by least squares over all six planes, then a containment certificate.
pub fn solve_cover(set: &GeneralSet, config: &CoverConfig) -> Result<CoverResult, CoverError> {
    if config.starts == 0 {
        return Err(CoverError::BadConfig);
    }
    let diameter = set.diameter();
    if diameter > 1.0 + 1e-12 {
        return Err(CoverError::DiameterExceeded(diameter));
    }
    let f0 = |u: &Vec3| set.odd_width(u).unwrap_or(f64::NAN);

    // odd-function guard on a few antipodal pairs
    let mut probe_rng = ChaCha8Rng::seed_from_u64(0x0dd);
    for _ in 0..8 {
        let u = Rotation::sample_uniform(&mut probe_rng).apply(&Vec3::x());
        let s = f0(&u) + f0(&-u);
        if !s.is_finite() {
            return Err(CoverError::NonFiniteValue);
        }
        if s.abs() > 1e-9 {
            return Err(CoverError::NotOdd(s.abs()));
        }
    }

    let frame = TetraFrame::standard();
    let d = groups::vw_decomposition();
    let residual = |a: &Rotation| {
        let mut p = Vec6::zeros();
        for k in 0..6 {
            p[k] = f0(&a.apply(&frame.edges[k]));
        }
        Vec3::new(
            p.dot(&d.w_basis[0]),
            p.dot(&d.w_basis[1]),
            p.dot(&d.w_basis[2]),
        )
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let starts: Vec<Rotation> = (0..config.starts)
        .map(|_| Rotation::sample_uniform(&mut rng))
        .collect();
    let stop_tol = (config.w_tol * 1e-4).clamp(1e-14, 1e-10);
    let outcomes = descent::multistart(&residual, &starts, stop_tol, config.max_iter);
    let iterations_spent = outcomes.iter().map(|o| o.iterations).sum();

    let mut converged: Vec<descent::DescentOutcome> = outcomes
        .iter()
        .copied()
        .filter(|o| o.residual_norm < config.w_tol)
        .collect();
    if converged.is_empty() {
        let best = outcomes
            .iter()
            .map(|o| o.residual_norm)
            .fold(f64::INFINITY, f64::min);
        return Err(CoverError::NoConvergence {
            tol: config.w_tol,
            best,
        });
    }
    let starts_converged = converged.len();
    converged.sort_by(|a, b| {
        a.residual_norm
            .partial_cmp(&b.residual_norm)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.rotation.quaternion_cmp(&b.rotation))
    });

    let group = SymmetryGroup::new(groups::rotation_group()).expect("cube rotations form a group");
    let mut reps: Vec<Rotation> = Vec::new();
    for sol in &converged {
        if !reps
            .iter()
            .any(|r| group.distance(&sol.rotation, r) < config.cluster_radius)
        {
            reps.push(sol.rotation);
        }
    }
    let mut degenerate = false;
    if starts_converged > config.starts / 2 && reps.len() > (starts_converged / 2).max(8) {
        let mut spread: f64 = 0.0;
        for i in 0..reps.len().min(32) {
            for j in (i + 1)..reps.len().min(32) {
                spread = spread.max(group.distance(&reps[i], &reps[j]));
            }
        }
        if spread > 10.0 * config.cluster_radius {
            degenerate = true;
            reps.truncate(1);
        }
    }

    let best = reps[0];
    let (point, ls_residual) = concurrency_point(&f0, &best);
    let (contained, max_violation) = contains(&best, &point, set, config.tol);
    Ok(CoverResult {
        rotation: best,
        point,
        w_residual_norm: residual(&best).norm(),
        ls_residual,
        contained,
        max_violation,
        all_rotations: reps,
        degenerate,
        starts_converged,
        iterations_spent,
    })
}

/// Least-squares solution of the six plane equations
/// `<x, A u_ij> = F0(A u_ij)`, with the residual norm of the system.
fn concurrency_point<F>(f0: &F, a: &Rotation) -> (Vec3, f64)
where
    F: Fn(&Vec3) -> f64,
{
    let frame = TetraFrame::standard();
    let mut m = DMatrix::<f64>::zeros(6, 3);
    let mut b = DVector::<f64>::zeros(6);
    for k in 0..6 {
        let dir = a.apply(&frame.edges[k]);
        for c in 0..3 {
            m[(k, c)] = dir[c];
        }
        b[k] = f0(&dir);
    }
    let svd = m.clone().svd(true, true);
    let x = svd.solve(&b, 1e-12).expect("svd solve");
    let residual = (&m * &x - &b).norm();
    (Vec3::new(x[0], x[1], x[2]), residual)
}

/// Containment check for `A U + x`: the worst overshoot of
/// `|<p - x, A u_ij>|` beyond the strip half-width 1/2, and whether it is
/// within `tol`.
pub fn contains(a: &Rotation, x: &Vec3, set: &GeneralSet, tol: f64) -> (bool, f64) {
    let frame = TetraFrame::standard();
    let mut worst = f64::NEG_INFINITY;
    for p in set.points() {
        let q = p - x;
        for u in &frame.edges {
            let dir = a.apply(u);
            worst = worst.max(q.dot(&dir).abs() - 0.5);
        }
    }
    (worst <= tol, worst)
}

/// The rhombic dodecahedron `A U + x` as a polytope mesh: intersection of
/// the 12 halfspaces `|<p - x, A u_ij>| <= 1/2`. It has 14 vertices, 12
/// rhombic faces, and vertex diameter sqrt(2).
pub fn rd_mesh(a: &Rotation, x: &Vec3) -> PolyMesh {
    let frame = TetraFrame::standard();
    let mut hs = Vec::with_capacity(12);
    for u in &frame.edges {
        let n = a.apply(u);
        hs.push(Halfspace::new(n, 0.5 + n.dot(x)));
        hs.push(Halfspace::new(-n, 0.5 - n.dot(x)));
    }
    halfspace_intersection(&hs).expect("the cover polytope is bounded and nonempty")
}

/// The regular octahedron with opposite-face distance 1 (for the diameter
/// comparison with the cover): intersection of the 4 width-1 strips normal
/// to the tetrahedron vertex directions.
pub fn octahedron_mesh() -> PolyMesh {
    let mut hs = Vec::with_capacity(8);
    for v in groups::tetra_vertices() {
        hs.push(Halfspace::new(v, 0.5));
        hs.push(Halfspace::new(-v, 0.5));
    }
    halfspace_intersection(&hs).expect("octahedron is bounded and nonempty")
}

/// Placement of the width-1 regular hexagon covering a planar set.
#[derive(Clone, Copy, Debug)]
pub struct Cover2d {
    /// Angle of the first strip normal, in `[0, pi/3)`.
    pub angle: f64,
    pub center: Vector2<f64>,
    pub contained: bool,
    pub max_violation: f64,
    /// Number of residual evaluations spent by the bisection.
    pub evaluations: usize,
}

fn support2(points: &[Vector2<f64>], u: &Vector2<f64>) -> f64 {
    points
        .iter()
        .map(|p| p.dot(u))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Covers a planar diameter-1 set by the regular hexagon with opposite-side
/// distance 1: a sign-change bisection over the one-parameter family of
/// strip orientations, looking for three concurrent mid-lines.
pub fn solve_cover_2d(points: &[Vector2<f64>]) -> Result<Cover2d, CoverError> {
    if points.is_empty() {
        return Err(crate::bodies::BodyError::EmptySet.into());
    }
    let mut diameter: f64 = 0.0;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            diameter = diameter.max((points[i] - points[j]).norm());
        }
    }
    if diameter > 1.0 + 1e-12 {
        return Err(CoverError::DiameterExceeded(diameter));
    }

    let mid = |theta: f64| -> (Vector2<f64>, f64) {
        let n = Vector2::new(theta.cos(), theta.sin());
        let m = (support2(points, &n) - support2(points, &-n)) / 2.0;
        (n, m)
    };
    // Concurrency defect of the three mid-lines at angles
    // theta, theta + 60deg, theta + 120deg: the homogeneous determinant.
    let mut evaluations = 0usize;
    let mut residual = |theta: f64| -> f64 {
        evaluations += 1;
        let rows: Vec<(Vector2<f64>, f64)> = (0..3)
            .map(|k| mid(theta + k as f64 * std::f64::consts::FRAC_PI_3))
            .collect();
        let (n0, m0) = rows[0];
        let (n1, m1) = rows[1];
        let (n2, m2) = rows[2];
        n0.x * (n1.y * m2 - n2.y * m1) - n0.y * (n1.x * m2 - n2.x * m1)
            + m0 * (n1.x * n2.y - n2.x * n1.y)
    };

    // The residual flips sign over a 60-degree shift, so a zero exists in
    // [0, pi/3); scan six subintervals for a bracket, then bisect.
    let period = std::f64::consts::FRAC_PI_3;
    let coarse = 6;
    let mut bracket = None;
    let mut prev = residual(0.0);
    for k in 1..=coarse {
        let theta = period * k as f64 / coarse as f64;
        let val = residual(theta);
        if prev == 0.0 {
            bracket = Some((period * (k - 1) as f64 / coarse as f64, theta, prev, val));
            break;
        }
        if prev.signum() != val.signum() {
            bracket = Some((period * (k - 1) as f64 / coarse as f64, theta, prev, val));
            break;
        }
        prev = val;
    }
    let (mut lo, mut hi, mut flo, _fhi) =
        bracket.expect("a sign change exists in every 60-degree window");
    for _ in 0..46 {
        if hi - lo < 1e-13 {
            break;
        }
        let mid_theta = 0.5 * (lo + hi);
        let fm = residual(mid_theta);
        if fm == 0.0 {
            lo = mid_theta;
            hi = mid_theta;
            break;
        }
        if flo.signum() != fm.signum() {
            hi = mid_theta;
        } else {
            lo = mid_theta;
            flo = fm;
        }
    }
    let theta = 0.5 * (lo + hi);

    // center: intersection of the first two mid-lines
    let (n0, m0) = mid(theta);
    let (n1, m1) = mid(theta + period);
    let det = n0.x * n1.y - n0.y * n1.x;
    let center = Vector2::new((m0 * n1.y - m1 * n0.y) / det, (n0.x * m1 - n1.x * m0) / det);

    let mut worst = f64::NEG_INFINITY;
    for k in 0..3 {
        let (n, _) = mid(theta + k as f64 * period);
        for p in points {
            worst = worst.max((p - center).dot(&n).abs() - 0.5);
        }
    }
    Ok(Cover2d {
        angle: theta.rem_euclid(period),
        center,
        contained: worst <= 1e-9,
        max_violation: worst,
        evaluations,
    })
}
