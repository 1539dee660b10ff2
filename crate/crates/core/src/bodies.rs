//! Centrally symmetric convex bodies and their derived scalar functions:
//! support function `h`, Minkowski gauge, and the odd half-width
//! `(h(u) - h(-u)) / 2` used by the cover solver.

use crate::rotations::{Mat3, Rotation, Vec3};
use crate::simplex;
use nalgebra::{DMatrix, DVector};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BodyError {
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("ellipsoid coefficients must be positive, got {0}")]
    NonPositiveCoefficient(f64),
    #[error("gauge requires a centrally symmetric body with the origin interior")]
    NotCentrallySymmetric,
    #[error("point cloud must contain at least 3 points spanning 3-space")]
    DegeneratePointCloud,
    #[error("point set must be nonempty")]
    EmptySet,
    #[error("gauge linear program failed: {0}")]
    GaugeProgram(#[from] simplex::SimplexError),
}

/// Anything exposing a support function `h(u) = max <x, u>` over the set.
pub trait SupportFunction {
    /// `h(u)` with `u` trusted to be nonzero.
    fn support_raw(&self, u: &Vec3) -> f64;

    /// `h(u)`, rejecting the zero direction.
    fn support(&self, u: &Vec3) -> Result<f64, BodyError> {
        if u.norm_squared() == 0.0 {
            return Err(BodyError::ZeroDirection);
        }
        Ok(self.support_raw(u))
    }

    /// Odd part of the support function, `(h(u) - h(-u)) / 2`. Odd in `u`
    /// exactly by construction.
    fn odd_width(&self, u: &Vec3) -> Result<f64, BodyError> {
        if u.norm_squared() == 0.0 {
            return Err(BodyError::ZeroDirection);
        }
        Ok((self.support_raw(u) - self.support_raw(&-u)) / 2.0)
    }
}

/// The body `{x : sum_i a_i x_i^2 <= 1}` in its own frame, with an optional
/// rigid placement applied afterwards.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    coeffs: [f64; 3],
    rotation: Rotation,
    center: Vec3,
}

impl Ellipsoid {
    pub fn new(coeffs: [f64; 3]) -> Result<Self, BodyError> {
        for a in coeffs {
            if !a.is_finite() || a <= 0.0 {
                return Err(BodyError::NonPositiveCoefficient(a));
            }
        }
        Ok(Ellipsoid {
            coeffs,
            rotation: Rotation::identity(),
            center: Vec3::zeros(),
        })
    }

    pub fn with_placement(mut self, rotation: Rotation, center: Vec3) -> Self {
        self.rotation = rotation;
        self.center = center;
        self
    }

    pub fn coeffs(&self) -> [f64; 3] {
        self.coeffs
    }

    /// Symmetric matrix `M` of the quadratic form: the body is
    /// `{x : (x - c)^T M (x - c) <= 1}`.
    pub fn quadratic_form(&self) -> Mat3 {
        let r = self.rotation.matrix();
        let d = Mat3::from_diagonal(&Vec3::new(self.coeffs[0], self.coeffs[1], self.coeffs[2]));
        r * d * r.transpose()
    }

    /// Gauge in the body frame (no placement).
    fn gauge_frame(&self, x: &Vec3) -> f64 {
        (self.coeffs[0] * x.x * x.x + self.coeffs[1] * x.y * x.y + self.coeffs[2] * x.z * x.z)
            .sqrt()
    }

    pub fn gauge(&self, x: &Vec3) -> Result<f64, BodyError> {
        if self.center.norm_squared() != 0.0 {
            return Err(BodyError::NotCentrallySymmetric);
        }
        let y = self.rotation.inverse().apply(x);
        Ok(self.gauge_frame(&y))
    }

    /// The boundary point in direction `u` (placement must be centered).
    pub fn boundary_point(&self, u: &Vec3) -> Result<Vec3, BodyError> {
        if u.norm_squared() == 0.0 {
            return Err(BodyError::ZeroDirection);
        }
        let g = self.gauge(u)?;
        Ok(u / g)
    }
}

impl SupportFunction for Ellipsoid {
    fn support_raw(&self, u: &Vec3) -> f64 {
        let v = self.rotation.inverse().apply(u);
        let h =
            (v.x * v.x / self.coeffs[0] + v.y * v.y / self.coeffs[1] + v.z * v.z / self.coeffs[2])
                .sqrt();
        self.center.dot(u) + h
    }
}

/// Convex hull of a finite point list, optionally symmetrized to
/// `conv({+-p_i})`. Only the symmetrized form has a gauge.
#[derive(Clone, Debug)]
pub struct PointCloudBody {
    points: Vec<Vec3>,
    symmetrize: bool,
}

impl PointCloudBody {
    pub fn new(points: Vec<Vec3>, symmetrize: bool) -> Result<Self, BodyError> {
        if points.is_empty() {
            return Err(BodyError::EmptySet);
        }
        if symmetrize {
            // The symmetrized hull has the origin interior iff the points
            // span 3-space.
            let m = DMatrix::from_fn(3, points.len(), |i, j| points[j][i]);
            let svd = m.svd(false, false);
            let smax = svd.singular_values[0];
            if points.len() < 3 || svd.singular_values[2] <= 1e-12 * smax {
                return Err(BodyError::DegeneratePointCloud);
            }
        }
        Ok(PointCloudBody { points, symmetrize })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn symmetrize(&self) -> bool {
        self.symmetrize
    }

    /// Minkowski gauge of the symmetrized hull, via the linear program
    /// `min sum(s + t)` subject to `P s - P t = x`, `s, t >= 0`:
    /// the minimal total weight writing `x` as a signed combination of the
    /// points equals `min { lambda : x in lambda K }`.
    pub fn gauge(&self, x: &Vec3) -> Result<f64, BodyError> {
        if !self.symmetrize {
            return Err(BodyError::NotCentrallySymmetric);
        }
        if x.norm_squared() == 0.0 {
            return Ok(0.0);
        }
        let n = self.points.len();
        let a = DMatrix::from_fn(3, 2 * n, |i, j| {
            if j < n {
                self.points[j][i]
            } else {
                -self.points[j - n][i]
            }
        });
        let b = DVector::from_row_slice(&[x.x, x.y, x.z]);
        let c = DVector::from_element(2 * n, 1.0);
        Ok(simplex::solve_min(&a, &b, &c)?)
    }
}

impl SupportFunction for PointCloudBody {
    fn support_raw(&self, u: &Vec3) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for p in &self.points {
            let d = p.dot(u);
            best = best.max(d);
            if self.symmetrize {
                best = best.max(-d);
            }
        }
        best
    }
}

/// A finite point set, not necessarily symmetric: the input of the cover
/// solver.
#[derive(Clone, Debug)]
pub struct GeneralSet {
    points: Vec<Vec3>,
}

impl GeneralSet {
    pub fn new(points: Vec<Vec3>) -> Result<Self, BodyError> {
        if points.is_empty() {
            return Err(BodyError::EmptySet);
        }
        Ok(GeneralSet { points })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    /// Exact brute-force diameter over all point pairs.
    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                best = best.max((self.points[i] - self.points[j]).norm_squared());
            }
        }
        best.sqrt()
    }

    pub fn translated(&self, t: &Vec3) -> GeneralSet {
        GeneralSet {
            points: self.points.iter().map(|p| p + t).collect(),
        }
    }
}

impl SupportFunction for GeneralSet {
    fn support_raw(&self, u: &Vec3) -> f64 {
        self.points
            .iter()
            .map(|p| p.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// A body usable by the inscription solver (has both support and gauge).
#[derive(Clone, Debug)]
pub enum Body {
    Ellipsoid(Ellipsoid),
    PointCloud(PointCloudBody),
}

impl Body {
    pub fn gauge(&self, x: &Vec3) -> Result<f64, BodyError> {
        match self {
            Body::Ellipsoid(e) => e.gauge(x),
            Body::PointCloud(p) => p.gauge(x),
        }
    }
}

impl SupportFunction for Body {
    fn support_raw(&self, u: &Vec3) -> f64 {
        match self {
            Body::Ellipsoid(e) => e.support_raw(u),
            Body::PointCloud(p) => p.support_raw(u),
        }
    }
}

/// Parsed form of the on-disk body document.
#[derive(Clone, Debug)]
pub enum ParsedInput {
    Body(Body),
    Set(GeneralSet),
}

#[derive(Debug, Error)]
pub enum BodyParseError {
    #[error("invalid body document at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown body type {0:?} (expected \"ellipsoid\", \"pointcloud\", or \"set\")")]
    UnknownType(String),
    #[error("body type {0:?} requires field {1:?}")]
    MissingField(String, &'static str),
    #[error(transparent)]
    Body(#[from] BodyError),
}

#[derive(Deserialize)]
struct BodyDocument {
    #[serde(rename = "type")]
    kind: String,
    coeffs: Option<[f64; 3]>,
    points: Option<Vec<[f64; 3]>>,
    symmetrize: Option<bool>,
}

/// Parses a body specification document:
/// `{"type": "ellipsoid", "coeffs": [a11, a22, a33]}` or
/// `{"type": "pointcloud"|"set", "points": [[x,y,z], ...], "symmetrize": bool}`.
pub fn parse_body_json(text: &str) -> Result<ParsedInput, BodyParseError> {
    let doc: BodyDocument = serde_json::from_str(text).map_err(|e| BodyParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let to_points = |raw: Vec<[f64; 3]>| -> Vec<Vec3> {
        raw.into_iter()
            .map(|p| Vec3::new(p[0], p[1], p[2]))
            .collect()
    };
    match doc.kind.as_str() {
        "ellipsoid" => {
            let coeffs = doc
                .coeffs
                .ok_or_else(|| BodyParseError::MissingField(doc.kind.clone(), "coeffs"))?;
            Ok(ParsedInput::Body(Body::Ellipsoid(Ellipsoid::new(coeffs)?)))
        }
        "pointcloud" => {
            let pts = doc
                .points
                .ok_or_else(|| BodyParseError::MissingField(doc.kind.clone(), "points"))?;
            let body = PointCloudBody::new(to_points(pts), doc.symmetrize.unwrap_or(false))?;
            Ok(ParsedInput::Body(Body::PointCloud(body)))
        }
        "set" => {
            let pts = doc
                .points
                .ok_or_else(|| BodyParseError::MissingField(doc.kind.clone(), "points"))?;
            Ok(ParsedInput::Set(GeneralSet::new(to_points(pts))?))
        }
        other => Err(BodyParseError::UnknownType(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// The generic ellipsoid `x^2/6 + y^2/3 + z^2/2 = 1`, whose boundary
    /// passes through all eight points `(+-1, +-1, +-1)`.
    pub(crate) fn generic_ellipsoid() -> Ellipsoid {
        Ellipsoid::new([1.0 / 6.0, 1.0 / 3.0, 0.5]).unwrap()
    }

    fn unit_tetrahedron() -> GeneralSet {
        let s = (3.0f64 / 8.0).sqrt() / 3.0f64.sqrt();
        GeneralSet::new(vec![
            Vec3::new(s, s, s),
            Vec3::new(s, -s, -s),
            Vec3::new(-s, s, -s),
            Vec3::new(-s, -s, s),
        ])
        .unwrap()
    }

    #[test]
    fn unit_ball_support_is_one() {
        let b = Ellipsoid::new([1.0, 1.0, 1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let u = crate::rotations::Rotation::sample_uniform(&mut rng).apply(&Vec3::x());
            assert_abs_diff_eq!(b.support(&u).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn generic_ellipsoid_support_along_x() {
        let e = generic_ellipsoid();
        assert_abs_diff_eq!(
            e.support(&Vec3::x()).unwrap(),
            6.0f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn tetrahedron_support_along_edges() {
        // For the unit-edge regular tetrahedron centered at the origin,
        // h(v_j - v_i) = <v_j, v_j - v_i> = 3/8 + 1/8 = 1/2.
        let t = unit_tetrahedron();
        let p = t.points().to_vec();
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let u = p[j] - p[i];
                assert_abs_diff_eq!(t.support(&u).unwrap(), 0.5, epsilon = 1e-12);
                assert_abs_diff_eq!(t.odd_width(&u).unwrap(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn support_rejects_zero_direction() {
        let e = generic_ellipsoid();
        assert!(matches!(
            e.support(&Vec3::zeros()),
            Err(BodyError::ZeroDirection)
        ));
    }

    #[test]
    fn gauge_of_origin_is_zero() {
        let e = generic_ellipsoid();
        assert_eq!(e.gauge(&Vec3::zeros()).unwrap(), 0.0);
        let cube = PointCloudBody::new(cube_corners(), true).unwrap();
        assert_eq!(cube.gauge(&Vec3::zeros()).unwrap(), 0.0);
    }

    #[test]
    fn generic_ellipsoid_boundary_through_corner() {
        let e = generic_ellipsoid();
        assert_abs_diff_eq!(
            e.gauge(&Vec3::new(1.0, 1.0, 1.0)).unwrap(),
            1.0,
            epsilon = 1e-14
        );
    }

    fn cube_corners() -> Vec<Vec3> {
        let mut v = Vec::new();
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    v.push(Vec3::new(sx, sy, sz));
                }
            }
        }
        v
    }

    #[test]
    fn cube_gauge_matches_max_norm() {
        let body = PointCloudBody::new(cube_corners(), true).unwrap();
        assert_abs_diff_eq!(
            body.gauge(&Vec3::new(2.0, 0.0, 0.0)).unwrap(),
            2.0,
            epsilon = 1e-9
        );
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..25 {
            let x = Vec3::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            let expected = x.x.abs().max(x.y.abs()).max(x.z.abs());
            assert_abs_diff_eq!(body.gauge(&x).unwrap(), expected, epsilon = 1e-8);
        }
    }

    #[test]
    fn octahedron_gauge_matches_one_norm() {
        let pts = vec![Vec3::x(), Vec3::y(), Vec3::z()];
        let body = PointCloudBody::new(pts, true).unwrap();
        let x = Vec3::new(0.3, -0.2, 0.4);
        assert_abs_diff_eq!(body.gauge(&x).unwrap(), 0.9, epsilon = 1e-9);
    }

    #[test]
    fn gauge_requires_symmetrization() {
        let body = PointCloudBody::new(cube_corners(), false).unwrap();
        assert!(matches!(
            body.gauge(&Vec3::x()),
            Err(BodyError::NotCentrallySymmetric)
        ));
    }

    #[test]
    fn degenerate_cloud_is_rejected() {
        let planar = vec![Vec3::x(), Vec3::y(), Vec3::new(1.0, 1.0, 0.0)];
        assert!(matches!(
            PointCloudBody::new(planar, true),
            Err(BodyError::DegeneratePointCloud)
        ));
    }

    #[test]
    fn lp_gauge_matches_analytic_gauge_on_sampled_ellipsoid() {
        // Sample the generic ellipsoid boundary densely and compare the
        // polytope gauge against the analytic one.
        let e = generic_ellipsoid();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut pts = Vec::new();
        for _ in 0..2000 {
            let u = crate::rotations::Rotation::sample_uniform(&mut rng).apply(&Vec3::x());
            pts.push(e.boundary_point(&u).unwrap());
        }
        let cloud = PointCloudBody::new(pts, true).unwrap();
        for _ in 0..10 {
            let x = Vec3::new(
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
            );
            let lp = cloud.gauge(&x).unwrap();
            let exact = e.gauge(&x).unwrap();
            assert!(
                (lp - exact).abs() < 5e-2,
                "lp {lp} vs analytic {exact} at {x:?}"
            );
            // The sampled hull is inscribed, so its gauge dominates.
            assert!(lp >= exact - 1e-9);
        }
    }

    #[test]
    fn placed_ellipsoid_support_and_gauge() {
        // support of R(E) + c is <c, u> + h(R^-1 u); gauge only transforms
        let e = generic_ellipsoid();
        let r = crate::rotations::Rotation::from_axis_angle(&Vec3::new(1.0, -2.0, 0.5), 0.8);
        let c = Vec3::new(0.4, -0.1, 0.3);
        let placed = generic_ellipsoid().with_placement(r, c);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let u = crate::rotations::Rotation::sample_uniform(&mut rng).apply(&Vec3::x());
            // oracle: maximize <x, u> over sampled boundary points of R(E)+c
            let mut best = f64::NEG_INFINITY;
            for _ in 0..4000 {
                let d = crate::rotations::Rotation::sample_uniform(&mut rng).apply(&Vec3::x());
                let p = r.apply(&e.boundary_point(&d).unwrap()) + c;
                best = best.max(p.dot(&u));
            }
            let h = placed.support(&u).unwrap();
            assert!(h >= best - 1e-9, "support below a boundary point");
            // sampling the boundary undershoots the true maximum
            // quadratically in the nearest sample angle
            assert!(h - best < 3e-2, "support {h} far above sampled max {best}");
        }
        // centered placement keeps the gauge; offset placement rejects it
        let rotated = generic_ellipsoid().with_placement(r, Vec3::zeros());
        let x = Vec3::new(0.3, 0.8, -0.4);
        let expected = e.gauge(&r.inverse().apply(&x)).unwrap();
        assert_abs_diff_eq!(rotated.gauge(&x).unwrap(), expected, epsilon = 1e-12);
        assert!(matches!(
            placed.gauge(&x),
            Err(BodyError::NotCentrallySymmetric)
        ));
    }

    #[test]
    fn diameter_cases() {
        let single = GeneralSet::new(vec![Vec3::new(0.3, 0.1, -0.2)]).unwrap();
        assert_eq!(single.diameter(), 0.0);
        let pair = GeneralSet::new(vec![Vec3::zeros(), Vec3::x()]).unwrap();
        assert_abs_diff_eq!(pair.diameter(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn odd_width_vanishes_on_symmetric_bodies() {
        let e = generic_ellipsoid();
        let cube = PointCloudBody::new(cube_corners(), true).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..30 {
            let u = crate::rotations::Rotation::sample_uniform(&mut rng).apply(&Vec3::x());
            assert_eq!(e.odd_width(&u).unwrap(), 0.0);
            assert_eq!(cube.odd_width(&u).unwrap(), 0.0);
        }
    }

    #[test]
    fn single_point_odd_width_is_linear() {
        let p = Vec3::new(0.2, -0.1, 0.4);
        let s = GeneralSet::new(vec![p]).unwrap();
        let u = Vec3::new(0.5, 1.0, -2.0);
        assert_abs_diff_eq!(s.odd_width(&u).unwrap(), p.dot(&u), epsilon = 1e-15);
    }

    #[test]
    fn parse_body_documents() {
        let e = parse_body_json(r#"{"type":"ellipsoid","coeffs":[0.5,1.0,1.5]}"#).unwrap();
        assert!(matches!(e, ParsedInput::Body(Body::Ellipsoid(_))));
        let p = parse_body_json(
            r#"{"type":"pointcloud","points":[[1,0,0],[0,1,0],[0,0,1]],"symmetrize":true}"#,
        )
        .unwrap();
        assert!(matches!(p, ParsedInput::Body(Body::PointCloud(_))));
        let s = parse_body_json(r#"{"type":"set","points":[[0,0,0]]}"#).unwrap();
        assert!(matches!(s, ParsedInput::Set(_)));

        let bad = parse_body_json("{\n  \"type\": oops\n}");
        match bad {
            Err(BodyParseError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(
            parse_body_json(r#"{"type":"unknown"}"#),
            Err(BodyParseError::UnknownType(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn support_is_positively_homogeneous(seed in 0u64..500, lambda in 0.01f64..10.0) {
            let e = generic_ellipsoid();
            let u = crate::rotations::Rotation::sample_uniform(
                &mut ChaCha8Rng::seed_from_u64(seed)).apply(&Vec3::x());
            let lhs = e.support(&(u * lambda)).unwrap();
            let rhs = lambda * e.support(&u).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
        }

        #[test]
        fn width_of_diameter_one_set_is_bounded(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pts = Vec::new();
            for _ in 0..40 {
                let v = Vec3::new(
                    rng.random_range(-0.5..0.5),
                    rng.random_range(-0.5..0.5),
                    rng.random_range(-0.5..0.5),
                );
                // keep inside a ball of radius 1/2 so the diameter is <= 1
                if v.norm() <= 0.5 { pts.push(v); }
            }
            prop_assume!(!pts.is_empty());
            let s = GeneralSet::new(pts).unwrap();
            prop_assert!(s.diameter() <= 1.0 + 1e-12);
            let u = crate::rotations::Rotation::sample_uniform(&mut rng).apply(&Vec3::x());
            let width = s.support(&u).unwrap() + s.support(&-u).unwrap();
            prop_assert!(width >= -1e-12);
            prop_assert!(width <= u.norm() + 1e-9);
        }

        #[test]
        fn gauge_is_a_norm_on_the_sampled_cube(sx in -1.0f64..1.0, sy in -1.0f64..1.0, sz in -1.0f64..1.0,
                                               tx in -1.0f64..1.0, ty in -1.0f64..1.0, tz in -1.0f64..1.0,
                                               lambda in 0.0f64..3.0) {
            let body = PointCloudBody::new(cube_corners(), true).unwrap();
            let x = Vec3::new(sx, sy, sz);
            let y = Vec3::new(tx, ty, tz);
            let gx = body.gauge(&x).unwrap();
            let gy = body.gauge(&y).unwrap();
            let gxy = body.gauge(&(x + y)).unwrap();
            prop_assert!(gxy <= gx + gy + 1e-8);
            let glx = body.gauge(&(x * lambda)).unwrap();
            prop_assert!((glx - lambda * gx).abs() < 1e-8);
            // absolute homogeneity: gauge(-x) = gauge(x)
            let gnx = body.gauge(&(-x)).unwrap();
            prop_assert!((gnx - gx).abs() < 1e-8);
        }

        #[test]
        fn ellipsoid_gauge_boundary_consistency(seed in 0u64..300) {
            let e = generic_ellipsoid();
            let u = crate::rotations::Rotation::sample_uniform(
                &mut ChaCha8Rng::seed_from_u64(seed)).apply(&Vec3::x());
            let p = e.boundary_point(&u).unwrap();
            let q = p.x * p.x / 6.0 + p.y * p.y / 3.0 + p.z * p.z / 2.0;
            prop_assert!((q - 1.0).abs() < 1e-10);
        }
    }
}
