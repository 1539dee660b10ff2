//! Parametrization, sampling, and local calculus on SO(3).
//!
//! Rotations are stored as unit quaternions and canonicalized so that the
//! first nonzero component of `(w, x, y, z)` is positive, which resolves the
//! double-cover ambiguity `q ~ -q` and makes equality tests deterministic.
//! The 3x3 orthogonal matrix is derived on demand.

use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Components below this magnitude count as zero when canonicalizing
/// the quaternion sign.
const SIGN_EPS: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum RotationError {
    #[error("quaternion norm {0} is too small to normalize")]
    DegenerateQuaternion(f64),
    #[error("symmetry set is not closed under composition (worst gap {gap:.3e} at pair {i},{j})")]
    NotAGroup { i: usize, j: usize, gap: f64 },
    #[error("symmetry set is empty")]
    EmptyGroup,
}

/// Element of SO(3), canonically stored as a unit quaternion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation {
    q: UnitQuaternion<f64>,
}

impl Rotation {
    pub fn identity() -> Self {
        Rotation {
            q: UnitQuaternion::identity(),
        }
    }

    /// Builds a rotation from quaternion components `(w, x, y, z)`,
    /// normalizing to unit length.
    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Result<Self, RotationError> {
        let q = Quaternion::new(w, x, y, z);
        let n = q.norm();
        if !n.is_finite() || n < 1e-150 {
            return Err(RotationError::DegenerateQuaternion(n));
        }
        Ok(Self::from_unit_quaternion(UnitQuaternion::from_quaternion(
            q,
        )))
    }

    pub fn from_unit_quaternion(q: UnitQuaternion<f64>) -> Self {
        Rotation { q }.canonicalized()
    }

    /// Converts an orthogonal matrix with det +1. The input is trusted to be
    /// special orthogonal up to roundoff; no projection is performed.
    pub fn from_matrix(m: &Mat3) -> Self {
        let r = nalgebra::Rotation3::from_matrix_unchecked(*m);
        Self::from_unit_quaternion(UnitQuaternion::from_rotation_matrix(&r))
    }

    pub fn from_axis_angle(axis: &Vec3, angle: f64) -> Self {
        Self::from_unit_quaternion(UnitQuaternion::from_scaled_axis(axis.normalize() * angle))
    }

    fn canonicalized(self) -> Self {
        let q = self.q.quaternion();
        let comps = [q.w, q.i, q.j, q.k];
        for c in comps {
            if c.abs() > SIGN_EPS {
                if c < 0.0 {
                    return Rotation {
                        q: UnitQuaternion::new_unchecked(-q),
                    };
                }
                break;
            }
        }
        self
    }

    /// Quaternion components `(w, x, y, z)` in canonical sign.
    pub fn quaternion(&self) -> [f64; 4] {
        let q = self.q.quaternion();
        [q.w, q.i, q.j, q.k]
    }

    /// The derived 3x3 special orthogonal matrix.
    pub fn matrix(&self) -> Mat3 {
        self.q.to_rotation_matrix().into_inner()
    }

    /// Applies the rotation to a vector.
    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.q * v
    }

    pub fn inverse(&self) -> Self {
        Self::from_unit_quaternion(self.q.inverse())
    }

    /// Composition: `(a.compose(b)).apply(v) == a.apply(b.apply(v))`.
    pub fn compose(&self, other: &Rotation) -> Self {
        Self::from_unit_quaternion(self.q * other.q)
    }

    /// Rotation angle in `[0, pi]`.
    pub fn angle(&self) -> f64 {
        self.q.angle()
    }

    /// Bi-invariant geodesic distance: the angle of `self^-1 * other`.
    pub fn geodesic_distance(&self, other: &Rotation) -> f64 {
        (self.q.inverse() * other.q).angle()
    }

    /// Chart inverse of [`exp`]: the tangent vector `t` with
    /// `exp(t) == self` and `|t| <= pi`.
    pub fn log(&self) -> TangentVector {
        TangentVector::from_axis(&self.q.scaled_axis())
    }

    /// Haar-uniform random rotation: a normalized 4-dimensional Gaussian
    /// quaternion. Deterministic for a fixed generator state.
    pub fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let w: f64 = rng.sample(StandardNormal);
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            let z: f64 = rng.sample(StandardNormal);
            let n = (w * w + x * x + y * y + z * z).sqrt();
            if n > 1e-6 {
                return Self::from_unit_quaternion(UnitQuaternion::new_unchecked(Quaternion::new(
                    w / n,
                    x / n,
                    y / n,
                    z / n,
                )));
            }
        }
    }

    /// Lexicographic comparison of canonical quaternion components,
    /// used for deterministic tie-breaking.
    pub fn quaternion_cmp(&self, other: &Rotation) -> std::cmp::Ordering {
        let a = self.quaternion();
        let b = other.quaternion();
        for k in 0..4 {
            match a[k].partial_cmp(&b[k]) {
                Some(std::cmp::Ordering::Equal) | None => continue,
                Some(ord) => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl std::ops::Mul for Rotation {
    type Output = Rotation;
    fn mul(self, rhs: Rotation) -> Rotation {
        self.compose(&rhs)
    }
}

/// Coordinates `(a12, a13, a23)` of a skew-symmetric 3x3 matrix, the tangent
/// space of SO(3) at the identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector {
    pub a12: f64,
    pub a13: f64,
    pub a23: f64,
}

impl TangentVector {
    pub fn new(a12: f64, a13: f64, a23: f64) -> Self {
        TangentVector { a12, a13, a23 }
    }

    pub fn zero() -> Self {
        TangentVector::new(0.0, 0.0, 0.0)
    }

    /// The skew matrix `S` with `S[0][1] = a12`, `S[0][2] = a13`,
    /// `S[1][2] = a23` and `S = -S^T`.
    pub fn skew_matrix(&self) -> Mat3 {
        Mat3::new(
            0.0, self.a12, self.a13, //
            -self.a12, 0.0, self.a23, //
            -self.a13, -self.a23, 0.0,
        )
    }

    /// Axis-angle vector `w` with `S(t) v = w x v`.
    pub fn to_axis(&self) -> Vec3 {
        Vec3::new(-self.a23, self.a13, -self.a12)
    }

    pub fn from_axis(w: &Vec3) -> Self {
        TangentVector::new(-w.z, w.y, -w.x)
    }

    pub fn norm(&self) -> f64 {
        (self.a12 * self.a12 + self.a13 * self.a13 + self.a23 * self.a23).sqrt()
    }
}

/// Exponential chart: the rotation with matrix `exp(S(t))`.
pub fn exp(t: &TangentVector) -> Rotation {
    Rotation::from_unit_quaternion(UnitQuaternion::from_scaled_axis(t.to_axis()))
}

/// A finite subgroup of SO(3), validated to be closed under composition.
/// Used for clustering solver output modulo a template's symmetries.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    elements: Vec<Rotation>,
}

impl SymmetryGroup {
    /// Validates closure under composition within `1e-9` geodesic distance.
    pub fn new(elements: Vec<Rotation>) -> Result<Self, RotationError> {
        if elements.is_empty() {
            return Err(RotationError::EmptyGroup);
        }
        for (i, g) in elements.iter().enumerate() {
            for (j, h) in elements.iter().enumerate() {
                let gh = g.compose(h);
                let gap = elements
                    .iter()
                    .map(|k| gh.geodesic_distance(k))
                    .fold(f64::INFINITY, f64::min);
                if gap > 1e-9 {
                    return Err(RotationError::NotAGroup { i, j, gap });
                }
            }
        }
        Ok(SymmetryGroup { elements })
    }

    pub fn elements(&self) -> &[Rotation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `min_g angle(r1, r2 * g)`: geodesic distance between the right cosets.
    pub fn distance(&self, r1: &Rotation, r2: &Rotation) -> f64 {
        self.elements
            .iter()
            .map(|g| r1.geodesic_distance(&r2.compose(g)))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Geodesic distance between `r1` and `r2` modulo right multiplication by
/// the finite group `g`. Errors if `g` is not closed under composition.
pub fn quotient_distance(
    r1: &Rotation,
    r2: &Rotation,
    g: &[Rotation],
) -> Result<f64, RotationError> {
    let group = SymmetryGroup::new(g.to_vec())?;
    Ok(group.distance(r1, r2))
}
