//! Box vertex templates inscribed in the unit sphere and their rotation
//! symmetry groups.
//!
//! A template is the canonical axis-aligned representative; rotated copies
//! are always produced by a solver rotation, never stored here.

use crate::rotations::{Mat3, Rotation, Vec3};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("edge ratios must be positive, got ({0}, {1}, {2})")]
    NonPositiveRatio(f64, f64, f64),
    #[error("edge ratios must be finite, got ({0}, {1}, {2})")]
    NonFiniteRatio(f64, f64, f64),
}

/// Multiplicity class of the edge lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxClass {
    Cube,
    SquareBased,
    General,
}

impl std::fmt::Display for BoxClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoxClass::Cube => write!(f, "cube"),
            BoxClass::SquareBased => write!(f, "square-based"),
            BoxClass::General => write!(f, "general"),
        }
    }
}

/// One face's four unit vertex directions of a box inscribed in the unit
/// sphere, in cyclic order, plus the normalized edge-ratio class.
#[derive(Clone, Debug)]
pub struct BoxTemplate {
    vertices: [Vec3; 4],
    ratios: [f64; 3],
    class: BoxClass,
}

const RATIO_EPS: f64 = 1e-9;

impl BoxTemplate {
    /// Axis-aligned box with half-edges proportional to `(a1, a2, a3)`,
    /// scaled so all eight vertices lie on the unit sphere. The stored
    /// ratios are sorted ascending; the four returned vertices are the face
    /// with positive third coordinate, in cyclic order.
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self, TemplateError> {
        if !(a1.is_finite() && a2.is_finite() && a3.is_finite()) {
            return Err(TemplateError::NonFiniteRatio(a1, a2, a3));
        }
        if a1 <= 0.0 || a2 <= 0.0 || a3 <= 0.0 {
            return Err(TemplateError::NonPositiveRatio(a1, a2, a3));
        }
        let mut r = [a1, a2, a3];
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        let d = [r[0] / norm, r[1] / norm, r[2] / norm];

        let eq01 = (d[1] - d[0]).abs() <= RATIO_EPS;
        let eq12 = (d[2] - d[1]).abs() <= RATIO_EPS;
        let class = match (eq01, eq12) {
            (true, true) => BoxClass::Cube,
            (false, false) => BoxClass::General,
            _ => BoxClass::SquareBased,
        };

        let vertices = [
            Vec3::new(d[0], d[1], d[2]),
            Vec3::new(-d[0], d[1], d[2]),
            Vec3::new(-d[0], -d[1], d[2]),
            Vec3::new(d[0], -d[1], d[2]),
        ];
        Ok(BoxTemplate {
            vertices,
            ratios: d,
            class,
        })
    }

    pub fn cube() -> Self {
        BoxTemplate::new(1.0, 1.0, 1.0).expect("cube ratios are valid")
    }

    /// Square-based box with height-to-base-edge ratio `rho`.
    pub fn square_based(rho: f64) -> Result<Self, TemplateError> {
        BoxTemplate::new(1.0, 1.0, rho)
    }

    /// The four face vertices in cyclic order.
    pub fn vertices(&self) -> &[Vec3; 4] {
        &self.vertices
    }

    /// All eight vertices `{+-v_i}`.
    pub fn all_vertices(&self) -> [Vec3; 8] {
        let v = &self.vertices;
        [v[0], v[1], v[2], v[3], -v[0], -v[1], -v[2], -v[3]]
    }

    /// Normalized half-edge lengths, ascending.
    pub fn half_extents(&self) -> [f64; 3] {
        self.ratios
    }

    pub fn class(&self) -> BoxClass {
        self.class
    }

    /// All rotations mapping the vertex set `{+-v_i}` onto itself:
    /// 24 for a cube, 8 for a square-based box, 4 for a generic box.
    /// Found by exhaustive search over the 24 signed coordinate
    /// permutations with determinant +1.
    pub fn symmetry_group(&self) -> Vec<Rotation> {
        let d = &self.ratios;
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::new();
        for p in perms {
            // A signed permutation preserves the vertex set iff the extents
            // match along every permuted axis.
            if (0..3).any(|i| (d[p[i]] - d[i]).abs() > RATIO_EPS * d[2]) {
                continue;
            }
            let perm_sign = permutation_sign(&p);
            for signs in 0..8u8 {
                let s = [
                    if signs & 1 == 0 { 1.0 } else { -1.0 },
                    if signs & 2 == 0 { 1.0 } else { -1.0 },
                    if signs & 4 == 0 { 1.0 } else { -1.0 },
                ];
                if perm_sign * s[0] * s[1] * s[2] < 0.0 {
                    continue; // det -1
                }
                // Column i is s[i] * e_{p[i]}: maps axis i to axis p[i].
                let mut m = Mat3::zeros();
                for i in 0..3 {
                    m[(p[i], i)] = s[i];
                }
                out.push(Rotation::from_matrix(&m));
            }
        }
        out.sort_by(|a, b| a.quaternion_cmp(b));
        out
    }
}

fn permutation_sign(p: &[usize; 3]) -> f64 {
    let mut inversions = 0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
