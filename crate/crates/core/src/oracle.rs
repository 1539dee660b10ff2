//! Exact analytic ground truth on ellipsoids and boxes: the quadrics through
//! a box's vertices, enumeration of box inscriptions in a generic ellipsoid,
//! the equalization Jacobian with its transversality certificate, and the
//! perturbed-ellipsoid family that refutes the axis-alignment claim for
//! octahedral vertex sets.

use crate::bodies::Ellipsoid;
use crate::inscribe::{box_vertices, InscribedBox};
use crate::rotations::{Mat3, Rotation, Vec3};
use crate::templates::BoxTemplate;
use nalgebra::{DMatrix, DVector, SMatrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("the eight points do not form a nondegenerate box (nullspace dimension {0})")]
    DegenerateBox(usize),
    #[error("vertex {index} is off the ellipsoid boundary by {deviation:.3e}")]
    OffBoundary { index: usize, deviation: f64 },
    #[error("perturbation must satisfy |eps| <= 0.05, got {0}")]
    PerturbationTooLarge(f64),
    #[error("the five-point conic system is degenerate")]
    ConicDegenerate,
    #[error(transparent)]
    Body(#[from] crate::bodies::BodyError),
}

/// Basis of quadrics `sum a_ij x_i x_j + sum b_i x_i + c = 0` vanishing on a
/// given point set. Coefficients are ordered
/// `(a11, a22, a33, a12, a13, a23, b1, b2, b3, c)`.
#[derive(Clone, Debug)]
pub struct QuadricSolutionSpace {
    pub basis: Vec<[f64; 10]>,
    pub dimension: usize,
}

fn quadric_row(p: &Vec3) -> [f64; 10] {
    [
        p.x * p.x,
        p.y * p.y,
        p.z * p.z,
        p.x * p.y,
        p.x * p.z,
        p.y * p.z,
        p.x,
        p.y,
        p.z,
        1.0,
    ]
}

impl QuadricSolutionSpace {
    /// Evaluates basis quadric `k` at a point.
    pub fn evaluate(&self, k: usize, p: &Vec3) -> f64 {
        let row = quadric_row(p);
        (0..10).map(|i| self.basis[k][i] * row[i]).sum()
    }

    /// Largest cross (`a12, a13, a23`) or linear (`b_i`) coefficient over
    /// the whole basis. For an axis-aligned box this vanishes: each basis
    /// quadric is a combination of `x^2, y^2, z^2, 1` only.
    pub fn max_cross_or_linear_coefficient(&self) -> f64 {
        self.basis
            .iter()
            .flat_map(|q| q[3..9].iter())
            .fold(0.0f64, |acc, c| acc.max(c.abs()))
    }

    /// Re-expresses every basis quadric in coordinates `y = R^T x`
    /// (the frame in which a rotated point set becomes axis-aligned when
    /// `R` is the rotation applied to it).
    pub fn in_rotated_frame(&self, r: &Rotation) -> QuadricSolutionSpace {
        let m = r.matrix();
        let basis = self
            .basis
            .iter()
            .map(|q| {
                // symmetric coefficient matrix of the quadratic part
                let a = Mat3::new(
                    q[0],
                    q[3] / 2.0,
                    q[4] / 2.0,
                    q[3] / 2.0,
                    q[1],
                    q[5] / 2.0,
                    q[4] / 2.0,
                    q[5] / 2.0,
                    q[2],
                );
                let a2 = m.transpose() * a * m;
                let b = Vec3::new(q[6], q[7], q[8]);
                let b2 = m.transpose() * b;
                [
                    a2[(0, 0)],
                    a2[(1, 1)],
                    a2[(2, 2)],
                    2.0 * a2[(0, 1)],
                    2.0 * a2[(0, 2)],
                    2.0 * a2[(1, 2)],
                    b2.x,
                    b2.y,
                    b2.z,
                    q[9],
                ]
            })
            .collect();
        QuadricSolutionSpace {
            basis,
            dimension: self.dimension,
        }
    }
}

/// Nullspace of the 8x10 quadric evaluation matrix on the box vertices.
/// A nondegenerate box yields a 3-dimensional space.
pub fn box_quadric_space(vertices: &[Vec3; 8]) -> Result<QuadricSolutionSpace, OracleError> {
    // Padded square so the decomposition exposes the full right-singular
    // basis, including directions outside the row space.
    let m = DMatrix::from_fn(10, 10, |i, j| {
        if i < 8 {
            quadric_row(&vertices[i])[j]
        } else {
            0.0
        }
    });
    let svd = m.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("svd requested v_t");
    let smax = svd.singular_values[0];
    let mut basis = Vec::new();
    for k in 0..10 {
        if svd.singular_values[k] <= 1e-9 * smax {
            let row = v_t.row(k);
            let mut q = [0.0; 10];
            for j in 0..10 {
                q[j] = row[j];
            }
            basis.push(q);
        }
    }
    let dimension = basis.len();
    if dimension != 3 {
        return Err(OracleError::DegenerateBox(dimension));
    }
    Ok(QuadricSolutionSpace { basis, dimension })
}

/// The enumerated inscriptions of a box template in an ellipsoid with
/// distinct axis coefficients, together with a flag warning that the count
/// collapses when coefficients repeat.
#[derive(Clone, Debug)]
pub struct InscriptionSet {
    pub boxes: Vec<InscribedBox>,
    pub repeated_axes: bool,
}

/// Enumerates the distinct assignments of edge-length classes to coordinate
/// axes: `3! / (n_1! ... n_k!)` of them, where the `n_i` are the ratio
/// multiplicities. Each assignment determines the inscribed box exactly.
pub fn ellipsoid_inscriptions(
    e: &Ellipsoid,
    template: &BoxTemplate,
) -> Result<InscriptionSet, OracleError> {
    let a = e.coeffs();
    let d = template.half_extents();
    let repeated_axes = (0..3).any(|i| {
        (0..3).any(|j| i < j && (a[i] - a[j]).abs() <= 1e-9 * a.iter().cloned().fold(0.0, f64::max))
    });

    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut seen_extents: Vec<[f64; 3]> = Vec::new();
    let mut boxes = Vec::new();
    for p in perms {
        // half-extents along the ellipsoid axes for this assignment
        // (template axis i goes to coordinate axis p[i])
        let mut w = [0.0; 3];
        for i in 0..3 {
            w[p[i]] = d[i];
        }
        if seen_extents
            .iter()
            .any(|s| (0..3).all(|k| (s[k] - w[k]).abs() <= 1e-9))
        {
            continue; // same box: equal template edges swapped
        }
        seen_extents.push(w);

        // rotation with determinant +1 realizing the assignment
        let mut sign = [1.0, 1.0, 1.0];
        let mut m = Mat3::zeros();
        for i in 0..3 {
            m[(p[i], i)] = sign[i];
        }
        if m.determinant() < 0.0 {
            sign[0] = -1.0;
            m = Mat3::zeros();
            for i in 0..3 {
                m[(p[i], i)] = sign[i];
            }
        }
        let rotation = Rotation::from_matrix(&m);

        // scale so a vertex satisfies sum a_i (s w_i)^2 = 1
        let lambda = (a[0] * w[0] * w[0] + a[1] * w[1] * w[1] + a[2] * w[2] * w[2]).sqrt();
        let vertices = box_vertices(template, &rotation, lambda);
        let deviation = vertices
            .iter()
            .map(|v| (e.gauge(v).unwrap_or(f64::NAN) - 1.0).abs())
            .fold(0.0, f64::max);
        boxes.push(InscribedBox {
            template: template.clone(),
            rotation,
            lambda,
            vertices,
            boundary_deviation: deviation,
        });
    }
    Ok(InscriptionSet {
        boxes,
        repeated_axes,
    })
}

/// Derivative of the four quadric values on a face's vertices with respect
/// to the skew chart coordinates at the identity, with rank and the
/// transversality certificate for the diagonal of R^4.
#[derive(Clone, Debug)]
pub struct JacobianReport {
    /// Rows: face vertices; columns: chart coordinates `(a12, a13, a23)`.
    pub jacobian: SMatrix<f64, 4, 3>,
    pub rank: usize,
    /// True iff the column space together with the diagonal direction
    /// spans all of R^4, i.e. the map is full rank and the diagonal meets
    /// its image transversally.
    pub transversal: bool,
}

/// Analytic Jacobian `J[k][(i,j)] = 2 (a_ii - a_jj) x_i x_j` evaluated at the
/// four face vertices of an axis-aligned box inscribed in the ellipsoid.
pub fn knaster_jacobian(
    e: &Ellipsoid,
    face_vertices: &[Vec3; 4],
) -> Result<JacobianReport, OracleError> {
    let a = e.coeffs();
    for (index, v) in face_vertices.iter().enumerate() {
        let q = a[0] * v.x * v.x + a[1] * v.y * v.y + a[2] * v.z * v.z;
        let deviation = (q - 1.0).abs();
        if deviation > 1e-8 {
            return Err(OracleError::OffBoundary { index, deviation });
        }
    }
    let mut j = SMatrix::<f64, 4, 3>::zeros();
    for (k, v) in face_vertices.iter().enumerate() {
        j[(k, 0)] = 2.0 * (a[0] - a[1]) * v.x * v.y;
        j[(k, 1)] = 2.0 * (a[0] - a[2]) * v.x * v.z;
        j[(k, 2)] = 2.0 * (a[1] - a[2]) * v.y * v.z;
    }

    let svd = j.svd(false, false);
    let smax = svd.singular_values[0];
    let rank = if smax <= f64::MIN_POSITIVE {
        0
    } else {
        svd.singular_values
            .iter()
            .filter(|&&s| s > 1e-9 * smax)
            .count()
    };

    // Transversality: [J | 1] must have rank 4.
    let mut aug = SMatrix::<f64, 4, 4>::zeros();
    aug.fixed_view_mut::<4, 3>(0, 0).copy_from(&j);
    for k in 0..4 {
        aug[(k, 3)] = 1.0;
    }
    let aug_svd = aug.svd(false, false);
    let aug_max = aug_svd.singular_values[0];
    let aug_rank = aug_svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-9 * aug_max)
        .count();
    let transversal = rank == 3 && aug_rank == 4;

    Ok(JacobianReport {
        jacobian: j,
        rank,
        transversal,
    })
}

/// The perturbed-ellipsoid family: a centered quadric through the six
/// octahedron points `{x,y,z in {-1,1}, x+y+z in {-1,1}}` that for small
/// nonzero `eps` has three distinct axis lengths yet misses `(1,1,1)`.
#[derive(Clone, Debug)]
pub struct PerturbedQuadric {
    /// Symmetric form `M` of the body `{x : x^T M x <= 1}`.
    pub form: Mat3,
    pub eps: f64,
    /// The six octahedron points the boundary must contain.
    pub octahedron_points: [Vec3; 6],
    /// Worst boundary residual `|x^T M x - 1|` over the six points.
    pub octahedron_residual: f64,
    /// Value of `x^T M x` at `(1,1,1)`; equals 1 exactly when `eps = 0`.
    pub corner_value: f64,
    /// Eigenvalues of `M`, ascending.
    pub eigenvalues: [f64; 3],
}

impl PerturbedQuadric {
    pub fn min_eigenvalue_gap(&self) -> f64 {
        (self.eigenvalues[1] - self.eigenvalues[0]).min(self.eigenvalues[2] - self.eigenvalues[1])
    }

    pub fn corner_excluded(&self) -> bool {
        (self.corner_value - 1.0).abs() > 1e-12
    }

    /// The family member as an [`Ellipsoid`] (diagonal form plus rotation),
    /// when the form is positive definite.
    pub fn ellipsoid(&self) -> Option<Ellipsoid> {
        if self.eigenvalues[0] <= 0.0 {
            return None;
        }
        let eig = self.form.symmetric_eigen();
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
        let coeffs = [
            eig.eigenvalues[order[0]],
            eig.eigenvalues[order[1]],
            eig.eigenvalues[order[2]],
        ];
        let mut r = Mat3::zeros();
        for (col, &k) in order.iter().enumerate() {
            r.set_column(col, &eig.eigenvectors.column(k));
        }
        if r.determinant() < 0.0 {
            let flipped = -r.column(0).clone_owned();
            r.set_column(0, &flipped);
        }
        let e = Ellipsoid::new(coeffs).ok()?;
        Some(e.with_placement(Rotation::from_matrix(&r), Vec3::zeros()))
    }
}

/// Builds the family member for a given perturbation. The construction
/// follows a fixed normalization chain: solve the five-point conic in the
/// plane `z = 1` with unit constant term, lift with `A_i3 = b_i / 2`, pin
/// the lift by `A_33 = -1`, and close with `C = 1 - A_33`. At `eps = 0`
/// this reproduces the generic ellipsoid `x^2/6 + y^2/3 + z^2/2 = 1`.
pub fn eggleston_family(eps: f64) -> Result<PerturbedQuadric, OracleError> {
    if eps.is_nan() || eps.abs() > 0.05 {
        return Err(OracleError::PerturbationTooLarge(eps));
    }
    // Conic a11 x^2 + 2 a12 xy + a22 y^2 + b1 x + b2 y + 1 = 0 through:
    let pts = [
        (-1.0, -1.0),
        (-1.0, 1.0),
        (1.0, -1.0),
        (1.0 + eps, 1.0),
        (3.0f64.sqrt(), 0.0),
    ];
    let mut m = DMatrix::<f64>::zeros(5, 5);
    let mut rhs = DVector::<f64>::zeros(5);
    for (k, (x, y)) in pts.iter().enumerate() {
        m[(k, 0)] = x * x;
        m[(k, 1)] = 2.0 * x * y;
        m[(k, 2)] = y * y;
        m[(k, 3)] = *x;
        m[(k, 4)] = *y;
        rhs[k] = -1.0;
    }
    let lu = m.lu();
    let sol = lu.solve(&rhs).ok_or(OracleError::ConicDegenerate)?;
    let (a11, a12, a22, b1, b2) = (sol[0], sol[1], sol[2], sol[3], sol[4]);

    let a33 = -1.0;
    let c = 1.0 - a33;
    // Quadric sum A_ij x_i x_j + C = 0, i.e. x^T A x = -C; normalize to
    // x^T M x = 1 with M = A / (-C).
    let a_mat = Mat3::new(
        a11,
        a12,
        b1 / 2.0,
        a12,
        a22,
        b2 / 2.0,
        b1 / 2.0,
        b2 / 2.0,
        a33,
    );
    let form = a_mat / (-c);

    let octahedron_points = [
        Vec3::new(1.0, 1.0, -1.0),
        Vec3::new(1.0, -1.0, 1.0),
        Vec3::new(-1.0, 1.0, 1.0),
        Vec3::new(-1.0, -1.0, 1.0),
        Vec3::new(-1.0, 1.0, -1.0),
        Vec3::new(1.0, -1.0, -1.0),
    ];
    let octahedron_residual = octahedron_points
        .iter()
        .map(|p| ((form * p).dot(p) - 1.0).abs())
        .fold(0.0, f64::max);
    let corner = Vec3::new(1.0, 1.0, 1.0);
    let corner_value = (form * corner).dot(&corner);

    let eig = form.symmetric_eigen();
    let mut eigenvalues = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());

    Ok(PerturbedQuadric {
        form,
        eps,
        octahedron_points,
        octahedron_residual,
        corner_value,
        eigenvalues,
    })
}
