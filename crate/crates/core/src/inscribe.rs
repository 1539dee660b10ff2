//! The rotation-equalization solver: find `A` in SO(3) making an even
//! function take a common value on a box template's vertex orbit, and the
//! reduction that inscribes boxes into symmetric bodies and star-shaped
//! surfaces.

use crate::bodies::Body;
use crate::descent;
use crate::rotations::{Rotation, SymmetryGroup, Vec3};
use crate::templates::BoxTemplate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InscribeError {
    #[error("objective returned a non-finite value at a sampled rotation")]
    NonFiniteValue,
    #[error("config requires starts >= 1 and tol > 0")]
    BadConfig,
    #[error("surface function must be positive, got {0} at a sampled direction")]
    NonPositiveSurface(f64),
    #[error("body has no gauge: {0}")]
    Body(#[from] crate::bodies::BodyError),
    #[error(
        "no start converged below tol {tol:.1e} (best residual {best:.3e} over {starts} starts); \
         the equalizing rotation exists for every even function, so this indicates a config or \
         body-specification problem"
    )]
    NoSolution { tol: f64, best: f64, starts: usize },
}

/// Orthonormal basis of the complement of the diagonal of R^4, fixed once so
/// residual coordinates are reproducible.
const DIAG_COMPLEMENT: [[f64; 4]; 3] = [
    [
        std::f64::consts::FRAC_1_SQRT_2,
        -std::f64::consts::FRAC_1_SQRT_2,
        0.0,
        0.0,
    ],
    [
        0.408_248_290_463_863,
        0.408_248_290_463_863,
        -0.816_496_580_927_726,
        0.0,
    ],
    [
        0.288_675_134_594_812_9,
        0.288_675_134_594_812_9,
        0.288_675_134_594_812_9,
        -0.866_025_403_784_438_6,
    ],
];

/// Solver parameters. `tol` is the residual norm below which a refined start
/// counts as a solution; `cluster_radius` is the quotient distance merging
/// solutions that differ by a template symmetry.
#[derive(Clone, Copy, Debug)]
pub struct SolveConfig {
    pub starts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
    pub cluster_radius: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            starts: 256,
            seed: 0,
            tol: 1e-9,
            max_iter: 120,
            cluster_radius: 1e-3,
        }
    }
}

/// One cluster representative: a rotation equalizing the four sampled
/// values, together with its certificate data.
#[derive(Clone, Copy, Debug)]
pub struct KnasterSolution {
    pub rotation: Rotation,
    /// The four values `F(A v_i)`.
    pub values: [f64; 4],
    /// Their common value (mean).
    pub lambda: f64,
    /// Norm of the projection of `values` onto the complement of the
    /// diagonal; zero iff all four values are equal.
    pub residual: f64,
}

/// Full multistart outcome with diagnostics. An empty cluster list is not an
/// error by itself; `starts_converged` distinguishes "nothing found" from
/// solver failure.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub clusters: Vec<KnasterSolution>,
    /// Number of converged starts merged into each cluster.
    pub cluster_sizes: Vec<usize>,
    /// Set when more than half the starts converge but the solutions fill
    /// the rotation group instead of isolating: the cluster count is then
    /// meaningless and a single representative is reported.
    pub degenerate: bool,
    pub starts_converged: usize,
    pub starts_total: usize,
    /// Total descent iterations spent across all starts.
    pub iterations_spent: usize,
}

/// Projection of `(F(A v_1), ..., F(A v_4))` onto the fixed orthonormal
/// basis of the diagonal's complement. Zero iff all four values are equal.
pub fn knaster_residual<F>(
    f: &F,
    template: &BoxTemplate,
    a: &Rotation,
) -> Result<Vec3, InscribeError>
where
    F: Fn(&Vec3) -> f64,
{
    let values = sample_values(f, template, a)?;
    Ok(project_residual(&values))
}

fn sample_values<F>(f: &F, template: &BoxTemplate, a: &Rotation) -> Result<[f64; 4], InscribeError>
where
    F: Fn(&Vec3) -> f64,
{
    let mut values = [0.0; 4];
    for (k, v) in template.vertices().iter().enumerate() {
        let val = f(&a.apply(v));
        if !val.is_finite() {
            return Err(InscribeError::NonFiniteValue);
        }
        values[k] = val;
    }
    Ok(values)
}

fn project_residual(values: &[f64; 4]) -> Vec3 {
    let mut r = Vec3::zeros();
    for (k, basis) in DIAG_COMPLEMENT.iter().enumerate() {
        r[k] = (0..4).map(|i| values[i] * basis[i]).sum();
    }
    r
}

/// Multistart solve from Haar-random starts drawn from `config.seed`.
/// Clusters are whatever the starts found; completeness of the solution
/// list is not claimed.
pub fn solve_knaster<F>(
    f: &F,
    template: &BoxTemplate,
    config: &SolveConfig,
) -> Result<SolveReport, InscribeError>
where
    F: Fn(&Vec3) -> f64 + Sync,
{
    if config.starts == 0 || !config.tol.is_finite() || config.tol <= 0.0 {
        return Err(InscribeError::BadConfig);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let starts: Vec<Rotation> = (0..config.starts)
        .map(|_| Rotation::sample_uniform(&mut rng))
        .collect();
    solve_knaster_with_starts(f, template, &starts, config)
}

/// Multistart solve from explicit starting rotations.
pub fn solve_knaster_with_starts<F>(
    f: &F,
    template: &BoxTemplate,
    starts: &[Rotation],
    config: &SolveConfig,
) -> Result<SolveReport, InscribeError>
where
    F: Fn(&Vec3) -> f64 + Sync,
{
    if starts.is_empty() || !config.tol.is_finite() || config.tol <= 0.0 {
        return Err(InscribeError::BadConfig);
    }
    // Probe the objective once so non-finite functions fail loudly.
    sample_values(f, template, &starts[0])?;

    let residual = |a: &Rotation| {
        let mut values = [0.0; 4];
        for (k, v) in template.vertices().iter().enumerate() {
            values[k] = f(&a.apply(v));
        }
        project_residual(&values)
    };
    // Refine well below the acceptance tolerance so clustering sees
    // tightly-resolved solutions.
    let stop_tol = (config.tol * 1e-4).clamp(1e-14, 1e-10);
    let outcomes = descent::multistart(&residual, starts, stop_tol, config.max_iter);
    let iterations_spent = outcomes.iter().map(|o| o.iterations).sum();

    let mut solutions: Vec<descent::DescentOutcome> = outcomes
        .iter()
        .copied()
        .filter(|o| o.residual_norm < config.tol)
        .collect();
    let starts_converged = solutions.len();
    solutions.sort_by(|a, b| {
        a.residual_norm
            .partial_cmp(&b.residual_norm)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.rotation.quaternion_cmp(&b.rotation))
    });

    let group =
        SymmetryGroup::new(template.symmetry_group()).expect("template symmetries form a group");
    let mut reps: Vec<descent::DescentOutcome> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    for sol in &solutions {
        match reps
            .iter()
            .position(|r| group.distance(&sol.rotation, &r.rotation) < config.cluster_radius)
        {
            Some(k) => sizes[k] += 1,
            None => {
                reps.push(*sol);
                sizes.push(1);
            }
        }
    }

    // A continuum of solutions (sphere-like body): most starts converge yet
    // almost every one lands in its own cluster, spread across SO(3).
    let mut degenerate = false;
    if starts_converged > starts.len() / 2 && reps.len() > (starts_converged / 2).max(8) {
        let mut spread: f64 = 0.0;
        for i in 0..reps.len().min(32) {
            for j in (i + 1)..reps.len().min(32) {
                spread = spread.max(group.distance(&reps[i].rotation, &reps[j].rotation));
            }
        }
        if spread > 10.0 * config.cluster_radius {
            degenerate = true;
            let merged: usize = sizes.iter().sum();
            reps.truncate(1);
            sizes = vec![merged];
        }
    }

    let clusters = reps
        .iter()
        .map(|r| {
            let values = sample_values(f, template, &r.rotation)?;
            let lambda = values.iter().sum::<f64>() / 4.0;
            Ok(KnasterSolution {
                rotation: r.rotation,
                values,
                lambda,
                residual: r.residual_norm,
            })
        })
        .collect::<Result<Vec<_>, InscribeError>>()?;

    Ok(SolveReport {
        clusters,
        cluster_sizes: sizes,
        degenerate,
        starts_converged,
        starts_total: starts.len(),
        iterations_spent,
    })
}

/// A box inscribed in a body or surface: vertices `lambda^-1 A (+-v_i)`.
#[derive(Clone, Debug)]
pub struct InscribedBox {
    pub template: BoxTemplate,
    pub rotation: Rotation,
    /// Scale divisor: the common gauge value of the rotated template
    /// vertices (for surfaces, the reciprocal of the common radial value).
    pub lambda: f64,
    pub vertices: [Vec3; 8],
    /// Certificate: worst deviation of the vertices from the boundary
    /// (gauge distance for bodies, radial distance for surfaces).
    pub boundary_deviation: f64,
}

/// The eight vertices `lambda^-1 A (+-v_i)` of a placed template copy.
pub fn box_vertices(template: &BoxTemplate, rotation: &Rotation, lambda: f64) -> [Vec3; 8] {
    let mut out = [Vec3::zeros(); 8];
    for (k, v) in template.all_vertices().iter().enumerate() {
        out[k] = rotation.apply(v) / lambda;
    }
    out
}

/// Inscribes a box similar to `template` into a centrally symmetric body by
/// equalizing the Minkowski gauge on the rotated vertex orbit.
pub fn inscribe_box(
    body: &Body,
    template: &BoxTemplate,
    config: &SolveConfig,
) -> Result<InscribedBox, InscribeError> {
    // Fails fast when the body has no gauge (asymmetric cloud, offset
    // placement).
    body.gauge(&Vec3::x())?;
    let f = |u: &Vec3| body.gauge(u).unwrap_or(f64::NAN);
    let report = solve_knaster(&f, template, config)?;
    let best = report.clusters.first().ok_or(InscribeError::NoSolution {
        tol: config.tol,
        best: f64::INFINITY,
        starts: report.starts_total,
    })?;
    let vertices = box_vertices(template, &best.rotation, best.lambda);
    let deviation = vertices
        .iter()
        .map(|v| (body.gauge(v).unwrap_or(f64::NAN) - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(InscribedBox {
        template: template.clone(),
        rotation: best.rotation,
        lambda: best.lambda,
        vertices,
        boundary_deviation: deviation,
    })
}

/// Inscribes a box into the star-shaped symmetric surface `{g(u) u}` by
/// equalizing `g` itself on the rotated vertex orbit.
pub fn inscribe_in_surface<G>(
    g: &G,
    template: &BoxTemplate,
    config: &SolveConfig,
) -> Result<InscribedBox, InscribeError>
where
    G: Fn(&Vec3) -> f64 + Sync,
{
    let probe = g(&Vec3::z());
    if !probe.is_finite() || probe <= 0.0 {
        return Err(InscribeError::NonPositiveSurface(probe));
    }
    let report = solve_knaster(g, template, config)?;
    let best = report.clusters.first().ok_or(InscribeError::NoSolution {
        tol: config.tol,
        best: f64::INFINITY,
        starts: report.starts_total,
    })?;
    if !best.lambda.is_finite() || best.lambda <= 0.0 {
        return Err(InscribeError::NonPositiveSurface(best.lambda));
    }
    // vertex_i = g(A v_i) * (A v_i); store the scale as a divisor.
    let lambda = 1.0 / best.lambda;
    let vertices = box_vertices(template, &best.rotation, lambda);
    let deviation = vertices
        .iter()
        .map(|v| {
            let r = v.norm();
            (r - g(&(v / r))).abs()
        })
        .fold(0.0, f64::max);
    Ok(InscribedBox {
        template: template.clone(),
        rotation: best.rotation,
        lambda,
        vertices,
        boundary_deviation: deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Ellipsoid, PointCloudBody, SupportFunction};
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    fn generic_ellipsoid() -> Ellipsoid {
        Ellipsoid::new([1.0 / 6.0, 1.0 / 3.0, 0.5]).unwrap()
    }

    fn gauge_fn(e: &Ellipsoid) -> impl Fn(&Vec3) -> f64 + Sync + '_ {
        move |u: &Vec3| e.gauge(u).unwrap()
    }

    #[test]
    fn residual_vanishes_for_constant_objective() {
        let f = |_: &Vec3| 2.5;
        let r = knaster_residual(&f, &BoxTemplate::cube(), &Rotation::identity()).unwrap();
        assert!(r.norm() < 1e-15);
    }

    #[test]
    fn residual_vanishes_at_identity_on_generic_ellipsoid() {
        // The cube template at the identity has vertices (+-1,+-1,1)/sqrt(3),
        // all with gauge 1/sqrt(3) on the generic ellipsoid.
        let e = generic_ellipsoid();
        let f = gauge_fn(&e);
        let t = BoxTemplate::cube();
        let r = knaster_residual(&f, &t, &Rotation::identity()).unwrap();
        assert!(r.norm() < 1e-14);
        let values: Vec<f64> = t.vertices().iter().map(|v| e.gauge(v).unwrap()).collect();
        for v in values {
            assert_abs_diff_eq!(v, 1.0 / 3.0f64.sqrt(), epsilon = 1e-14);
        }
    }

    #[test]
    fn residual_matches_direct_recomputation_off_solution() {
        let e = generic_ellipsoid();
        let f = gauge_fn(&e);
        let t = BoxTemplate::cube();
        let axis = Vec3::new(1.0, 2.0, 3.0);
        let a = Rotation::from_axis_angle(&axis, 0.3);
        let r = knaster_residual(&f, &t, &a).unwrap();
        assert!(r.norm() > 1e-4);
        // recompute the four gauges independently and re-project
        let values: Vec<f64> = t.vertices().iter().map(|v| f(&a.apply(v))).collect();
        let mean = values.iter().sum::<f64>() / 4.0;
        let norm_direct = values
            .iter()
            .map(|v| (v - mean).powi(2))
            .sum::<f64>()
            .sqrt();
        assert_abs_diff_eq!(r.norm(), norm_direct, epsilon = 1e-12);
    }

    #[test]
    fn non_finite_objective_is_rejected() {
        let f = |_: &Vec3| f64::NAN;
        assert!(matches!(
            knaster_residual(&f, &BoxTemplate::cube(), &Rotation::identity()),
            Err(InscribeError::NonFiniteValue)
        ));
    }

    #[test]
    fn cluster_counts_on_generic_ellipsoid() {
        let e = generic_ellipsoid();
        let f = gauge_fn(&e);
        let config = SolveConfig::default();
        let cube = solve_knaster(&f, &BoxTemplate::cube(), &config).unwrap();
        assert_eq!(cube.clusters.len(), 1, "cube must inscribe uniquely");
        assert!(!cube.degenerate);

        let sq = solve_knaster(&f, &BoxTemplate::new(1.0, 1.0, 2.0).unwrap(), &config).unwrap();
        assert_eq!(
            sq.clusters.len(),
            3,
            "square-based box has three inscriptions"
        );

        let gen = solve_knaster(&f, &BoxTemplate::new(1.0, 2.0, 3.0).unwrap(), &config).unwrap();
        assert_eq!(gen.clusters.len(), 6, "generic box has six inscriptions");
    }

    #[test]
    fn sphere_reports_degenerate_continuum() {
        let ball = Ellipsoid::new([1.0, 1.0, 1.0]).unwrap();
        let f = gauge_fn(&ball);
        let report = solve_knaster(&f, &BoxTemplate::cube(), &SolveConfig::default()).unwrap();
        assert!(report.degenerate);
        assert_eq!(report.clusters.len(), 1);
    }

    #[test]
    fn equivariance_of_residual_norm_under_template_symmetries() {
        let e = generic_ellipsoid();
        let f = gauge_fn(&e);
        let t = BoxTemplate::new(1.0, 1.0, 2.0).unwrap();
        let group = t.symmetry_group();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let a = Rotation::sample_uniform(&mut rng);
            let g = &group[rng.random_range(0..group.len())];
            let r1 = knaster_residual(&f, &t, &a).unwrap().norm();
            let r2 = knaster_residual(&f, &t, &a.compose(g)).unwrap().norm();
            assert_abs_diff_eq!(r1, r2, epsilon = 1e-10);
        }
    }

    #[test]
    fn scaling_objective_leaves_solutions_in_place() {
        let e = generic_ellipsoid();
        let config = SolveConfig {
            starts: 64,
            ..SolveConfig::default()
        };
        let f1 = gauge_fn(&e);
        let f2 = |u: &Vec3| 7.5 * e.gauge(u).unwrap();
        let t = BoxTemplate::new(1.0, 1.0, 2.0).unwrap();
        let r1 = solve_knaster(&f1, &t, &config).unwrap();
        let r2 = solve_knaster(&f2, &t, &config).unwrap();
        assert_eq!(r1.clusters.len(), r2.clusters.len());
        let group = SymmetryGroup::new(t.symmetry_group()).unwrap();
        for c1 in &r1.clusters {
            let matched = r2
                .clusters
                .iter()
                .any(|c2| group.distance(&c1.rotation, &c2.rotation) < config.cluster_radius);
            assert!(matched, "cluster moved under objective scaling");
        }
    }

    #[test]
    fn solution_certificate_holds_per_cluster() {
        let e = generic_ellipsoid();
        let f = gauge_fn(&e);
        let config = SolveConfig::default();
        let report = solve_knaster(&f, &BoxTemplate::new(1.0, 2.0, 3.0).unwrap(), &config).unwrap();
        for c in &report.clusters {
            let spread = c
                .values
                .iter()
                .map(|v| (v - c.lambda).abs())
                .fold(0.0, f64::max);
            assert!(spread < config.tol, "cluster spread {spread}");
            // the stored residual is the norm of the diagonal-complement
            // projection of the stored values
            let recomputed = c
                .values
                .iter()
                .map(|v| (v - c.lambda).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!((c.residual - recomputed).abs() < 1e-12);
        }
    }

    #[test]
    fn inscribe_box_in_unit_ball_lands_on_sphere() {
        let ball = Body::Ellipsoid(Ellipsoid::new([1.0, 1.0, 1.0]).unwrap());
        let config = SolveConfig {
            starts: 16,
            ..SolveConfig::default()
        };
        let b = inscribe_box(&ball, &BoxTemplate::cube(), &config).unwrap();
        for v in &b.vertices {
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn inscribe_cube_in_generic_ellipsoid_recovers_corners() {
        let body = Body::Ellipsoid(generic_ellipsoid());
        let b = inscribe_box(&body, &BoxTemplate::cube(), &SolveConfig::default()).unwrap();
        for v in &b.vertices {
            for coord in [v.x, v.y, v.z] {
                assert!(
                    (coord.abs() - 1.0).abs() < 1e-7,
                    "vertex {v:?} is not a (+-1,+-1,+-1) corner"
                );
            }
        }
        assert!(b.boundary_deviation < 1e-9);
    }

    #[test]
    fn inscribe_box_in_sampled_point_cloud() {
        // Self-consistency: the returned vertices sit on the polytope
        // boundary within solver tolerance.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pts = Vec::new();
        for _ in 0..500 {
            let v = Vec3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            if v.norm() > 1e-3 {
                pts.push(v.normalize() * rng.random_range(0.8..1.0));
            }
        }
        let body = Body::PointCloud(PointCloudBody::new(pts, true).unwrap());
        let config = SolveConfig {
            starts: 8,
            tol: 1e-7,
            ..SolveConfig::default()
        };
        let b = inscribe_box(&body, &BoxTemplate::cube(), &config).unwrap();
        assert!(
            b.boundary_deviation < 1e-6,
            "gauge deviation {}",
            b.boundary_deviation
        );
    }

    #[test]
    fn inscribed_box_is_similar_to_template() {
        let body = Body::Ellipsoid(generic_ellipsoid());
        let t = BoxTemplate::new(1.0, 2.0, 3.0).unwrap();
        let b = inscribe_box(&body, &t, &SolveConfig::default()).unwrap();
        // vertex pattern: pairwise dot products must match the scaled
        // template's, which pins similarity
        let scale = 1.0 / b.lambda;
        let tv = t.all_vertices();
        for i in 0..8 {
            for j in 0..8 {
                let got = b.vertices[i].dot(&b.vertices[j]);
                let want = tv[i].dot(&tv[j]) * scale * scale;
                assert_abs_diff_eq!(got, want, epsilon = 1e-8 * scale * scale);
            }
        }
    }

    #[test]
    fn surface_solver_agrees_with_body_solver_on_ellipsoid() {
        let e = generic_ellipsoid();
        let config = SolveConfig::default();
        let radial = |u: &Vec3| 1.0 / e.gauge(u).unwrap();
        let from_surface = inscribe_in_surface(&radial, &BoxTemplate::cube(), &config).unwrap();
        for v in &from_surface.vertices {
            for coord in [v.x, v.y, v.z] {
                assert!((coord.abs() - 1.0).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn surface_solver_constant_radius_gives_unit_cube() {
        let g = |_: &Vec3| 1.0;
        let config = SolveConfig {
            starts: 8,
            ..SolveConfig::default()
        };
        let b = inscribe_in_surface(&g, &BoxTemplate::cube(), &config).unwrap();
        for v in &b.vertices {
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn surface_solver_quartic_bump_certificate() {
        let g = |u: &Vec3| 1.0 + 0.2 * (u.x.powi(4) + u.y.powi(4) + u.z.powi(4));
        let config = SolveConfig {
            starts: 64,
            ..SolveConfig::default()
        };
        let b = inscribe_in_surface(&g, &BoxTemplate::cube(), &config).unwrap();
        assert!(
            b.boundary_deviation < 1e-7,
            "surface deviation {}",
            b.boundary_deviation
        );
    }

    #[test]
    fn surface_solver_rejects_nonpositive_functions() {
        let g = |u: &Vec3| u.x; // changes sign
        assert!(matches!(
            inscribe_in_surface(&g, &BoxTemplate::cube(), &SolveConfig::default()),
            Err(InscribeError::NonPositiveSurface(_))
        ));
    }

    #[test]
    fn support_width_never_negative_for_symmetric_bodies() {
        // h(u) + h(-u) >= 0 on symmetric bodies; trivial but pins the
        // convention used throughout the solver.
        let e = generic_ellipsoid();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let u = Rotation::sample_uniform(&mut rng).apply(&Vec3::x());
            assert!(e.support(&u).unwrap() + e.support(&-u).unwrap() >= 0.0);
        }
    }
}
