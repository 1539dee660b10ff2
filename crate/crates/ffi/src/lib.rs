//! C ABI over the core solvers: opaque handles, status codes, and plain
//! structs. Every entry point catches panics and reports them as a status
//! instead of unwinding across the boundary.

use knaster_core::bodies::{parse_body_json, Body, GeneralSet, ParsedInput};
use knaster_core::cover::{solve_cover, CoverConfig};
use knaster_core::inscribe::{box_vertices, solve_knaster, SolveConfig, SolveReport};
use knaster_core::rotations::Vec3;
use knaster_core::templates::BoxTemplate;
use libc::{c_char, size_t};
use std::ffi::CStr;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnStatus {
    /// The call succeeded.
    Ok = 0,
    /// A pointer was null or a numeric argument was out of range.
    InvalidArgument = 1,
    /// A document or template specification failed to parse.
    ParseError = 2,
    /// No start converged to a certified solution.
    NoSolution = 3,
    /// The computed placement does not contain the input set.
    NotContained = 4,
    /// An index was out of bounds.
    OutOfRange = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// Opaque centrally symmetric body (ellipsoid or symmetrized point cloud).
pub struct KnBody {
    inner: Body,
}

/// Opaque box template.
pub struct KnTemplate {
    inner: BoxTemplate,
}

/// Opaque inscription result: a list of solution clusters.
pub struct KnInscription {
    report: SolveReport,
    template: BoxTemplate,
}

/// One inscription cluster, with the eight box vertices row-major.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct KnBoxResult {
    /// Unit quaternion `(w, x, y, z)` of the solving rotation.
    pub quaternion: [f64; 4],
    /// Common gauge value of the rotated template vertices.
    pub lambda: f64,
    /// Norm of the value-equalization residual at the solution.
    pub residual: f64,
    /// The eight vertices, `x y z` per vertex.
    pub vertices: [f64; 24],
}

/// Cover placement certificate for the width-1 rhombic dodecahedron.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct KnCoverResult {
    /// Unit quaternion `(w, x, y, z)` of the placement rotation.
    pub quaternion: [f64; 4],
    /// Concurrency point of the six mid-planes (the cover center).
    pub point: [f64; 3],
    pub w_residual_norm: f64,
    pub ls_residual: f64,
    /// Worst overshoot beyond the strip half-width; negative means strictly
    /// inside.
    pub max_violation: f64,
    pub contained: bool,
    /// Set for inputs whose solution set fills the rotation group.
    pub degenerate: bool,
}

fn guard<F: FnOnce() -> KnStatus>(f: F) -> KnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => KnStatus::Panic,
    }
}

/// Parses a body document (`{"type": "ellipsoid", "coeffs": [...]}` or
/// `{"type": "pointcloud", "points": [...], "symmetrize": true}`) into a
/// new handle. The handle must be released with `kn_body_free`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kn_body_parse_json(
    text: *const c_char,
    out: *mut *mut KnBody,
) -> KnStatus {
    if text.is_null() || out.is_null() {
        return KnStatus::InvalidArgument;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return KnStatus::ParseError;
    };
    guard(|| match parse_body_json(text) {
        Ok(ParsedInput::Body(inner)) => {
            *out = Box::into_raw(Box::new(KnBody { inner }));
            KnStatus::Ok
        }
        Ok(ParsedInput::Set(_)) => KnStatus::InvalidArgument,
        Err(_) => KnStatus::ParseError,
    })
}

/// Releases a body handle. Null is ignored.
///
/// # Safety
/// `body` must come from `kn_body_parse_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kn_body_free(body: *mut KnBody) {
    if !body.is_null() {
        drop(Box::from_raw(body));
    }
}

/// Parses a template specification: `cube`, `sq:RHO`, or `box:A1,A2,A3`.
/// The handle must be released with `kn_template_free`.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kn_template_parse(
    spec: *const c_char,
    out: *mut *mut KnTemplate,
) -> KnStatus {
    if spec.is_null() || out.is_null() {
        return KnStatus::InvalidArgument;
    }
    let Ok(spec) = CStr::from_ptr(spec).to_str() else {
        return KnStatus::ParseError;
    };
    guard(|| {
        let template = if spec == "cube" {
            Some(BoxTemplate::cube())
        } else if let Some(rho) = spec.strip_prefix("sq:") {
            rho.parse::<f64>()
                .ok()
                .and_then(|r| BoxTemplate::square_based(r).ok())
        } else if let Some(list) = spec.strip_prefix("box:") {
            let parts: Vec<f64> = list
                .split(',')
                .filter_map(|p| p.trim().parse::<f64>().ok())
                .collect();
            if parts.len() == 3 {
                BoxTemplate::new(parts[0], parts[1], parts[2]).ok()
            } else {
                None
            }
        } else {
            None
        };
        match template {
            Some(inner) => {
                *out = Box::into_raw(Box::new(KnTemplate { inner }));
                KnStatus::Ok
            }
            None => KnStatus::ParseError,
        }
    })
}

/// Releases a template handle. Null is ignored.
///
/// # Safety
/// `template` must come from `kn_template_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kn_template_free(template: *mut KnTemplate) {
    if !template.is_null() {
        drop(Box::from_raw(template));
    }
}

/// Inscribes a box similar to the template into the body by multistart
/// rotation search; the result lists solution clusters, best first, and
/// must be released with `kn_inscription_free`.
///
/// # Safety
/// `body`, `template`, and `out` must be valid pointers from this API.
#[no_mangle]
pub unsafe extern "C" fn kn_inscribe(
    body: *const KnBody,
    template: *const KnTemplate,
    starts: u32,
    seed: u64,
    tol: f64,
    out: *mut *mut KnInscription,
) -> KnStatus {
    if body.is_null() || template.is_null() || out.is_null() {
        return KnStatus::InvalidArgument;
    }
    if starts == 0 || !tol.is_finite() || tol <= 0.0 {
        return KnStatus::InvalidArgument;
    }
    let body = &(*body).inner;
    let template = (*template).inner.clone();
    guard(|| {
        if body.gauge(&Vec3::x()).is_err() {
            return KnStatus::InvalidArgument;
        }
        let f = |u: &Vec3| body.gauge(u).unwrap_or(f64::NAN);
        let config = SolveConfig {
            starts: starts as usize,
            seed,
            tol,
            ..SolveConfig::default()
        };
        match solve_knaster(&f, &template, &config) {
            Ok(report) if !report.clusters.is_empty() => {
                *out = Box::into_raw(Box::new(KnInscription { report, template }));
                KnStatus::Ok
            }
            Ok(_) => KnStatus::NoSolution,
            Err(_) => KnStatus::InvalidArgument,
        }
    })
}

/// Number of solution clusters in an inscription result.
///
/// # Safety
/// `inscription` must be a valid handle from `kn_inscribe`.
#[no_mangle]
pub unsafe extern "C" fn kn_inscription_cluster_count(inscription: *const KnInscription) -> size_t {
    if inscription.is_null() {
        return 0;
    }
    (*inscription).report.clusters.len()
}

/// True when the solution set filled the rotation group instead of
/// isolating (sphere-like bodies); the single reported cluster is then one
/// representative of a continuum.
///
/// # Safety
/// `inscription` must be a valid handle from `kn_inscribe`.
#[no_mangle]
pub unsafe extern "C" fn kn_inscription_degenerate(inscription: *const KnInscription) -> bool {
    if inscription.is_null() {
        return false;
    }
    (*inscription).report.degenerate
}

/// Copies cluster `index` into `result`.
///
/// # Safety
/// `inscription` must be a valid handle and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kn_inscription_cluster(
    inscription: *const KnInscription,
    index: size_t,
    result: *mut KnBoxResult,
) -> KnStatus {
    if inscription.is_null() || result.is_null() {
        return KnStatus::InvalidArgument;
    }
    let handle = &*inscription;
    let Some(cluster) = handle.report.clusters.get(index) else {
        return KnStatus::OutOfRange;
    };
    guard(|| {
        let vertices = box_vertices(&handle.template, &cluster.rotation, cluster.lambda);
        let mut flat = [0.0; 24];
        for (k, v) in vertices.iter().enumerate() {
            flat[3 * k] = v.x;
            flat[3 * k + 1] = v.y;
            flat[3 * k + 2] = v.z;
        }
        *result = KnBoxResult {
            quaternion: cluster.rotation.quaternion(),
            lambda: cluster.lambda,
            residual: cluster.residual,
            vertices: flat,
        };
        KnStatus::Ok
    })
}

/// Releases an inscription handle. Null is ignored.
///
/// # Safety
/// `inscription` must come from `kn_inscribe` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kn_inscription_free(inscription: *mut KnInscription) {
    if !inscription.is_null() {
        drop(Box::from_raw(inscription));
    }
}

/// Covers a diameter-1 point set by the width-1 rhombic dodecahedron:
/// `points_xyz` holds `count` consecutive `x y z` triples. On success the
/// placement and its containment certificate are written to `result`.
/// Returns `NotContained` when a placement was found but its certificate
/// fails, `NoSolution` when no start converged, and `InvalidArgument` for
/// empty or oversized inputs.
///
/// # Safety
/// `points_xyz` must point to `3 * count` readable doubles and `result`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kn_cover(
    points_xyz: *const f64,
    count: size_t,
    starts: u32,
    seed: u64,
    result: *mut KnCoverResult,
) -> KnStatus {
    if points_xyz.is_null() || result.is_null() || count == 0 || starts == 0 {
        return KnStatus::InvalidArgument;
    }
    let raw = std::slice::from_raw_parts(points_xyz, 3 * count);
    guard(|| {
        let points: Vec<Vec3> = raw
            .chunks_exact(3)
            .map(|c| Vec3::new(c[0], c[1], c[2]))
            .collect();
        let Ok(set) = GeneralSet::new(points) else {
            return KnStatus::InvalidArgument;
        };
        let config = CoverConfig {
            starts: starts as usize,
            seed,
            ..CoverConfig::default()
        };
        match solve_cover(&set, &config) {
            Ok(r) => {
                *result = KnCoverResult {
                    quaternion: r.rotation.quaternion(),
                    point: [r.point.x, r.point.y, r.point.z],
                    w_residual_norm: r.w_residual_norm,
                    ls_residual: r.ls_residual,
                    max_violation: r.max_violation,
                    contained: r.contained,
                    degenerate: r.degenerate,
                };
                if r.contained {
                    KnStatus::Ok
                } else {
                    KnStatus::NotContained
                }
            }
            Err(knaster_core::cover::CoverError::DiameterExceeded(_)) => KnStatus::InvalidArgument,
            Err(knaster_core::cover::CoverError::NoConvergence { .. }) => KnStatus::NoSolution,
            Err(_) => KnStatus::InvalidArgument,
        }
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn kn_status_message(status: KnStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        KnStatus::Ok => b"ok\0",
        KnStatus::InvalidArgument => b"invalid argument\0",
        KnStatus::ParseError => b"parse error\0",
        KnStatus::NoSolution => b"no certified solution\0",
        KnStatus::NotContained => b"placement found but containment certificate failed\0",
        KnStatus::OutOfRange => b"index out of range\0",
        KnStatus::Panic => b"internal panic\0",
    };
    text.as_ptr() as *const c_char
}
