/* C interface to the knaster solvers. Link against libknaster_ffi. */

#ifndef KNASTER_H
#define KNASTER_H

/* Generated by cbindgen from knaster-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum KnStatus {
  // The call succeeded.
  KN_STATUS_OK = 0,
  // A pointer was null or a numeric argument was out of range.
  KN_STATUS_INVALID_ARGUMENT = 1,
  // A document or template specification failed to parse.
  KN_STATUS_PARSE_ERROR = 2,
  // No start converged to a certified solution.
  KN_STATUS_NO_SOLUTION = 3,
  // The computed placement does not contain the input set.
  KN_STATUS_NOT_CONTAINED = 4,
  // An index was out of bounds.
  KN_STATUS_OUT_OF_RANGE = 5,
  // An internal panic was caught at the boundary.
  KN_STATUS_PANIC = 6,
} KnStatus;

// Opaque centrally symmetric body (ellipsoid or symmetrized point cloud).
typedef struct KnBody KnBody;

// Opaque inscription result: a list of solution clusters.
typedef struct KnInscription KnInscription;

// Opaque box template.
typedef struct KnTemplate KnTemplate;

// One inscription cluster, with the eight box vertices row-major.
typedef struct KnBoxResult {
  // Unit quaternion `(w, x, y, z)` of the solving rotation.
  double quaternion[4];
  // Common gauge value of the rotated template vertices.
  double lambda;
  // Norm of the value-equalization residual at the solution.
  double residual;
  // The eight vertices, `x y z` per vertex.
  double vertices[24];
} KnBoxResult;

// Cover placement certificate for the width-1 rhombic dodecahedron.
typedef struct KnCoverResult {
  // Unit quaternion `(w, x, y, z)` of the placement rotation.
  double quaternion[4];
  // Concurrency point of the six mid-planes (the cover center).
  double point[3];
  double w_residual_norm;
  double ls_residual;
  // Worst overshoot beyond the strip half-width; negative means strictly
  // inside.
  double max_violation;
  bool contained;
  // Set for inputs whose solution set fills the rotation group.
  bool degenerate;
} KnCoverResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a body document (`{"type": "ellipsoid", "coeffs": [...]}` or
// `{"type": "pointcloud", "points": [...], "symmetrize": true}`) into a
// new handle. The handle must be released with `kn_body_free`.
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid pointer.
enum KnStatus kn_body_parse_json(const char *text, struct KnBody **out);

// Releases a body handle. Null is ignored.
//
// # Safety
// `body` must come from `kn_body_parse_json` and not be freed twice.
void kn_body_free(struct KnBody *body);

// Parses a template specification: `cube`, `sq:RHO`, or `box:A1,A2,A3`.
// The handle must be released with `kn_template_free`.
//
// # Safety
// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
enum KnStatus kn_template_parse(const char *spec, struct KnTemplate **out);

// Releases a template handle. Null is ignored.
//
// # Safety
// `template` must come from `kn_template_parse` and not be freed twice.
void kn_template_free(struct KnTemplate *template_);

// Inscribes a box similar to the template into the body by multistart
// rotation search; the result lists solution clusters, best first, and
// must be released with `kn_inscription_free`.
//
// # Safety
// `body`, `template`, and `out` must be valid pointers from this API.
enum KnStatus kn_inscribe(const struct KnBody *body,
                          const struct KnTemplate *template_,
                          uint32_t starts,
                          uint64_t seed,
                          double tol,
                          struct KnInscription **out);

// Number of solution clusters in an inscription result.
//
// # Safety
// `inscription` must be a valid handle from `kn_inscribe`.
size_t kn_inscription_cluster_count(const struct KnInscription *inscription);

// True when the solution set filled the rotation group instead of
// isolating (sphere-like bodies); the single reported cluster is then one
// representative of a continuum.
//
// # Safety
// `inscription` must be a valid handle from `kn_inscribe`.
bool kn_inscription_degenerate(const struct KnInscription *inscription);

// Copies cluster `index` into `result`.
//
// # Safety
// `inscription` must be a valid handle and `result` a valid pointer.
enum KnStatus kn_inscription_cluster(const struct KnInscription *inscription,
                                     size_t index,
                                     struct KnBoxResult *result);

// Releases an inscription handle. Null is ignored.
//
// # Safety
// `inscription` must come from `kn_inscribe` and not be freed twice.
void kn_inscription_free(struct KnInscription *inscription);

// Covers a diameter-1 point set by the width-1 rhombic dodecahedron:
// `points_xyz` holds `count` consecutive `x y z` triples. On success the
// placement and its containment certificate are written to `result`.
// Returns `NotContained` when a placement was found but its certificate
// fails, `NoSolution` when no start converged, and `InvalidArgument` for
// empty or oversized inputs.
//
// # Safety
// `points_xyz` must point to `3 * count` readable doubles and `result`
// must be a valid pointer.
enum KnStatus kn_cover(const double *points_xyz,
                       size_t count,
                       uint32_t starts,
                       uint64_t seed,
                       struct KnCoverResult *result);

// Static description of a status code.
const char *kn_status_message(enum KnStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KNASTER_H */
