#ifndef VIRATEICH_H
#define VIRATEICH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every exported function.
typedef enum VtStatus {
  VT_STATUS_OK = 0,
  // A required pointer argument was null.
  VT_STATUS_NULL_POINTER = 1,
  // Bad sizes, non-finite samples, mismatched grids or unknown names.
  VT_STATUS_INVALID_INPUT = 2,
  // A mathematical precondition failed (e.g. `a ≤ 0`, non-monotone lift).
  VT_STATUS_PRECONDITION = 3,
  // An iteration or internal consistency check failed.
  VT_STATUS_NUMERICAL = 4,
  // The caller's output buffer is too short.
  VT_STATUS_BUFFER_TOO_SMALL = 5,
  // Rust panicked; the handle arguments are still valid.
  VT_STATUS_PANIC = 6,
} VtStatus;

// Orbit type of a monodromy matrix.
typedef enum VtOrbitClass {
  VT_ORBIT_CLASS_HYPERBOLIC = 0,
  VT_ORBIT_CLASS_PARABOLIC = 1,
  VT_ORBIT_CLASS_ELLIPTIC = 2,
} VtOrbitClass;

// Positive boundary connection `(a, s, u)`.
typedef struct VtConnection VtConnection;

// Lift `x ↦ x + φ(x) + winding` of a circle diffeomorphism.
typedef struct VtDiffeo VtDiffeo;

// Samples of a real function on the uniform grid `k/n`.
typedef struct VtPeriodicFn VtPeriodicFn;

// Hill potential `T`, a density of weight 2.
typedef struct VtPotential VtPotential;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length excluding the NUL.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t vt_last_error(char *buf, size_t len);

// Static description of a status code.
const char *vt_status_str(enum VtStatus status);

// Copies `n` samples (`n` a power of two ≥ 16) into a new function.
//
// # Safety
// `values` must point to `n` doubles; `out` must be writable.
enum VtStatus vt_periodic_new(const double *values,
                              size_t n,
                              int32_t weight,
                              struct VtPeriodicFn **out);

// # Safety
// `f` must be null or a handle from this library, not yet freed.
void vt_periodic_free(struct VtPeriodicFn *f);

// Sample count, or 0 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
size_t vt_periodic_len(const struct VtPeriodicFn *f);

// # Safety
// `f` must be a live handle; `out` must be valid for `len` doubles.
enum VtStatus vt_periodic_values(const struct VtPeriodicFn *f, double *out, size_t len);

// Spectral derivative of the given order.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum VtStatus vt_periodic_derivative(const struct VtPeriodicFn *f,
                                     uint32_t order,
                                     struct VtPeriodicFn **out);

// `∫₀¹ f dx`.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum VtStatus vt_periodic_integral(const struct VtPeriodicFn *f, double *out);

// Lift with displacement samples `phi` (length `n`) and integer winding.
//
// # Safety
// `phi` must point to `n` doubles; `out` must be writable.
enum VtStatus vt_diffeo_new(const double *phi, size_t n, int64_t winding, struct VtDiffeo **out);

// `x ↦ x + t`.
//
// # Safety
// `out` must be writable.
enum VtStatus vt_diffeo_rotation(size_t n, double t, struct VtDiffeo **out);

// # Safety
// `f` must be null or a live handle.
void vt_diffeo_free(struct VtDiffeo *f);

// Displacement `F(x_k) − x_k` at the grid points.
//
// # Safety
// `f` must be a live handle; `out` must be valid for `len` doubles.
enum VtStatus vt_diffeo_displacement(const struct VtDiffeo *f, double *out, size_t len);

// `f ∘ g`.
//
// # Safety
// `f`, `g` must be live handles; `out` must be writable.
enum VtStatus vt_diffeo_compose(const struct VtDiffeo *f,
                                const struct VtDiffeo *g,
                                struct VtDiffeo **out);

// # Safety
// `f` must be a live handle; `out` must be writable.
enum VtStatus vt_diffeo_invert(const struct VtDiffeo *f, struct VtDiffeo **out);

// Schwarzian derivative `F‴/F′ − (3/2)(F″/F′)²`.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum VtStatus vt_diffeo_schwarzian(const struct VtDiffeo *f, struct VtPeriodicFn **out);

// # Safety
// `values` must point to `n` doubles; `out` must be writable.
enum VtStatus vt_potential_new(const double *values, size_t n, struct VtPotential **out);

// # Safety
// `t` must be null or a live handle.
void vt_potential_free(struct VtPotential *t);

// # Safety
// `t` must be a live handle; `out` must be valid for `len` doubles.
enum VtStatus vt_potential_values(const struct VtPotential *t, double *out, size_t len);

// `F⁻¹·T = F′² T∘F + ½ 𝒮(F)`.
//
// # Safety
// `f`, `t` must be live handles on the same grid; `out` must be writable.
enum VtStatus vt_potential_act(const struct VtDiffeo *f,
                               const struct VtPotential *t,
                               struct VtPotential **out);

// Monodromy of `u″ + T u = 0`: row-major matrix, trace and orbit class.
// Any output pointer may be null.
//
// # Safety
// `t` must be a live handle; non-null outputs must be writable (`matrix`
// for four doubles).
enum VtStatus vt_potential_monodromy(const struct VtPotential *t,
                                     double *matrix,
                                     double *trace,
                                     enum VtOrbitClass *class_);

// Connection with coefficients `a`, `s`, `u`, each of length `n`.
//
// # Safety
// `a`, `s`, `u` must each point to `n` doubles; `out` must be writable.
enum VtStatus vt_connection_new(const double *a,
                                const double *s,
                                const double *u,
                                size_t n,
                                struct VtConnection **out);

// # Safety
// `c` must be null or a live handle.
void vt_connection_free(struct VtConnection *c);

// Hill potential of a positive connection by the closed formula.
//
// # Safety
// `c` must be a live handle; `out` must be writable.
enum VtStatus vt_hill_from_asu(const struct VtConnection *c, struct VtPotential **out);

// Hill potential of a positive connection by Drinfeld–Sokolov gauge fixing.
//
// # Safety
// `c` must be a live handle; `out` must be writable.
enum VtStatus vt_ds_normalize(const struct VtConnection *c, struct VtPotential **out);

// `ω_N(v, w)` at the point `(ell, F)`, tangents `(v_ell, v_f)` and
// `(w_ell, w_f)` with `v_f`, `w_f` sampled on the grid of `f`.
//
// # Safety
// `f` must be a live handle; `v_f`, `w_f` must point to `vt_diffeo` grid
// size doubles; `out` must be writable.
enum VtStatus vt_trumpet_omega(double ell,
                               const struct VtDiffeo *f,
                               double v_ell,
                               const double *v_f,
                               double w_ell,
                               const double *w_f,
                               double *out);

// Runs a verification suite (`"all"`, `"diffeo"`, `"hill"`, `"coframe"`,
// `"trumpet"`, `"wolpert"` or `"groupoid"`) and returns its JSON report in
// `*json`, to be released with [`vt_string_free`]. `*passed` is set to 1
// when every check passes.
//
// # Safety
// `suite` must be a NUL-terminated string; `json` and `passed` must be
// writable.
enum VtStatus vt_verify(const char *suite,
                        size_t n,
                        size_t trials,
                        uint64_t seed,
                        char **json,
                        int32_t *passed);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void vt_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VIRATEICH_H */
