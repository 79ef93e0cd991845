/* C interface to the perf-profile library. */

#ifndef PERF_PROFILE_H
#define PERF_PROFILE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum PpStatus {
  PP_STATUS_OK = 0,
  PP_STATUS_NULL_ARGUMENT = 1,
  PP_STATUS_INVALID_UTF8 = 2,
  PP_STATUS_PARSE_ERROR = 3,
  PP_STATUS_INVALID_INPUT = 4,
  PP_STATUS_UNKNOWN_SOLVER = 5,
  PP_STATUS_INDEX_OUT_OF_RANGE = 6,
  PP_STATUS_PANIC = 99,
} PpStatus;

// Profiles for every solver of one table, sharing n_p and r_M.
typedef struct PpProfiles PpProfiles;

// An ingested timing table.
typedef struct PpTable PpTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread, or NULL when
// every call so far succeeded. The pointer stays valid until the next
// failing call on the same thread; do not free it.
const char *pp_last_error_message(void);

// Release a string returned by this library.
//
// # Safety
// `s` must be a pointer previously returned through an out-parameter of
// this library, not yet freed; NULL is a no-op.
void pp_string_free(char *s);

// Parse a timing CSV document (default ingest policy) into a table.
//
// # Safety
// `text` must be a valid NUL-terminated C string; `out` must be a valid
// pointer to a `PpTable*`.
enum PpStatus pp_table_parse_csv(const char *text, struct PpTable **out);

// Parse a timing JSON document (explicit nulls mark failures).
//
// # Safety
// Same contract as [`pp_table_parse_csv`].
enum PpStatus pp_table_parse_json(const char *text, struct PpTable **out);

// Destroy a table handle. NULL is a no-op.
//
// # Safety
// `table` must come from this library and not be freed twice.
void pp_table_free(struct PpTable *table);

// Number of problems, or 0 for a NULL handle.
//
// # Safety
// `table` must be NULL or a live handle from this library.
size_t pp_table_problem_count(const struct PpTable *table);

// Number of solvers, or 0 for a NULL handle.
//
// # Safety
// `table` must be NULL or a live handle from this library.
size_t pp_table_solver_count(const struct PpTable *table);

// Serialize a table back to canonical CSV.
//
// # Safety
// `table` must be a live handle; `out` receives a string to release with
// [`pp_string_free`].
enum PpStatus pp_table_to_csv(const struct PpTable *table, char **out);

// Compute performance profiles for every solver of `table`.
//
// `r_m` chooses the failure sentinel: any value <= 0 selects the automatic
// rule (twice the largest finite ratio); a positive value must strictly
// exceed every finite ratio.
//
// # Safety
// `table` must be a live handle; `out` must point to a `PpProfiles*`.
enum PpStatus pp_profiles_compute(const struct PpTable *table, double r_m, struct PpProfiles **out);

// Rebuild profiles from the JSON interchange document.
//
// # Safety
// Same string contract as [`pp_table_parse_csv`].
enum PpStatus pp_profiles_from_json(const char *text, struct PpProfiles **out);

// Destroy a profiles handle. NULL is a no-op.
//
// # Safety
// `profiles` must come from this library and not be freed twice.
void pp_profiles_free(struct PpProfiles *profiles);

// Shared problem count, or 0 for a NULL handle.
//
// # Safety
// `profiles` must be NULL or a live handle from this library.
size_t pp_profiles_problem_count(const struct PpProfiles *profiles);

// Number of solvers, or 0 for a NULL handle.
//
// # Safety
// `profiles` must be NULL or a live handle from this library.
size_t pp_profiles_solver_count(const struct PpProfiles *profiles);

// The shared failure sentinel, or NaN for a NULL handle.
//
// # Safety
// `profiles` must be NULL or a live handle from this library.
double pp_profiles_r_m(const struct PpProfiles *profiles);

// Name of the solver at `index`.
//
// # Safety
// `profiles` must be a live handle; `out` receives a string to release
// with [`pp_string_free`].
enum PpStatus pp_profiles_solver_name(const struct PpProfiles *profiles, size_t index, char **out);

// Profile value at `tau`: the fraction of problems whose ratio is at most
// `tau`.
//
// # Safety
// `profiles` must be a live handle; `out` must point to a double.
enum PpStatus pp_profiles_evaluate(const struct PpProfiles *profiles,
                                   size_t index,
                                   double tau,
                                   double *out);

// Number of breakpoints of the solver at `index`.
//
// # Safety
// `profiles` must be a live handle; `out` must point to a size_t.
enum PpStatus pp_profiles_breakpoint_count(const struct PpProfiles *profiles,
                                           size_t index,
                                           size_t *out);

// One breakpoint of a profile: its tau and the profile value there.
//
// # Safety
// `profiles` must be a live handle; `out_tau` and `out_value` must point
// to doubles.
enum PpStatus pp_profiles_breakpoint(const struct PpProfiles *profiles,
                                     size_t index,
                                     size_t breakpoint,
                                     double *out_tau,
                                     double *out_value);

// Serialize profiles to the JSON interchange document.
//
// # Safety
// `profiles` must be a live handle; `out` receives a string to release
// with [`pp_string_free`].
enum PpStatus pp_profiles_to_json(const struct PpProfiles *profiles, char **out);

// Render the profiles as a deterministic SVG document. `log_base` <= 0
// selects a linear axis; otherwise the axis is log with that base (> 1).
//
// # Safety
// `profiles` must be a live handle; `out` receives a string to release
// with [`pp_string_free`].
enum PpStatus pp_profiles_render_svg(const struct PpProfiles *profiles,
                                     double log_base,
                                     char **out);

// Export merged step data as CSV, tau in plot coordinates.
//
// # Safety
// Same contract as [`pp_profiles_render_svg`].
enum PpStatus pp_profiles_export_steps(const struct PpProfiles *profiles,
                                       double log_base,
                                       char **out);

// Exact integral of the absolute difference of two profiles over
// [1, upper]. `upper` <= 0 selects the larger of the two r_M values.
//
// # Safety
// Both handles must be live; `out` must point to a double.
enum PpStatus pp_distance_l1(const struct PpProfiles *a,
                             size_t solver_a,
                             const struct PpProfiles *b,
                             size_t solver_b,
                             double upper,
                             double *out);

// Maximum absolute difference of two profiles.
//
// # Safety
// Both handles must be live; `out` must point to a double.
enum PpStatus pp_distance_sup(const struct PpProfiles *a,
                              size_t solver_a,
                              const struct PpProfiles *b,
                              size_t solver_b,
                              double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERF_PROFILE_H */
