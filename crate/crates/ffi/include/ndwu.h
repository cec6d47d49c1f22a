#ifndef NDWU_H
#define NDWU_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes.
 */
typedef enum NdwuStatus {
  NDWU_STATUS_OK = 0,
  NDWU_STATUS_NULL_POINTER = 1,
  NDWU_STATUS_INVALID_ARGUMENT = 2,
  /*
   Probabilities are negative, above one, non-finite or not normalized.
   */
  NDWU_STATUS_INVALID_BEHAVIOR = 3,
  NDWU_STATUS_SIGNALING = 4,
  /*
   Malformed JSON or non-UTF-8 input.
   */
  NDWU_STATUS_PARSE_ERROR = 5,
  NDWU_STATUS_OUTSIDE_FAMILY = 6,
  /*
   A Rust panic was caught at the boundary.
   */
  NDWU_STATUS_INTERNAL = 7,
} NdwuStatus;

/*
 Opaque behavior handle.
 */
typedef struct NdwuBehavior NdwuBehavior;

typedef struct NdwuSideReport {
  double max_lhs;
  double min_rhs;
  bool satisfied;
  size_t skipped_states;
} NdwuSideReport;

typedef struct NdwuCriterionReport {
  /*
   Alice's measurements in the states prepared by Bob.
   */
  struct NdwuSideReport side_a;
  /*
   Bob's measurements in the states prepared by Alice.
   */
  struct NdwuSideReport side_b;
  bool overall;
} NdwuCriterionReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Static description of a status code.
 */
const char *ndwu_status_message(enum NdwuStatus status);

/*
 Message of the last failure on this thread, or NULL. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *ndwu_last_error_message(void);

/*
 Validates 16 probabilities in `[ν][μ][a][b]` order.
 */
enum NdwuStatus ndwu_behavior_new(const double *p,
                                  size_t len,
                                  double tol,
                                  struct NdwuBehavior **out);

/*
 Parses a behavior JSON document. `tol` applies when the document has none.
 */
enum NdwuStatus ndwu_behavior_from_json(const char *json, double tol, struct NdwuBehavior **out);

/*
 Member `αPR + βPR′ + τL + (1−α−β−τ)I/4` of the noisy family.
 */
enum NdwuStatus ndwu_behavior_noisy_family(double alpha,
                                           double beta,
                                           double tau,
                                           struct NdwuBehavior **out);

/*
 The almost-quantum behavior; `swapped` exchanges the two
 off-diagonal joint probabilities.
 */
enum NdwuStatus ndwu_behavior_aqc(bool swapped, struct NdwuBehavior **out);

/*
 Named box: `pr`, `pr-prime`, `anti-pr`, `uniform`, `aqc`, `nlTSL` or
 `localTSLV` with bits in place of the letters.
 */
enum NdwuStatus ndwu_behavior_named(const char *name, struct NdwuBehavior **out);

void ndwu_behavior_free(struct NdwuBehavior *b);

/*
 Copies the 16 probabilities into `out`.
 */
enum NdwuStatus ndwu_behavior_probabilities(const struct NdwuBehavior *b, double *out);

/*
 Serializes to JSON. Release the string with `ndwu_string_free`.
 */
enum NdwuStatus ndwu_behavior_to_json(const struct NdwuBehavior *b, char **out);

void ndwu_string_free(char *s);

enum NdwuStatus ndwu_behavior_chsh(const struct NdwuBehavior *b, double *out);

enum NdwuStatus ndwu_criterion(const struct NdwuBehavior *b, struct NdwuCriterionReport *out);

/*
 Level-1 arcsine condition.
 */
enum NdwuStatus ndwu_npa_tlm(const struct NdwuBehavior *b, bool *out);

/*
 Closed-form criterion on the noisy family.
 */
enum NdwuStatus ndwu_family_boundary(double alpha, double beta, double tau, bool *out);

/*
 `√(1 − Σ p²)` of a probability vector.
 */
enum NdwuStatus ndwu_uncertainty(const double *p, size_t len, double tol, double *out);

/*
 Interval of overlaps compatible with two expectations in `[−1, 1]`.
 */
enum NdwuStatus ndwu_c_interval(double e0, double e1, double *lo, double *hi);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NDWU_H */
