#ifndef STABRKC_H
#define STABRKC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum StabrkcStatus {
  Ok = 0,
  /**
   * A parameter was rejected (stage count, grid size, tolerance, ...).
   */
  InvalidArgument = 1,
  /**
   * A stage or state became non-finite (instability at this step size).
   */
  NonFinite = 2,
  /**
   * The adaptive controller gave up (step underflow or repeated failures).
   */
  StepFailure = 3,
  Io = 4,
  NullPointer = 5,
} StabrkcStatus;

/**
 * Opaque problem handle wrapping a split right-hand side.
 */
typedef struct StabrkcProblem StabrkcProblem;

/**
 * Run counters (accepted/rejected steps, f_D and f_A evaluations).
 */
typedef struct StabrkcStats {
  uint64_t n_accept;
  uint64_t n_reject;
  uint64_t nfd;
  uint64_t nfa;
} StabrkcStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a NUL-terminated static string.
 */
const char *stabrkc_version(void);

/**
 * 1-D periodic advection-diffusion problem (w_t + A w_x = D w_xx).
 */
enum StabrkcStatus stabrkc_problem_ad1d(uintptr_t n,
                                        double a,
                                        double d,
                                        struct StabrkcProblem **out);

/**
 * 2-D damped wave benchmark (Gaussian diffusion bump and boundary
 * sources, zero-flux boundary).
 */
enum StabrkcStatus stabrkc_problem_wave2d(uintptr_t n,
                                          double b,
                                          double a1,
                                          double a2,
                                          struct StabrkcProblem **out);

/**
 * 2-D periodic reaction-advection-diffusion (Brusselator) problem.
 */
enum StabrkcStatus stabrkc_problem_brusselator2d(uintptr_t n,
                                                 double a,
                                                 double d,
                                                 bool analytic_rho_a,
                                                 struct StabrkcProblem **out);

/**
 * 1-D periodic viscous Burgers problem.
 */
enum StabrkcStatus stabrkc_problem_burgers1d(uintptr_t n,
                                             double a,
                                             double d,
                                             bool analytic_rho_a,
                                             struct StabrkcProblem **out);

/**
 * 2-D periodic coupled Burgers problem.
 */
enum StabrkcStatus stabrkc_problem_burgers2d(uintptr_t n,
                                             double a,
                                             double d,
                                             bool analytic_rho_a,
                                             struct StabrkcProblem **out);

/**
 * Override the integration horizon (constructors install the benchmark
 * defaults).
 */
enum StabrkcStatus stabrkc_problem_set_t_end(struct StabrkcProblem *problem, double t_end);

/**
 * State dimension of a problem (0 for a null handle).
 */
uintptr_t stabrkc_problem_dim(const struct StabrkcProblem *problem);

/**
 * Copy the initial state into `out_y` (length = dim).
 */
enum StabrkcStatus stabrkc_problem_initial_state(const struct StabrkcProblem *problem,
                                                 double *out_y);

void stabrkc_problem_free(struct StabrkcProblem *problem);

/**
 * Adaptive integration to the problem's t_end. `variant` selects the
 * error estimator (1 or 2); `out_y` must hold dim values.
 */
enum StabrkcStatus stabrkc_integrate_adaptive(const struct StabrkcProblem *problem,
                                              double tol,
                                              uint32_t variant,
                                              double *out_y,
                                              struct StabrkcStats *out_stats);

/**
 * Fixed-step partitioned integration with explicit stage counts.
 */
enum StabrkcStatus stabrkc_integrate_fixed_nprkc(const struct StabrkcProblem *problem,
                                                 double h,
                                                 uintptr_t s,
                                                 uintptr_t m,
                                                 double *out_y,
                                                 struct StabrkcStats *out_stats);

/**
 * Maximum of |R| over the certified rectangle
 * [-0.65 s^2, 0] x [-2.15 m, 2.15 m]; pass eta <= 0 for the default 2/13.
 */
enum StabrkcStatus stabrkc_certify_rectangle(uintptr_t s, uintptr_t m, double eta, double *out_max);

/**
 * Largest beta with |R_s| <= 1 on [-beta, 0].
 */
enum StabrkcStatus stabrkc_real_axis_extent(uintptr_t s, double eta, double *out_beta);

/**
 * Evaluate the partitioned stability function R(p, q) for stage counts
 * (s, m); the real and imaginary parts are written separately.
 */
enum StabrkcStatus stabrkc_eval_r_nprkc(double p,
                                        double q,
                                        uintptr_t s,
                                        uintptr_t m,
                                        double eta,
                                        double *out_re,
                                        double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STABRKC_H */
