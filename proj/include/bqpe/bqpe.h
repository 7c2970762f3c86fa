/* bqpe — Bayesian quantum phase estimation core.
 *
 * C interface to the bqpe library. All objects are opaque handles created
 * and destroyed through these functions; every fallible call returns a
 * bqpe_status and reports details via bqpe_last_error(). Handles are not
 * thread-safe for concurrent mutation, but all operations on distinct
 * handles, and all read-only queries, may run concurrently.
 *
 * Angles are radians, mean-square errors radians^2. Phases live on
 * [0, 2*pi]. A probe state with photon number n has n+1 complex
 * coefficients indexed l = 0..n.
 */

#ifndef BQPE_H
#define BQPE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BQPE_API __declspec(dllexport)
#else
#define BQPE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bqpe_status {
  BQPE_OK = 0,
  BQPE_ERR_INVALID_ARGUMENT = 1,
  BQPE_ERR_PARSE = 2,
  BQPE_ERR_NUMERIC = 3,
  BQPE_ERR_DEGENERATE_POSTERIOR = 4,
  BQPE_ERR_UNSUPPORTED = 5,
  BQPE_ERR_IO = 6
} bqpe_status;

typedef enum bqpe_policy {
  BQPE_POLICY_ALL_BRANCHES = 0,
  BQPE_POLICY_LEFTMOST = 1
} bqpe_policy;

typedef struct bqpe_prior bqpe_prior;
typedef struct bqpe_state bqpe_state;
typedef struct bqpe_solution bqpe_solution;
typedef struct bqpe_opt_result bqpe_opt_result;
typedef struct bqpe_tree bqpe_tree;

/* Message describing the most recent failure on this thread. */
BQPE_API const char* bqpe_last_error(void);
BQPE_API const char* bqpe_version(void);

/* Frees strings returned by bqpe_tree_json. */
BQPE_API void bqpe_string_free(char* s);

/* ---- priors ------------------------------------------------------------ */

/* Grammar: "flat", "trunc:<lo>..<hi>", "grid:<csv-path>" (lines "phi,density",
 * header optional). */
BQPE_API bqpe_status bqpe_prior_parse(const char* spec, bqpe_prior** out);
BQPE_API bqpe_status bqpe_prior_flat(bqpe_prior** out);
BQPE_API bqpe_status bqpe_prior_truncated(double lo, double hi, bqpe_prior** out);
BQPE_API bqpe_status bqpe_prior_grid(const double* phi, const double* density,
                                     size_t count, bqpe_prior** out);
BQPE_API void bqpe_prior_free(bqpe_prior* p);

BQPE_API bqpe_status bqpe_prior_density(const bqpe_prior* p, double phi, double* out);
/* integral of phi^k * exp(i*omega*phi) against the prior, k = 0..2 */
BQPE_API bqpe_status bqpe_prior_moment(const bqpe_prior* p, int k, double omega,
                                       double* out_re, double* out_im);
BQPE_API bqpe_status bqpe_prior_mean_variance(const bqpe_prior* p, double* mean,
                                              double* variance);

/* Posterior through Bayes rule against a caller-supplied likelihood.
 * grid_nodes <= 0 selects the default resolution (4096). */
typedef double (*bqpe_likelihood_fn)(double phi, void* ctx);
BQPE_API bqpe_status bqpe_prior_bayes_update(const bqpe_prior* p,
                                             bqpe_likelihood_fn likelihood,
                                             void* ctx, int grid_nodes,
                                             bqpe_prior** out_posterior,
                                             double* out_evidence);

/* ---- probe states ------------------------------------------------------ */

/* Grammar: "noon:<n>", "bs:<n>:<tau>", "coeffs:[re,im;re,im;...]"
 * (coefficients are normalized on parse). */
BQPE_API bqpe_status bqpe_state_parse(const char* spec, bqpe_state** out);
BQPE_API bqpe_status bqpe_state_noon(int n, bqpe_state** out);
BQPE_API bqpe_status bqpe_state_beam_splitter(int n, double tau, bqpe_state** out);
BQPE_API bqpe_status bqpe_state_from_coeffs(int n, const double* re, const double* im,
                                            bqpe_state** out);
BQPE_API void bqpe_state_free(bqpe_state* s);

BQPE_API int bqpe_state_photon_number(const bqpe_state* s);
BQPE_API bqpe_status bqpe_state_coeff(const bqpe_state* s, int l, double* out_re,
                                      double* out_im);
BQPE_API bqpe_status bqpe_state_apply_phase(const bqpe_state* s, double phi,
                                            bqpe_state** out);
/* |<projector|state(phi)>|^2; projector has n+1 entries and must be normalized. */
BQPE_API bqpe_status bqpe_born_probability(const bqpe_state* s, const double* proj_re,
                                           const double* proj_im, double phi,
                                           double* out);

/* ---- estimator solution ------------------------------------------------ */

BQPE_API bqpe_status bqpe_solve(const bqpe_state* s, const bqpe_prior* p,
                                bqpe_solution** out);
BQPE_API void bqpe_solution_free(bqpe_solution* sol);

BQPE_API double bqpe_solution_mmse(const bqpe_solution* sol);
BQPE_API int bqpe_solution_dim(const bqpe_solution* sol);
BQPE_API bqpe_status bqpe_solution_b_entry(const bqpe_solution* sol, int row, int col,
                                           double* out_re, double* out_im);
/* estimates are sorted in descending order; k indexes outcomes 0..dim-1 */
BQPE_API bqpe_status bqpe_solution_estimate(const bqpe_solution* sol, int k, double* out);
BQPE_API bqpe_status bqpe_solution_projector(const bqpe_solution* sol, int k, int row,
                                             double* out_re, double* out_im);

/* Mean-square error of the solution's measurement evaluated by the
 * outcome-sum route; equals bqpe_solution_mmse for the optimal measurement. */
BQPE_API bqpe_status bqpe_mse_of_measurement(const bqpe_state* s, const bqpe_prior* p,
                                             const bqpe_solution* sol, double* out);

/* Replaces the estimator operator by B + K where K is Hermitian and
 * annihilates gamma0 on both sides (row-major dim*dim arrays). */
BQPE_API bqpe_status bqpe_gauge_perturb(const bqpe_solution* sol, const double* k_re,
                                        const double* k_im, bqpe_solution** out);

/* ---- closed forms ------------------------------------------------------ */

/* Flat-prior minimum mean-square error of a probe state. */
BQPE_API bqpe_status bqpe_mmse_flat_closed_form(const bqpe_state* s, double* out);
/* NOON probe against a uniform prior of width m, 0 < m <= 2*pi. */
BQPE_API bqpe_status bqpe_mmse_noon_truncated(int n, double m, double* out);

/* ---- probe optimization ------------------------------------------------ */

BQPE_API bqpe_status bqpe_optimize_coefficients(int n, const bqpe_prior* p,
                                                int allow_phases, int restarts,
                                                uint64_t seed, bqpe_opt_result** out);
/* Exhaustive amplitude-grid search, n <= 3; validates the optimizer. */
BQPE_API bqpe_status bqpe_brute_force_oracle(int n, const bqpe_prior* p, int grid_steps,
                                             bqpe_opt_result** out);
BQPE_API void bqpe_opt_result_free(bqpe_opt_result* r);

BQPE_API double bqpe_opt_result_mmse(const bqpe_opt_result* r);
BQPE_API int bqpe_opt_result_dim(const bqpe_opt_result* r);
BQPE_API bqpe_status bqpe_opt_result_coeff(const bqpe_opt_result* r, int l,
                                           double* out_re, double* out_im);
BQPE_API int bqpe_opt_result_converged(const bqpe_opt_result* r);
BQPE_API int bqpe_opt_result_restarts_used(const bqpe_opt_result* r);

/* Beam-splitter transmissivity minimizing the flat-prior error. */
BQPE_API bqpe_status bqpe_optimize_bs_transmissivity(int n, double* out_tau,
                                                     double* out_mmse);

/* ---- adaptive protocol (single-photon probes) -------------------------- */

BQPE_API bqpe_status bqpe_adaptive_run(const bqpe_prior* initial, int depth,
                                       bqpe_policy policy, int reoptimize,
                                       int grid_nodes, int restarts, uint64_t seed,
                                       bqpe_tree** out);
BQPE_API void bqpe_tree_free(bqpe_tree* t);

BQPE_API int bqpe_tree_depth(const bqpe_tree* t);
/* Best (smallest) node mmse at step s = 1..depth. */
BQPE_API bqpe_status bqpe_tree_step_best_mmse(const bqpe_tree* t, int step, double* out);
/* Serializes the expanded tree to JSON; free with bqpe_string_free. */
BQPE_API bqpe_status bqpe_tree_json(const bqpe_tree* t, char** out);
/* Per step s: adaptive best mmse from the tree and the mmse of a single
 * optimized n = s probe against the initial prior. Arrays hold depth entries. */
BQPE_API bqpe_status bqpe_tree_compare_single_shot(const bqpe_tree* t,
                                                   const bqpe_prior* initial,
                                                   int restarts, uint64_t seed,
                                                   double* out_adaptive,
                                                   double* out_single_shot);

/* Error for a two-spike prior with peaks separated by pi; tends to pi^2/4
 * as spike_width tends to 0. */
BQPE_API bqpe_status bqpe_delta_infinity(double spike_width, double* out);

#ifdef __cplusplus
}
#endif

#endif /* BQPE_H */
