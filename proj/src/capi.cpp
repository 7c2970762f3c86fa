#include "bqpe/bqpe.h"

#include <cstring>
#include <new>
#include <string>

#include "adaptive.hpp"
#include "errors.hpp"
#include "optimize.hpp"
#include "personick.hpp"
#include "prior.hpp"
#include "specparse.hpp"
#include "states.hpp"

struct bqpe_prior {
  bqpe::Prior value;
};
struct bqpe_state {
  bqpe::FockSuperposition value;
};
struct bqpe_solution {
  bqpe::FockSuperposition state;
  bqpe::PersonickSolution value;
};
struct bqpe_opt_result {
  bqpe::OptimizationResult value;
};
struct bqpe_tree {
  bqpe::AdaptiveTree value;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : "unknown error"; }

template <typename Fn>
bqpe_status guarded(Fn&& fn) {
  try {
    fn();
    return BQPE_OK;
  } catch (const bqpe::ParseError& e) {
    set_error(e.what());
    return BQPE_ERR_PARSE;
  } catch (const bqpe::DegeneratePosteriorError& e) {
    set_error(e.what());
    return BQPE_ERR_DEGENERATE_POSTERIOR;
  } catch (const bqpe::UnsupportedError& e) {
    set_error(e.what());
    return BQPE_ERR_UNSUPPORTED;
  } catch (const bqpe::NumericError& e) {
    set_error(e.what());
    return BQPE_ERR_NUMERIC;
  } catch (const std::bad_alloc& e) {
    set_error(e.what());
    return BQPE_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return BQPE_ERR_INVALID_ARGUMENT;
  }
}

bqpe_status require(bool ok, const char* message) {
  if (ok) return BQPE_OK;
  set_error(message);
  return BQPE_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* bqpe_last_error(void) { return g_last_error.c_str(); }

const char* bqpe_version(void) { return "0.1.0"; }

void bqpe_string_free(char* s) { delete[] s; }

/* ---- priors ------------------------------------------------------------ */

bqpe_status bqpe_prior_parse(const char* spec, bqpe_prior** out) {
  if (require(spec && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new bqpe_prior{bqpe::parse_prior_spec(spec)}; });
}

bqpe_status bqpe_prior_flat(bqpe_prior** out) {
  if (require(out != nullptr, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new bqpe_prior{bqpe::Prior::flat()}; });
}

bqpe_status bqpe_prior_truncated(double lo, double hi, bqpe_prior** out) {
  if (require(out != nullptr, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new bqpe_prior{bqpe::Prior::truncated(lo, hi)}; });
}

bqpe_status bqpe_prior_grid(const double* phi, const double* density, size_t count,
                            bqpe_prior** out) {
  if (require(phi && density && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new bqpe_prior{bqpe::Prior::grid(std::vector<double>(phi, phi + count),
                                            std::vector<double>(density, density + count))};
  });
}

void bqpe_prior_free(bqpe_prior* p) { delete p; }

bqpe_status bqpe_prior_density(const bqpe_prior* p, double phi, double* out) {
  if (require(p && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = p->value.density(phi); });
}

bqpe_status bqpe_prior_moment(const bqpe_prior* p, int k, double omega, double* out_re,
                              double* out_im) {
  if (require(p && out_re && out_im, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const std::complex<double> m = p->value.moment(k, omega);
    *out_re = m.real();
    *out_im = m.imag();
  });
}

bqpe_status bqpe_prior_mean_variance(const bqpe_prior* p, double* mean,
                                     double* variance) {
  if (require(p && mean && variance, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const auto [m, v] = p->value.mean_and_variance();
    *mean = m;
    *variance = v;
  });
}

bqpe_status bqpe_prior_bayes_update(const bqpe_prior* p, bqpe_likelihood_fn likelihood,
                                    void* ctx, int grid_nodes,
                                    bqpe_prior** out_posterior, double* out_evidence) {
  if (require(p && likelihood && out_posterior, "null argument"))
    return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const int nodes = grid_nodes > 0 ? grid_nodes : bqpe::Prior::kDefaultGridNodes;
    bqpe::PriorUpdate update = p->value.bayes_update(
        [likelihood, ctx](double phi) { return likelihood(phi, ctx); }, nodes);
    *out_posterior = new bqpe_prior{std::move(update.posterior)};
    if (out_evidence) *out_evidence = update.evidence;
  });
}

/* ---- probe states ------------------------------------------------------ */

bqpe_status bqpe_state_parse(const char* spec, bqpe_state** out) {
  if (require(spec && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new bqpe_state{bqpe::parse_state_spec(spec)}; });
}

bqpe_status bqpe_state_noon(int n, bqpe_state** out) {
  if (require(out != nullptr, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new bqpe_state{bqpe::noon(n)}; });
}

bqpe_status bqpe_state_beam_splitter(int n, double tau, bqpe_state** out) {
  if (require(out != nullptr, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new bqpe_state{bqpe::beam_splitter_state(n, tau)}; });
}

bqpe_status bqpe_state_from_coeffs(int n, const double* re, const double* im,
                                   bqpe_state** out) {
  if (require(re && out && n >= 0, "null argument or negative photon number"))
    return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    std::vector<std::complex<double>> coeffs(n + 1);
    for (int l = 0; l <= n; ++l)
      coeffs[l] = {re[l], im ? im[l] : 0.0};
    *out = new bqpe_state{bqpe::state_from_coefficients(n, std::move(coeffs))};
  });
}

void bqpe_state_free(bqpe_state* s) { delete s; }

int bqpe_state_photon_number(const bqpe_state* s) { return s ? s->value.n : -1; }

bqpe_status bqpe_state_coeff(const bqpe_state* s, int l, double* out_re,
                             double* out_im) {
  if (require(s && out_re && out_im, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  if (require(l >= 0 && l <= s->value.n, "coefficient index out of range"))
    return BQPE_ERR_INVALID_ARGUMENT;
  *out_re = s->value.coeffs[l].real();
  *out_im = s->value.coeffs[l].imag();
  return BQPE_OK;
}

bqpe_status bqpe_state_apply_phase(const bqpe_state* s, double phi, bqpe_state** out) {
  if (require(s && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new bqpe_state{bqpe::apply_phase(s->value, phi)}; });
}

bqpe_status bqpe_born_probability(const bqpe_state* s, const double* proj_re,
                                  const double* proj_im, double phi, double* out) {
  if (require(s && proj_re && proj_im && out, "null argument"))
    return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const bqpe::FockSuperposition shifted = bqpe::apply_phase(s->value, phi);
    std::complex<double> overlap = 0.0;
    double norm = 0.0;
    for (int l = 0; l <= s->value.n; ++l) {
      const std::complex<double> pl{proj_re[l], proj_im[l]};
      overlap += std::conj(pl) * shifted.coeffs[l];
      norm += std::norm(pl);
    }
    if (std::abs(norm - 1.0) > 1e-9)
      throw std::invalid_argument("projector is not normalized");
    *out = std::norm(overlap);
  });
}

/* ---- estimator solution ------------------------------------------------ */

bqpe_status bqpe_solve(const bqpe_state* s, const bqpe_prior* p, bqpe_solution** out) {
  if (require(s && p && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    bqpe::PersonickSolution solution = bqpe::solve(s->value, p->value);
    *out = new bqpe_solution{s->value, std::move(solution)};
  });
}

void bqpe_solution_free(bqpe_solution* sol) { delete sol; }

double bqpe_solution_mmse(const bqpe_solution* sol) {
  return sol ? sol->value.mmse : -1.0;
}

int bqpe_solution_dim(const bqpe_solution* sol) {
  return sol ? int(sol->value.b_op.rows()) : 0;
}

bqpe_status bqpe_solution_b_entry(const bqpe_solution* sol, int row, int col,
                                  double* out_re, double* out_im) {
  if (require(sol && out_re && out_im, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  if (require(row >= 0 && col >= 0 && row < sol->value.b_op.rows() &&
                  col < sol->value.b_op.cols(),
              "matrix index out of range"))
    return BQPE_ERR_INVALID_ARGUMENT;
  *out_re = sol->value.b_op(row, col).real();
  *out_im = sol->value.b_op(row, col).imag();
  return BQPE_OK;
}

bqpe_status bqpe_solution_estimate(const bqpe_solution* sol, int k, double* out) {
  if (require(sol && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  if (require(k >= 0 && k < int(sol->value.measurement.estimates.size()),
              "outcome index out of range"))
    return BQPE_ERR_INVALID_ARGUMENT;
  *out = sol->value.measurement.estimates[k];
  return BQPE_OK;
}

bqpe_status bqpe_solution_projector(const bqpe_solution* sol, int k, int row,
                                    double* out_re, double* out_im) {
  if (require(sol && out_re && out_im, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  if (require(k >= 0 && k < sol->value.measurement.projectors.cols() && row >= 0 &&
                  row < sol->value.measurement.projectors.rows(),
              "projector index out of range"))
    return BQPE_ERR_INVALID_ARGUMENT;
  *out_re = sol->value.measurement.projectors(row, k).real();
  *out_im = sol->value.measurement.projectors(row, k).imag();
  return BQPE_OK;
}

bqpe_status bqpe_mse_of_measurement(const bqpe_state* s, const bqpe_prior* p,
                                    const bqpe_solution* sol, double* out) {
  if (require(s && p && sol && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = bqpe::mse_of_measurement(s->value, p->value, sol->value.measurement);
  });
}

bqpe_status bqpe_gauge_perturb(const bqpe_solution* sol, const double* k_re,
                               const double* k_im, bqpe_solution** out) {
  if (require(sol && k_re && k_im && out, "null argument"))
    return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const Eigen::Index dim = sol->value.b_op.rows();
    bqpe::ComplexMatrix k(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c)
        k(r, c) = {k_re[r * dim + c], k_im[r * dim + c]};
    bqpe::PersonickSolution moved = bqpe::gauge_perturb(sol->value, k);
    *out = new bqpe_solution{sol->state, std::move(moved)};
  });
}

/* ---- closed forms ------------------------------------------------------ */

bqpe_status bqpe_mmse_flat_closed_form(const bqpe_state* s, double* out) {
  if (require(s && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = bqpe::mmse_flat_closed_form(s->value); });
}

bqpe_status bqpe_mmse_noon_truncated(int n, double m, double* out) {
  if (require(out != nullptr, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = bqpe::mmse_noon_truncated_closed_form(n, m); });
}

/* ---- probe optimization ------------------------------------------------ */

bqpe_status bqpe_optimize_coefficients(int n, const bqpe_prior* p, int allow_phases,
                                       int restarts, uint64_t seed,
                                       bqpe_opt_result** out) {
  if (require(p && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    bqpe::OptimizeOptions options;
    if (restarts > 0) options.restarts = restarts;
    options.seed = seed;
    *out = new bqpe_opt_result{
        bqpe::optimize_coefficients(n, p->value, allow_phases != 0, options)};
  });
}

bqpe_status bqpe_brute_force_oracle(int n, const bqpe_prior* p, int grid_steps,
                                    bqpe_opt_result** out) {
  if (require(p && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new bqpe_opt_result{bqpe::brute_force_oracle(n, p->value, grid_steps)};
  });
}

void bqpe_opt_result_free(bqpe_opt_result* r) { delete r; }

double bqpe_opt_result_mmse(const bqpe_opt_result* r) {
  return r ? r->value.mmse : -1.0;
}

int bqpe_opt_result_dim(const bqpe_opt_result* r) {
  return r ? r->value.state.n + 1 : 0;
}

bqpe_status bqpe_opt_result_coeff(const bqpe_opt_result* r, int l, double* out_re,
                                  double* out_im) {
  if (require(r && out_re && out_im, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  if (require(l >= 0 && l <= r->value.state.n, "coefficient index out of range"))
    return BQPE_ERR_INVALID_ARGUMENT;
  *out_re = r->value.state.coeffs[l].real();
  *out_im = r->value.state.coeffs[l].imag();
  return BQPE_OK;
}

int bqpe_opt_result_converged(const bqpe_opt_result* r) {
  return r && r->value.converged ? 1 : 0;
}

int bqpe_opt_result_restarts_used(const bqpe_opt_result* r) {
  return r ? r->value.restarts_used : 0;
}

bqpe_status bqpe_optimize_bs_transmissivity(int n, double* out_tau, double* out_mmse) {
  if (require(out_tau && out_mmse, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const auto [tau, mmse] = bqpe::optimize_bs_transmissivity(n);
    *out_tau = tau;
    *out_mmse = mmse;
  });
}

/* ---- adaptive protocol ------------------------------------------------- */

bqpe_status bqpe_adaptive_run(const bqpe_prior* initial, int depth, bqpe_policy policy,
                              int reoptimize, int grid_nodes, int restarts,
                              uint64_t seed, bqpe_tree** out) {
  if (require(initial && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    bqpe::AdaptiveOptions options;
    if (grid_nodes > 0) options.grid_nodes = grid_nodes;
    if (restarts > 0) options.optimize.restarts = restarts;
    options.optimize.seed = seed;
    options.reoptimize = reoptimize != 0;
    const bqpe::ExpandPolicy pol = policy == BQPE_POLICY_LEFTMOST
                                       ? bqpe::ExpandPolicy::LeftmostPath
                                       : bqpe::ExpandPolicy::AllBranches;
    *out = new bqpe_tree{bqpe::run_tree(initial->value, depth, pol, options)};
  });
}

void bqpe_tree_free(bqpe_tree* t) { delete t; }

int bqpe_tree_depth(const bqpe_tree* t) { return t ? t->value.depth : 0; }

bqpe_status bqpe_tree_step_best_mmse(const bqpe_tree* t, int step, double* out) {
  if (require(t && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  if (require(step >= 1 && step <= t->value.depth, "step out of range"))
    return BQPE_ERR_INVALID_ARGUMENT;
  *out = t->value.step_best_mmse[step - 1];
  return BQPE_OK;
}

bqpe_status bqpe_tree_json(const bqpe_tree* t, char** out) {
  if (require(t && out, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const std::string json = bqpe::tree_to_json(t->value);
    char* buf = new char[json.size() + 1];
    std::memcpy(buf, json.c_str(), json.size() + 1);
    *out = buf;
  });
}

bqpe_status bqpe_tree_compare_single_shot(const bqpe_tree* t, const bqpe_prior* initial,
                                          int restarts, uint64_t seed,
                                          double* out_adaptive,
                                          double* out_single_shot) {
  if (require(t && initial && out_adaptive && out_single_shot, "null argument"))
    return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    bqpe::OptimizeOptions options;
    if (restarts > 0) options.restarts = restarts;
    options.seed = seed;
    const auto rows = bqpe::compare_single_shot(t->value, initial->value, options);
    for (size_t i = 0; i < rows.size(); ++i) {
      out_adaptive[i] = rows[i].adaptive_mmse;
      out_single_shot[i] = rows[i].single_shot_mmse;
    }
  });
}

bqpe_status bqpe_delta_infinity(double spike_width, double* out) {
  if (require(out != nullptr, "null argument")) return BQPE_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = bqpe::delta_infinity_check(spike_width); });
}

}  // extern "C"
