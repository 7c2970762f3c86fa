#pragma once

#include <cstdint>
#include <utility>

#include "personick.hpp"
#include "prior.hpp"
#include "states.hpp"

namespace bqpe {

struct OptimizeOptions {
  int restarts = 16;
  uint64_t seed = 1;
  int max_iterations = 4000;
  double param_tol = 1e-10;   // simplex diameter
  double value_tol = 1e-12;   // simplex value spread
};

struct OptimizationResult {
  FockSuperposition state;
  double mmse = 0.0;
  int restarts_used = 0;
  bool converged = false;
};

// Multi-start simplex search over unit-sphere amplitudes (n angles) plus,
// when allow_phases, n relative phases with a_0 kept real. Seeds: uniform,
// NOON, balanced beam splitter, then seeded random directions. The reported
// state is canonicalized: componentwise-modulus representative when it ties
// the objective, global phase fixed, palindrome reflection when lex-smaller
// and objective-neutral.
OptimizationResult optimize_coefficients(int n, const Prior& prior, bool allow_phases,
                                         const OptimizeOptions& options = {});

// Beam-splitter transmissivity minimizing the flat-prior error; golden
// section on [0, 1].
std::pair<double, double> optimize_bs_transmissivity(int n);

// Exhaustive grid over non-negative amplitudes (hyperspherical angles in
// [0, pi/2]); n <= 3, grid_steps >= 32. Validates the optimizer to within
// the grid resolution.
OptimizationResult brute_force_oracle(int n, const Prior& prior, int grid_steps);

// Error-scale bound on how far the oracle's best grid value can sit above
// the true optimum.
double oracle_resolution_bound(int grid_steps);

}  // namespace bqpe
