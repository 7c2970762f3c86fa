#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "prior.hpp"
#include "states.hpp"

namespace bqpe {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// max |m(i,j) - conj(m(j,i))|
double hermiticity_error(const ComplexMatrix& m);

// Projective measurement extracted from the estimator operator: column k of
// `projectors` is the outcome-k vector and `estimates[k]` the value reported
// on that outcome. Estimates are sorted in descending order; degenerate
// blocks are orthonormalized deterministically and tied columns ordered by
// the lexicographic rank of their real parts.
struct MeasurementSpec {
  ComplexMatrix projectors;
  std::vector<double> estimates;
};

struct PersonickSolution {
  ComplexMatrix gamma0;
  ComplexMatrix gamma1;
  double tr_gamma2 = 0.0;
  ComplexMatrix b_op;
  double mmse = 0.0;
  MeasurementSpec measurement;
};

// Prior moments integral phi^k exp(2i d phi) for d = -n..n, cached so state
// optimization loops touch the prior only once.
class MomentTable {
 public:
  MomentTable(const Prior& prior, int n);

  int photon_number() const { return n_; }
  std::complex<double> get(int k, int delta) const { return m_[k][delta + n_]; }
  double prior_variance() const { return variance_; }

 private:
  int n_;
  std::array<std::vector<std::complex<double>>, 3> m_;
  double variance_;
};

// Weighted state moment: entry (l, l') = a_l conj(a_l') m_k(l - l').
ComplexMatrix build_gamma(const FockSuperposition& state, const MomentTable& table,
                          int k);
ComplexMatrix build_gamma(const FockSuperposition& state, const Prior& prior, int k);

// Minimal-norm Hermitian solution of B g0 + g0 B = 2 g1 via the eigenbasis
// of g0; entries on the null space of g0 are zero. g0 must be positive
// semidefinite up to -1e-8.
ComplexMatrix solve_b(const ComplexMatrix& gamma0, const ComplexMatrix& gamma1);

// Objective-only path used by optimizers (no measurement extraction).
double solve_mmse(const FockSuperposition& state, const MomentTable& table);

PersonickSolution solve(const FockSuperposition& state, const MomentTable& table);
PersonickSolution solve(const FockSuperposition& state, const Prior& prior);

// Outcome-sum mean-square error of an arbitrary measurement, integrated
// against the prior with its consistent discrete measure.
double mse_of_measurement(const FockSuperposition& state, const Prior& prior,
                          const MeasurementSpec& meas);

// Flat-prior minimum error as an explicit sum over coefficient pairs.
double mmse_flat_closed_form(const FockSuperposition& state);

// NOON probe against a uniform prior of width m in (0, 2*pi]; series branch
// for m*n < 1e-3 where the trigonometric form cancels.
double mmse_noon_truncated_closed_form(int n, double m);

// Replaces the estimator operator by b_op + k_op where k_op is Hermitian and
// annihilates gamma0 on both sides; the error value must be unchanged.
PersonickSolution gauge_perturb(const PersonickSolution& solution,
                                const ComplexMatrix& k_op);

MeasurementSpec extract_measurement(const ComplexMatrix& b_op);

}  // namespace bqpe
