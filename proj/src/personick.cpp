#include "personick.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace bqpe {

namespace {

constexpr double kNullSpaceTol = 1e-12;
constexpr double kNegativeEigTol = -1e-8;
constexpr double kResidualTol = 1e-9;
constexpr double kDegenerateGap = 1e-10;

void fix_column_phase(ComplexMatrix& vecs, Eigen::Index col) {
  for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
    const std::complex<double> v = vecs(r, col);
    if (std::abs(v) > 1e-9) {
      vecs.col(col) *= std::conj(v) / std::abs(v);
      return;
    }
  }
}

bool lex_less_real(const ComplexVector& a, const ComplexVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double ra = a(i).real(), rb = b(i).real();
    if (std::abs(ra - rb) > 1e-12) return ra < rb;
  }
  return false;
}

}  // namespace

double hermiticity_error(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

MomentTable::MomentTable(const Prior& prior, int n) : n_(n) {
  if (n < 0) throw std::domain_error("MomentTable: photon number must be >= 0");
  for (int k = 0; k < 3; ++k) {
    m_[k].resize(2 * n + 1);
    for (int d = 0; d <= n; ++d) {
      const std::complex<double> v = prior.moment(k, 2.0 * d);
      m_[k][d + n] = v;
      m_[k][n - d] = std::conj(v);
    }
  }
  const double mean = m_[1][n].real();
  variance_ = m_[2][n].real() - mean * mean;
}

ComplexMatrix build_gamma(const FockSuperposition& state, const MomentTable& table,
                          int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("build_gamma: k must be 0..2");
  const int dim = state.n + 1;
  ComplexMatrix g(dim, dim);
  for (int l = 0; l < dim; ++l) {
    g(l, l) = std::norm(state.coeffs[l]) * table.get(k, 0).real();
    for (int lp = l + 1; lp < dim; ++lp) {
      const std::complex<double> v =
          state.coeffs[l] * std::conj(state.coeffs[lp]) * table.get(k, l - lp);
      g(l, lp) = v;
      g(lp, l) = std::conj(v);
    }
  }
  return g;
}

ComplexMatrix build_gamma(const FockSuperposition& state, const Prior& prior, int k) {
  return build_gamma(state, MomentTable(prior, state.n), k);
}

ComplexMatrix solve_b(const ComplexMatrix& gamma0, const ComplexMatrix& gamma1) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gamma0);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < kNegativeEigTol)
    throw NumericError("solve_b: gamma0 is not positive semidefinite");
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), 0.0);

  const ComplexMatrix& u = es.eigenvectors();
  const ComplexMatrix g1t = u.adjoint() * gamma1 * u;
  ComplexMatrix bt = ComplexMatrix::Zero(ev.size(), ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    for (Eigen::Index j = 0; j < ev.size(); ++j) {
      const double s = ev(i) + ev(j);
      if (s > kNullSpaceTol) bt(i, j) = 2.0 * g1t(i, j) / s;
    }
  ComplexMatrix b = u * bt * u.adjoint();
  b = ((b + b.adjoint()) / 2.0).eval();

  // round-trip residual on the support of gamma0
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > kNullSpaceTol) support.push_back(i);
  if (!support.empty()) {
    ComplexMatrix us(ev.size(), Eigen::Index(support.size()));
    for (size_t c = 0; c < support.size(); ++c) us.col(c) = u.col(support[c]);
    const ComplexMatrix proj = us * us.adjoint();
    const ComplexMatrix residual =
        proj * (b * gamma0 + gamma0 * b - 2.0 * gamma1) * proj;
    if (residual.norm() > kResidualTol)
      throw NumericError("solve_b: anticommutator residual exceeds tolerance");
  }
  return b;
}

MeasurementSpec extract_measurement(const ComplexMatrix& b_op) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(b_op);
  const Eigen::Index dim = b_op.rows();

  // descending estimates
  std::vector<double> vals(dim);
  ComplexMatrix vecs(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    vals[i] = es.eigenvalues()(dim - 1 - i);
    vecs.col(i) = es.eigenvectors().col(dim - 1 - i);
  }

  // degenerate blocks: rebuild a deterministic orthonormal basis from
  // canonical seeds projected into the block subspace
  Eigen::Index start = 0;
  while (start < dim) {
    Eigen::Index end = start + 1;
    while (end < dim && std::abs(vals[end] - vals[end - 1]) <= kDegenerateGap) ++end;
    if (end - start > 1) {
      ComplexMatrix proj = ComplexMatrix::Zero(dim, dim);
      for (Eigen::Index c = start; c < end; ++c)
        proj += vecs.col(c) * vecs.col(c).adjoint();
      std::vector<ComplexVector> basis;
      for (Eigen::Index seed = 0; seed < dim && Eigen::Index(basis.size()) < end - start;
           ++seed) {
        ComplexVector w = proj.col(seed);
        for (const auto& q : basis) w -= q.dot(w) * q;
        const double nw = w.norm();
        if (nw > 1e-6) basis.push_back(w / nw);
      }
      if (Eigen::Index(basis.size()) != end - start)
        throw NumericError("extract_measurement: degenerate block reorthonormalization");
      for (Eigen::Index c = start; c < end; ++c) vecs.col(c) = basis[c - start];
    }
    start = end;
  }

  for (Eigen::Index c = 0; c < dim; ++c) fix_column_phase(vecs, c);

  // tie-break equal estimates lexicographically on the real parts
  start = 0;
  while (start < dim) {
    Eigen::Index end = start + 1;
    while (end < dim && std::abs(vals[end] - vals[end - 1]) <= kDegenerateGap) ++end;
    if (end - start > 1) {
      std::vector<Eigen::Index> order(end - start);
      for (Eigen::Index c = 0; c < end - start; ++c) order[c] = start + c;
      std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return lex_less_real(vecs.col(a), vecs.col(b));
      });
      ComplexMatrix tmp(dim, end - start);
      for (Eigen::Index c = 0; c < end - start; ++c) tmp.col(c) = vecs.col(order[c]);
      for (Eigen::Index c = 0; c < end - start; ++c) vecs.col(start + c) = tmp.col(c);
    }
    start = end;
  }

  MeasurementSpec spec;
  spec.projectors = std::move(vecs);
  spec.estimates = std::move(vals);
  return spec;
}

double solve_mmse(const FockSuperposition& state, const MomentTable& table) {
  const ComplexMatrix g0 = build_gamma(state, table, 0);
  const ComplexMatrix g1 = build_gamma(state, table, 1);
  const ComplexMatrix b = solve_b(g0, g1);
  const double tr_g2 = table.get(2, 0).real();  // unit-norm state
  return tr_g2 - (b * g1).trace().real();
}

PersonickSolution solve(const FockSuperposition& state, const MomentTable& table) {
  PersonickSolution sol;
  sol.gamma0 = build_gamma(state, table, 0);
  sol.gamma1 = build_gamma(state, table, 1);
  sol.tr_gamma2 = build_gamma(state, table, 2).trace().real();
  sol.b_op = solve_b(sol.gamma0, sol.gamma1);

  const std::complex<double> tr_bg1 = (sol.b_op * sol.gamma1).trace();
  if (std::abs(tr_bg1.imag()) > 1e-10)
    throw NumericError("solve: estimator trace has an imaginary residue");
  sol.mmse = sol.tr_gamma2 - tr_bg1.real();

  if (sol.mmse < -1e-9)
    throw NumericError("solve: negative mean-square error");
  sol.mmse = std::max(sol.mmse, 0.0);
  if (sol.mmse > table.prior_variance() + 1e-9)
    throw NumericError("solve: error exceeds the prior variance");

  sol.measurement = extract_measurement(sol.b_op);
  return sol;
}

PersonickSolution solve(const FockSuperposition& state, const Prior& prior) {
  return solve(state, MomentTable(prior, state.n));
}

double mse_of_measurement(const FockSuperposition& state, const Prior& prior,
                          const MeasurementSpec& meas) {
  const int dim = state.n + 1;
  if (meas.projectors.rows() != dim || meas.projectors.cols() != dim ||
      Eigen::Index(meas.estimates.size()) != dim)
    throw std::invalid_argument("mse_of_measurement: dimension mismatch");

  std::vector<double> nodes, weights;
  prior.measure(nodes, weights, 16385);

  ComplexVector amp(dim);
  double total = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const double phi = nodes[i];
    for (int l = 0; l < dim; ++l)
      amp(l) = state.coeffs[l] *
               std::exp(std::complex<double>(0.0, (2.0 * l - state.n) * phi));
    double inner = 0.0;
    for (int k = 0; k < dim; ++k) {
      const std::complex<double> ov = meas.projectors.col(k).dot(amp);
      const double diff = meas.estimates[k] - phi;
      inner += std::norm(ov) * diff * diff;
    }
    total += weights[i] * inner;
  }
  return total;
}

double mmse_flat_closed_form(const FockSuperposition& state) {
  constexpr double kPi = std::numbers::pi;
  double sum = 0.0;
  const int dim = state.n + 1;
  for (int l = 0; l < dim; ++l)
    for (int lp = 0; lp < dim; ++lp) {
      if (l == lp) continue;
      const double pl = std::norm(state.coeffs[l]);
      const double plp = std::norm(state.coeffs[lp]);
      if (pl + plp < 1e-14) continue;
      const double d = double(l - lp);
      sum += pl * plp / (2.0 * d * d * (pl + plp));
    }
  return kPi * kPi / 3.0 - sum;
}

double mmse_noon_truncated_closed_form(int n, double m) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (n < 1) throw std::domain_error("noon closed form: photon number must be >= 1");
  if (!(m > 0.0 && m <= kTwoPi + 1e-12))
    throw std::domain_error("noon closed form: width outside (0, 2*pi]");
  const double x = m * double(n);
  if (x < 1e-3) {
    const double x2 = x * x;
    return m * m * (1.0 / 12.0 - x2 / 36.0 + x2 * x2 / 180.0);
  }
  const double x2 = x * x;
  const double num = 2.0 * x2 * x2 - 3.0 * x2 + (3.0 - 3.0 * x2) * std::cos(2.0 * x) +
                     6.0 * x * std::sin(2.0 * x) - 3.0;
  return num / (24.0 * m * m * pow(double(n), 4));
}

PersonickSolution gauge_perturb(const PersonickSolution& solution,
                                const ComplexMatrix& k_op) {
  if (k_op.rows() != solution.b_op.rows() || k_op.cols() != solution.b_op.cols())
    throw std::invalid_argument("gauge_perturb: dimension mismatch");
  if (hermiticity_error(k_op) > 1e-10)
    throw std::invalid_argument("gauge_perturb: k_op is not Hermitian");
  if ((k_op * solution.gamma0).norm() > 1e-10 ||
      (solution.gamma0 * k_op).norm() > 1e-10)
    throw std::invalid_argument("gauge_perturb: k_op does not annihilate gamma0");

  PersonickSolution out = solution;
  out.b_op = solution.b_op + k_op;
  const double mmse =
      solution.tr_gamma2 - (out.b_op * solution.gamma1).trace().real();
  if (std::abs(mmse - solution.mmse) > 1e-10)
    throw NumericError("gauge_perturb: error value changed");
  out.mmse = mmse;
  out.measurement = extract_measurement(out.b_op);
  return out;
}

}  // namespace bqpe
