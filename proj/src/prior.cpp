#include "prior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace bqpe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

double pow_int(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Antiderivative of phi^k exp(i omega phi) for omega != 0.
std::complex<double> antideriv(int k, double phi, double omega) {
  const std::complex<double> e = std::exp(kI * (omega * phi));
  const std::complex<double> iw = kI * omega;
  const double w2 = omega * omega;
  switch (k) {
    case 0:
      return e / iw;
    case 1:
      return e * (phi / iw + 1.0 / w2);
    default:
      return e * (phi * phi / iw + 2.0 * phi / w2 + 2.0 * kI / (w2 * omega));
  }
}

}  // namespace

std::complex<double> segment_moment(int k, double a, double b, double omega) {
  if (k < 0 || k > 2) throw std::invalid_argument("segment_moment: k must be 0..2");
  if (std::abs(omega) < 1e-12)
    return {(pow_int(b, k + 1) - pow_int(a, k + 1)) / (k + 1), 0.0};
  // The closed antiderivative cancels badly when |omega * phi| is small;
  // a short Taylor series in (i omega) is exact to machine precision there.
  const double scale = std::abs(omega) * std::max(std::abs(a), std::abs(b));
  if (scale <= 0.5) {
    std::complex<double> sum = 0.0, term = 1.0;
    for (int j = 0;; ++j) {
      const int p = k + j + 1;
      const std::complex<double> contrib =
          term * ((pow_int(b, p) - pow_int(a, p)) / p);
      sum += contrib;
      if (std::abs(contrib) < 1e-18 * (1.0 + std::abs(sum)) || j > 40) break;
      term *= kI * omega / double(j + 1);
    }
    return sum;
  }
  return antideriv(k, b, omega) - antideriv(k, a, omega);
}

std::vector<double> quadrature_weights(const std::vector<double>& xs) {
  const size_t n = xs.size();
  if (n < 3) throw std::invalid_argument("quadrature_weights: need at least 3 nodes");
  std::vector<double> w(n, 0.0);
  const size_t intervals = n - 1;
  size_t i = 0;
  // Quadratic rule over consecutive interval pairs.
  while (intervals - i >= 2) {
    const double h1 = xs[i + 1] - xs[i];
    const double h2 = xs[i + 2] - xs[i + 1];
    const double h = h1 + h2;
    w[i] += h / 6.0 * (2.0 - h2 / h1);
    w[i + 1] += h / 6.0 * (h * h / (h1 * h2));
    w[i + 2] += h / 6.0 * (2.0 - h1 / h2);
    i += 2;
  }
  if (i < intervals) {
    // One interval left: integrate it with the quadratic through the last
    // three nodes.
    const size_t m = n - 1;
    const double h1 = xs[m - 1] - xs[m - 2];
    const double h2 = xs[m] - xs[m - 1];
    w[m - 2] += -h2 * h2 * h2 / (6.0 * h1 * (h1 + h2));
    w[m - 1] += h2 * h2 / (6.0 * h1) + h2 / 2.0;
    w[m] += h2 * (2.0 * h2 + 3.0 * h1) / (6.0 * (h1 + h2));
  }
  return w;
}

Prior Prior::flat() {
  Prior p;
  p.kind_ = Kind::Flat;
  p.lo_ = 0.0;
  p.hi_ = kTwoPi;
  return p;
}

Prior Prior::truncated(double lo, double hi) {
  if (!(lo >= 0.0 && lo < hi && hi <= kTwoPi + 1e-9))
    throw std::domain_error("truncated prior requires 0 <= lo < hi <= 2*pi");
  Prior p;
  p.kind_ = Kind::TruncatedFlat;
  p.lo_ = lo;
  p.hi_ = std::min(hi, kTwoPi);
  return p;
}

Prior Prior::grid(std::vector<double> phi, std::vector<double> density) {
  if (phi.size() != density.size())
    throw std::invalid_argument("grid prior: phi/density size mismatch");
  if (phi.size() < 3) throw std::invalid_argument("grid prior: need at least 3 nodes");
  if (phi.front() < -1e-9 || phi.back() > kTwoPi + 1e-9)
    throw std::domain_error("grid prior: nodes outside [0, 2*pi]");
  for (size_t i = 0; i + 1 < phi.size(); ++i)
    if (!(phi[i] < phi[i + 1]))
      throw std::invalid_argument("grid prior: nodes must be strictly increasing");
  for (double& d : density) {
    if (d < -1e-9) throw std::domain_error("grid prior: negative density");
    d = std::max(d, 0.0);
  }
  Prior p;
  p.kind_ = Kind::Grid;
  p.lo_ = std::max(phi.front(), 0.0);
  p.hi_ = std::min(phi.back(), kTwoPi);
  p.wts_ = quadrature_weights(phi);
  double mass = 0.0;
  for (size_t i = 0; i < phi.size(); ++i) mass += p.wts_[i] * density[i];
  if (mass <= kEvidenceFloor)
    throw DegeneratePosteriorError("grid prior: total mass underflows");
  for (double& d : density) d /= mass;
  p.phi_ = std::move(phi);
  p.dens_ = std::move(density);
  return p;
}

double Prior::density(double phi) const {
  if (phi < -1e-9 || phi > kTwoPi + 1e-9)
    throw std::domain_error("density: phi outside [0, 2*pi]");
  switch (kind_) {
    case Kind::Flat:
      return 1.0 / kTwoPi;
    case Kind::TruncatedFlat:
      return (phi >= lo_ && phi <= hi_) ? 1.0 / (hi_ - lo_) : 0.0;
    case Kind::Grid: {
      if (phi < phi_.front() || phi > phi_.back()) return 0.0;
      const auto it = std::upper_bound(phi_.begin(), phi_.end(), phi);
      const size_t j = std::min<size_t>(
          phi_.size() - 1, size_t(std::distance(phi_.begin(), it)));
      if (j == 0) return dens_.front();
      const double t = (phi - phi_[j - 1]) / (phi_[j] - phi_[j - 1]);
      return dens_[j - 1] + t * (dens_[j] - dens_[j - 1]);
    }
  }
  return 0.0;
}

std::complex<double> Prior::moment(int k, double omega) const {
  if (k < 0 || k > 2) throw std::invalid_argument("moment: k must be 0..2");
  switch (kind_) {
    case Kind::Flat:
      return segment_moment(k, 0.0, kTwoPi, omega) / kTwoPi;
    case Kind::TruncatedFlat:
      return segment_moment(k, lo_, hi_, omega) / (hi_ - lo_);
    case Kind::Grid: {
      std::complex<double> sum = 0.0;
      for (size_t i = 0; i < phi_.size(); ++i) {
        if (dens_[i] == 0.0) continue;
        sum += wts_[i] * dens_[i] * pow_int(phi_[i], k) *
               std::exp(kI * (omega * phi_[i]));
      }
      return sum;
    }
  }
  return 0.0;
}

std::pair<double, double> Prior::mean_and_variance() const {
  const double m1 = moment(1, 0.0).real();
  const double m2 = moment(2, 0.0).real();
  return {m1, m2 - m1 * m1};
}

void Prior::measure(std::vector<double>& nodes, std::vector<double>& weights,
                    int min_nodes) const {
  if (kind_ == Kind::Grid) {
    nodes = phi_;
    weights.resize(phi_.size());
    for (size_t i = 0; i < phi_.size(); ++i) weights[i] = wts_[i] * dens_[i];
    return;
  }
  const int n = std::max(min_nodes, 3);
  nodes.resize(n);
  const double h = (hi_ - lo_) / (n - 1);
  for (int i = 0; i < n; ++i) nodes[i] = lo_ + h * i;
  nodes.back() = hi_;
  weights = quadrature_weights(nodes);
  const double d = 1.0 / (hi_ - lo_);
  for (double& w : weights) w *= d;
}

PriorUpdate Prior::bayes_update(const std::function<double(double)>& likelihood,
                                  int grid_nodes) const {
  std::vector<double> nodes;
  if (kind_ == Kind::Grid) {
    nodes = phi_;
  } else {
    const int n = std::max(grid_nodes, 3);
    nodes.resize(n);
    const double h = (hi_ - lo_) / (n - 1);
    for (int i = 0; i < n; ++i) nodes[i] = lo_ + h * i;
    nodes.back() = hi_;
  }
  std::vector<double> post(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) {
    double lk = likelihood(nodes[i]);
    if (lk < -1e-9 || lk > 1.0 + 1e-9)
      throw std::invalid_argument("bayes_update: likelihood outside [0, 1]");
    lk = std::clamp(lk, 0.0, 1.0);
    post[i] = lk * density(nodes[i]);
  }
  const std::vector<double> w = quadrature_weights(nodes);
  double evidence = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) evidence += w[i] * post[i];
  if (evidence < kEvidenceFloor)
    throw DegeneratePosteriorError(
        "bayes_update: outcome has zero probability under the prior");
  return {grid(std::move(nodes), std::move(post)), evidence};
}

}  // namespace bqpe
