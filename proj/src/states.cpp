#include "states.hpp"

#include <cmath>
#include <stdexcept>

namespace bqpe {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kNormTol = 1e-10;
}  // namespace

double norm_sq(const FockSuperposition& s) {
  double t = 0.0;
  for (const auto& a : s.coeffs) t += std::norm(a);
  return t;
}

FockSuperposition noon(int n) {
  if (n < 1) throw std::domain_error("noon: photon number must be >= 1");
  FockSuperposition s;
  s.n = n;
  s.coeffs.assign(n + 1, 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  s.coeffs.front() = r;
  s.coeffs.back() = r;
  return s;
}

FockSuperposition beam_splitter_state(int n, double tau) {
  if (n < 1) throw std::domain_error("beam_splitter_state: photon number must be >= 1");
  if (tau < 0.0 || tau > 1.0)
    throw std::domain_error("beam_splitter_state: tau outside [0, 1]");
  FockSuperposition s;
  s.n = n;
  s.coeffs.assign(n + 1, 0.0);
  if (tau == 0.0) {
    s.coeffs[0] = 1.0;
    return s;
  }
  if (tau == 1.0) {
    s.coeffs[n] = 1.0;
    return s;
  }
  // log-space binomial keeps large n well conditioned
  for (int l = 0; l <= n; ++l) {
    const double log_binom =
        std::lgamma(n + 1.0) - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0);
    s.coeffs[l] = std::exp(
        0.5 * (log_binom + l * std::log(tau) + (n - l) * std::log1p(-tau)));
  }
  return s;
}

FockSuperposition state_from_coefficients(int n,
                                          std::vector<std::complex<double>> coeffs) {
  if (n < 0) throw std::domain_error("state: photon number must be >= 0");
  if (coeffs.size() != size_t(n) + 1)
    throw std::invalid_argument("state: need n+1 coefficients");
  FockSuperposition s;
  s.n = n;
  s.coeffs = std::move(coeffs);
  if (std::abs(norm_sq(s) - 1.0) > kNormTol)
    throw std::invalid_argument("state: coefficients are not normalized");
  return s;
}

FockSuperposition apply_phase(const FockSuperposition& s, double phi) {
  FockSuperposition out = s;
  for (int l = 0; l <= s.n; ++l)
    out.coeffs[l] *= std::exp(kI * ((2.0 * l - s.n) * phi));
  return out;
}

FockSuperposition canonical_global_phase(FockSuperposition s) {
  for (const auto& a : s.coeffs) {
    if (std::abs(a) > 1e-12) {
      const std::complex<double> rot = std::conj(a) / std::abs(a);
      for (auto& c : s.coeffs) c *= rot;
      break;
    }
  }
  return s;
}

}  // namespace bqpe
