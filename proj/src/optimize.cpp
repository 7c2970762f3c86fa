#include "optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "errors.hpp"

namespace bqpe {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTieTol = 1e-11;
constexpr std::complex<double> kI{0.0, 1.0};

std::vector<double> sphere_from_angles(const Eigen::VectorXd& t, int n) {
  std::vector<double> a(n + 1);
  double r = 1.0;
  for (int i = 0; i < n; ++i) {
    a[i] = r * std::cos(t(i));
    r *= std::sin(t(i));
  }
  a[n] = r;
  return a;
}

Eigen::VectorXd angles_from_amplitudes(const std::vector<double>& a) {
  const int n = int(a.size()) - 1;
  Eigen::VectorXd t(n);
  double rem_sq = 0.0;
  for (int i = 1; i <= n; ++i) rem_sq += a[i] * a[i];
  for (int i = 0; i < n; ++i) {
    t(i) = std::atan2(std::sqrt(std::max(rem_sq, 0.0)), a[i]);
    rem_sq -= a[i + 1] * a[i + 1];
  }
  return t;
}

struct NmResult {
  Eigen::VectorXd x;
  double value = 0.0;
  bool converged = false;
};

NmResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                     const Eigen::VectorXd& x0, double step,
                     const OptimizeOptions& opt) {
  const int dim = int(x0.size());
  std::vector<Eigen::VectorXd> xs(dim + 1, x0);
  std::vector<double> fs(dim + 1);
  for (int i = 0; i < dim; ++i) xs[i + 1](i) += step;
  for (int i = 0; i <= dim; ++i) fs[i] = f(xs[i]);

  std::vector<int> idx(dim + 1);
  NmResult result;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    for (int i = 0; i <= dim; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = idx[0], worst = idx[dim], second = idx[dim - 1];

    double diam = 0.0;
    for (int i = 1; i <= dim; ++i)
      diam = std::max(diam, (xs[idx[i]] - xs[best]).lpNorm<Eigen::Infinity>());
    if (diam < opt.param_tol && fs[worst] - fs[best] < opt.value_tol) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i <= dim; ++i)
      if (i != worst) centroid += xs[i];
    centroid /= dim;

    const Eigen::VectorXd xr = centroid + (centroid - xs[worst]);
    const double fr = f(xr);
    if (fr < fs[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[worst]);
      const double fe = f(xe);
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
    } else if (fr < fs[second]) {
      xs[worst] = xr;
      fs[worst] = fr;
    } else {
      const bool outside = fr < fs[worst];
      const Eigen::VectorXd xc =
          centroid + (outside ? 0.5 : -0.5) * (centroid - xs[worst]);
      const double fc = f(xc);
      if (fc < std::min(fr, fs[worst])) {
        xs[worst] = xc;
        fs[worst] = fc;
      } else {
        for (int i = 0; i <= dim; ++i) {
          if (i == best) continue;
          xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= dim; ++i)
    if (fs[i] < fs[best]) best = i;
  result.x = xs[best];
  result.value = fs[best];
  return result;
}

FockSuperposition state_from_params(const Eigen::VectorXd& x, int n,
                                    bool allow_phases) {
  const std::vector<double> amps = sphere_from_angles(x.head(n), n);
  FockSuperposition s;
  s.n = n;
  s.coeffs.resize(n + 1);
  s.coeffs[0] = amps[0];
  for (int l = 1; l <= n; ++l) {
    if (allow_phases)
      s.coeffs[l] = amps[l] * std::exp(kI * x(n + l - 1));
    else
      s.coeffs[l] = amps[l];
  }
  return s;
}

bool lex_less(const std::vector<std::complex<double>>& a,
              const std::vector<std::complex<double>>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].real() - b[i].real()) > 1e-12) return a[i].real() < b[i].real();
    if (std::abs(a[i].imag() - b[i].imag()) > 1e-12) return a[i].imag() < b[i].imag();
  }
  return false;
}

}  // namespace

OptimizationResult optimize_coefficients(int n, const Prior& prior, bool allow_phases,
                                         const OptimizeOptions& options) {
  if (n < 1) throw std::domain_error("optimize_coefficients: photon number must be >= 1");
  if (options.restarts < 1)
    throw std::invalid_argument("optimize_coefficients: need at least one restart");

  const MomentTable table(prior, n);
  const int dim = allow_phases ? 2 * n : n;
  const auto objective = [&](const Eigen::VectorXd& x) {
    return solve_mmse(state_from_params(x, n, allow_phases), table);
  };

  // deterministic seed schedule: uniform, NOON, balanced beam splitter,
  // then random sphere points
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uphase(-kPi, kPi);

  std::vector<Eigen::VectorXd> seeds;
  const auto push_amplitude_seed = [&](const std::vector<double>& amps,
                                       bool random_phases) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
    x.head(n) = angles_from_amplitudes(amps);
    if (allow_phases && random_phases)
      for (int i = 0; i < n; ++i) x(n + i) = uphase(rng);
    seeds.push_back(x);
  };

  push_amplitude_seed(std::vector<double>(n + 1, 1.0 / std::sqrt(n + 1.0)), false);
  {
    std::vector<double> amps(n + 1, 0.0);
    amps.front() = amps.back() = 1.0 / std::sqrt(2.0);
    push_amplitude_seed(amps, false);
  }
  {
    const FockSuperposition bs = beam_splitter_state(n, 0.5);
    std::vector<double> amps(n + 1);
    for (int l = 0; l <= n; ++l) amps[l] = bs.coeffs[l].real();
    push_amplitude_seed(amps, false);
  }
  while (int(seeds.size()) < options.restarts) {
    std::vector<double> amps(n + 1);
    double norm = 0.0;
    for (double& a : amps) {
      a = gauss(rng);
      norm += a * a;
    }
    norm = std::sqrt(norm);
    for (double& a : amps) a = std::abs(a) / norm;
    push_amplitude_seed(amps, true);
  }
  seeds.resize(options.restarts);

  double best_value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  bool best_converged = false;
  for (const Eigen::VectorXd& seed : seeds) {
    const NmResult r = nelder_mead(objective, seed, 0.35, options);
    if (r.value < best_value - kTieTol) {
      best_value = r.value;
      best_x = r.x;
      best_converged = r.converged;
    }
  }

  FockSuperposition state = state_from_params(best_x, n, allow_phases);
  double value = best_value;

  // relative phases are an exact gauge freedom of the error; report the
  // modulus representative whenever it ties the objective
  {
    FockSuperposition mod = state;
    for (auto& c : mod.coeffs) c = std::abs(c);
    const double vm = solve_mmse(mod, table);
    if (vm <= value + kTieTol) {
      state = std::move(mod);
      value = vm;
    }
  }
  state = canonical_global_phase(std::move(state));
  {
    FockSuperposition rev = state;
    std::reverse(rev.coeffs.begin(), rev.coeffs.end());
    rev = canonical_global_phase(std::move(rev));
    if (lex_less(rev.coeffs, state.coeffs)) {
      const double vr = solve_mmse(rev, table);
      if (vr <= value + kTieTol) {
        state = std::move(rev);
        value = vr;
      }
    }
  }

  OptimizationResult result;
  result.state = std::move(state);
  result.mmse = value;
  result.restarts_used = options.restarts;
  result.converged = best_converged;
  return result;
}

std::pair<double, double> optimize_bs_transmissivity(int n) {
  if (n < 1)
    throw std::domain_error("optimize_bs_transmissivity: photon number must be >= 1");
  const auto f = [n](double tau) {
    return mmse_flat_closed_form(beam_splitter_state(n, tau));
  };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-8) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  const double tau = (a + b) / 2.0;
  return {tau, f(tau)};
}

OptimizationResult brute_force_oracle(int n, const Prior& prior, int grid_steps) {
  if (n < 1 || n > 3)
    throw UnsupportedError("brute_force_oracle: cost guard allows n = 1..3");
  if (grid_steps < 32)
    throw std::invalid_argument("brute_force_oracle: need grid_steps >= 32");

  const MomentTable table(prior, n);
  const double h = (kPi / 2.0) / (grid_steps - 1);

  std::vector<int> odo(n, 0);
  Eigen::VectorXd t(n);
  double best_value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_t = Eigen::VectorXd::Zero(n);
  long evaluations = 0;
  for (;;) {
    for (int i = 0; i < n; ++i) t(i) = odo[i] * h;
    const double v = solve_mmse(state_from_params(t, n, false), table);
    ++evaluations;
    if (v < best_value) {
      best_value = v;
      best_t = t;
    }
    int pos = n - 1;
    while (pos >= 0 && ++odo[pos] == grid_steps) odo[pos--] = 0;
    if (pos < 0) break;
  }

  OptimizationResult result;
  result.state = canonical_global_phase(state_from_params(best_t, n, false));
  result.mmse = best_value;
  result.restarts_used = int(std::min<long>(evaluations, INT32_MAX));
  result.converged = true;
  return result;
}

double oracle_resolution_bound(int grid_steps) {
  const double h = (kPi / 2.0) / (grid_steps - 1);
  return 10.0 * h * h;
}

}  // namespace bqpe
