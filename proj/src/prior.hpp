#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace bqpe {

// Quadrature weights for nodes xs so that integral f ~= sum w[i] f(xs[i]).
// Quadratic (Simpson-type) rule; handles non-uniform spacing and an odd
// interval count.
std::vector<double> quadrature_weights(const std::vector<double>& xs);

// integral over [a,b] of phi^k exp(i omega phi) dphi, k = 0..2.
std::complex<double> segment_moment(int k, double a, double b, double omega);

struct PriorUpdate;

// Prior probability density over the phase, supported inside [0, 2*pi].
class Prior {
 public:
  enum class Kind { Flat, TruncatedFlat, Grid };

  static Prior flat();
  static Prior truncated(double lo, double hi);
  // Nodes strictly increasing, at least 3; density renormalized to unit mass.
  static Prior grid(std::vector<double> phi, std::vector<double> density);

  Kind kind() const { return kind_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }

  double density(double phi) const;

  // integral of phi^k exp(i omega phi) against the density, k = 0..2.
  // Closed form for flat/truncated supports, grid quadrature otherwise.
  std::complex<double> moment(int k, double omega) const;

  std::pair<double, double> mean_and_variance() const;

  // Posterior proportional to likelihood * density on a grid spanning the
  // support. Throws DegeneratePosteriorError when the evidence underflows.
  PriorUpdate bayes_update(const std::function<double(double)>& likelihood,
                           int grid_nodes = kDefaultGridNodes) const;

  // Discrete measure consistent with moment(): nodes plus weights that
  // already include the density factor. min_nodes applies to flat/truncated
  // supports; grid priors always use their own nodes.
  void measure(std::vector<double>& nodes, std::vector<double>& weights,
               int min_nodes = kDefaultGridNodes) const;

  const std::vector<double>& grid_phi() const { return phi_; }
  const std::vector<double>& grid_density() const { return dens_; }

  static constexpr int kDefaultGridNodes = 4096;
  static constexpr double kEvidenceFloor = 1e-14;

 private:
  Prior() = default;

  Kind kind_ = Kind::Flat;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> phi_;   // grid only
  std::vector<double> dens_;  // grid only
  std::vector<double> wts_;   // grid only, quadrature weights for phi_
};

struct PriorUpdate {
  Prior posterior;
  double evidence;  // marginal probability of the conditioning outcome
};

}  // namespace bqpe
