#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "errors.hpp"
#include "prior.hpp"
#include "test_support.hpp"

using namespace bqpe;
using testsupport::kPi;
using testsupport::kTwoPi;

TEST_CASE("density of the standard priors") {
  CHECK(Prior::flat().density(1.0) == doctest::Approx(1.0 / kTwoPi));
  CHECK(Prior::truncated(0.0, kPi).density(3.0 * kPi / 2.0) == 0.0);
  CHECK(Prior::truncated(0.0, kPi / 2.0).density(0.5) == doctest::Approx(2.0 / kPi));
  CHECK_THROWS_AS((void)Prior::flat().density(-0.5), std::domain_error);
  CHECK_THROWS_AS((void)Prior::flat().density(kTwoPi + 0.1), std::domain_error);
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS((void)Prior::truncated(2.0, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)Prior::truncated(-0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)Prior::truncated(0.0, 7.0), std::domain_error);
  CHECK_THROWS_AS((void)Prior::grid({0.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS((void)Prior::grid({0.0, 1.0, 0.5}, {1.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)Prior::grid({0.0, 1.0, 2.0}, {1.0, -1.0, 1.0}),
                  std::domain_error);
}

TEST_CASE("flat moments") {
  const Prior flat = Prior::flat();
  CHECK(flat.moment(1, 0.0).real() == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(flat.moment(1, 0.0).imag() == doctest::Approx(0.0));
  // off-diagonal weight for adjacent components
  const auto b1 = flat.moment(1, 2.0);
  CHECK(b1.real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b1.imag() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(flat.moment(2, 0.0).real() ==
        doctest::Approx(4.0 * kPi * kPi / 3.0).epsilon(1e-12));
  CHECK(Prior::truncated(0.0, 1.7).moment(0, 0.0).real() == doctest::Approx(1.0));
  CHECK(flat.moment(0, 0.0).real() == doctest::Approx(1.0));
}

TEST_CASE("closed-form moments agree with quadrature") {
  const Prior priors[] = {Prior::flat(), Prior::truncated(0.3, 2.5),
                          Prior::truncated(0.0, kPi / 10.0)};
  const double omegas[] = {0.0, 1.0, -1.0, 2.0, -2.0, 4.0, 7.3, -7.3, 8.0};
  for (const Prior& p : priors)
    for (int k = 0; k <= 2; ++k)
      for (double w : omegas) {
        const auto closed = p.moment(k, w);
        const auto quad = testsupport::moment_oracle(p, k, w, 8193);
        CAPTURE(k);
        CAPTURE(w);
        CHECK(std::abs(closed - quad) < 1e-8);
      }
}

TEST_CASE("grid moments agree with the analytic moments of a trig density") {
  // density proportional to 1 + a sin(phi + b) + c cos(3 phi + d); its
  // moments reduce to frequency-shifted segment integrals
  const double a = 0.45, b = 0.8, c = 0.25, d = 2.1;
  const auto analytic = [&](int k, double w) {
    const std::complex<double> i1(0.0, 1.0);
    const auto s = [&](double x) { return segment_moment(k, 0.0, kTwoPi, x); };
    return s(w) +
           a / (2.0 * i1) *
               (std::exp(i1 * b) * s(w + 1.0) - std::exp(-i1 * b) * s(w - 1.0)) +
           c / 2.0 *
               (std::exp(i1 * d) * s(w + 3.0) + std::exp(-i1 * d) * s(w - 3.0));
  };
  const double mass = analytic(0, 0.0).real();

  const auto build = [&](int nodes) {
    std::vector<double> xs(nodes), ds(nodes);
    for (int i = 0; i < nodes; ++i) {
      xs[i] = kTwoPi * i / (nodes - 1);
      ds[i] = 1.0 + a * std::sin(xs[i] + b) + c * std::cos(3.0 * xs[i] + d);
    }
    return Prior::grid(std::move(xs), std::move(ds));
  };

  const Prior fine = build(65537);
  for (int k = 0; k <= 2; ++k)
    for (double w : {0.0, 1.0, -2.0, 4.0, 7.3}) {
      CAPTURE(k);
      CAPTURE(w);
      CHECK(std::abs(fine.moment(k, w) - analytic(k, w) / mass) < 1e-8);
    }

  // odd interval count exercises the trailing-interval rule
  const Prior odd = build(65536);
  for (int k = 0; k <= 2; ++k)
    CHECK(std::abs(odd.moment(k, 2.0) - analytic(k, 2.0) / mass) < 1e-8);
}

TEST_CASE("moment conjugation under omega sign flip") {
  testsupport::Rng rng(7);
  const Prior priors[] = {Prior::flat(), Prior::truncated(0.2, 4.0), rng.grid_prior()};
  for (const Prior& p : priors)
    for (int k = 0; k <= 2; ++k)
      for (int i = 0; i < 10; ++i) {
        const double w = rng.uniform(-9.0, 9.0);
        CHECK(std::abs(p.moment(k, -w) - std::conj(p.moment(k, w))) < 1e-12);
      }
}

TEST_CASE("small-omega branch is smooth across the dispatch") {
  const Prior p = Prior::truncated(0.1, 5.9);
  for (double w : {1e-13, 1e-9, 1e-5, 1e-3, 0.05, 0.084, 0.086, 0.2}) {
    const auto closed = p.moment(2, w);
    const auto quad = testsupport::moment_oracle(p, 2, w, 16385);
    CHECK(std::abs(closed - quad) < 1e-9);
  }
}

TEST_CASE("mean and variance") {
  const auto [mf, vf] = Prior::flat().mean_and_variance();
  CHECK(mf == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(vf == doctest::Approx(kPi * kPi / 3.0).epsilon(1e-12));

  const double m = 1.234;
  const auto [mt, vt] = Prior::truncated(0.0, m).mean_and_variance();
  CHECK(mt == doctest::Approx(m / 2.0).epsilon(1e-12));
  CHECK(vt == doctest::Approx(m * m / 12.0).epsilon(1e-12));

  // narrow peak
  const double phi0 = 2.0;
  std::vector<double> xs, ds;
  for (int i = 0; i <= 400; ++i) {
    const double x = phi0 - 0.02 + 0.04 * i / 400.0;
    xs.push_back(x);
    ds.push_back(std::max(0.0, 1.0 - std::abs(x - phi0) / 0.02));
  }
  const auto [mg, vg] = Prior::grid(xs, ds).mean_and_variance();
  CHECK(mg == doctest::Approx(phi0).epsilon(1e-6));
  CHECK(vg < 1e-3);
}

TEST_CASE("bayes update with a constant likelihood keeps the shape") {
  const auto update = Prior::flat().bayes_update([](double) { return 0.5; });
  CHECK(update.evidence == doctest::Approx(0.5).epsilon(1e-10));
  for (double phi : {0.1, 2.0, 4.0, 6.0})
    CHECK(update.posterior.density(phi) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-9));
}

TEST_CASE("bayes update never widens the support") {
  const Prior trunc = Prior::truncated(0.0, kPi);
  const auto update =
      trunc.bayes_update([](double phi) { return 0.5 + 0.4 * std::sin(phi); });
  CHECK(update.posterior.density(3.3) == 0.0);  // outside [0, pi]
  CHECK(update.posterior.density(5.0) == 0.0);
  CHECK(update.posterior.density(1.0) > 0.0);
  // posterior of a posterior: support still contained
  const auto second =
      update.posterior.bayes_update([](double phi) { return 0.3 + 0.2 * std::cos(phi); });
  CHECK(second.posterior.density(3.3) == 0.0);
}

TEST_CASE("posterior normalization survives chained updates") {
  testsupport::Rng rng(11);
  Prior p = Prior::truncated(0.0, kPi / 2.0);
  for (int step = 0; step < 6; ++step) {
    const double shift = rng.uniform(0.0, kTwoPi);
    p = p.bayes_update([shift](double phi) {
           return 0.5 * (1.0 - std::sin(2.0 * phi + shift));
         })
            .posterior;
    CHECK(std::abs(p.moment(0, 0.0).real() - 1.0) < 1e-10);
  }
}

TEST_CASE("zero-probability outcome raises the degenerate error") {
  CHECK_THROWS_AS((void)Prior::flat().bayes_update([](double) { return 0.0; }),
                  DegeneratePosteriorError);
  testsupport::Rng rng(3);
  const Prior grid = rng.grid_prior();
  CHECK_THROWS_AS((void)grid.bayes_update([](double) { return 0.0; }),
                  DegeneratePosteriorError);
}

TEST_CASE("likelihood outside the unit interval is rejected") {
  CHECK_THROWS_AS((void)Prior::flat().bayes_update([](double) { return 1.5; }),
                  std::invalid_argument);
}

TEST_CASE("grid prior renormalizes on construction") {
  std::vector<double> xs{0.0, 1.0, 2.0, 3.0}, ds{3.0, 3.0, 3.0, 3.0};
  const Prior p = Prior::grid(xs, ds);
  CHECK(std::abs(p.moment(0, 0.0).real() - 1.0) < 1e-10);
  CHECK(p.density(1.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}
