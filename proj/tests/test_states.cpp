#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "states.hpp"
#include "test_support.hpp"

using namespace bqpe;
using testsupport::kPi;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void check_close(std::complex<double> a, std::complex<double> b, double tol = 1e-12) {
  CHECK(std::abs(a - b) < tol);
}
}  // namespace

TEST_CASE("noon construction") {
  const FockSuperposition one = noon(1);
  check_close(one.coeffs[0], kInvSqrt2);
  check_close(one.coeffs[1], kInvSqrt2);

  const FockSuperposition three = noon(3);
  CHECK(three.coeffs.size() == 4);
  check_close(three.coeffs[0], kInvSqrt2);
  check_close(three.coeffs[1], 0.0);
  check_close(three.coeffs[2], 0.0);
  check_close(three.coeffs[3], kInvSqrt2);

  CHECK_THROWS_AS((void)noon(0), std::domain_error);
}

TEST_CASE("beam splitter construction") {
  const FockSuperposition half = beam_splitter_state(1, 0.5);
  check_close(half.coeffs[0], kInvSqrt2);
  check_close(half.coeffs[1], kInvSqrt2);

  const FockSuperposition two = beam_splitter_state(2, 0.5);
  check_close(two.coeffs[0], 0.5);
  check_close(two.coeffs[1], kInvSqrt2);
  check_close(two.coeffs[2], 0.5);

  const FockSuperposition reflective = beam_splitter_state(2, 0.0);
  check_close(reflective.coeffs[0], 1.0);
  check_close(reflective.coeffs[1], 0.0);
  check_close(reflective.coeffs[2], 0.0);

  CHECK_THROWS_AS((void)beam_splitter_state(2, -0.1), std::domain_error);
  CHECK_THROWS_AS((void)beam_splitter_state(2, 1.1), std::domain_error);
  CHECK_THROWS_AS((void)beam_splitter_state(0, 0.5), std::domain_error);
}

TEST_CASE("beam splitter stays normalized for large n") {
  for (int n : {10, 40, 100})
    for (double tau : {0.1, 0.5, 0.73})
      CHECK(norm_sq(beam_splitter_state(n, tau)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("beam splitter mirror identity") {
  testsupport::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + int(rng.uniform(0.0, 9.0));
    const double tau = rng.uniform(0.0, 1.0);
    const FockSuperposition a = beam_splitter_state(n, tau);
    const FockSuperposition b = beam_splitter_state(n, 1.0 - tau);
    for (int l = 0; l <= n; ++l) check_close(a.coeffs[l], b.coeffs[n - l], 1e-12);
  }
}

TEST_CASE("phase application") {
  const FockSuperposition s = noon(1);
  const FockSuperposition same = apply_phase(s, 0.0);
  check_close(same.coeffs[0], s.coeffs[0]);
  check_close(same.coeffs[1], s.coeffs[1]);

  const FockSuperposition quarter = apply_phase(s, kPi / 4.0);
  check_close(quarter.coeffs[0],
              kInvSqrt2 * std::exp(std::complex<double>(0.0, -kPi / 4.0)));
  check_close(quarter.coeffs[1],
              kInvSqrt2 * std::exp(std::complex<double>(0.0, kPi / 4.0)));

  // two-photon pair flips sign under a half-turn of the relative phase
  const FockSuperposition flipped = apply_phase(noon(2), kPi / 2.0);
  check_close(flipped.coeffs[0], -kInvSqrt2);
  check_close(flipped.coeffs[2], -kInvSqrt2);
}

TEST_CASE("phase application preserves the norm and composes") {
  testsupport::Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + int(rng.uniform(0.0, 7.0));
    const FockSuperposition s = rng.state(n);
    const double p1 = rng.uniform(-6.0, 6.0), p2 = rng.uniform(-6.0, 6.0);
    CHECK(std::abs(norm_sq(apply_phase(s, p1)) - 1.0) < 1e-12);
    const FockSuperposition chained = apply_phase(apply_phase(s, p1), p2);
    const FockSuperposition direct = apply_phase(s, p1 + p2);
    for (int l = 0; l <= n; ++l) check_close(chained.coeffs[l], direct.coeffs[l], 1e-12);
  }
}

TEST_CASE("explicit coefficients are validated") {
  CHECK_THROWS_AS((void)state_from_coefficients(2, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS((void)state_from_coefficients(1, {0.9, 0.1}), std::invalid_argument);
  const FockSuperposition ok = state_from_coefficients(1, {kInvSqrt2, kInvSqrt2});
  CHECK(ok.n == 1);
}

TEST_CASE("global phase canonicalization") {
  const std::complex<double> rot = std::exp(std::complex<double>(0.0, 1.2));
  FockSuperposition s = state_from_coefficients(
      1, {kInvSqrt2 * rot, std::complex<double>(0.0, kInvSqrt2) * rot});
  s = canonical_global_phase(std::move(s));
  CHECK(s.coeffs[0].imag() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.coeffs[0].real() > 0.0);
  check_close(s.coeffs[1], std::complex<double>(0.0, kInvSqrt2), 1e-12);

  // leading zeros: first non-negligible coefficient becomes real
  FockSuperposition z = state_from_coefficients(
      2, {0.0, std::complex<double>(0.0, 1.0), 0.0});
  z = canonical_global_phase(std::move(z));
  CHECK(z.coeffs[1].real() == doctest::Approx(1.0).epsilon(1e-12));
}
