#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "bqpe/bqpe.h"

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("version and error strings exist") {
  CHECK(std::strlen(bqpe_version()) > 0);
  CHECK(bqpe_last_error() != nullptr);
}

TEST_CASE("prior lifecycle, parsing and queries") {
  bqpe_prior* flat = nullptr;
  REQUIRE(bqpe_prior_parse("flat", &flat) == BQPE_OK);
  double d = 0;
  REQUIRE(bqpe_prior_density(flat, 1.0, &d) == BQPE_OK);
  CHECK(d == doctest::Approx(1.0 / (2.0 * kPi)));

  double re = 0, im = 0;
  REQUIRE(bqpe_prior_moment(flat, 1, 2.0, &re, &im) == BQPE_OK);
  CHECK(re == doctest::Approx(0.0));
  CHECK(im == doctest::Approx(-0.5));

  double mean = 0, var = 0;
  REQUIRE(bqpe_prior_mean_variance(flat, &mean, &var) == BQPE_OK);
  CHECK(mean == doctest::Approx(kPi));
  CHECK(var == doctest::Approx(kPi * kPi / 3.0));
  bqpe_prior_free(flat);

  bqpe_prior* trunc = nullptr;
  REQUIRE(bqpe_prior_parse("trunc:0..1.5707963267948966", &trunc) == BQPE_OK);
  REQUIRE(bqpe_prior_density(trunc, 0.5, &d) == BQPE_OK);
  CHECK(d == doctest::Approx(2.0 / kPi));
  bqpe_prior_free(trunc);

  bqpe_prior* bad = nullptr;
  CHECK(bqpe_prior_parse("nonsense", &bad) == BQPE_ERR_PARSE);
  CHECK(std::strlen(bqpe_last_error()) > 0);
  CHECK(bqpe_prior_parse("trunc:2..1", &bad) == BQPE_ERR_PARSE);
  CHECK(bqpe_prior_parse(nullptr, &bad) == BQPE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("grid prior from a csv file") {
  const std::string path = "capi_grid_prior.csv";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs("phi,density\n", f);
    for (int i = 0; i <= 100; ++i) {
      const double x = 2.0 * kPi * i / 100.0;
      std::fprintf(f, "%.10f,%.10f\n", x, 1.0 + 0.5 * std::sin(x));
    }
    std::fclose(f);
  }
  bqpe_prior* grid = nullptr;
  REQUIRE(bqpe_prior_parse(("grid:" + path).c_str(), &grid) == BQPE_OK);
  double re = 0, im = 0;
  REQUIRE(bqpe_prior_moment(grid, 0, 0.0, &re, &im) == BQPE_OK);
  CHECK(re == doctest::Approx(1.0));
  double d = 0;
  REQUIRE(bqpe_prior_density(grid, kPi / 2.0, &d) == BQPE_OK);
  CHECK(d == doctest::Approx(1.5 / (2.0 * kPi)).epsilon(1e-3));
  bqpe_prior_free(grid);
  std::remove(path.c_str());

  bqpe_prior* missing = nullptr;
  CHECK(bqpe_prior_parse("grid:/no/such/file.csv", &missing) == BQPE_ERR_PARSE);
}

TEST_CASE("grid prior from arrays") {
  const std::vector<double> phi{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> dens{1.0, 2.0, 2.0, 1.0};
  bqpe_prior* grid = nullptr;
  REQUIRE(bqpe_prior_grid(phi.data(), dens.data(), phi.size(), &grid) == BQPE_OK);
  double re = 0, im = 0;
  REQUIRE(bqpe_prior_moment(grid, 0, 0.0, &re, &im) == BQPE_OK);
  CHECK(re == doctest::Approx(1.0));  // renormalized
  bqpe_prior_free(grid);
}

TEST_CASE("state construction and phase evolution") {
  bqpe_state* s = nullptr;
  REQUIRE(bqpe_state_parse("noon:3", &s) == BQPE_OK);
  CHECK(bqpe_state_photon_number(s) == 3);
  double re = 0, im = 0;
  REQUIRE(bqpe_state_coeff(s, 0, &re, &im) == BQPE_OK);
  CHECK(re == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(bqpe_state_coeff(s, 9, &re, &im) == BQPE_ERR_INVALID_ARGUMENT);
  bqpe_state_free(s);

  bqpe_state* bs = nullptr;
  REQUIRE(bqpe_state_parse("bs:2:0.5", &bs) == BQPE_OK);
  REQUIRE(bqpe_state_coeff(bs, 1, &re, &im) == BQPE_OK);
  CHECK(re == doctest::Approx(1.0 / std::sqrt(2.0)));
  bqpe_state_free(bs);

  bqpe_state* from_list = nullptr;
  REQUIRE(bqpe_state_parse("coeffs:[1,0;0,0]", &from_list) == BQPE_OK);
  CHECK(bqpe_state_photon_number(from_list) == 1);

  bqpe_state* shifted = nullptr;
  REQUIRE(bqpe_state_apply_phase(from_list, 0.7, &shifted) == BQPE_OK);
  REQUIRE(bqpe_state_coeff(shifted, 0, &re, &im) == BQPE_OK);
  CHECK(re == doctest::Approx(std::cos(0.7)));
  CHECK(im == doctest::Approx(-std::sin(0.7)));
  bqpe_state_free(shifted);
  bqpe_state_free(from_list);

  // bad values inside a spec string are parse failures; the direct
  // constructors report invalid arguments
  bqpe_state* bad = nullptr;
  CHECK(bqpe_state_parse("noon:0", &bad) == BQPE_ERR_PARSE);
  CHECK(bqpe_state_parse("bs:2:1.5", &bad) == BQPE_ERR_PARSE);
  CHECK(bqpe_state_parse("wat", &bad) == BQPE_ERR_PARSE);
  CHECK(bqpe_state_noon(0, &bad) == BQPE_ERR_INVALID_ARGUMENT);
  CHECK(bqpe_state_beam_splitter(2, 1.5, &bad) == BQPE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("born probability") {
  bqpe_state* s = nullptr;
  REQUIRE(bqpe_state_noon(1, &s) == BQPE_OK);
  const double inv = 1.0 / std::sqrt(2.0);
  const double proj_re[2] = {0.0, inv};
  const double proj_im[2] = {inv, 0.0};  // (i,1)/sqrt(2)
  for (double phi : {0.2, 1.1, 2.9}) {
    double p = 0;
    REQUIRE(bqpe_born_probability(s, proj_re, proj_im, phi, &p) == BQPE_OK);
    CHECK(p == doctest::Approx((1.0 - std::sin(2.0 * phi)) / 2.0));
  }
  const double bad_re[2] = {1.0, 1.0};
  const double bad_im[2] = {0.0, 0.0};
  double p = 0;
  CHECK(bqpe_born_probability(s, bad_re, bad_im, 0.0, &p) ==
        BQPE_ERR_INVALID_ARGUMENT);
  bqpe_state_free(s);
}

TEST_CASE("solve and solution accessors") {
  bqpe_prior* flat = nullptr;
  bqpe_state* probe = nullptr;
  REQUIRE(bqpe_prior_flat(&flat) == BQPE_OK);
  REQUIRE(bqpe_state_noon(1, &probe) == BQPE_OK);

  bqpe_solution* sol = nullptr;
  REQUIRE(bqpe_solve(probe, flat, &sol) == BQPE_OK);
  CHECK(bqpe_solution_dim(sol) == 2);
  CHECK(bqpe_solution_mmse(sol) ==
        doctest::Approx(kPi * kPi / 3.0 - 0.25).epsilon(1e-10));

  double re = 0, im = 0;
  REQUIRE(bqpe_solution_b_entry(sol, 0, 1, &re, &im) == BQPE_OK);
  CHECK(re == doctest::Approx(0.0));
  CHECK(im == doctest::Approx(0.5));
  CHECK(bqpe_solution_b_entry(sol, 5, 0, &re, &im) == BQPE_ERR_INVALID_ARGUMENT);

  double est = 0;
  REQUIRE(bqpe_solution_estimate(sol, 0, &est) == BQPE_OK);
  CHECK(est == doctest::Approx(kPi + 0.5));
  REQUIRE(bqpe_solution_estimate(sol, 1, &est) == BQPE_OK);
  CHECK(est == doctest::Approx(kPi - 0.5));

  double pr = 0, pi_ = 0;
  REQUIRE(bqpe_solution_projector(sol, 0, 0, &pr, &pi_) == BQPE_OK);
  CHECK(pr * pr + pi_ * pi_ == doctest::Approx(0.5));

  double mse = 0;
  REQUIRE(bqpe_mse_of_measurement(probe, flat, sol, &mse) == BQPE_OK);
  CHECK(mse == doctest::Approx(bqpe_solution_mmse(sol)).epsilon(1e-8));

  // gauge perturbation with K = 0 keeps everything
  const std::vector<double> zeros(4, 0.0);
  bqpe_solution* same = nullptr;
  REQUIRE(bqpe_gauge_perturb(sol, zeros.data(), zeros.data(), &same) == BQPE_OK);
  CHECK(bqpe_solution_mmse(same) == doctest::Approx(bqpe_solution_mmse(sol)));
  bqpe_solution_free(same);

  // overlapping K is rejected
  std::vector<double> bad(4, 0.0);
  bad[0] = 1.0;
  bqpe_solution* refused = nullptr;
  CHECK(bqpe_gauge_perturb(sol, bad.data(), zeros.data(), &refused) ==
        BQPE_ERR_INVALID_ARGUMENT);

  bqpe_solution_free(sol);
  bqpe_state_free(probe);
  bqpe_prior_free(flat);
}

TEST_CASE("closed forms") {
  bqpe_state* probe = nullptr;
  REQUIRE(bqpe_state_noon(4, &probe) == BQPE_OK);
  double v = 0;
  REQUIRE(bqpe_mmse_flat_closed_form(probe, &v) == BQPE_OK);
  CHECK(v == doctest::Approx(kPi * kPi / 3.0 - 1.0 / 64.0).epsilon(1e-12));
  bqpe_state_free(probe);

  REQUIRE(bqpe_mmse_noon_truncated(1, kPi, &v) == BQPE_OK);
  CHECK(v == doctest::Approx(kPi * kPi / 12.0 - 0.25).epsilon(1e-10));
  CHECK(bqpe_mmse_noon_truncated(0, 1.0, &v) == BQPE_ERR_INVALID_ARGUMENT);
  CHECK(bqpe_mmse_noon_truncated(1, 9.0, &v) == BQPE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("bayes update through the callback") {
  bqpe_prior* flat = nullptr;
  REQUIRE(bqpe_prior_flat(&flat) == BQPE_OK);

  const auto half = [](double, void*) -> double { return 0.5; };
  bqpe_prior* posterior = nullptr;
  double evidence = 0;
  REQUIRE(bqpe_prior_bayes_update(flat, half, nullptr, 0, &posterior, &evidence) ==
          BQPE_OK);
  CHECK(evidence == doctest::Approx(0.5));
  double d = 0;
  REQUIRE(bqpe_prior_density(posterior, 3.0, &d) == BQPE_OK);
  CHECK(d == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-8));
  bqpe_prior_free(posterior);

  const auto zero = [](double, void*) -> double { return 0.0; };
  bqpe_prior* dead = nullptr;
  CHECK(bqpe_prior_bayes_update(flat, zero, nullptr, 0, &dead, nullptr) ==
        BQPE_ERR_DEGENERATE_POSTERIOR);
  bqpe_prior_free(flat);
}

TEST_CASE("optimization surface") {
  bqpe_prior* prior = nullptr;
  REQUIRE(bqpe_prior_truncated(0.0, kPi, &prior) == BQPE_OK);

  bqpe_opt_result* result = nullptr;
  REQUIRE(bqpe_optimize_coefficients(2, prior, 0, 12, 99, &result) == BQPE_OK);
  CHECK(bqpe_opt_result_dim(result) == 3);
  CHECK(bqpe_opt_result_mmse(result) == doctest::Approx(0.44203).epsilon(1e-3));
  CHECK(bqpe_opt_result_converged(result) == 1);
  CHECK(bqpe_opt_result_restarts_used(result) == 12);
  double re = 0, im = 0;
  REQUIRE(bqpe_opt_result_coeff(result, 1, &re, &im) == BQPE_OK);
  CHECK(re == doctest::Approx(0.626595).epsilon(1e-2));
  bqpe_opt_result_free(result);

  bqpe_opt_result* oracle = nullptr;
  REQUIRE(bqpe_brute_force_oracle(1, prior, 64, &oracle) == BQPE_OK);
  CHECK(bqpe_opt_result_mmse(oracle) == doctest::Approx(0.572467).epsilon(1e-2));
  bqpe_opt_result_free(oracle);

  bqpe_opt_result* refused = nullptr;
  CHECK(bqpe_brute_force_oracle(4, prior, 64, &refused) == BQPE_ERR_UNSUPPORTED);

  double tau = 0, mmse = 0;
  REQUIRE(bqpe_optimize_bs_transmissivity(5, &tau, &mmse) == BQPE_OK);
  CHECK(tau == doctest::Approx(0.5).epsilon(1e-4));
  bqpe_prior_free(prior);
}

TEST_CASE("adaptive surface") {
  bqpe_prior* prior = nullptr;
  REQUIRE(bqpe_prior_truncated(0.0, kPi, &prior) == BQPE_OK);

  bqpe_tree* tree = nullptr;
  REQUIRE(bqpe_adaptive_run(prior, 3, BQPE_POLICY_ALL_BRANCHES, 1, 2048, 6, 1,
                            &tree) == BQPE_OK);
  CHECK(bqpe_tree_depth(tree) == 3);
  double v1 = 0, v3 = 0;
  REQUIRE(bqpe_tree_step_best_mmse(tree, 1, &v1) == BQPE_OK);
  REQUIRE(bqpe_tree_step_best_mmse(tree, 3, &v3) == BQPE_OK);
  CHECK(v1 == doctest::Approx(0.572467).epsilon(1e-4));
  CHECK(v3 < v1);
  CHECK(bqpe_tree_step_best_mmse(tree, 9, &v1) == BQPE_ERR_INVALID_ARGUMENT);

  char* json = nullptr;
  REQUIRE(bqpe_tree_json(tree, &json) == BQPE_OK);
  CHECK(std::string(json).find("\"nodes\"") != std::string::npos);
  bqpe_string_free(json);

  std::vector<double> adaptive(3), single_shot(3);
  REQUIRE(bqpe_tree_compare_single_shot(tree, prior, 6, 1, adaptive.data(),
                                        single_shot.data()) == BQPE_OK);
  CHECK(std::abs(adaptive[0] - single_shot[0]) < 1e-6);
  CHECK(single_shot[1] == doctest::Approx(0.44203).epsilon(1e-3));

  bqpe_tree_free(tree);
  bqpe_prior_free(prior);

  double inf = 0;
  REQUIRE(bqpe_delta_infinity(1e-3, &inf) == BQPE_OK);
  CHECK(inf == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-3));
}
