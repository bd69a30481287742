#include <doctest.h>

#include <cmath>

#include "cazsl/csv.hpp"
#include "cazsl/pacbound.hpp"
#include "oracles.hpp"

using namespace cazsl;
using namespace cazsl::pacbound;

namespace {

EmpiricalCdf five_sample_cdf() {
  return EmpiricalCdf::from_samples({0.5, 0.8, 1.2, 1.5, 2.0});
}

BoundInput reference_input() {
  BoundInput in;
  in.num_attributes = 10;
  in.feature_dim = 32;
  in.num_points = 5;
  in.gamma = 0.8;
  in.delta = 0.05;
  in.rp = five_sample_cdf();
  return in;
}

}  // namespace

TEST_SUITE("pacbound") {
  TEST_CASE("from_samples builds a deduplicated step function") {
    const auto cdf = EmpiricalCdf::from_samples({2.0, 1.0, 1.0});
    REQUIRE(cdf.grid == std::vector<double>{1.0, 2.0});
    CHECK(cdf.cdf[0] == doctest::Approx(2.0 / 3.0));
    CHECK(cdf.cdf[1] == doctest::Approx(1.0));
    CHECK(cdf.value_at(0.5) == 0.0);
    CHECK(cdf.value_at(1.0) == doctest::Approx(2.0 / 3.0));  // right continuous
    CHECK(cdf.value_at(1.5) == doctest::Approx(2.0 / 3.0));
    CHECK(cdf.value_at(5.0) == doctest::Approx(1.0));
  }

  TEST_CASE("from_samples rejects bad samples") {
    CHECK_THROWS_AS(EmpiricalCdf::from_samples({}), EmptyCdf);
    CHECK_THROWS_AS(EmpiricalCdf::from_samples({-1.0}), DataError);
    CHECK_THROWS_AS(EmpiricalCdf::from_samples({std::nan("")}), DataError);
  }

  TEST_CASE("from_table validates monotonicity and range") {
    const auto cdf = EmpiricalCdf::from_table({0.1, 0.2}, {0.25, 1.0});
    CHECK(cdf.value_at(0.15) == doctest::Approx(0.25));
    CHECK_THROWS_AS(EmpiricalCdf::from_table({}, {}), EmptyCdf);
    CHECK_THROWS_AS(EmpiricalCdf::from_table({0.1}, {0.2, 0.3}), EmptyCdf);
    CHECK_THROWS_AS(EmpiricalCdf::from_table({0.2, 0.1}, {0.2, 0.3}), DataError);
    CHECK_THROWS_AS(EmpiricalCdf::from_table({0.1, 0.2}, {0.5, 0.3}), DataError);
    CHECK_THROWS_AS(EmpiricalCdf::from_table({0.1, 0.2}, {0.5, 1.5}), DataError);
  }

  TEST_CASE("nearest-point distribution follows 1-(1-Rp)^n") {
    const auto rp = five_sample_cdf();
    CHECK(gp_from_rp(rp, 1, 0.5) == doctest::Approx(0.2));
    CHECK(gp_from_rp(rp, 5, 0.5) == doctest::Approx(1.0 - std::pow(0.8, 5)).epsilon(1e-12));
    CHECK(gp_from_rp(rp, 5, 0.4) == doctest::Approx(0.0));
    CHECK_THROWS_AS(gp_from_rp(rp, 0, 0.5), DataError);
    CHECK_THROWS_AS(gp_from_rp(rp, 5, -0.1), DataError);
  }

  TEST_CASE("gp_inverse takes the largest admissible grid point") {
    const auto rp = five_sample_cdf();
    // G_p(0.5) = 0.672 <= 0.8 but G_p(0.8) = 0.922 > 0.8.
    const auto inv = gp_inverse(rp, 5, 0.8);
    CHECK(inv.value == doctest::Approx(0.5));
    CHECK_FALSE(inv.degenerate);

    const auto tight = gp_inverse(rp, 5, 0.5);
    CHECK(tight.degenerate);
    CHECK(tight.value == 0.0);

    // G_p(1.5) = 1 - 0.2^5 = 0.99968; G_p(2.0) = 1 exceeds any gamma < 1.
    const auto loose = gp_inverse(rp, 5, 0.9999999);
    CHECK(loose.value == doctest::Approx(1.5));
    CHECK_THROWS_AS(gp_inverse(rp, 5, 1.5), DataError);
  }

  TEST_CASE("binocdf handles the edges") {
    CHECK(binocdf(-0.5, 10, 0.3) == doctest::Approx(0.0));
    CHECK(binocdf(10.0, 10, 0.3) == doctest::Approx(1.0));
    CHECK(binocdf(25.0, 10, 0.3) == doctest::Approx(1.0));
    CHECK(binocdf(0.0, 10, 0.0) == doctest::Approx(1.0));
    CHECK(binocdf(9.0, 10, 1.0) == doctest::Approx(0.0));
    CHECK(binocdf(10.0, 10, 1.0) == doctest::Approx(1.0));
    CHECK(binocdf(0.0, 0, 0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(binocdf(1.0, -1, 0.5), DataError);
    CHECK_THROWS_AS(binocdf(1.0, 10, 1.5), DataError);
  }

  TEST_CASE("binocdf matches the reference value and a direct sum") {
    CHECK(binocdf(8.0, 10, 0.8) == doctest::Approx(0.6242).epsilon(2e-4));
    oracles::XorShift gen{53};
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + gen.below(60);
      const double p = 0.02 + 0.96 * gen.uniform();
      const int k = gen.below(n + 1);
      const double mine = binocdf(static_cast<double>(k), n, p);
      const double direct = oracles::binocdf_direct(k, n, p);
      CHECK(mine == doctest::Approx(direct).epsilon(1e-11));
    }
  }

  TEST_CASE("fractional thresholds floor to the last whole success count") {
    CHECK(binocdf(8.7, 10, 0.8) == doctest::Approx(binocdf(8.0, 10, 0.8)).epsilon(1e-14));
  }

  TEST_CASE("bound report reproduces the worked numbers") {
    const auto rep = bound_report(reference_input());
    CHECK(rep.g_inv_gamma == doctest::Approx(0.5));
    CHECK(rep.epsilon == doctest::Approx(0.05));
    CHECK(rep.n_delta == doctest::Approx(29655.5).epsilon(1e-4));
    CHECK(rep.p_att == doctest::Approx(std::pow(0.95, 10)).epsilon(1e-10));
    CHECK(rep.p_zsl ==
          doctest::Approx(std::pow(0.95, 10) * 0.2 * std::pow(0.95, 10)).epsilon(1e-10));
    CHECK_FALSE(rep.g_degenerate);
    CHECK_FALSE(rep.p_zsl_ca_strict.has_value());

    // Doubling attributes and tolerance together changes nothing in the
    // sample bound; the attribute-stage probability uses the doubled count.
    CHECK(rep.n_delta_ca == rep.n_delta);
    CHECK(rep.p_att_ca == doctest::Approx(std::pow(0.95, 20)).epsilon(1e-10));
    CHECK(rep.p_zsl_ca ==
          doctest::Approx(std::pow(0.95, 10) * 0.2 * std::pow(0.95, 20)).epsilon(1e-10));
  }

  TEST_CASE("strict double counting multiplies the label stage twice") {
    auto in = reference_input();
    in.strict_double_count = true;
    const auto rep = bound_report(in);
    REQUIRE(rep.p_zsl_ca_strict.has_value());
    CHECK(*rep.p_zsl_ca_strict ==
          doctest::Approx(std::pow(0.95, 20) * 0.2 * std::pow(0.95, 20)).epsilon(1e-10));
    CHECK(*rep.p_zsl_ca_strict < rep.p_zsl_ca);
  }

  TEST_CASE("explicit tolerance override matches the CDF route") {
    auto in = reference_input();
    const auto via_cdf = bound_report(in);
    in.rp.reset();
    in.g_override = 0.5;
    const auto via_override = bound_report(in);
    CHECK(via_override.n_delta == doctest::Approx(via_cdf.n_delta).epsilon(1e-14));
    CHECK(via_override.p_zsl == doctest::Approx(via_cdf.p_zsl).epsilon(1e-14));
  }

  TEST_CASE("log base rescales the sample bound") {
    auto in = reference_input();
    const auto nat = bound_report(in);
    in.log_base = 10.0;
    const auto dec = bound_report(in);
    CHECK(dec.n_delta == doctest::Approx(nat.n_delta / std::log(10.0)).epsilon(1e-12));
  }

  TEST_CASE("invalid inputs are rejected") {
    auto both = reference_input();
    both.g_override = 0.5;
    CHECK_THROWS_AS(bound_report(both), DataError);

    auto neither = reference_input();
    neither.rp.reset();
    CHECK_THROWS_AS(bound_report(neither), DataError);

    auto badgamma = reference_input();
    badgamma.gamma = 1.0;
    CHECK_THROWS_AS(bound_report(badgamma), DataError);

    auto badbase = reference_input();
    badbase.log_base = 1.0;
    CHECK_THROWS_AS(bound_report(badbase), DataError);

    auto zero = reference_input();
    zero.rp.reset();
    zero.g_override = 0.0;
    CHECK_THROWS_AS(bound_report(zero), ZeroTolerance);

    // A gamma below the smallest reachable G_p admits no tolerance at all.
    auto unreachable = reference_input();
    unreachable.gamma = 0.1;
    CHECK_THROWS_AS(bound_report(unreachable), ZeroTolerance);
  }

  TEST_CASE("report csv lists every metric") {
    const auto rep = bound_report(reference_input());
    const auto text = bound_report_csv(rep);
    CHECK(text.rfind("metric,value\n", 0) == 0);
    for (const char* key : {"g_inv_gamma", "epsilon", "n_delta", "p_att", "p_zsl",
                            "n_delta_ca", "p_att_ca", "p_zsl_ca"})
      CHECK(text.find(std::string(key) + ",") != std::string::npos);
  }
}
