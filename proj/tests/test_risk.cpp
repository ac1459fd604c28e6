#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "owa/risk.hpp"

using namespace owa;

namespace {
const std::vector<double> kR{-0.02, 0.01, -0.01, 0.03};
}

TEST_CASE("cvar at the lowest level negates the worst return", "[risk]") {
  REQUIRE(cvar(kR, 1) == Catch::Approx(0.02).margin(1e-15));
}

TEST_CASE("cvar averages the j smallest returns", "[risk]") {
  REQUIRE(cvar(kR, 2) == Catch::Approx(0.015).margin(1e-15));
  REQUIRE(cvar(kR, 4) == Catch::Approx(-0.0025).margin(1e-15));
}

TEST_CASE("cvar rejects out-of-range levels", "[risk]") {
  REQUIRE_THROWS_AS(cvar(kR, 0), std::out_of_range);
  REQUIRE_THROWS_AS(cvar(kR, 5), std::out_of_range);
}

TEST_CASE("tail matches hand values and the mean at level T", "[risk]") {
  REQUIRE(tail(kR, 2) == Catch::Approx(-0.0075).margin(1e-15));
  REQUIRE(tail(kR, 4) == Catch::Approx(0.0025).margin(1e-15));
}

TEST_CASE("tail equals -(j/T) cvar everywhere", "[risk]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-0.1, 0.1);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t t = 1 + rep % 12;
    std::vector<double> r(t);
    for (auto& v : r) v = unif(rng);
    for (std::size_t j = 1; j <= t; ++j) {
      const double lhs = tail(r, j);
      const double rhs = -(static_cast<double>(j) / static_cast<double>(t)) * cvar(r, j);
      REQUIRE(lhs == Catch::Approx(rhs).margin(1e-12));
    }
  }
}

TEST_CASE("cash translation and positive homogeneity of cvar", "[risk]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-0.1, 0.1);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> r(6);
    for (auto& v : r) v = unif(rng);
    const double c = unif(rng);
    const double lambda = std::abs(unif(rng)) * 5.0;
    std::vector<double> shifted(r), scaled(r);
    for (auto& v : shifted) v += c;
    for (auto& v : scaled) v *= lambda;
    for (std::size_t j = 1; j <= r.size(); ++j) {
      REQUIRE(cvar(shifted, j) == Catch::Approx(cvar(r, j) - c).margin(1e-12));
      REQUIRE(cvar(scaled, j) == Catch::Approx(lambda * cvar(r, j)).margin(1e-12));
    }
  }
}

TEST_CASE("sorted order statistics are non-decreasing", "[risk]") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> r(10);
    for (auto& v : r) v = unif(rng);
    // j * cvar(r, j) = -(prefix sum of j smallest); the term added at step j
    // is the j-th order statistic, which must be non-decreasing in j.
    double prev_term = -cvar(r, 1);
    for (std::size_t j = 2; j <= r.size(); ++j) {
      const double term = -(static_cast<double>(j) * cvar(r, j) -
                            static_cast<double>(j - 1) * cvar(r, j - 1));
      REQUIRE(term >= prev_term - 1e-12);
      prev_term = term;
    }
  }
}

TEST_CASE("empirical_var picks the ceil(alpha T) order statistic", "[risk]") {
  const std::vector<double> r{-0.05, 0.01, 0.02, 0.03};
  REQUIRE(empirical_var(r, 0.25) == Catch::Approx(0.05).margin(1e-15));
  REQUIRE(empirical_var(r, 1.0) == Catch::Approx(-0.03).margin(1e-15));

  std::vector<double> hundred(100);
  for (std::size_t i = 0; i < hundred.size(); ++i)
    hundred[i] = -0.01 * static_cast<double>(i + 1);
  REQUIRE(empirical_var(hundred, 0.01) == Catch::Approx(1.0).margin(1e-15));

  REQUIRE_THROWS_AS(empirical_var(r, 0.0), std::out_of_range);
  REQUIRE_THROWS_AS(empirical_var(r, 1.5), std::out_of_range);
}

TEST_CASE("cvar_general coincides with the uniform estimator at j/T", "[risk]") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unif(-0.1, 0.1);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t t = 2 + rep % 9;
    std::vector<double> r(t);
    for (auto& v : r) v = unif(rng);
    std::vector<double> probs(t, 1.0 / static_cast<double>(t));
    for (std::size_t j = 1; j <= t; ++j) {
      const double beta = static_cast<double>(j) / static_cast<double>(t);
      REQUIRE(cvar_general(r, probs, beta) == Catch::Approx(cvar(r, j)).margin(1e-12));
    }
  }
}

TEST_CASE("centered profile vanishes when the portfolio replicates the benchmark",
          "[risk]") {
  ScenarioPanel panel =
      ScenarioPanel::with_uniform({{0.01, -0.02, 0.03}}, {0.01, -0.02, 0.03});
  const auto profile = centered_profile(panel, PortfolioWeights{{1.0}}, ProfileVariant::Cvar);
  for (double g : profile.values) REQUIRE(g == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("centered profile matches hand-sorted values", "[risk]") {
  ScenarioPanel panel = ScenarioPanel::with_uniform({{0.02, -0.02}}, {0.01, -0.01});
  const PortfolioWeights x{{1.0}};
  const auto g = centered_profile(panel, x, ProfileVariant::Cvar);
  REQUIRE(g.values[0] == Catch::Approx(0.01).margin(1e-15));
  REQUIRE(g.values[1] == Catch::Approx(0.0).margin(1e-15));
  const auto h = centered_profile(panel, x, ProfileVariant::Tail);
  REQUIRE(h.values[0] == Catch::Approx(-0.005).margin(1e-15));
  REQUIRE(h.values[1] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("tail profile is the -(t/T)-scaled cvar profile", "[risk]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(-0.05, 0.05);
  const std::size_t t = 8;
  std::vector<std::vector<double>> returns(3, std::vector<double>(t));
  std::vector<double> bench(t);
  for (auto& row : returns)
    for (auto& v : row) v = unif(rng);
  for (auto& v : bench) v = unif(rng);
  auto panel = ScenarioPanel::with_uniform(returns, bench);
  const PortfolioWeights x{{0.2, 0.5, 0.3}};
  const auto g = centered_profile(panel, x, ProfileVariant::Cvar);
  const auto h = centered_profile(panel, x, ProfileVariant::Tail);
  for (std::size_t j = 1; j <= t; ++j) {
    const double expected =
        -(static_cast<double>(j) / static_cast<double>(t)) * g.values[j - 1];
    REQUIRE(h.values[j - 1] == Catch::Approx(expected).margin(1e-12));
  }
}
