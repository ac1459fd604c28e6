#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "owa/scenario.hpp"

using namespace owa;

namespace {

ScenarioPanel toy_panel() {
  // 2 assets x 3 scenarios
  return ScenarioPanel::with_uniform({{0.01, 0.02, -0.01}, {0.00, 0.01, 0.03}},
                                     {0.005, 0.015, 0.01});
}

}  // namespace

TEST_CASE("validate_panel accepts well-formed input", "[scenario]") {
  REQUIRE(validate_panel(toy_panel()).ok());
}

TEST_CASE("validate_panel reports probability drift", "[scenario]") {
  ScenarioPanel panel;
  panel.returns = {{0.1, 0.2}};
  panel.benchmark = {0.0, 0.0};
  panel.probabilities = {0.5, 0.6};
  const auto report = validate_panel(panel);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& issue : report.issues)
    if (issue.find("sum to 1.1") != std::string::npos) found = true;
  REQUIRE(found);
}

TEST_CASE("validate_panel reports benchmark length mismatch", "[scenario]") {
  ScenarioPanel panel;
  panel.returns = {{0.1, 0.2, 0.3}};
  panel.probabilities = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  panel.benchmark = {0.0, 0.0};
  const auto report = validate_panel(panel);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& issue : report.issues)
    if (issue.find("benchmark length mismatch") != std::string::npos) found = true;
  REQUIRE(found);
}

TEST_CASE("validate_panel reports NaN cells", "[scenario]") {
  auto panel = toy_panel();
  panel.returns[1][2] = std::nan("");
  REQUIRE_FALSE(validate_panel(panel).ok());
}

TEST_CASE("portfolio_returns selects a row under a unit weight", "[scenario]") {
  auto panel = ScenarioPanel::with_uniform({{0.1, -0.1}, {0.0, 0.2}}, {0.0, 0.0});
  const auto r = portfolio_returns(panel, PortfolioWeights{{1.0, 0.0}});
  REQUIRE(r == std::vector<double>{0.1, -0.1});
}

TEST_CASE("portfolio_returns blends rows", "[scenario]") {
  auto panel = ScenarioPanel::with_uniform({{0.1, -0.1}, {0.0, 0.2}}, {0.0, 0.0});
  const auto r = portfolio_returns(panel, PortfolioWeights{{0.5, 0.5}});
  REQUIRE(r[0] == Catch::Approx(0.05).margin(1e-15));
  REQUIRE(r[1] == Catch::Approx(0.05).margin(1e-15));
}

TEST_CASE("portfolio_returns of the zero portfolio is zero", "[scenario]") {
  const auto r = portfolio_returns(toy_panel(), PortfolioWeights{{0.0, 0.0}});
  for (double v : r) REQUIRE(v == 0.0);
}

TEST_CASE("portfolio_returns rejects dimension mismatch", "[scenario]") {
  REQUIRE_THROWS_AS(portfolio_returns(toy_panel(), PortfolioWeights{{1.0}}),
                    std::invalid_argument);
}

TEST_CASE("portfolio_returns is linear in the weights", "[scenario]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const auto panel = toy_panel();
  for (int rep = 0; rep < 50; ++rep) {
    PortfolioWeights x{{unif(rng), unif(rng)}};
    PortfolioWeights y{{unif(rng), unif(rng)}};
    const double alpha = 0.5 * (unif(rng) + 1.0);
    PortfolioWeights mix{{alpha * x.x[0] + (1 - alpha) * y.x[0],
                          alpha * x.x[1] + (1 - alpha) * y.x[1]}};
    const auto rx = portfolio_returns(panel, x);
    const auto ry = portfolio_returns(panel, y);
    const auto rm = portfolio_returns(panel, mix);
    for (std::size_t s = 0; s < rm.size(); ++s)
      REQUIRE(rm[s] == Catch::Approx(alpha * rx[s] + (1 - alpha) * ry[s]).margin(1e-12));
  }
}

TEST_CASE("shannon_entropy matches closed forms", "[scenario]") {
  REQUIRE(shannon_entropy(std::vector<double>{1.0, 0.0}) == 0.0);
  REQUIRE(shannon_entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}) ==
          Catch::Approx(2.0).margin(1e-15));
  REQUIRE(shannon_entropy(std::vector<double>{0.5, 0.5}) ==
          Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("shannon_entropy is maximized by the uniform vector", "[scenario]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.01, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t t = 2 + rep % 7;
    std::vector<double> p(t);
    double sum = 0.0;
    for (auto& v : p) sum += (v = unif(rng));
    for (auto& v : p) v /= sum;
    std::vector<double> uniform(t, 1.0 / static_cast<double>(t));
    REQUIRE(shannon_entropy(p) <= shannon_entropy(uniform) + 1e-12);
  }
}

TEST_CASE("window slices scenarios and resets probabilities", "[scenario]") {
  const auto panel = toy_panel();
  const auto sub = panel.window(1, 2);
  REQUIRE(sub.num_scenarios() == 2);
  REQUIRE(sub.returns[0] == std::vector<double>{0.02, -0.01});
  REQUIRE(sub.benchmark == std::vector<double>{0.015, 0.01});
  REQUIRE(sub.probabilities == std::vector<double>{0.5, 0.5});
}

TEST_CASE("custom feasible sets must contain the budget row", "[scenario]") {
  LinearConstraint budget{{1.0, 1.0}, RowRelation::Equal, 1.0};
  LinearConstraint cap{{1.0, 0.0}, RowRelation::LessEqual, 0.5};
  REQUIRE_NOTHROW(FeasibleSet::custom({budget, cap}).validate(2));
  REQUIRE_THROWS_AS(FeasibleSet::custom({cap}).validate(2), std::invalid_argument);
}
