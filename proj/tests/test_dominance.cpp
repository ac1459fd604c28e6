#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "owa/dominance.hpp"
#include "owa/risk.hpp"
#include "owa/weights.hpp"

using namespace owa;

namespace {

std::vector<double> uniform_probs(std::size_t t) {
  return std::vector<double>(t, 1.0 / static_cast<double>(t));
}

std::vector<double> random_series(std::mt19937_64& rng, std::size_t t) {
  // Coarse grid keeps strictness decisions away from float noise.
  std::uniform_int_distribution<int> grid(-8, 8);
  std::vector<double> r(t);
  for (auto& v : r) v = 0.01 * grid(rng);
  return r;
}

}  // namespace

TEST_CASE("check_zsd requires strict outperformance in every state", "[dominance]") {
  REQUIRE(check_zsd(std::vector<double>{2, 3}, std::vector<double>{1, 2}, uniform_probs(2)));
  REQUIRE_FALSE(check_zsd(std::vector<double>{2, 3}, std::vector<double>{2, 3}, uniform_probs(2)));
  REQUIRE_FALSE(check_zsd(std::vector<double>{2, 1}, std::vector<double>{1, 2}, uniform_probs(2)));
}

TEST_CASE("check_fsd compares order statistics", "[dominance]") {
  REQUIRE(check_fsd(std::vector<double>{1, 3}, std::vector<double>{0, 3}));
  REQUIRE_FALSE(check_fsd(std::vector<double>{1, 3}, std::vector<double>{1, 3}));
  REQUIRE_FALSE(check_fsd(std::vector<double>{0, 4}, std::vector<double>{1, 3}));
}

TEST_CASE("check_ssd compares ascending partial sums", "[dominance]") {
  REQUIRE(check_ssd(std::vector<double>{1, 2}, std::vector<double>{0, 3}));
  REQUIRE_FALSE(check_ssd(std::vector<double>{0, 3}, std::vector<double>{1, 2}));
  REQUIRE_FALSE(check_ssd(std::vector<double>{1, 2}, std::vector<double>{1, 2}));
}

TEST_CASE("assd_margin floors at zero and matches hand CVaRs", "[dominance]") {
  REQUIRE(assd_margin(std::vector<double>{1, 2}, std::vector<double>{0, 3}) == 0.0);
  REQUIRE(assd_margin(std::vector<double>{0, 3}, std::vector<double>{1, 2}) ==
          Catch::Approx(1.0).margin(1e-15));
  REQUIRE(assd_margin(std::vector<double>{1, 2}, std::vector<double>{1, 2}) == 0.0);
}

TEST_CASE("csesd_margins cumulate sorted centered-CVaR differences", "[dominance]") {
  const auto g = csesd_margins(std::vector<double>{0, 3}, std::vector<double>{1, 2});
  REQUIRE(g.size() == 2);
  REQUIRE(g[0] == Catch::Approx(1.0).margin(1e-15));
  REQUIRE(g[1] == Catch::Approx(1.0).margin(1e-15));

  const auto zero = csesd_margins(std::vector<double>{1, 2}, std::vector<double>{1, 2});
  for (double v : zero) REQUIRE(v == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("csesd_margins equals subset maximization via top_t_sum", "[dominance]") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t t = 2 + rep % 9;
    const auto a = random_series(rng, t);
    const auto b = random_series(rng, t);
    const auto g = csesd_margins(a, b);
    const auto ca = cvar_all_levels(a);
    const auto cb = cvar_all_levels(b);
    std::vector<double> diffs(t);
    for (std::size_t j = 0; j < t; ++j) diffs[j] = ca[j] - cb[j];
    for (std::size_t k = 1; k <= t; ++k)
      REQUIRE(g[k - 1] == top_t_sum(diffs, k));
  }
}

TEST_CASE("implication chain zsd => fsd => ssd on random pairs", "[dominance]") {
  std::mt19937_64 rng(43);
  int zsd_hits = 0, fsd_hits = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t t = 2 + rep % 9;
    auto a = random_series(rng, t);
    const auto b = random_series(rng, t);
    if (rep % 3 == 0) {
      // Bias toward dominance so the chain actually fires.
      for (std::size_t i = 0; i < t; ++i) a[i] = b[i] + 0.01 * (1 + rep % 3);
    }
    const bool zsd = check_zsd(a, b, uniform_probs(t));
    const bool fsd = check_fsd(a, b);
    const bool ssd = check_ssd(a, b);
    if (zsd) {
      ++zsd_hits;
      REQUIRE(fsd);
    }
    if (fsd) {
      ++fsd_hits;
      REQUIRE(ssd);
    }
  }
  REQUIRE(zsd_hits > 100);
  REQUIRE(fsd_hits >= zsd_hits);
}

TEST_CASE("cumulative margins bound the assd margin", "[dominance]") {
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t t = 2 + rep % 9;
    const auto a = random_series(rng, t);
    const auto b = random_series(rng, t);
    const auto g = csesd_margins(a, b);
    double eps = 0.0;
    for (double v : g) eps = std::max(eps, v);
    // G^(1) is the largest single difference, so the implication is exact.
    REQUIRE(assd_margin(a, b) <= eps);
  }
}

TEST_CASE("utility bound for cumulative epsilon dominance", "[dominance]") {
  // For nondecreasing concave piecewise-linear u with slopes <= 1,
  // E[u(A)] + eps >= E[u(B)] whenever the margins stay below eps.
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::size_t t = 2 + rep % 8;
    const auto a = random_series(rng, t);
    const auto b = random_series(rng, t);
    const auto g = csesd_margins(a, b);
    double eps = 1e-9;
    for (double v : g) eps = std::max(eps, v);

    // u(x) = min over pieces of (intercept_i + slope_i x), slopes in [0, 1]
    // sorted decreasing so the function is concave and nondecreasing.
    const int pieces = 1 + rep % 4;
    std::vector<double> slope(pieces), intercept(pieces);
    for (int i = 0; i < pieces; ++i) {
      slope[i] = 0.5 * (unif(rng) + 1.0);
      intercept[i] = 0.05 * unif(rng);
    }
    auto u = [&](double x) {
      double best = slope[0] * x + intercept[0];
      for (int i = 1; i < pieces; ++i)
        best = std::min(best, slope[i] * x + intercept[i]);
      return best;
    };
    double ua = 0.0, ub = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      ua += u(a[i]);
      ub += u(b[i]);
    }
    ua /= static_cast<double>(t);
    ub /= static_cast<double>(t);
    REQUIRE(ua + eps >= ub - 1e-12);
  }
}

TEST_CASE("classify composes the verdict chain", "[dominance]") {
  const auto fsd_report = classify(std::vector<double>{1, 3}, std::vector<double>{0, 3});
  REQUIRE(fsd_report.verdict == DominanceVerdict::Fsd);
  REQUIRE(fsd_report.ssd);

  const auto equal_report = classify(std::vector<double>{1, 3}, std::vector<double>{1, 3});
  REQUIRE(equal_report.verdict == DominanceVerdict::Assd);
  REQUIRE(equal_report.assd_margin == 0.0);
  REQUIRE_FALSE(equal_report.ssd);

  const auto assd_report = classify(std::vector<double>{0, 3}, std::vector<double>{1, 2});
  REQUIRE(assd_report.verdict == DominanceVerdict::Assd);
  REQUIRE(assd_report.assd_margin == Catch::Approx(1.0).margin(1e-15));

  const auto zsd_report = classify(std::vector<double>{2, 3}, std::vector<double>{1, 2});
  REQUIRE(zsd_report.verdict == DominanceVerdict::Zsd);

  const auto degenerate = classify(std::vector<double>{}, std::vector<double>{});
  REQUIRE(degenerate.verdict == DominanceVerdict::None);
}
