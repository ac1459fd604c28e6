#include "owa/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace owa {

namespace {

std::vector<double> sorted_ascending(std::span<const double> values) {
  std::vector<double> s(values.begin(), values.end());
  std::stable_sort(s.begin(), s.end());
  return s;
}

}  // namespace

double cvar(std::span<const double> returns, std::size_t level) {
  const std::size_t t = returns.size();
  if (level < 1 || level > t)
    throw std::out_of_range("cvar level outside 1..T");
  auto s = sorted_ascending(returns);
  double sum = 0.0;
  for (std::size_t i = 0; i < level; ++i) sum += s[i];
  return -sum / static_cast<double>(level);
}

double tail(std::span<const double> returns, std::size_t level) {
  const std::size_t t = returns.size();
  if (level < 1 || level > t)
    throw std::out_of_range("tail level outside 1..T");
  auto s = sorted_ascending(returns);
  double sum = 0.0;
  for (std::size_t i = 0; i < level; ++i) sum += s[i];
  return sum / static_cast<double>(t);
}

double cvar_general(std::span<const double> returns,
                    std::span<const double> probabilities, double beta) {
  if (returns.empty() || returns.size() != probabilities.size())
    throw std::invalid_argument("cvar_general: series/probability length mismatch");
  if (!(beta > 0.0) || beta > 1.0)
    throw std::out_of_range("cvar_general: beta outside (0, 1]");

  std::vector<std::size_t> order(returns.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return returns[a] < returns[b];
  });

  double mass = 0.0, weighted = 0.0;
  for (std::size_t idx : order) {
    const double p = probabilities[idx];
    if (mass + p >= beta - 1e-15) {
      weighted += (beta - mass) * returns[idx];
      mass = beta;
      break;
    }
    mass += p;
    weighted += p * returns[idx];
  }
  if (mass < beta - 1e-12)
    throw std::invalid_argument("cvar_general: probabilities sum below beta");
  return -weighted / beta;
}

double empirical_var(std::span<const double> returns, double alpha) {
  if (returns.empty()) throw std::invalid_argument("empirical_var: empty series");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::out_of_range("empirical_var: alpha outside (0, 1]");
  const std::size_t t = returns.size();
  std::size_t k = static_cast<std::size_t>(
      std::ceil(alpha * static_cast<double>(t) - 1e-12));
  if (k < 1) k = 1;
  if (k > t) k = t;
  auto s = sorted_ascending(returns);
  return -s[k - 1];
}

std::vector<double> cvar_all_levels(std::span<const double> returns) {
  const std::size_t t = returns.size();
  auto s = sorted_ascending(returns);
  std::vector<double> out(t);
  double prefix = 0.0;
  for (std::size_t j = 1; j <= t; ++j) {
    prefix += s[j - 1];
    out[j - 1] = -prefix / static_cast<double>(j);
  }
  return out;
}

CenteredProfile centered_profile_series(std::span<const double> portfolio,
                                        std::span<const double> benchmark,
                                        ProfileVariant variant) {
  if (portfolio.size() != benchmark.size())
    throw std::invalid_argument("centered profile: series length mismatch");
  const std::size_t t = portfolio.size();
  const auto port = cvar_all_levels(portfolio);
  const auto bench = cvar_all_levels(benchmark);
  CenteredProfile profile;
  profile.variant = variant;
  profile.values.resize(t);
  for (std::size_t j = 1; j <= t; ++j) {
    const double g = port[j - 1] - bench[j - 1];
    // Tail = -(j/T) * CVaR, so h_t = -(t/T) * g_t.
    profile.values[j - 1] =
        variant == ProfileVariant::Cvar
            ? g
            : -g * static_cast<double>(j) / static_cast<double>(t);
  }
  return profile;
}

CenteredProfile centered_profile(const ScenarioPanel& panel,
                                 const PortfolioWeights& weights,
                                 ProfileVariant variant) {
  const auto r = portfolio_returns(panel, weights);
  return centered_profile_series(r, panel.benchmark, variant);
}

}  // namespace owa
