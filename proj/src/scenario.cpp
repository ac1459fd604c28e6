#include "owa/scenario.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace owa {

bool ScenarioPanel::uniform_probabilities(double tol) const {
  if (probabilities.empty()) return false;
  const double u = 1.0 / static_cast<double>(probabilities.size());
  for (double p : probabilities)
    if (std::abs(p - u) > tol) return false;
  return true;
}

ScenarioPanel ScenarioPanel::window(std::size_t first, std::size_t count) const {
  if (first + count > num_scenarios())
    throw std::out_of_range("panel window exceeds scenario range");
  ScenarioPanel sub;
  sub.returns.reserve(returns.size());
  for (const auto& row : returns)
    sub.returns.emplace_back(row.begin() + first, row.begin() + first + count);
  sub.benchmark.assign(benchmark.begin() + first, benchmark.begin() + first + count);
  sub.probabilities.assign(count, 1.0 / static_cast<double>(count));
  sub.asset_labels = asset_labels;
  if (scenario_labels.size() >= first + count)
    sub.scenario_labels.assign(scenario_labels.begin() + first,
                               scenario_labels.begin() + first + count);
  return sub;
}

ScenarioPanel ScenarioPanel::with_uniform(std::vector<std::vector<double>> returns,
                                          std::vector<double> benchmark,
                                          std::vector<std::string> asset_labels,
                                          std::vector<std::string> scenario_labels) {
  ScenarioPanel panel;
  const std::size_t t = benchmark.size();
  panel.returns = std::move(returns);
  panel.benchmark = std::move(benchmark);
  panel.probabilities.assign(t, t > 0 ? 1.0 / static_cast<double>(t) : 0.0);
  panel.asset_labels = std::move(asset_labels);
  panel.scenario_labels = std::move(scenario_labels);
  return panel;
}

FeasibleSet FeasibleSet::long_only_simplex() {
  FeasibleSet c;
  c.kind = FeasibleKind::LongOnlySimplex;
  return c;
}

FeasibleSet FeasibleSet::budget_only() {
  FeasibleSet c;
  c.kind = FeasibleKind::BudgetOnly;
  return c;
}

FeasibleSet FeasibleSet::custom(std::vector<LinearConstraint> rows,
                                std::vector<double> lower,
                                std::vector<double> upper) {
  FeasibleSet c;
  c.kind = FeasibleKind::CustomLinear;
  c.rows = std::move(rows);
  c.lower = std::move(lower);
  c.upper = std::move(upper);
  return c;
}

void FeasibleSet::validate(std::size_t n) const {
  if (kind != FeasibleKind::CustomLinear) return;
  bool has_budget = false;
  for (const auto& row : rows) {
    if (row.coeffs.size() != n)
      throw std::invalid_argument("feasible-set row length differs from asset count");
    if (row.relation == RowRelation::Equal && row.rhs == 1.0) {
      bool all_ones = true;
      for (double c : row.coeffs)
        if (c != 1.0) { all_ones = false; break; }
      has_budget = has_budget || all_ones;
    }
  }
  if (!has_budget)
    throw std::invalid_argument("custom feasible set must contain the budget row sum(x) = 1");
  if (!lower.empty() && lower.size() != n)
    throw std::invalid_argument("feasible-set lower bounds length differs from asset count");
  if (!upper.empty() && upper.size() != n)
    throw std::invalid_argument("feasible-set upper bounds length differs from asset count");
}

ValidationReport validate_panel(const ScenarioPanel& panel) {
  ValidationReport report;
  auto add = [&report](const std::string& msg) { report.issues.push_back(msg); };

  const std::size_t n = panel.num_assets();
  const std::size_t t = panel.probabilities.size();
  if (n < 1) add("panel has no assets");
  if (t < 1) add("panel has no scenarios");

  for (std::size_t a = 0; a < n; ++a) {
    if (panel.returns[a].size() != t) {
      std::ostringstream os;
      os << "asset " << a << " has " << panel.returns[a].size()
         << " scenarios, expected " << t;
      add(os.str());
      continue;
    }
    for (std::size_t s = 0; s < t; ++s) {
      if (!std::isfinite(panel.returns[a][s])) {
        std::ostringstream os;
        os << "non-finite return at asset " << a << ", scenario " << s;
        add(os.str());
      }
    }
  }

  double sum = 0.0;
  for (std::size_t s = 0; s < t; ++s) {
    const double p = panel.probabilities[s];
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream os;
      os << "invalid probability " << p << " at scenario " << s;
      add(os.str());
    } else {
      sum += p;
    }
  }
  if (t > 0 && std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "probabilities sum to " << sum;
    add(os.str());
  }

  if (panel.benchmark.size() != t) {
    std::ostringstream os;
    os << "benchmark length mismatch: " << panel.benchmark.size()
       << " vs " << t << " scenarios";
    add(os.str());
  }
  for (std::size_t s = 0; s < panel.benchmark.size(); ++s) {
    if (!std::isfinite(panel.benchmark[s])) {
      std::ostringstream os;
      os << "non-finite benchmark return at scenario " << s;
      add(os.str());
    }
  }
  return report;
}

std::vector<double> portfolio_returns(const ScenarioPanel& panel,
                                      const PortfolioWeights& weights) {
  if (weights.size() != panel.num_assets())
    throw std::invalid_argument("weight vector length differs from asset count");
  const std::size_t t = panel.num_scenarios();
  std::vector<double> out(t, 0.0);
  for (std::size_t a = 0; a < panel.num_assets(); ++a) {
    const double w = weights.x[a];
    if (w == 0.0) continue;
    const auto& row = panel.returns[a];
    for (std::size_t s = 0; s < t; ++s) out[s] += w * row[s];
  }
  return out;
}

double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

}  // namespace owa
