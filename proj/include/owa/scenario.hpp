// Scenario panel data model: asset return scenarios, probabilities and a
// benchmark series, plus portfolio weights and the feasible polyhedron that
// every optimization model draws from. Panels are immutable after
// construction and safe to share across threads.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace owa {

/// T x n scenario matrix with per-scenario probabilities and a benchmark
/// return series. Returns are simple per-period rates; returns[a][s] is the
/// return of asset `a` under scenario `s`.
struct ScenarioPanel {
  std::vector<std::vector<double>> returns;  // [asset][scenario]
  std::vector<double> probabilities;         // length T, sums to 1
  std::vector<double> benchmark;             // length T
  std::vector<std::string> asset_labels;     // length n (may be empty)
  std::vector<std::string> scenario_labels;  // length T (may be empty)

  std::size_t num_assets() const { return returns.size(); }
  std::size_t num_scenarios() const { return benchmark.size(); }

  bool uniform_probabilities(double tol = 1e-12) const;

  /// Sub-panel over scenarios [first, first + count), keeping labels aligned.
  /// Probabilities are reset to uniform 1/count.
  ScenarioPanel window(std::size_t first, std::size_t count) const;

  /// Builds a panel with uniform probabilities 1/T.
  static ScenarioPanel with_uniform(std::vector<std::vector<double>> returns,
                                    std::vector<double> benchmark,
                                    std::vector<std::string> asset_labels = {},
                                    std::vector<std::string> scenario_labels = {});
};

struct PortfolioWeights {
  std::vector<double> x;  // capital fraction per asset

  std::size_t size() const { return x.size(); }
};

enum class RowRelation { LessEqual, Equal, GreaterEqual };

struct LinearConstraint {
  std::vector<double> coeffs;  // length n
  RowRelation relation = RowRelation::Equal;
  double rhs = 0.0;
};

enum class FeasibleKind { LongOnlySimplex, BudgetOnly, CustomLinear };

/// Feasible polyhedron for portfolio weights. Every kind contains the budget
/// constraint sum(x) = 1; the long-only simplex additionally imposes x >= 0.
struct FeasibleSet {
  FeasibleKind kind = FeasibleKind::LongOnlySimplex;
  std::vector<LinearConstraint> rows;  // CustomLinear only
  std::vector<double> lower;           // CustomLinear only; empty = unbounded
  std::vector<double> upper;

  static FeasibleSet long_only_simplex();
  static FeasibleSet budget_only();
  static FeasibleSet custom(std::vector<LinearConstraint> rows,
                            std::vector<double> lower = {},
                            std::vector<double> upper = {});

  /// Throws std::invalid_argument if a custom set lacks the budget row or has
  /// inconsistent dimensions for an n-asset universe.
  void validate(std::size_t n) const;
};

struct ValidationReport {
  std::vector<std::string> issues;

  bool ok() const { return issues.empty(); }
};

/// Checks every panel invariant (finiteness, probability sum, benchmark
/// length, non-empty dimensions) and reports all violations found.
ValidationReport validate_panel(const ScenarioPanel& panel);

/// R_k(x) = sum_a x_a * r[a][k] for each scenario k.
std::vector<double> portfolio_returns(const ScenarioPanel& panel,
                                      const PortfolioWeights& weights);

/// Shannon entropy in bits, with 0*log2(0) = 0.
double shannon_entropy(std::span<const double> probabilities);

}  // namespace owa
