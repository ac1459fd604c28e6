#include "owa/lp_models.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace owa {

namespace {

void require_buildable(const ScenarioPanel& panel, const LambdaWeights& lambda,
                       const FeasibleSet& feasible) {
  const auto report = validate_panel(panel);
  if (!report.ok())
    throw std::invalid_argument("invalid panel: " + report.issues.front());
  if (!panel.uniform_probabilities())
    throw std::invalid_argument(
        "the ordered-average models assume uniform scenario probabilities; "
        "reweight or resample the panel first");
  if (lambda.size() != panel.num_scenarios())
    throw std::invalid_argument("lambda length differs from scenario count");
  if (!lambda.valid())
    throw std::invalid_argument("lambda must be non-increasing, nonnegative, not all zero");
  feasible.validate(panel.num_assets());
}

struct ModelLayout {
  int x = 0, u = 0, v = 0, d = 0, zeta = 0;
};

ModelLayout add_model_columns(lp::LinearProgram& prog, const ScenarioPanel& panel,
                              const FeasibleSet& feasible) {
  const int n = static_cast<int>(panel.num_assets());
  const int t = static_cast<int>(panel.num_scenarios());
  ModelLayout layout;
  const bool long_only = feasible.kind == FeasibleKind::LongOnlySimplex;
  layout.x = prog.add_block("x", n, long_only ? 0.0 : -lp::kInfinity, lp::kInfinity);
  if (feasible.kind == FeasibleKind::CustomLinear) {
    for (int a = 0; a < n; ++a) {
      const double lo = feasible.lower.empty() ? -lp::kInfinity
                                               : feasible.lower[static_cast<std::size_t>(a)];
      const double hi = feasible.upper.empty() ? lp::kInfinity
                                               : feasible.upper[static_cast<std::size_t>(a)];
      prog.set_bounds(layout.x + a, lo, hi);
    }
  }
  layout.u = prog.add_block("u", t, -lp::kInfinity, lp::kInfinity);
  layout.v = prog.add_block("v", t, -lp::kInfinity, lp::kInfinity);
  layout.d = prog.add_block("d", t * t, 0.0, lp::kInfinity, t);
  layout.zeta = prog.add_block("zeta", t, -lp::kInfinity, lp::kInfinity);
  for (int k = 0; k < t; ++k) {
    prog.set_objective(layout.u + k, 1.0);
    prog.set_objective(layout.v + k, 1.0);
  }
  return layout;
}

void add_shortfall_rows(lp::LinearProgram& prog, const ScenarioPanel& panel,
                        const ModelLayout& layout) {
  const int n = static_cast<int>(panel.num_assets());
  const int t = static_cast<int>(panel.num_scenarios());
  for (int tt = 0; tt < t; ++tt) {
    for (int k = 0; k < t; ++k) {
      std::vector<std::pair<int, double>> terms;
      terms.reserve(static_cast<std::size_t>(n) + 2);
      terms.emplace_back(layout.d + tt * t + k, 1.0);
      terms.emplace_back(layout.zeta + tt, 1.0);
      for (int a = 0; a < n; ++a) {
        const double r =
            panel.returns[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)];
        if (r != 0.0) terms.emplace_back(layout.x + a, r);
      }
      prog.add_constraint(std::move(terms), lp::Relation::GreaterEqual, 0.0);
    }
  }
}

void add_feasible_rows(lp::LinearProgram& prog, const ScenarioPanel& panel,
                       const FeasibleSet& feasible, const ModelLayout& layout) {
  const int n = static_cast<int>(panel.num_assets());
  if (feasible.kind == FeasibleKind::CustomLinear) {
    for (const auto& row : feasible.rows) {
      std::vector<std::pair<int, double>> terms;
      for (int a = 0; a < n; ++a)
        if (row.coeffs[static_cast<std::size_t>(a)] != 0.0)
          terms.emplace_back(layout.x + a, row.coeffs[static_cast<std::size_t>(a)]);
      const lp::Relation rel = row.relation == RowRelation::Equal
                                   ? lp::Relation::Equal
                               : row.relation == RowRelation::LessEqual
                                   ? lp::Relation::LessEqual
                                   : lp::Relation::GreaterEqual;
      prog.add_constraint(std::move(terms), rel, row.rhs);
    }
    return;
  }
  std::vector<std::pair<int, double>> budget;
  budget.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) budget.emplace_back(layout.x + a, 1.0);
  prog.add_constraint(std::move(budget), lp::Relation::Equal, 1.0);
}

lp::LinearProgram build_owa_lp(const ScenarioPanel& panel, const LambdaWeights& lambda,
                               const FeasibleSet& feasible, ProfileVariant variant) {
  require_buildable(panel, lambda, feasible);
  const int t = static_cast<int>(panel.num_scenarios());

  lp::LinearProgram prog;
  prog.sense = lp::Sense::Maximize;
  const ModelLayout layout = add_model_columns(prog, panel, feasible);

  // Benchmark constants, one pass over the sorted series.
  const auto bench_cvar = cvar_all_levels(panel.benchmark);
  const double t_real = static_cast<double>(t);

  for (int tt = 0; tt < t; ++tt) {
    const double level = static_cast<double>(tt + 1);
    // Tail rows carry -Tail_{t/T}(R_I) = (t/T) CVaR_{t/T}(R_I) on the rhs.
    const double rhs_unit = variant == ProfileVariant::Cvar
                                ? bench_cvar[static_cast<std::size_t>(tt)]
                                : (level / t_real) * bench_cvar[static_cast<std::size_t>(tt)];
    const double zeta_coef = variant == ProfileVariant::Cvar ? 1.0 : level / t_real;
    const double d_coef = variant == ProfileVariant::Cvar ? 1.0 / level : 1.0 / t_real;
    for (int j = 0; j < t; ++j) {
      const double lj = lambda.values[static_cast<std::size_t>(j)];
      std::vector<std::pair<int, double>> terms;
      terms.reserve(lj == 0.0 ? 2 : static_cast<std::size_t>(t) + 3);
      terms.emplace_back(layout.u + tt, 1.0);
      terms.emplace_back(layout.v + j, 1.0);
      if (lj != 0.0) {
        terms.emplace_back(layout.zeta + tt, lj * zeta_coef);
        const double dk = lj * d_coef;
        for (int k = 0; k < t; ++k) terms.emplace_back(layout.d + tt * t + k, dk);
      }
      prog.add_constraint(std::move(terms), lp::Relation::LessEqual, lj * rhs_unit);
    }
  }
  add_shortfall_rows(prog, panel, layout);
  add_feasible_rows(prog, panel, feasible, layout);
  return prog;
}

}  // namespace

std::string to_string(LambdaScheme scheme) {
  switch (scheme) {
    case LambdaScheme::Minimax: return "minimax";
    case LambdaScheme::KBlock: return "k_block";
    case LambdaScheme::Cumulative: return "cumulative";
  }
  return "minimax";
}

LambdaWeights make_lambda(LambdaScheme scheme, std::size_t t, double beta) {
  switch (scheme) {
    case LambdaScheme::Minimax: return lambda_minimax(t);
    case LambdaScheme::KBlock: return lambda_k_block(t, beta);
    case LambdaScheme::Cumulative: return lambda_cumulative(t, beta);
  }
  return lambda_minimax(t);
}

lp::LinearProgram build_owa_cvar_lp(const ScenarioPanel& panel,
                                    const LambdaWeights& lambda,
                                    const FeasibleSet& feasible) {
  return build_owa_lp(panel, lambda, feasible, ProfileVariant::Cvar);
}

lp::LinearProgram build_owa_tail_lp(const ScenarioPanel& panel,
                                    const LambdaWeights& lambda,
                                    const FeasibleSet& feasible) {
  return build_owa_lp(panel, lambda, feasible, ProfileVariant::Tail);
}

SolveResult solve_enhanced_index(const ScenarioPanel& panel, const OwaModelSpec& spec,
                                 const FeasibleSet& feasible,
                                 const lp::SolverOptions& options) {
  const LambdaWeights lambda =
      make_lambda(spec.scheme, panel.num_scenarios(), spec.beta);
  const lp::LinearProgram prog = spec.variant == ProfileVariant::Cvar
                                     ? build_owa_cvar_lp(panel, lambda, feasible)
                                     : build_owa_tail_lp(panel, lambda, feasible);
  const lp::LpSolution sol = lp::solve_lp(prog, options);
  switch (sol.status) {
    case lp::SolveStatus::Optimal:
      break;
    case lp::SolveStatus::Infeasible:
      throw InfeasibleModelError("feasible set is empty");
    case lp::SolveStatus::Unbounded:
      throw UnboundedModelError("model is unbounded; feasible set is malformed");
    default:
      throw NumericalModelError("solver failed: " + lp::to_string(sol.status));
  }

  const auto* xblock = prog.find_block("x");
  PortfolioWeights weights;
  weights.x.assign(sol.primal.begin() + xblock->start,
                   sol.primal.begin() + xblock->start + xblock->count);
  // Interior-point answers sit a hair inside the polyhedron; snap the
  // negligible violations so downstream invariants hold exactly.
  if (feasible.kind == FeasibleKind::LongOnlySimplex) {
    for (double& w : weights.x)
      if (w < 0.0 && w > -1e-7) w = 0.0;
  }
  double sum = 0.0;
  for (double w : weights.x) sum += w;
  if (std::abs(sum - 1.0) <= 1e-6 && sum != 0.0)
    for (double& w : weights.x) w /= sum;

  SolveResult result;
  result.weights = weights;
  result.objective = sol.objective;
  result.status = sol.status;
  result.iterations = sol.iterations;
  result.solve_seconds = sol.solve_seconds;
  result.profile = centered_profile(panel, weights, spec.variant);

  // The LP maximizes sum_j lambda^j f_(j) with f the ascending-sorted
  // centered profile (negated for the CVaR variant).
  std::vector<double> f(result.profile.values);
  if (spec.variant == ProfileVariant::Cvar)
    for (double& v : f) v = -v;
  const double recomputed = owa_value(lambda, f, SortOrder::Ascending);
  if (std::abs(recomputed - sol.objective) >
      1e-5 * std::max(1.0, std::abs(sol.objective)))
    throw NumericalModelError("solution rejected: LP objective " +
                              std::to_string(sol.objective) +
                              " disagrees with recomputed value " +
                              std::to_string(recomputed));

  const auto portfolio = portfolio_returns(panel, weights);
  result.dominance = classify(portfolio, panel.benchmark);
  return result;
}

double owa_dual_value(const ScenarioPanel& panel, const PortfolioWeights& x,
                      const LambdaWeights& lambda, const lp::SolverOptions& options) {
  const std::size_t t = panel.num_scenarios();
  if (lambda.size() != t)
    throw std::invalid_argument("lambda length differs from scenario count");
  const auto portfolio = portfolio_returns(panel, x);
  const auto port_cvar = cvar_all_levels(portfolio);
  const auto bench_cvar = cvar_all_levels(panel.benchmark);

  lp::LinearProgram prog;
  prog.sense = lp::Sense::Maximize;
  const int u0 = prog.add_block("u", static_cast<int>(t), -lp::kInfinity, lp::kInfinity);
  const int v0 = prog.add_block("v", static_cast<int>(t), -lp::kInfinity, lp::kInfinity);
  for (std::size_t k = 0; k < t; ++k) {
    prog.set_objective(u0 + static_cast<int>(k), 1.0);
    prog.set_objective(v0 + static_cast<int>(k), 1.0);
  }
  for (std::size_t tt = 0; tt < t; ++tt) {
    const double f_t = bench_cvar[tt] - port_cvar[tt];
    for (std::size_t j = 0; j < t; ++j)
      prog.add_constraint(
          {{u0 + static_cast<int>(tt), 1.0}, {v0 + static_cast<int>(j), 1.0}},
          lp::Relation::LessEqual, lambda.values[j] * f_t);
  }
  const auto sol = lp::solve_lp(prog, options);
  if (sol.status != lp::SolveStatus::Optimal)
    throw NumericalModelError("assignment-dual solve failed: " +
                              lp::to_string(sol.status));
  return sol.objective;
}

double cvar_lp_value(std::span<const double> returns, std::size_t level,
                     const lp::SolverOptions& options) {
  const std::size_t t = returns.size();
  if (level < 1 || level > t)
    throw std::out_of_range("cvar_lp_value: level outside 1..T");
  lp::LinearProgram prog;
  prog.sense = lp::Sense::Minimize;
  const int zeta = prog.add_block("zeta", 1, -lp::kInfinity, lp::kInfinity);
  const int d0 = prog.add_block("d", static_cast<int>(t), 0.0, lp::kInfinity);
  prog.set_objective(zeta, 1.0);
  for (std::size_t k = 0; k < t; ++k) {
    prog.set_objective(d0 + static_cast<int>(k), 1.0 / static_cast<double>(level));
    prog.add_constraint({{d0 + static_cast<int>(k), 1.0}, {zeta, 1.0}},
                        lp::Relation::GreaterEqual, -returns[k]);
  }
  const auto sol = lp::solve_lp(prog, options);
  if (sol.status != lp::SolveStatus::Optimal)
    throw NumericalModelError("shortfall solve failed: " + lp::to_string(sol.status));
  return sol.objective;
}

}  // namespace owa
