// Enhanced-indexation linear programs: ordered-weighted-average maximization
// of the centered CVaR / Tail profiles against a benchmark, assembled over
// the abstract LP layer, plus fixed-portfolio LP oracles used to verify the
// assembled models.

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include "owa/dominance.hpp"
#include "owa/linprog.hpp"
#include "owa/risk.hpp"
#include "owa/scenario.hpp"
#include "owa/weights.hpp"

namespace owa {

enum class LambdaScheme { Minimax, KBlock, Cumulative };

std::string to_string(LambdaScheme scheme);

struct OwaModelSpec {
  ProfileVariant variant = ProfileVariant::Cvar;
  LambdaScheme scheme = LambdaScheme::Minimax;
  double beta = 1.0;  // ignored by Minimax
};

LambdaWeights make_lambda(LambdaScheme scheme, std::size_t t, double beta);

/// Maximize sum(u) + sum(v) subject to
///   u_t + v_j <= lambda^j (CVaR_{t/T}(R_I) - zeta_t - (1/t) sum_k d_tk)
///   d_tk >= -zeta_t - sum_a r_ak x_a,   d >= 0,  u, v, zeta free,  x in C.
/// Columns are laid out as x(n), u(T), v(T), d(TxT), zeta(T); rows as the
/// T^2 ordered-average rows, the T^2 shortfall rows, then the C rows.
lp::LinearProgram build_owa_cvar_lp(const ScenarioPanel& panel,
                                    const LambdaWeights& lambda,
                                    const FeasibleSet& feasible);

/// Tail variant: u_t + v_j <= lambda^j (-(t/T) zeta_t - (1/T) sum_k d_tk
/// - Tail_{t/T}(R_I)); identical block structure otherwise.
lp::LinearProgram build_owa_tail_lp(const ScenarioPanel& panel,
                                    const LambdaWeights& lambda,
                                    const FeasibleSet& feasible);

struct SolveResult {
  PortfolioWeights weights;
  double objective = 0.0;
  CenteredProfile profile;     // recomputed from the weights, not the LP
  DominanceReport dominance;   // portfolio returns vs benchmark
  lp::SolveStatus status = lp::SolveStatus::Numerical;
  int iterations = 0;
  double solve_seconds = 0.0;
};

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleModelError : SolveError {
  using SolveError::SolveError;
};
struct UnboundedModelError : SolveError {
  using SolveError::SolveError;
};
struct NumericalModelError : SolveError {
  using SolveError::SolveError;
};

/// Builds the model for `spec`, solves it, extracts the portfolio, recomputes
/// the centered profile from scratch and classifies dominance against the
/// benchmark. The LP objective must agree with the recomputed ordered
/// weighted average within 1e-5 relative or the result is rejected.
SolveResult solve_enhanced_index(const ScenarioPanel& panel,
                                 const OwaModelSpec& spec,
                                 const FeasibleSet& feasible,
                                 const lp::SolverOptions& options = {});

/// Assignment-dual oracle for a fixed portfolio: solves
/// max sum(u) + sum(v) s.t. u_t + v_j <= lambda^j f_t(x) with f precomputed.
/// Equals owa_value(lambda, f(x), Ascending) by LP duality.
double owa_dual_value(const ScenarioPanel& panel, const PortfolioWeights& x,
                      const LambdaWeights& lambda,
                      const lp::SolverOptions& options = {});

/// Shortfall subprogram oracle: min zeta + (1/j) sum(d) with
/// d_k >= -zeta - r_k. Must equal the sort-based cvar(returns, level).
double cvar_lp_value(std::span<const double> returns, std::size_t level,
                     const lp::SolverOptions& options = {});

}  // namespace owa
