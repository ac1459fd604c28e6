// Discrete CVaR / Tail / VaR estimators on empirical return series, and the
// centered profiles (portfolio-minus-benchmark at every level t/T) consumed
// by the optimization models and the dominance checks.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "owa/scenario.hpp"

namespace owa {

enum class ProfileVariant { Cvar, Tail };

/// Per-level difference profile against the benchmark: values[t-1] holds
/// CVaR_{t/T}(R(x)) - CVaR_{t/T}(R_I) for the Cvar variant, or
/// Tail_{t/T}(R(x)) - Tail_{t/T}(R_I) for the Tail variant.
struct CenteredProfile {
  ProfileVariant variant = ProfileVariant::Cvar;
  std::vector<double> values;
};

/// CVaR at level j/T for uniform scenario probabilities: the negated mean of
/// the j smallest entries. Throws std::out_of_range for j outside 1..T.
double cvar(std::span<const double> returns, std::size_t level);

/// Tail at level j/T: (1/T) * sum of the j smallest entries.
double tail(std::span<const double> returns, std::size_t level);

/// CVaR for general scenario probabilities at threshold beta in (0, 1],
/// with the usual fractional split of the atom straddling beta. Coincides
/// with cvar(returns, j) at beta = j/T under uniform probabilities.
double cvar_general(std::span<const double> returns,
                    std::span<const double> probabilities, double beta);

/// Empirical VaR: the negated k-th smallest return with k = ceil(alpha * T).
double empirical_var(std::span<const double> returns, double alpha);

/// All levels at once: out[j-1] = cvar(returns, j). One sort, prefix sums.
std::vector<double> cvar_all_levels(std::span<const double> returns);

CenteredProfile centered_profile(const ScenarioPanel& panel,
                                 const PortfolioWeights& weights,
                                 ProfileVariant variant);

/// Profile of a precomputed return series against a benchmark series.
CenteredProfile centered_profile_series(std::span<const double> portfolio,
                                        std::span<const double> benchmark,
                                        ProfileVariant variant);

}  // namespace owa
