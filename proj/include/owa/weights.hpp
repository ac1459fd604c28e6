// OWA lambda-weight vectors (non-increasing, nonnegative) and ordered
// weighted sums, plus the top-t-sum used to certify the cumulative
// dominance margins.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace owa {

/// Scalarization weights lambda^1 >= lambda^2 >= ... >= lambda^T >= 0.
/// The generators below emit exact small integers so that telescoped sums
/// carry no floating drift.
struct LambdaWeights {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool valid() const;
};

/// (1, 0, ..., 0): only the worst ordered component counts.
LambdaWeights lambda_minimax(std::size_t t);

/// k leading ones, k = round(beta * T) half-up, clamped to [1, T].
LambdaWeights lambda_k_block(std::size_t t, double beta);

/// (k, k-1, ..., 1, 0, ..., 0) with the same k convention.
LambdaWeights lambda_cumulative(std::size_t t, double beta);

/// k = round(beta * T) with ties rounded up, clamped to [1, T].
std::size_t round_beta_count(std::size_t t, double beta);

enum class SortOrder { Ascending, Descending };

/// Sorts f (per `order`) and returns sum_j lambda^j * f_sorted[j].
double owa_value(const LambdaWeights& lambda, std::span<const double> f,
                 SortOrder order);

/// Sum of the t largest entries; equals the maximum subset sum over all
/// subsets of cardinality t.
double top_t_sum(std::span<const double> values, std::size_t t);

}  // namespace owa
