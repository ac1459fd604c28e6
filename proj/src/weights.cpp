#include "owa/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace owa {

bool LambdaWeights::valid() const {
  if (values.empty()) return false;
  bool any_positive = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0) return false;
    if (values[i] > 0.0) any_positive = true;
    if (i > 0 && values[i] > values[i - 1]) return false;
  }
  return any_positive;
}

std::size_t round_beta_count(std::size_t t, double beta) {
  if (!(beta > 0.0) || beta > 1.0)
    throw std::out_of_range("beta outside (0, 1]");
  // Half-up rounding; the small epsilon keeps exact halves (e.g. 12.5 from
  // beta*T) from slipping below the tie after binary representation error.
  const double scaled = beta * static_cast<double>(t);
  auto k = static_cast<long long>(std::floor(scaled + 0.5 + 1e-9));
  k = std::max(1LL, std::min<long long>(k, static_cast<long long>(t)));
  return static_cast<std::size_t>(k);
}

LambdaWeights lambda_minimax(std::size_t t) {
  if (t < 1) throw std::invalid_argument("lambda length must be >= 1");
  LambdaWeights l;
  l.values.assign(t, 0.0);
  l.values[0] = 1.0;
  return l;
}

LambdaWeights lambda_k_block(std::size_t t, double beta) {
  if (t < 1) throw std::invalid_argument("lambda length must be >= 1");
  const std::size_t k = round_beta_count(t, beta);
  LambdaWeights l;
  l.values.assign(t, 0.0);
  std::fill(l.values.begin(), l.values.begin() + static_cast<long>(k), 1.0);
  return l;
}

LambdaWeights lambda_cumulative(std::size_t t, double beta) {
  if (t < 1) throw std::invalid_argument("lambda length must be >= 1");
  const std::size_t k = round_beta_count(t, beta);
  LambdaWeights l;
  l.values.assign(t, 0.0);
  for (std::size_t j = 0; j < k; ++j)
    l.values[j] = static_cast<double>(k - j);
  return l;
}

double owa_value(const LambdaWeights& lambda, std::span<const double> f,
                 SortOrder order) {
  if (lambda.size() != f.size())
    throw std::invalid_argument("owa_value: lambda/f length mismatch");
  std::vector<double> s(f.begin(), f.end());
  std::stable_sort(s.begin(), s.end());
  if (order == SortOrder::Descending) std::reverse(s.begin(), s.end());
  double acc = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) acc += lambda.values[j] * s[j];
  return acc;
}

double top_t_sum(std::span<const double> values, std::size_t t) {
  if (t < 1 || t > values.size())
    throw std::out_of_range("top_t_sum: t outside 1..T");
  std::vector<double> s(values.begin(), values.end());
  std::stable_sort(s.begin(), s.end(), std::greater<double>());
  double acc = 0.0;
  for (std::size_t j = 0; j < t; ++j) acc += s[j];
  return acc;
}

}  // namespace owa
