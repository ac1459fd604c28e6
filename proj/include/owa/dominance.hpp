// Stochastic dominance predicates between two empirical return series:
// exact relations (ZSD, FSD, SSD), the almost-SSD margin, and the cumulative
// sorted centered-CVaR margins behind the vector-epsilon relation.

#pragma once

#include <span>
#include <string>
#include <vector>

namespace owa {

enum class DominanceVerdict { Zsd, Fsd, Ssd, Assd, None };

std::string to_string(DominanceVerdict verdict);

struct DominanceReport {
  bool zsd = false;
  bool fsd = false;
  bool ssd = false;
  // Smallest epsilon >= 0 such that the almost-SSD relation holds:
  // max(0, max_t [CVaR_{t/T}(A) - CVaR_{t/T}(B)]).
  double assd_margin = 0.0;
  // G^(t): running sums of the descending-sorted centered-CVaR differences.
  std::vector<double> csesd_margins;
  DominanceVerdict verdict = DominanceVerdict::None;
};

/// A beats B in every positive-probability state, strictly.
bool check_zsd(std::span<const double> a, std::span<const double> b,
               std::span<const double> probabilities);

/// Sorted order statistics of A dominate those of B (uniform probabilities),
/// strict in at least one component.
bool check_fsd(std::span<const double> a, std::span<const double> b);

/// Ascending partial sums of A dominate those of B, strict at least once.
bool check_ssd(std::span<const double> a, std::span<const double> b);

/// max over levels of the centered-CVaR difference, floored at zero.
double assd_margin(std::span<const double> a, std::span<const double> b);

/// G^(t) for t = 1..T: cumulative sums of the descending-sorted
/// centered-CVaR differences. A is preferred to B for tolerance vector E
/// iff G^(t) <= epsilon_t for every t.
std::vector<double> csesd_margins(std::span<const double> a,
                                  std::span<const double> b);

/// Composes every check; the verdict is the strongest exact relation that
/// holds, falling back to Assd with the computed margin. None is reserved
/// for degenerate input (empty or non-finite series).
DominanceReport classify(std::span<const double> a, std::span<const double> b);

}  // namespace owa
