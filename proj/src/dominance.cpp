#include "owa/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "owa/risk.hpp"

namespace owa {

namespace {

constexpr double kStrictTol = 1e-12;

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("dominance check: series must be non-empty and equal length");
}

std::vector<double> sorted_ascending(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::stable_sort(s.begin(), s.end());
  return s;
}

bool finite_series(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return !v.empty();
}

}  // namespace

std::string to_string(DominanceVerdict verdict) {
  switch (verdict) {
    case DominanceVerdict::Zsd: return "ZSD";
    case DominanceVerdict::Fsd: return "FSD";
    case DominanceVerdict::Ssd: return "SSD";
    case DominanceVerdict::Assd: return "ASSD";
    case DominanceVerdict::None: return "NONE";
  }
  return "NONE";
}

bool check_zsd(std::span<const double> a, std::span<const double> b,
               std::span<const double> probabilities) {
  require_same_length(a, b);
  if (probabilities.size() != a.size())
    throw std::invalid_argument("check_zsd: probability length mismatch");
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (probabilities[t] > 0.0 && !(a[t] > b[t])) return false;
  }
  return true;
}

bool check_fsd(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  const auto sa = sorted_ascending(a);
  const auto sb = sorted_ascending(b);
  bool strict = false;
  for (std::size_t j = 0; j < sa.size(); ++j) {
    if (sa[j] < sb[j]) return false;
    if (sa[j] > sb[j] + kStrictTol) strict = true;
  }
  return strict;
}

bool check_ssd(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  const auto sa = sorted_ascending(a);
  const auto sb = sorted_ascending(b);
  bool strict = false;
  double pa = 0.0, pb = 0.0;
  for (std::size_t j = 0; j < sa.size(); ++j) {
    pa += sa[j];
    pb += sb[j];
    if (pa < pb) return false;
    if (pa > pb + kStrictTol) strict = true;
  }
  return strict;
}

double assd_margin(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  const auto ca = cvar_all_levels(a);
  const auto cb = cvar_all_levels(b);
  double worst = 0.0;
  for (std::size_t j = 0; j < ca.size(); ++j)
    worst = std::max(worst, ca[j] - cb[j]);
  return worst;
}

std::vector<double> csesd_margins(std::span<const double> a,
                                  std::span<const double> b) {
  require_same_length(a, b);
  const auto ca = cvar_all_levels(a);
  const auto cb = cvar_all_levels(b);
  std::vector<double> diffs(ca.size());
  for (std::size_t j = 0; j < ca.size(); ++j) diffs[j] = ca[j] - cb[j];
  std::stable_sort(diffs.begin(), diffs.end(), std::greater<double>());
  double run = 0.0;
  for (auto& d : diffs) {
    run += d;
    d = run;
  }
  return diffs;
}

DominanceReport classify(std::span<const double> a, std::span<const double> b) {
  DominanceReport report;
  if (!finite_series(a) || !finite_series(b) || a.size() != b.size()) {
    report.verdict = DominanceVerdict::None;
    return report;
  }
  std::vector<double> uniform(a.size(), 1.0 / static_cast<double>(a.size()));
  report.zsd = check_zsd(a, b, uniform);
  report.fsd = check_fsd(a, b);
  report.ssd = check_ssd(a, b);
  report.assd_margin = assd_margin(a, b);
  report.csesd_margins = csesd_margins(a, b);
  if (report.zsd)
    report.verdict = DominanceVerdict::Zsd;
  else if (report.fsd)
    report.verdict = DominanceVerdict::Fsd;
  else if (report.ssd)
    report.verdict = DominanceVerdict::Ssd;
  else
    report.verdict = DominanceVerdict::Assd;
  return report;
}

}  // namespace owa
