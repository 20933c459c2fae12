#pragma once

// Reference implementations used only by tests. Deliberately written along
// different routes than the library: direct formulas, equal_range ranking,
// bisected quantiles. Keep them independent of src/.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "luckmeter/corrstats.hpp"

namespace oracle {

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::runtime_error("oracle::pearson: bad input");
  const std::size_t n = x.size();
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double num = n * sxy - sx * sy;
  const long double den =
      std::sqrt(static_cast<long double>(n) * sxx - sx * sx) *
      std::sqrt(static_cast<long double>(n) * syy - sy * sy);
  if (den == 0) throw std::runtime_error("oracle::pearson: zero variance");
  return static_cast<double>(num / den);
}

inline std::vector<double> midranks(const std::vector<double>& x) {
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x[i]) - sorted.begin();
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), x[i]) - sorted.begin();
    // tied block occupies integer ranks lo+1 .. hi
    ranks[i] = (static_cast<double>(lo + 1) + static_cast<double>(hi)) / 2.0;
  }
  return ranks;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(midranks(x), midranks(y));
}

// Pearson over the indicator vectors a confusion matrix summarizes:
// in-sieve indicator vs positive-label indicator.
inline double phi_indicators(const luckmeter::ConfusionCounts& c) {
  std::vector<double> in_sieve, is_pos;
  auto push = [&](std::int64_t count, double sieve, double pos) {
    for (std::int64_t i = 0; i < count; ++i) {
      in_sieve.push_back(sieve);
      is_pos.push_back(pos);
    }
  };
  push(c.tp, 1, 1);
  push(c.fp, 1, 0);
  push(c.fn, 0, 1);
  push(c.tn, 0, 0);
  return pearson(in_sieve, is_pos);
}

inline double spearman_indicators(const luckmeter::ConfusionCounts& c) {
  std::vector<double> in_sieve, is_pos;
  auto push = [&](std::int64_t count, double sieve, double pos) {
    for (std::int64_t i = 0; i < count; ++i) {
      in_sieve.push_back(sieve);
      is_pos.push_back(pos);
    }
  };
  push(c.tp, 1, 1);
  push(c.fp, 1, 0);
  push(c.fn, 0, 1);
  push(c.tn, 0, 0);
  return spearman(in_sieve, is_pos);
}

// standard normal quantile by bisection on erfc; independent of the
// library's rational approximation
inline double normal_quantile_bisect(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2.0;
    if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2.0;
}

}  // namespace oracle
