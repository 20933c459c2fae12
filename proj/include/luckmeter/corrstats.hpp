#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "luckmeter/error.hpp"

namespace luckmeter {

// Cells of a binary confusion matrix at one sieve threshold.
struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t n_pos() const { return tp + fn; }
  std::int64_t n_neg() const { return fp + tn; }
  std::int64_t total() const { return tp + fp + fn + tn; }
  std::int64_t sieve_size() const { return tp + fp; }

  double tpr() const { return static_cast<double>(tp) / static_cast<double>(n_pos()); }
  double fpr() const { return static_cast<double>(fp) / static_cast<double>(n_neg()); }
  double precision() const { return static_cast<double>(tp) / static_cast<double>(sieve_size()); }

  bool operator==(const ConfusionCounts&) const = default;
};

enum class CorrMethod { pearson, spearman, phi, eq1, regression_range };

const char* method_name(CorrMethod m);

struct ConfidenceInterval {
  double level = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct CorrelationEstimate {
  double r = 0.0;
  CorrMethod method = CorrMethod::pearson;
  std::int64_t n = 0;
  std::optional<ConfidenceInterval> ci;
  bool clamped = false;  // regression_range only: value hit the [-1, 1] wall
};

struct RegressionEstimate {
  double b1 = 0.0;
  double range_num = 0.0;
  double range_den = 0.0;
};

// Population-moment Pearson correlation. Rejects length mismatch, fewer than
// two points, non-finite values, and constant inputs.
CorrelationEstimate pearson(std::span<const double> x, std::span<const double> y);

// Ascending ranks 1..n with tied groups averaged. Output sums to n(n+1)/2.
std::vector<double> midranks(std::span<const double> x);

// Pearson over mid-ranked inputs.
CorrelationEstimate spearman(std::span<const double> x, std::span<const double> y);

// Matthews/phi coefficient (tp*tn - fp*fn) / sqrt of the margin product.
// Equals pearson() over the two indicator vectors the counts summarize.
CorrelationEstimate phi_from_counts(const ConfusionCounts& c);

// Rate-parameterized phi:
//   r = (tpr - fpr) * sqrt(n_pos * n_neg)
//       / sqrt((tpr*n_pos + fpr*n_neg) * ((1-tpr)*n_pos + (1-fpr)*n_neg))
// Accepts real-valued rates, so digitized inputs like fpr = 0.25 work even
// when fpr * n_neg is not an integer.
CorrelationEstimate r_from_rates(double tpr, double fpr, std::int64_t n_pos,
                                 std::int64_t n_neg);

// Two-sided interval from z = atanh(r) with standard error 1/sqrt(n - 3).
ConfidenceInterval fisher_ci(double r, std::int64_t n, double level);

// r ~ b1 * range_num / range_den, clamped to [-1, 1] with a flag. The caller
// owns the orientation of the two ranges.
CorrelationEstimate r_from_regression(const RegressionEstimate& est);

// Largest |Spearman| attainable between distinct ranks 1..n and a binary
// label with n_pos positives; reached when positives fill the top ranks.
// Closed form sqrt(3 p (1-p) n^2 / (n^2 - 1)) with p = n_pos / n.
CorrelationEstimate binary_rank_ceiling(std::int64_t n_pos, std::int64_t n);

// Standard normal quantile. Rational approximation refined by one Halley
// step against erfc; absolute error well below 1e-13 across (0, 1).
double normal_quantile(double p);

// Two-sided critical value, e.g. 1.95996 for level = 0.95.
double normal_critical_value(double level);

}  // namespace luckmeter
