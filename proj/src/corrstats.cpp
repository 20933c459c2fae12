#include "luckmeter/corrstats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace luckmeter {

const char* errc_name(errc code) {
  switch (code) {
    case errc::length_mismatch: return "length_mismatch";
    case errc::zero_variance: return "zero_variance";
    case errc::invalid_input: return "invalid_input";
    case errc::degenerate_margin: return "degenerate_margin";
    case errc::insufficient_sample: return "insufficient_sample";
    case errc::degenerate_r: return "degenerate_r";
    case errc::non_positive_range: return "non_positive_range";
    case errc::invalid_counts: return "invalid_counts";
    case errc::threshold_out_of_range: return "threshold_out_of_range";
    case errc::no_positives: return "no_positives";
    case errc::no_negatives: return "no_negatives";
    case errc::non_finite_score: return "non_finite_score";
    case errc::malformed_header: return "malformed_header";
    case errc::bad_label: return "bad_label";
    case errc::bad_score: return "bad_score";
    case errc::duplicate_id: return "duplicate_id";
    case errc::invalid_params: return "invalid_params";
    case errc::empty_career: return "empty_career";
    case errc::empty_curve: return "empty_curve";
  }
  return "unknown";
}

Error::Error(errc code, const std::string& message, long line)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code),
      line_(line) {}

void raise(errc code, const std::string& message, long line) {
  throw Error(code, message, line);
}

const char* method_name(CorrMethod m) {
  switch (m) {
    case CorrMethod::pearson: return "pearson";
    case CorrMethod::spearman: return "spearman";
    case CorrMethod::phi: return "phi";
    case CorrMethod::eq1: return "eq1";
    case CorrMethod::regression_range: return "regression-range";
  }
  return "unknown";
}

namespace {

double clamp_unit(double r) { return std::clamp(r, -1.0, 1.0); }

void check_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) raise(errc::invalid_input, std::string(what) + " contains a non-finite value");
  }
}

}  // namespace

CorrelationEstimate pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) raise(errc::length_mismatch, "input sequences differ in length");
  if (x.size() < 2) raise(errc::invalid_input, "need at least two observations");
  check_finite(x, "x");
  check_finite(y, "y");

  const std::size_t n = x.size();
  long double mx = 0.0L, my = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<long double>(n);
  my /= static_cast<long double>(n);

  long double sxx = 0.0L, syy = 0.0L, sxy = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dx = x[i] - mx;
    const long double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0L) raise(errc::zero_variance, "x is constant");
  if (syy == 0.0L) raise(errc::zero_variance, "y is constant");

  const double r = static_cast<double>(sxy / (std::sqrt(sxx) * std::sqrt(syy)));
  return {clamp_unit(r), CorrMethod::pearson, static_cast<std::int64_t>(n), std::nullopt, false};
}

std::vector<double> midranks(std::span<const double> x) {
  if (x.empty()) raise(errc::invalid_input, "cannot rank an empty sequence");
  check_finite(x, "input");

  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    // tied group occupies integer ranks i+1..j+1
    const double mean_rank = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

CorrelationEstimate spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) raise(errc::length_mismatch, "input sequences differ in length");
  if (x.size() < 2) raise(errc::invalid_input, "need at least two observations");
  const std::vector<double> rx = midranks(x);
  const std::vector<double> ry = midranks(y);
  CorrelationEstimate est = pearson(rx, ry);
  est.method = CorrMethod::spearman;
  return est;
}

CorrelationEstimate phi_from_counts(const ConfusionCounts& c) {
  if (c.tp < 0 || c.fp < 0 || c.fn < 0 || c.tn < 0)
    raise(errc::invalid_counts, "confusion counts must be non-negative");
  const std::int64_t row1 = c.tp + c.fp;
  const std::int64_t row0 = c.fn + c.tn;
  const std::int64_t col1 = c.tp + c.fn;
  const std::int64_t col0 = c.fp + c.tn;
  if (row1 == 0 || row0 == 0 || col1 == 0 || col0 == 0)
    raise(errc::degenerate_margin, "a zero margin leaves the correlation undefined");

  const double num = static_cast<double>(c.tp) * static_cast<double>(c.tn) -
                     static_cast<double>(c.fp) * static_cast<double>(c.fn);
  const double den = std::sqrt(static_cast<double>(row1)) * std::sqrt(static_cast<double>(row0)) *
                     std::sqrt(static_cast<double>(col1)) * std::sqrt(static_cast<double>(col0));
  return {clamp_unit(num / den), CorrMethod::phi, c.total(), std::nullopt, false};
}

CorrelationEstimate r_from_rates(double tpr, double fpr, std::int64_t n_pos,
                                 std::int64_t n_neg) {
  if (!std::isfinite(tpr) || !std::isfinite(fpr) || tpr < 0.0 || tpr > 1.0 || fpr < 0.0 ||
      fpr > 1.0)
    raise(errc::invalid_input, "rates must lie in [0, 1]");
  if (n_pos < 1 || n_neg < 1) raise(errc::invalid_counts, "need at least one of each class");

  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  const double in_sieve = tpr * np + fpr * nn;
  const double outside = (1.0 - tpr) * np + (1.0 - fpr) * nn;
  if (in_sieve <= 0.0) raise(errc::degenerate_margin, "empty sieve");
  if (outside <= 0.0) raise(errc::degenerate_margin, "sieve holds the whole sample");

  const double r = (tpr - fpr) * std::sqrt(np * nn) / std::sqrt(in_sieve * outside);
  return {clamp_unit(r), CorrMethod::eq1, n_pos + n_neg, std::nullopt, false};
}

ConfidenceInterval fisher_ci(double r, std::int64_t n, double level) {
  if (!std::isfinite(r)) raise(errc::invalid_input, "r must be finite");
  if (r <= -1.0 || r >= 1.0) raise(errc::degenerate_r, "|r| = 1 has no finite z-transform");
  if (n < 4) raise(errc::insufficient_sample, "need n >= 4");
  if (!(level > 0.0 && level < 1.0)) raise(errc::invalid_input, "level must lie in (0, 1)");

  const double z = std::atanh(r);
  const double half = normal_critical_value(level) / std::sqrt(static_cast<double>(n - 3));
  return {level, std::tanh(z - half), std::tanh(z + half)};
}

CorrelationEstimate r_from_regression(const RegressionEstimate& est) {
  if (!std::isfinite(est.b1)) raise(errc::invalid_input, "slope must be finite");
  if (!(est.range_num > 0.0) || !(est.range_den > 0.0))
    raise(errc::non_positive_range, "both ranges must be strictly positive");

  double r = est.b1 * est.range_num / est.range_den;
  bool clamped = false;
  if (r > 1.0) {
    r = 1.0;
    clamped = true;
  } else if (r < -1.0) {
    r = -1.0;
    clamped = true;
  }
  return {r, CorrMethod::regression_range, 0, std::nullopt, clamped};
}

CorrelationEstimate binary_rank_ceiling(std::int64_t n_pos, std::int64_t n) {
  if (n_pos < 1 || n < 2 || n_pos >= n)
    raise(errc::invalid_counts, "need 1 <= n_pos < n with n >= 2");
  const double p = static_cast<double>(n_pos) / static_cast<double>(n);
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  const double r = std::sqrt(3.0 * p * (1.0 - p) * n2 / (n2 - 1.0));
  return {std::min(r, 1.0), CorrMethod::spearman, n, std::nullopt, false};
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) raise(errc::invalid_input, "quantile argument must lie in (0, 1)");

  // Acklam's rational approximation (|rel err| < 1.15e-9) ...
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;

  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double s = q * q;
    x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * q /
        (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // ... plus one Halley step against erfc, landing near machine precision
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

double normal_critical_value(double level) {
  if (!(level > 0.0 && level < 1.0)) raise(errc::invalid_input, "level must lie in (0, 1)");
  return normal_quantile(0.5 + level / 2.0);
}

}  // namespace luckmeter
