#include "luckmeter/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace luckmeter {

const char* curve_name(CurveKind kind) {
  switch (kind) {
    case CurveKind::roc: return "roc";
    case CurveKind::precision: return "precision";
    case CurveKind::correlation: return "correlation";
  }
  return "unknown";
}

LabeledRanking LabeledRanking::build(std::vector<RankedRow> rows) {
  for (const RankedRow& row : rows) {
    if (!std::isfinite(row.score)) raise(errc::non_finite_score, "score for '" + row.id + "' is not finite");
    if (row.label != 0 && row.label != 1) raise(errc::invalid_input, "label for '" + row.id + "' must be 0 or 1");
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const RankedRow& a, const RankedRow& b) { return a.score > b.score; });

  LabeledRanking rk;
  rk.entries_ = std::move(rows);
  const std::int64_t n = rk.size();
  rk.prefix_pos_.resize(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t i = 0; i < n; ++i) {
    rk.prefix_pos_[i + 1] = rk.prefix_pos_[i] + rk.entries_[i].label;
  }
  rk.n_pos_ = rk.prefix_pos_[n];
  rk.n_neg_ = n - rk.n_pos_;
  if (rk.n_pos_ == 0) raise(errc::no_positives, "ranking has no positive labels");
  if (rk.n_neg_ == 0) raise(errc::no_negatives, "ranking has no negative labels");

  std::int64_t i = 0;
  while (i < n) {
    std::int64_t j = i;
    while (j + 1 < n && rk.entries_[j + 1].score == rk.entries_[i].score) ++j;
    if (j > i) rk.tied_rows_ += j - i + 1;
    i = j + 1;
  }
  return rk;
}

std::int64_t LabeledRanking::positives_in_top(std::int64_t threshold) const {
  if (threshold < 0 || threshold > size())
    raise(errc::threshold_out_of_range, "threshold must lie in [0, n]");
  return prefix_pos_[threshold];
}

ConfusionCounts confusion_at(const LabeledRanking& rk, std::int64_t threshold) {
  const std::int64_t tp = rk.positives_in_top(threshold);
  const std::int64_t fp = threshold - tp;
  return {tp, fp, rk.n_pos() - tp, rk.n_neg() - fp};
}

namespace {

// Fills points[i] = fill(i) for i in [0, count). Slots are independent, so
// the result is identical for any schedule or thread count.
template <typename Fill>
void fill_points(std::vector<CurvePoint>& points, std::int64_t count, Exec exec, Fill fill) {
  points.resize(static_cast<std::size_t>(count));
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t i = 0; i < count; ++i) {
    points[static_cast<std::size_t>(i)] = fill(i);
  }
}

double trapezoid_auc(const std::vector<CurvePoint>& roc_points) {
  double auc = 0.0;
  for (std::size_t i = 1; i < roc_points.size(); ++i) {
    auc += (roc_points[i].x - roc_points[i - 1].x) * (roc_points[i].y + roc_points[i - 1].y) / 2.0;
  }
  return auc;
}

}  // namespace

CurveSeries roc_curve(const LabeledRanking& rk, Exec exec) {
  CurveSeries series{CurveKind::roc, {}, std::nullopt, ""};
  const double np = static_cast<double>(rk.n_pos());
  const double nn = static_cast<double>(rk.n_neg());
  fill_points(series.points, rk.size() + 1, exec, [&](std::int64_t r) {
    const ConfusionCounts c = confusion_at(rk, r);
    return CurvePoint{r, static_cast<double>(c.fp) / nn, static_cast<double>(c.tp) / np};
  });
  series.auc = trapezoid_auc(series.points);
  return series;
}

CurveSeries precision_curve(const LabeledRanking& rk, Exec exec) {
  CurveSeries series{CurveKind::precision, {}, std::nullopt, ""};
  fill_points(series.points, rk.size(), exec, [&](std::int64_t i) {
    const std::int64_t r = i + 1;
    const ConfusionCounts c = confusion_at(rk, r);
    return CurvePoint{r, static_cast<double>(r), c.precision()};
  });
  return series;
}

CurveSeries correlation_curve(const LabeledRanking& rk, Exec exec) {
  CurveSeries series{CurveKind::correlation, {}, std::nullopt,
                     "thresholds 0 and n omitted (zero-variance sieve)"};
  fill_points(series.points, rk.size() - 1, exec, [&](std::int64_t i) {
    const std::int64_t r = i + 1;
    return CurvePoint{r, static_cast<double>(r), phi_from_counts(confusion_at(rk, r)).r};
  });
  return series;
}

namespace {

ThresholdStat stat_at(const LabeledRanking& rk, std::int64_t threshold) {
  ThresholdStat stat;
  stat.threshold = threshold;
  stat.counts = confusion_at(rk, threshold);
  if (threshold >= 1 && threshold <= rk.size() - 1)
    stat.r = phi_from_counts(stat.counts).r;
  return stat;
}

// argmax of y, smallest threshold on ties
const CurvePoint& best_point(const std::vector<CurvePoint>& points) {
  const CurvePoint* best = &points.front();
  for (const CurvePoint& pt : points) {
    if (pt.y > best->y) best = &pt;
  }
  return *best;
}

}  // namespace

SieveReport analyze(const LabeledRanking& rk, Exec exec) {
  SieveReport report;
  report.n_pos = rk.n_pos();
  report.n_neg = rk.n_neg();
  report.roc = roc_curve(rk, exec);
  report.precision = precision_curve(rk, exec);
  report.correlation = correlation_curve(rk, exec);
  report.ceiling = binary_rank_ceiling(rk.n_pos(), rk.size());

  report.best = stat_at(rk, best_point(report.correlation.points).threshold);
  report.natural = stat_at(rk, rk.n_pos());

  for (std::int64_t r = rk.n_pos(); r <= rk.size(); ++r) {
    if (rk.positives_in_top(r) == rk.n_pos()) {
      report.full_recall = stat_at(rk, r);
      break;
    }
  }

  if (rk.tied_rows() > 0) {
    report.notes.push_back(std::to_string(rk.tied_rows()) +
                           " rows share tied scores; thresholds cut through rank positions, "
                           "not score values");
  }
  return report;
}

CorrelationEstimate binary_spearman(const LabeledRanking& rk) {
  // Mid-ranking the scores reproduces the rank positions (ties averaged) up
  // to orientation, so scores stand in for them directly; positives at the
  // top then give r > 0.
  std::vector<double> scores, labels;
  scores.reserve(static_cast<std::size_t>(rk.size()));
  labels.reserve(static_cast<std::size_t>(rk.size()));
  for (const RankedRow& row : rk.entries()) {
    scores.push_back(row.score);
    labels.push_back(static_cast<double>(row.label));
  }
  return spearman(scores, labels);
}

void validate(const SparseSieve& sieve) {
  if (sieve.n_pos < 1) raise(errc::no_positives, "sparse sieve needs n_pos >= 1");
  if (sieve.n_neg < 1) raise(errc::no_negatives, "sparse sieve needs n_neg >= 1");
  if (sieve.points.empty()) raise(errc::invalid_input, "sparse sieve has no points");
  std::int64_t prev = -1;
  for (const SievePoint& pt : sieve.points) {
    if (pt.threshold <= prev)
      raise(errc::invalid_input, "thresholds must be strictly increasing");
    if (pt.tp < 0 || pt.fp < 0 || pt.tp > sieve.n_pos || pt.fp > sieve.n_neg ||
        pt.tp + pt.fp != pt.threshold)
      raise(errc::invalid_counts, "point at R=" + std::to_string(pt.threshold) +
                                      " is inconsistent with the totals");
    prev = pt.threshold;
  }
}

ConfusionCounts confusion_at(const SparseSieve& sieve, const SievePoint& pt) {
  return {pt.tp, pt.fp, sieve.n_pos - pt.tp, sieve.n_neg - pt.fp};
}

SieveReport analyze(const SparseSieve& sieve) {
  validate(sieve);
  const std::int64_t n = sieve.n_pos + sieve.n_neg;
  const double np = static_cast<double>(sieve.n_pos);
  const double nn = static_cast<double>(sieve.n_neg);

  SieveReport report;
  report.n_pos = sieve.n_pos;
  report.n_neg = sieve.n_neg;
  report.ceiling = binary_rank_ceiling(sieve.n_pos, n);

  report.roc.kind = CurveKind::roc;
  report.roc.note = "digitized thresholds only; exact endpoints added";
  report.precision.kind = CurveKind::precision;
  report.correlation.kind = CurveKind::correlation;

  if (sieve.points.front().threshold > 0)
    report.roc.points.push_back({0, 0.0, 0.0});
  for (const SievePoint& pt : sieve.points) {
    const ConfusionCounts c = confusion_at(sieve, pt);
    report.roc.points.push_back({pt.threshold, static_cast<double>(c.fp) / nn,
                                 static_cast<double>(c.tp) / np});
    if (pt.threshold >= 1)
      report.precision.points.push_back(
          {pt.threshold, static_cast<double>(pt.threshold), c.precision()});
    if (pt.threshold >= 1 && pt.threshold <= n - 1)
      report.correlation.points.push_back(
          {pt.threshold, static_cast<double>(pt.threshold), phi_from_counts(c).r});
  }
  if (sieve.points.back().threshold < n)
    report.roc.points.push_back({n, 1.0, 1.0});
  report.roc.auc = [&] {
    double auc = 0.0;
    for (std::size_t i = 1; i < report.roc.points.size(); ++i) {
      const CurvePoint& a = report.roc.points[i - 1];
      const CurvePoint& b = report.roc.points[i];
      auc += (b.x - a.x) * (a.y + b.y) / 2.0;
    }
    return auc;
  }();

  if (report.correlation.points.empty())
    raise(errc::invalid_input, "no sparse point admits a defined correlation");

  auto stat_for = [&](const SievePoint& pt) {
    ThresholdStat stat;
    stat.threshold = pt.threshold;
    stat.counts = confusion_at(sieve, pt);
    if (pt.threshold >= 1 && pt.threshold <= n - 1) stat.r = phi_from_counts(stat.counts).r;
    return stat;
  };

  const CurvePoint& best = best_point(report.correlation.points);
  for (const SievePoint& pt : sieve.points) {
    if (pt.threshold == best.threshold) report.best = stat_for(pt);
    if (pt.threshold == sieve.n_pos) report.natural = stat_for(pt);
    if (!report.full_recall && pt.tp == sieve.n_pos) report.full_recall = stat_for(pt);
  }

  // When precision is zero at R=1 and peaks later at height h, any positive
  // at a rank below 1/h would have produced an earlier, higher peak. The
  // digitized points cannot confirm this, so it is recorded as a note.
  const CurvePoint* peak = nullptr;
  const CurvePoint* first = nullptr;
  for (const CurvePoint& pt : report.precision.points) {
    if (pt.threshold == 1) first = &pt;
    if (peak == nullptr || pt.y > peak->y) peak = &pt;
  }
  if (first != nullptr && first->y == 0.0 && peak != nullptr && peak->threshold > 1 &&
      peak->y > 0.0) {
    const auto last_excluded = static_cast<std::int64_t>(std::ceil(1.0 / peak->y)) - 1;
    if (last_excluded >= 2) {
      report.notes.push_back("inferred: precision peak at R=" + std::to_string(peak->threshold) +
                             " implies no positives at ranks 2.." + std::to_string(last_excluded) +
                             " (not verifiable from digitized points)");
    }
  }
  return report;
}

}  // namespace luckmeter
