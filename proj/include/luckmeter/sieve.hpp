#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "luckmeter/corrstats.hpp"

namespace luckmeter {

enum class Exec { serial, parallel };

struct RankedRow {
  std::string id;
  double score = 0.0;
  int label = 0;  // 1 = positive
};

// Entities ordered by descending score. Score ties keep input order (stable
// sort) and are surfaced through tied_rows(); thresholds index rank
// positions, not score values.
class LabeledRanking {
 public:
  static LabeledRanking build(std::vector<RankedRow> rows);

  const std::vector<RankedRow>& entries() const { return entries_; }
  std::int64_t size() const { return static_cast<std::int64_t>(entries_.size()); }
  std::int64_t n_pos() const { return n_pos_; }
  std::int64_t n_neg() const { return n_neg_; }
  // number of rows whose score is shared with at least one other row
  std::int64_t tied_rows() const { return tied_rows_; }

  // positives among the top `threshold` entries, O(1)
  std::int64_t positives_in_top(std::int64_t threshold) const;

 private:
  LabeledRanking() = default;

  std::vector<RankedRow> entries_;
  std::vector<std::int64_t> prefix_pos_;  // prefix_pos_[k] = positives among top k
  std::int64_t n_pos_ = 0;
  std::int64_t n_neg_ = 0;
  std::int64_t tied_rows_ = 0;
};

enum class CurveKind { roc, precision, correlation };

const char* curve_name(CurveKind kind);

struct CurvePoint {
  std::int64_t threshold = 0;
  double x = 0.0;  // fpr for roc, threshold for the others
  double y = 0.0;  // tpr / precision / phi
};

struct CurveSeries {
  CurveKind kind = CurveKind::roc;
  std::vector<CurvePoint> points;
  std::optional<double> auc;  // roc only, trapezoid rule
  std::string note;
};

struct ThresholdStat {
  std::int64_t threshold = 0;
  std::optional<double> r;  // absent when the sieve at this threshold is degenerate
  ConfusionCounts counts;
};

struct SieveReport {
  ThresholdStat best;                     // argmax of the correlation curve, smallest R on ties
  std::optional<ThresholdStat> natural;   // R = n_pos, when that threshold was evaluated
  std::optional<ThresholdStat> full_recall;  // smallest evaluated R with tp = n_pos
  CorrelationEstimate ceiling;            // binary_rank_ceiling(n_pos, n)
  CurveSeries roc;
  CurveSeries precision;
  CurveSeries correlation;
  std::vector<std::string> notes;
  std::int64_t n_pos = 0;
  std::int64_t n_neg = 0;
};

ConfusionCounts confusion_at(const LabeledRanking& rk, std::int64_t threshold);

// One point per threshold 0..n, plus AUC.
CurveSeries roc_curve(const LabeledRanking& rk, Exec exec = Exec::parallel);

// tp/R for thresholds 1..n.
CurveSeries precision_curve(const LabeledRanking& rk, Exec exec = Exec::parallel);

// phi at thresholds 1..n-1; the endpoints have a zero-variance sieve and are
// omitted (noted on the series).
CurveSeries correlation_curve(const LabeledRanking& rk, Exec exec = Exec::parallel);

SieveReport analyze(const LabeledRanking& rk, Exec exec = Exec::parallel);

// Spearman between rank position (ties mid-ranked) and the binary label,
// oriented so positives concentrated at the top give r > 0.
CorrelationEstimate binary_spearman(const LabeledRanking& rk);

// A ranking known only at digitized thresholds (R, tp, fp).
struct SievePoint {
  std::int64_t threshold = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
};

struct SparseSieve {
  std::int64_t n_pos = 0;
  std::int64_t n_neg = 0;
  std::vector<SievePoint> points;  // strictly increasing thresholds
};

void validate(const SparseSieve& sieve);

ConfusionCounts confusion_at(const SparseSieve& sieve, const SievePoint& pt);

// Same report as the full-ranking analyze, evaluated only at the given
// thresholds. ROC gains exact endpoints (0,0) and (1,1); `natural` is present
// only when a point sits at R = n_pos.
SieveReport analyze(const SparseSieve& sieve);

}  // namespace luckmeter
