#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "luckmeter/sieve.hpp"

namespace luckmeter {

// Strict schema `id,score,label`, label in {0,1}, finite decimal scores.
// Errors carry the 1-based line number (header is line 1).
LabeledRanking parse_labeled_csv(std::string_view text);

struct PairedSample {
  std::vector<std::string> ids;
  std::vector<double> x;
  std::vector<double> y;
};

// Strict schema `id,x,y` for the paired-measure commands.
PairedSample parse_paired_csv(std::string_view text);

// The bundled Nobel-laureate benchmark: 25 laureates among 2915 ranked
// scientists, digitized at five rank thresholds. Single source of truth for
// every test that checks these numbers.
SparseSieve embedded_nobel();

struct ReportDocument {
  std::string tool_version;
  std::uint64_t seed = 0;
  bool seeded = false;
  std::string input_digest;  // fnv1a-64 hex of the canonicalized input
  SieveReport report;
};

std::string fnv1a_hex(std::string_view bytes);

// Canonical 6-significant-digit rendering ("0.157000", "1.00000e+07").
// Reparsing and reformatting a rendered value is a fixpoint.
std::string format_real(double v);

// Canonical JSON: keys sorted, reals via format_real, LF endings.
// write(parse(write(doc))) == write(doc) byte for byte.
std::string write_report_json(const ReportDocument& doc);

ReportDocument parse_report_json(std::string_view text);

// Flat key,value summary table (curve points are exported separately).
std::string write_report_csv(const ReportDocument& doc);

std::string write_curve_csv(const CurveSeries& curve);

std::string write_ranking_csv(const LabeledRanking& rk);

struct SvgOptions {
  int width = 640;
  int height = 480;
  std::string title;  // defaults to the curve kind
};

// Standalone deterministic SVG 1.1: axes, tick labels, one polyline.
std::string render_svg(const CurveSeries& curve, const SvgOptions& opts = {});

}  // namespace luckmeter
