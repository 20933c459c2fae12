#include "luckmeter/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace luckmeter {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  // a trailing newline is not an extra record
  if (lines.size() > 1 && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(',', start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

double parse_double_field(std::string_view field, long line, const char* what) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value))
    raise(errc::bad_score, std::string("line ") + std::to_string(line) + ": bad " + what +
                               " '" + std::string(field) + "'",
          line);
  return value;
}

}  // namespace

LabeledRanking parse_labeled_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "id,score,label")
    raise(errc::malformed_header, "expected header 'id,score,label'", 1);

  std::vector<RankedRow> rows;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const long line = static_cast<long>(i) + 1;
    const auto fields = split_fields(lines[i]);
    if (fields.size() != 3)
      raise(errc::invalid_input,
            "line " + std::to_string(line) + ": expected 3 fields, got " +
                std::to_string(fields.size()),
            line);
    if (fields[0].empty())
      raise(errc::invalid_input, "line " + std::to_string(line) + ": empty id", line);

    RankedRow row;
    row.id = std::string(fields[0]);
    if (!seen.insert(row.id).second)
      raise(errc::duplicate_id, "line " + std::to_string(line) + ": duplicate id '" + row.id + "'",
            line);
    row.score = parse_double_field(fields[1], line, "score");
    if (fields[2] == "0")
      row.label = 0;
    else if (fields[2] == "1")
      row.label = 1;
    else
      raise(errc::bad_label,
            "line " + std::to_string(line) + ": label must be 0 or 1, got '" +
                std::string(fields[2]) + "'",
            line);
    rows.push_back(std::move(row));
  }
  return LabeledRanking::build(std::move(rows));
}

PairedSample parse_paired_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "id,x,y")
    raise(errc::malformed_header, "expected header 'id,x,y'", 1);

  PairedSample sample;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const long line = static_cast<long>(i) + 1;
    const auto fields = split_fields(lines[i]);
    if (fields.size() != 3)
      raise(errc::invalid_input,
            "line " + std::to_string(line) + ": expected 3 fields, got " +
                std::to_string(fields.size()),
            line);
    sample.ids.emplace_back(fields[0]);
    sample.x.push_back(parse_double_field(fields[1], line, "x"));
    sample.y.push_back(parse_double_field(fields[2], line, "y"));
  }
  return sample;
}

SparseSieve embedded_nobel() {
  SparseSieve sieve;
  sieve.n_pos = 25;
  sieve.n_neg = 2890;
  sieve.points = {{1, 0, 1}, {11, 3, 8}, {25, 5, 20}, {51, 10, 41}, {759, 25, 734}};
  return sieve;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%#.6g", v);
  return buf;
}

namespace {

std::string escape_json(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

void write_stat(std::ostringstream& os, const std::optional<ThresholdStat>& stat,
                const std::string& indent) {
  if (!stat) {
    os << "null";
    return;
  }
  const ConfusionCounts& c = stat->counts;
  os << "{\n";
  os << indent << "  \"counts\": {\"fn\": " << c.fn << ", \"fp\": " << c.fp
     << ", \"tn\": " << c.tn << ", \"tp\": " << c.tp << "},\n";
  os << indent << "  \"r\": " << (stat->r ? format_real(*stat->r) : "null") << ",\n";
  os << indent << "  \"threshold\": " << stat->threshold << "\n";
  os << indent << "}";
}

void write_curve(std::ostringstream& os, const CurveSeries& curve, const std::string& indent) {
  os << "{\n";
  os << indent << "  \"auc\": " << (curve.auc ? format_real(*curve.auc) : "null") << ",\n";
  os << indent << "  \"kind\": \"" << curve_name(curve.kind) << "\",\n";
  os << indent << "  \"note\": \"" << escape_json(curve.note) << "\",\n";
  os << indent << "  \"points\": [";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const CurvePoint& pt = curve.points[i];
    if (i > 0) os << ",";
    os << "\n" << indent << "    [" << pt.threshold << ", " << format_real(pt.x) << ", "
       << format_real(pt.y) << "]";
  }
  if (!curve.points.empty()) os << "\n" << indent << "  ";
  os << "]\n";
  os << indent << "}";
}

}  // namespace

std::string write_report_json(const ReportDocument& doc) {
  const SieveReport& report = doc.report;
  std::ostringstream os;
  os << "{\n";
  os << "  \"best\": ";
  write_stat(os, report.best, "  ");
  os << ",\n";
  os << "  \"ceiling\": {\"method\": \"" << method_name(report.ceiling.method)
     << "\", \"n\": " << report.ceiling.n << ", \"r\": " << format_real(report.ceiling.r)
     << "},\n";
  os << "  \"curves\": {\n";
  os << "    \"correlation\": ";
  write_curve(os, report.correlation, "    ");
  os << ",\n";
  os << "    \"precision\": ";
  write_curve(os, report.precision, "    ");
  os << ",\n";
  os << "    \"roc\": ";
  write_curve(os, report.roc, "    ");
  os << "\n  },\n";
  os << "  \"full_recall\": ";
  write_stat(os, report.full_recall, "  ");
  os << ",\n";
  os << "  \"input_digest\": \"" << escape_json(doc.input_digest) << "\",\n";
  os << "  \"n_neg\": " << report.n_neg << ",\n";
  os << "  \"n_pos\": " << report.n_pos << ",\n";
  os << "  \"natural\": ";
  write_stat(os, report.natural, "  ");
  os << ",\n";
  os << "  \"notes\": [";
  for (std::size_t i = 0; i < report.notes.size(); ++i) {
    if (i > 0) os << ", ";
    os << "\"" << escape_json(report.notes[i]) << "\"";
  }
  os << "],\n";
  if (doc.seeded)
    os << "  \"seed\": " << doc.seed << ",\n";
  else
    os << "  \"seed\": null,\n";
  os << "  \"tool_version\": \"" << escape_json(doc.tool_version) << "\"\n";
  os << "}\n";
  return os.str();
}

namespace {

CorrMethod method_from_name(const std::string& name) {
  for (CorrMethod m : {CorrMethod::pearson, CorrMethod::spearman, CorrMethod::phi,
                       CorrMethod::eq1, CorrMethod::regression_range}) {
    if (name == method_name(m)) return m;
  }
  raise(errc::invalid_input, "unknown correlation method '" + name + "'");
}

CurveKind kind_from_name(const std::string& name) {
  for (CurveKind k : {CurveKind::roc, CurveKind::precision, CurveKind::correlation}) {
    if (name == curve_name(k)) return k;
  }
  raise(errc::invalid_input, "unknown curve kind '" + name + "'");
}

std::optional<ThresholdStat> stat_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  ThresholdStat stat;
  stat.threshold = j.at("threshold").get<std::int64_t>();
  if (!j.at("r").is_null()) stat.r = j.at("r").get<double>();
  const auto& counts = j.at("counts");
  stat.counts = {counts.at("tp").get<std::int64_t>(), counts.at("fp").get<std::int64_t>(),
                 counts.at("fn").get<std::int64_t>(), counts.at("tn").get<std::int64_t>()};
  return stat;
}

CurveSeries curve_from_json(const nlohmann::json& j) {
  CurveSeries curve;
  curve.kind = kind_from_name(j.at("kind").get<std::string>());
  curve.note = j.at("note").get<std::string>();
  if (!j.at("auc").is_null()) curve.auc = j.at("auc").get<double>();
  for (const auto& pt : j.at("points")) {
    curve.points.push_back(
        {pt.at(0).get<std::int64_t>(), pt.at(1).get<double>(), pt.at(2).get<double>()});
  }
  return curve;
}

}  // namespace

ReportDocument parse_report_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(errc::invalid_input, std::string("report json: ") + e.what());
  }
  try {
    ReportDocument doc;
    doc.tool_version = j.at("tool_version").get<std::string>();
    if (!j.at("seed").is_null()) {
      doc.seed = j.at("seed").get<std::uint64_t>();
      doc.seeded = true;
    }
    doc.input_digest = j.at("input_digest").get<std::string>();
    SieveReport& report = doc.report;
    report.n_pos = j.at("n_pos").get<std::int64_t>();
    report.n_neg = j.at("n_neg").get<std::int64_t>();
    if (auto stat = stat_from_json(j.at("best"))) report.best = *stat;
    report.natural = stat_from_json(j.at("natural"));
    report.full_recall = stat_from_json(j.at("full_recall"));
    const auto& ceiling = j.at("ceiling");
    report.ceiling = {ceiling.at("r").get<double>(),
                      method_from_name(ceiling.at("method").get<std::string>()),
                      ceiling.at("n").get<std::int64_t>(), std::nullopt, false};
    const auto& curves = j.at("curves");
    report.roc = curve_from_json(curves.at("roc"));
    report.precision = curve_from_json(curves.at("precision"));
    report.correlation = curve_from_json(curves.at("correlation"));
    for (const auto& note : j.at("notes")) report.notes.push_back(note.get<std::string>());
    return doc;
  } catch (const nlohmann::json::exception& e) {
    raise(errc::invalid_input, std::string("report json: ") + e.what());
  }
}

namespace {

std::string csv_quote(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

void stat_rows(std::ostringstream& os, const char* prefix,
               const std::optional<ThresholdStat>& stat) {
  if (!stat) return;
  os << prefix << ".threshold," << stat->threshold << "\n";
  os << prefix << ".r," << (stat->r ? format_real(*stat->r) : "") << "\n";
  os << prefix << ".tp," << stat->counts.tp << "\n";
  os << prefix << ".fp," << stat->counts.fp << "\n";
  os << prefix << ".fn," << stat->counts.fn << "\n";
  os << prefix << ".tn," << stat->counts.tn << "\n";
}

}  // namespace

std::string write_report_csv(const ReportDocument& doc) {
  const SieveReport& report = doc.report;
  std::ostringstream os;
  os << "key,value\n";
  os << "tool_version," << csv_quote(doc.tool_version) << "\n";
  os << "seed," << (doc.seeded ? std::to_string(doc.seed) : std::string()) << "\n";
  os << "input_digest," << doc.input_digest << "\n";
  os << "n_pos," << report.n_pos << "\n";
  os << "n_neg," << report.n_neg << "\n";
  stat_rows(os, "best", report.best);
  stat_rows(os, "natural", report.natural);
  stat_rows(os, "full_recall", report.full_recall);
  os << "ceiling.r," << format_real(report.ceiling.r) << "\n";
  os << "roc.auc," << (report.roc.auc ? format_real(*report.roc.auc) : "") << "\n";
  for (std::size_t i = 0; i < report.notes.size(); ++i) {
    os << "note." << (i + 1) << "," << csv_quote(report.notes[i]) << "\n";
  }
  return os.str();
}

std::string write_curve_csv(const CurveSeries& curve) {
  std::ostringstream os;
  os << "threshold,x,y\n";
  for (const CurvePoint& pt : curve.points) {
    os << pt.threshold << "," << format_real(pt.x) << "," << format_real(pt.y) << "\n";
  }
  return os.str();
}

std::string write_ranking_csv(const LabeledRanking& rk) {
  std::ostringstream os;
  os << "id,score,label\n";
  for (const RankedRow& row : rk.entries()) {
    if (row.id.find_first_of(",\"\n\r") != std::string::npos)
      raise(errc::invalid_input, "id '" + row.id + "' cannot be represented in the CSV schema");
    os << row.id << "," << format_real(row.score) << "," << row.label << "\n";
  }
  return os.str();
}

namespace {

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const CurveSeries& curve, const SvgOptions& opts) {
  if (curve.points.empty()) raise(errc::empty_curve, "cannot render an empty curve");

  const double left = 56.0, right = 16.0, top = 40.0, bottom = 44.0;
  const double w = opts.width - left - right;
  const double h = opts.height - top - bottom;

  double x_min = curve.points.front().x, x_max = x_min;
  for (const CurvePoint& pt : curve.points) {
    x_min = std::min(x_min, pt.x);
    x_max = std::max(x_max, pt.x);
  }
  double y_min = 0.0, y_max = 1.0;
  const char* x_label = "x";
  const char* y_label = "y";
  switch (curve.kind) {
    case CurveKind::roc:
      x_min = 0.0;
      x_max = 1.0;
      x_label = "false positive rate";
      y_label = "true positive rate";
      break;
    case CurveKind::precision:
      x_label = "rank threshold R";
      y_label = "precision";
      break;
    case CurveKind::correlation:
      y_min = -1.0;
      x_label = "rank threshold R";
      y_label = "phi";
      break;
  }
  if (x_max == x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }

  const auto to_px_x = [&](double x) { return left + (x - x_min) / (x_max - x_min) * w; };
  const auto to_px_y = [&](double y) { return top + (1.0 - (y - y_min) / (y_max - y_min)) * h; };

  const std::string title = opts.title.empty() ? curve_name(curve.kind) : opts.title;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opts.width
     << "\" height=\"" << opts.height << "\" viewBox=\"0 0 " << opts.width << " " << opts.height
     << "\">\n";
  os << "<title>" << escape_xml(title) << "</title>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << opts.width << "\" height=\"" << opts.height
     << "\" fill=\"#ffffff\"/>\n";
  os << "<text x=\"" << px(left) << "\" y=\"24\" font-family=\"monospace\" font-size=\"14\">"
     << escape_xml(title) << "</text>\n";

  // axes
  os << "<g stroke=\"#333333\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << px(left) << "\" y1=\"" << px(top + h) << "\" x2=\"" << px(left + w)
     << "\" y2=\"" << px(top + h) << "\"/>\n";
  os << "<line x1=\"" << px(left) << "\" y1=\"" << px(top) << "\" x2=\"" << px(left) << "\" y2=\""
     << px(top + h) << "\"/>\n";
  os << "</g>\n";

  os << "<g font-family=\"monospace\" font-size=\"11\" fill=\"#333333\">\n";
  os << "<text x=\"" << px(left) << "\" y=\"" << px(top + h + 16.0) << "\">" << format_real(x_min)
     << "</text>\n";
  os << "<text x=\"" << px(left + w - 48.0) << "\" y=\"" << px(top + h + 16.0) << "\">"
     << format_real(x_max) << "</text>\n";
  os << "<text x=\"4\" y=\"" << px(top + h) << "\">" << format_real(y_min) << "</text>\n";
  os << "<text x=\"4\" y=\"" << px(top + 10.0) << "\">" << format_real(y_max) << "</text>\n";
  os << "<text x=\"" << px(left + w / 2.0 - 40.0) << "\" y=\"" << px(top + h + 34.0) << "\">"
     << escape_xml(x_label) << "</text>\n";
  os << "<text x=\"4\" y=\"" << px(top - 8.0) << "\">" << escape_xml(y_label) << "</text>\n";
  os << "</g>\n";

  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    if (i > 0) os << " ";
    os << px(to_px_x(curve.points[i].x)) << "," << px(to_px_y(curve.points[i].y));
  }
  os << "\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace luckmeter
