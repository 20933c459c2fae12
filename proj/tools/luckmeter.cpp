#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "luckmeter/dataio.hpp"
#include "luckmeter/qmodel.hpp"
#include "luckmeter/reproduce.hpp"

#ifndef LUCKMETER_VERSION
#define LUCKMETER_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace luckmeter;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::invalid_input, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::invalid_input, "cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// wall-clock metadata lives only here, never in the report files
void write_run_meta(const fs::path& out_dir, const std::string& command) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  std::ostringstream os;
  os << "{\"command\": \"" << command << "\", \"timestamp\": \"" << stamp
     << "\", \"tool_version\": \"" << LUCKMETER_VERSION << "\"}\n";
  write_file(out_dir / "run_meta.json", os.str());
}

int exit_code_for(const Error& err) {
  switch (err.code()) {
    case errc::no_positives:
    case errc::no_negatives:
      return 3;
    default:
      return 2;
  }
}

struct AnalyzeArgs {
  std::string input;
  std::string out_dir = ".";
  std::string format = "json";
  bool svg = false;
};

int cmd_analyze(const AnalyzeArgs& args) {
  const std::string text = read_file(args.input);
  const LabeledRanking ranking = parse_labeled_csv(text);
  const SieveReport report = analyze(ranking);

  ReportDocument doc;
  doc.tool_version = LUCKMETER_VERSION;
  doc.input_digest = fnv1a_hex(text);
  doc.report = report;

  fs::create_directories(args.out_dir);
  const fs::path out_dir(args.out_dir);
  if (args.format == "json") {
    write_file(out_dir / "report.json", write_report_json(doc));
  } else {
    write_file(out_dir / "report.csv", write_report_csv(doc));
    write_file(out_dir / "roc.csv", write_curve_csv(report.roc));
    write_file(out_dir / "precision.csv", write_curve_csv(report.precision));
    write_file(out_dir / "correlation.csv", write_curve_csv(report.correlation));
  }
  if (args.svg) {
    write_file(out_dir / "roc.svg", render_svg(report.roc));
    write_file(out_dir / "precision.svg", render_svg(report.precision));
    write_file(out_dir / "correlation.svg", render_svg(report.correlation));
  }
  write_run_meta(out_dir, "analyze");
  return 0;
}

struct SimulateArgs {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out_dir = ".";
};

struct SimulateConfig {
  QModelParams params;
  std::int64_t n_prizes = 25;
  double noise_sigma = 0.5;
};

SimulateConfig load_config(const std::string& path) {
  SimulateConfig cfg;
  if (path.empty()) return cfg;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    raise(errc::invalid_params, std::string("config: ") + e.what());
  }
  if (!j.is_object()) raise(errc::invalid_params, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "mu_q") cfg.params.mu_q = value.get<double>();
      else if (key == "sigma_q") cfg.params.sigma_q = value.get<double>();
      else if (key == "mu_p") cfg.params.mu_p = value.get<double>();
      else if (key == "sigma_p") cfg.params.sigma_p = value.get<double>();
      else if (key == "papers_per_author") cfg.params.papers_per_author = value.get<std::int64_t>();
      else if (key == "population_size") cfg.params.population_size = value.get<std::int64_t>();
      else if (key == "productivity_sigma") cfg.params.productivity_sigma = value.get<double>();
      else if (key == "n_prizes") cfg.n_prizes = value.get<std::int64_t>();
      else if (key == "noise_sigma") cfg.noise_sigma = value.get<double>();
      else raise(errc::invalid_params, "config: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      raise(errc::invalid_params, "config: bad value for '" + key + "': " + e.what());
    }
  }
  return cfg;
}

// canonical parameter rendering; hashed into the report's input digest
std::string canonical_config(const SimulateConfig& cfg, std::uint64_t seed) {
  std::ostringstream os;
  os << "mu_q=" << format_real(cfg.params.mu_q) << "\n"
     << "sigma_q=" << format_real(cfg.params.sigma_q) << "\n"
     << "mu_p=" << format_real(cfg.params.mu_p) << "\n"
     << "sigma_p=" << format_real(cfg.params.sigma_p) << "\n"
     << "papers_per_author=" << cfg.params.papers_per_author << "\n"
     << "population_size=" << cfg.params.population_size << "\n"
     << "productivity_sigma=" << format_real(cfg.params.productivity_sigma) << "\n"
     << "n_prizes=" << cfg.n_prizes << "\n"
     << "noise_sigma=" << format_real(cfg.noise_sigma) << "\n"
     << "seed=" << seed << "\n";
  return os.str();
}

int cmd_simulate(const SimulateArgs& args) {
  SimulateConfig cfg = load_config(args.config);

  std::uint64_t seed = 0;
  if (args.seed) {
    seed = *args.seed;
  } else if (const char* env = std::getenv("LUCKMETER_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      raise(errc::invalid_params, std::string("LUCKMETER_SEED is not a valid seed: '") + env + "'");
    }
  }

  const ExperimentResult result = run_experiment(cfg.params, cfg.n_prizes, cfg.noise_sigma, seed);

  ReportDocument doc;
  doc.tool_version = LUCKMETER_VERSION;
  doc.seed = seed;
  doc.seeded = true;
  doc.input_digest = fnv1a_hex(canonical_config(cfg, seed));
  doc.report = result.report;

  fs::create_directories(args.out_dir);
  const fs::path out_dir(args.out_dir);
  write_file(out_dir / "report.json", write_report_json(doc));
  write_file(out_dir / "ranking.csv", write_ranking_csv(result.ranking));
  write_run_meta(out_dir, "simulate");

  std::printf("auc=%s best_r=%s best_R=%lld\n", format_real(result.report.roc.auc.value()).c_str(),
              format_real(result.report.best.r.value()).c_str(),
              static_cast<long long>(result.report.best.threshold));
  return 0;
}

int cmd_paired(const std::string& input, bool use_spearman) {
  const PairedSample sample = parse_paired_csv(read_file(input));
  const CorrelationEstimate est =
      use_spearman ? spearman(sample.x, sample.y) : pearson(sample.x, sample.y);
  std::printf("%.6f\n", est.r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"correlation-first evaluation of rank-threshold classifiers under class imbalance"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "analyze a labeled ranking CSV");
  analyze_cmd->add_option("--input", analyze_args.input, "ranking CSV (id,score,label)")
      ->required();
  analyze_cmd->add_option("--out-dir", analyze_args.out_dir, "output directory");
  analyze_cmd->add_option("--format", analyze_args.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  analyze_cmd->add_flag("--svg", analyze_args.svg, "also render roc/precision/correlation SVGs");

  double tpr = 0.0, fpr = 0.0;
  std::int64_t npos = 0, nneg = 0;
  CLI::App* eq1_cmd = app.add_subcommand("eq1", "rate-form correlation for a sieve");
  eq1_cmd->add_option("--tpr", tpr, "true positive rate")->required();
  eq1_cmd->add_option("--fpr", fpr, "false positive rate")->required();
  eq1_cmd->add_option("--npos", npos, "total positives")->required();
  eq1_cmd->add_option("--nneg", nneg, "total negatives")->required();

  double ci_r = 0.0, ci_level = 0.95;
  std::int64_t ci_n = 0;
  CLI::App* ci_cmd = app.add_subcommand("ci", "Fisher confidence interval for a correlation");
  ci_cmd->add_option("--r", ci_r, "observed correlation")->required();
  ci_cmd->add_option("--n", ci_n, "sample size")->required();
  ci_cmd->add_option("--level", ci_level, "confidence level (default 0.95)");

  std::string spearman_input, pearson_input;
  CLI::App* spearman_cmd = app.add_subcommand("spearman", "rank correlation of a paired CSV");
  spearman_cmd->add_option("--input", spearman_input, "paired CSV (id,x,y)")->required();
  CLI::App* pearson_cmd = app.add_subcommand("pearson", "linear correlation of a paired CSV");
  pearson_cmd->add_option("--input", pearson_input, "paired CSV (id,x,y)")->required();

  SimulateArgs simulate_args;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "run a career-impact experiment");
  simulate_cmd->add_option("--seed", simulate_args.seed,
                           "64-bit seed (falls back to LUCKMETER_SEED, then 0)");
  simulate_cmd->add_option("--config", simulate_args.config, "JSON config file");
  simulate_cmd->add_option("--out-dir", simulate_args.out_dir, "output directory");

  std::string repro_format = "table";
  CLI::App* repro_cmd =
      app.add_subcommand("reproduce", "recompute the bundled verification table");
  repro_cmd->add_option("--format", repro_format, "output format")
      ->check(CLI::IsMember({"table", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_args);
    if (eq1_cmd->parsed()) {
      std::printf("%.4f\n", r_from_rates(tpr, fpr, npos, nneg).r);
      return 0;
    }
    if (ci_cmd->parsed()) {
      const ConfidenceInterval ci = fisher_ci(ci_r, ci_n, ci_level);
      std::printf("%.6f %.6f\n", ci.lower, ci.upper);
      return 0;
    }
    if (spearman_cmd->parsed()) return cmd_paired(spearman_input, true);
    if (pearson_cmd->parsed()) return cmd_paired(pearson_input, false);
    if (simulate_cmd->parsed()) return cmd_simulate(simulate_args);
    if (repro_cmd->parsed()) {
      const std::vector<ReproRow> rows = reproduce_rows();
      std::fputs((repro_format == "json" ? reproduce_json(rows) : reproduce_table(rows)).c_str(),
                 stdout);
      return reproduce_ok(rows) ? 0 : 1;
    }
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code_for(err);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
