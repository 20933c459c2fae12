#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "luckmeter/sieve.hpp"

namespace luckmeter {

// Lognormal career-impact model: a work's impact is q * p with log q normal
// per author and log p normal per work.
struct QModelParams {
  double mu_q = 0.0;
  double sigma_q = 0.5;
  double mu_p = 0.0;
  double sigma_p = 1.0;
  std::int64_t papers_per_author = 20;
  std::int64_t population_size = 2915;
  std::uint64_t seed = 0;
  // lognormal spread of per-author paper counts around papers_per_author;
  // 0 keeps the count constant
  double productivity_sigma = 0.0;
};

void validate(const QModelParams& p);

struct Career {
  std::string author_id;
  double true_q = 1.0;
  std::vector<double> impacts;
};

struct Population {
  QModelParams params;
  std::vector<Career> careers;
  std::vector<int> prize_labels;  // empty until assign_prizes
  std::int64_t n_prizes = 0;

  bool has_labels() const { return !prize_labels.empty(); }
};

// Author i draws from substream(seed, i): an optional productivity normal,
// one normal for q, then one per paper. Impacts are exp((mu_q + mu_p) +
// sigma_q*z_q + sigma_p*z_p), so shifting mass between the two means leaves
// them untouched. Deterministic for a given seed regardless of exec.
Population sample_population(const QModelParams& p, Exec exec = Exec::parallel);

// Maximum-likelihood q under the model: exp(mean(log impact) - mu_p).
double estimate_q(const Career& career, double mu_p = 0.0);

// Labels the top n_prizes authors by log(true_q) + noise_sigma * z_i with
// z_i from substream(seed, i); ties broken by author index.
Population assign_prizes(Population pop, std::int64_t n_prizes, double noise_sigma,
                         std::uint64_t seed);

struct ExperimentResult {
  SieveReport report;      // report.roc.auc carries the AUC
  LabeledRanking ranking;  // authors by estimated q, labeled by prize
};

// Samples a population (seed stream 0 of `seed`), assigns prizes (stream 1),
// ranks authors by estimated q and runs the sieve analysis.
ExperimentResult run_experiment(const QModelParams& p, std::int64_t n_prizes,
                                double noise_sigma, std::uint64_t seed,
                                Exec exec = Exec::parallel);

}  // namespace luckmeter
