#include "luckmeter/qmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "luckmeter/rng.hpp"

namespace luckmeter {

void validate(const QModelParams& p) {
  if (!std::isfinite(p.mu_q) || !std::isfinite(p.mu_p))
    raise(errc::invalid_params, "means must be finite");
  if (!(p.sigma_q >= 0.0) || !(p.sigma_p >= 0.0) || !std::isfinite(p.sigma_q) ||
      !std::isfinite(p.sigma_p))
    raise(errc::invalid_params, "sigmas must be finite and non-negative");
  if (p.papers_per_author < 1) raise(errc::invalid_params, "papers_per_author must be >= 1");
  if (p.population_size < 2) raise(errc::invalid_params, "population_size must be >= 2");
  if (!(p.productivity_sigma >= 0.0) || !std::isfinite(p.productivity_sigma))
    raise(errc::invalid_params, "productivity_sigma must be finite and non-negative");
}

namespace {

std::string author_name(std::int64_t index, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "a%0*lld", width, static_cast<long long>(index));
  return buf;
}

int id_width(std::int64_t population_size) {
  int digits = 1;
  for (std::int64_t v = population_size - 1; v >= 10; v /= 10) ++digits;
  return digits;
}

// Draw order per author stream: optional productivity normal, the q normal,
// then one normal per paper. Keeping (mu_q + mu_p) as one grouped term makes
// impacts bit-stable when mass moves between the two means.
Career sample_career(const QModelParams& p, std::int64_t index, int width) {
  SplitMix64 rng = substream(p.seed, static_cast<std::uint64_t>(index));

  std::int64_t papers = p.papers_per_author;
  if (p.productivity_sigma > 0.0) {
    const double z = rng.next_normal();
    papers = std::max<std::int64_t>(
        1, std::llround(static_cast<double>(papers) * std::exp(p.productivity_sigma * z)));
  }

  const double q_noise = p.sigma_q * rng.next_normal();
  const double mu_sum = p.mu_q + p.mu_p;

  Career career;
  career.author_id = author_name(index, width);
  career.true_q = std::exp(p.mu_q + q_noise);
  career.impacts.resize(static_cast<std::size_t>(papers));
  for (double& impact : career.impacts) {
    impact = std::exp(mu_sum + (q_noise + p.sigma_p * rng.next_normal()));
  }
  return career;
}

}  // namespace

Population sample_population(const QModelParams& p, Exec exec) {
  validate(p);
  Population pop;
  pop.params = p;
  pop.careers.resize(static_cast<std::size_t>(p.population_size));
  const int width = id_width(p.population_size);
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t i = 0; i < p.population_size; ++i) {
    pop.careers[static_cast<std::size_t>(i)] = sample_career(p, i, width);
  }
  return pop;
}

double estimate_q(const Career& career, double mu_p) {
  if (career.impacts.empty()) raise(errc::empty_career, "career has no impacts");
  long double sum = 0.0L;
  for (double impact : career.impacts) {
    if (!(impact > 0.0)) raise(errc::invalid_input, "impacts must be positive");
    sum += std::log(impact);
  }
  const double mean_log = static_cast<double>(sum / static_cast<long double>(career.impacts.size()));
  return std::exp(mean_log - mu_p);
}

Population assign_prizes(Population pop, std::int64_t n_prizes, double noise_sigma,
                         std::uint64_t seed) {
  const auto size = static_cast<std::int64_t>(pop.careers.size());
  if (n_prizes < 1 || n_prizes >= size)
    raise(errc::invalid_counts, "need 1 <= n_prizes < population size");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    raise(errc::invalid_input, "noise_sigma must be finite and non-negative");

  std::vector<double> noisy(static_cast<std::size_t>(size));
  for (std::int64_t i = 0; i < size; ++i) {
    noisy[static_cast<std::size_t>(i)] =
        std::log(pop.careers[static_cast<std::size_t>(i)].true_q) +
        noise_sigma * substream(seed, static_cast<std::uint64_t>(i)).next_normal();
  }

  std::vector<std::int64_t> order(static_cast<std::size_t>(size));
  std::iota(order.begin(), order.end(), std::int64_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    return noisy[static_cast<std::size_t>(a)] > noisy[static_cast<std::size_t>(b)];
  });

  pop.prize_labels.assign(static_cast<std::size_t>(size), 0);
  for (std::int64_t k = 0; k < n_prizes; ++k) {
    pop.prize_labels[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;
  }
  pop.n_prizes = n_prizes;
  return pop;
}

ExperimentResult run_experiment(const QModelParams& p, std::int64_t n_prizes,
                                double noise_sigma, std::uint64_t seed, Exec exec) {
  QModelParams sampled = p;
  sampled.seed = stream_seed_at(seed, 0);
  Population pop = sample_population(sampled, exec);
  pop = assign_prizes(std::move(pop), n_prizes, noise_sigma, stream_seed_at(seed, 1));

  std::vector<RankedRow> rows;
  rows.reserve(pop.careers.size());
  for (std::size_t i = 0; i < pop.careers.size(); ++i) {
    rows.push_back({pop.careers[i].author_id, estimate_q(pop.careers[i], p.mu_p),
                    pop.prize_labels[i]});
  }

  ExperimentResult result{.report = {}, .ranking = LabeledRanking::build(std::move(rows))};
  result.report = analyze(result.ranking, exec);
  return result;
}

}  // namespace luckmeter
