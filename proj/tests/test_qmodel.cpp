#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "luckmeter/qmodel.hpp"
#include "luckmeter/rng.hpp"

using namespace luckmeter;

namespace {

bool same_population(const Population& a, const Population& b) {
  if (a.careers.size() != b.careers.size()) return false;
  for (std::size_t i = 0; i < a.careers.size(); ++i) {
    if (a.careers[i].author_id != b.careers[i].author_id) return false;
    if (a.careers[i].true_q != b.careers[i].true_q) return false;
    if (a.careers[i].impacts != b.careers[i].impacts) return false;
  }
  return a.prize_labels == b.prize_labels;
}

QModelParams small_params(std::uint64_t seed) {
  QModelParams p;
  p.population_size = 200;
  p.papers_per_author = 10;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("params validation") {
  QModelParams p;
  p.population_size = 1;
  CHECK_THROWS_AS(validate(p), Error);
  p = QModelParams{};
  p.papers_per_author = 0;
  CHECK_THROWS_AS(validate(p), Error);
  p = QModelParams{};
  p.sigma_q = -0.1;
  CHECK_THROWS_AS(validate(p), Error);
  p = QModelParams{};
  p.mu_p = std::nan("");
  CHECK_THROWS_AS(validate(p), Error);
  CHECK_NOTHROW(validate(QModelParams{}));
}

TEST_CASE("sampling: degenerate sigmas collapse to a point mass") {
  QModelParams p = small_params(7);
  p.mu_q = 0.4;
  p.mu_p = -0.3;
  p.sigma_q = 0.0;
  p.sigma_p = 0.0;
  const Population pop = sample_population(p);
  const double expected = std::exp(0.4 + -0.3);
  for (const Career& career : pop.careers) {
    CHECK(career.true_q == doctest::Approx(std::exp(0.4)).epsilon(1e-15));
    REQUIRE(career.impacts.size() == 10);
    for (double impact : career.impacts) CHECK(impact == expected);
  }
}

TEST_CASE("sampling: deterministic in the seed, parallel == serial") {
  const QModelParams p = small_params(42);
  const Population a = sample_population(p, Exec::parallel);
  const Population b = sample_population(p, Exec::parallel);
  const Population c = sample_population(p, Exec::serial);
  CHECK(same_population(a, b));
  CHECK(same_population(a, c));

  const Population other = sample_population(small_params(43));
  CHECK_FALSE(same_population(a, other));
}

TEST_CASE("sampling: author ids are stable and zero-padded") {
  const Population pop = sample_population(small_params(1));
  CHECK(pop.careers.front().author_id == "a000");
  CHECK(pop.careers.back().author_id == "a199");
}

TEST_CASE("sampling: pooled variance of log impact adds the two variances") {
  QModelParams p;
  p.sigma_q = 0.5;
  p.sigma_p = 1.0;
  p.population_size = 10000;
  p.papers_per_author = 20;
  p.seed = 99;
  const Population pop = sample_population(p);

  long double sum = 0, count = 0;
  for (const Career& career : pop.careers) {
    for (double impact : career.impacts) {
      sum += std::log(impact);
      ++count;
    }
  }
  const double mean = static_cast<double>(sum / count);
  long double ss = 0;
  for (const Career& career : pop.careers) {
    for (double impact : career.impacts) {
      const double d = std::log(impact) - mean;
      ss += static_cast<long double>(d) * d;
    }
  }
  const double variance = static_cast<double>(ss / count);

  const double expected = p.sigma_q * p.sigma_q + p.sigma_p * p.sigma_p;
  // clustered-sample variance of the pooled variance estimator:
  //   Var = 2 sq^4/m + 4 sq^2 sp^2/N + 2 sp^4/N   (m authors, N papers)
  const double m = static_cast<double>(p.population_size);
  const double N = m * static_cast<double>(p.papers_per_author);
  const double sq2 = p.sigma_q * p.sigma_q, sp2 = p.sigma_p * p.sigma_p;
  const double se = std::sqrt(2 * sq2 * sq2 / m + 4 * sq2 * sp2 / N + 2 * sp2 * sp2 / N);
  CHECK(std::fabs(variance - expected) < 3.0 * se);
}

TEST_CASE("sampling: within-career log impacts look normal") {
  QModelParams p;
  p.population_size = 2;
  p.papers_per_author = 10000;
  p.sigma_p = 1.0;
  p.seed = 5;
  const Population pop = sample_population(p);
  const Career& career = pop.careers.front();

  long double sum = 0;
  for (double impact : career.impacts) sum += std::log(impact);
  const double mean = static_cast<double>(sum / static_cast<long double>(career.impacts.size()));
  long double m2 = 0, m3 = 0, m4 = 0;
  for (double impact : career.impacts) {
    const double d = std::log(impact) - mean;
    m2 += static_cast<long double>(d) * d;
    m3 += static_cast<long double>(d) * d * d;
    m4 += static_cast<long double>(d) * d * d * d;
  }
  const auto n = static_cast<double>(career.impacts.size());
  const double var = static_cast<double>(m2) / n;
  const double skew = static_cast<double>(m3) / n / std::pow(var, 1.5);
  const double ex_kurt = static_cast<double>(m4) / n / (var * var) - 3.0;
  // se(skew) ~ sqrt(6/n), se(kurt) ~ sqrt(24/n)
  CHECK(std::fabs(skew) < 4.0 * std::sqrt(6.0 / n));
  CHECK(std::fabs(ex_kurt) < 4.0 * std::sqrt(24.0 / n));
}

TEST_CASE("estimate_q: exact and hand-computed cases") {
  QModelParams p = small_params(3);
  p.sigma_p = 0.0;
  p.mu_q = 0.2;
  p.mu_p = 0.7;
  const Population pop = sample_population(p);
  for (const Career& career : pop.careers) {
    CHECK(estimate_q(career, p.mu_p) == doctest::Approx(career.true_q).epsilon(1e-12));
  }

  const Career two_papers{"x", 0.0, {std::exp(1.0), std::exp(3.0)}};
  CHECK(estimate_q(two_papers, 0.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(estimate_q(Career{"y", 1.0, {}}, 0.0), Error);
}

TEST_CASE("estimate_q: long careers localize q") {
  QModelParams p;
  p.population_size = 3;
  p.papers_per_author = 10000;
  p.sigma_p = 1.0;
  p.seed = 8;
  const Population pop = sample_population(p);
  for (const Career& career : pop.careers) {
    const double err = std::fabs(std::log(estimate_q(career, p.mu_p)) - std::log(career.true_q));
    CHECK(err < 3.0 * p.sigma_p / std::sqrt(10000.0));
  }
}

TEST_CASE("assign_prizes: noiseless selection is the true top") {
  const Population pop = sample_population(small_params(11));
  const Population labeled = assign_prizes(pop, 10, 0.0, 77);

  std::vector<std::pair<double, std::size_t>> by_q;
  for (std::size_t i = 0; i < pop.careers.size(); ++i) by_q.push_back({pop.careers[i].true_q, i});
  std::sort(by_q.rbegin(), by_q.rend());
  for (std::size_t k = 0; k < 10; ++k) CHECK(labeled.prize_labels[by_q[k].second] == 1);

  int total = 0;
  for (int label : labeled.prize_labels) total += label;
  CHECK(total == 10);
}

TEST_CASE("assign_prizes: label cardinality holds for any noise") {
  const Population pop = sample_population(small_params(12));
  for (const double noise : {0.0, 0.2, 1.0, 5.0}) {
    const Population labeled = assign_prizes(pop, 25, noise, 123);
    int total = 0;
    for (int label : labeled.prize_labels) total += label;
    CHECK(total == 25);
  }
  CHECK_THROWS_AS(assign_prizes(pop, 0, 0.0, 1), Error);
  CHECK_THROWS_AS(assign_prizes(pop, 200, 0.0, 1), Error);
  CHECK_THROWS_AS(assign_prizes(pop, 10, -0.5, 1), Error);
}

TEST_CASE("assign_prizes: noise at sigma_q mixes but does not destroy the top") {
  const QModelParams p = small_params(13);
  const Population pop = sample_population(p);
  std::set<std::size_t> true_top;
  {
    std::vector<std::pair<double, std::size_t>> by_q;
    for (std::size_t i = 0; i < pop.careers.size(); ++i)
      by_q.push_back({pop.careers[i].true_q, i});
    std::sort(by_q.rbegin(), by_q.rend());
    for (std::size_t k = 0; k < 10; ++k) true_top.insert(by_q[k].second);
  }

  long double overlap_sum = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const Population labeled = assign_prizes(pop, 10, p.sigma_q, 1000 + static_cast<std::uint64_t>(t));
    int overlap = 0;
    for (std::size_t i : true_top) overlap += labeled.prize_labels[i];
    overlap_sum += overlap;
  }
  const double mean_overlap = static_cast<double>(overlap_sum / trials);
  CHECK(mean_overlap > 0.0);
  CHECK(mean_overlap < 10.0);
}

TEST_CASE("scale split is unidentifiable") {
  // exactly representable means: impacts must be bit-identical
  QModelParams a = small_params(21);
  a.mu_q = 0.5;
  a.mu_p = 0.25;
  QModelParams b = a;
  b.mu_q = 0.625;  // +1/8
  b.mu_p = 0.125;  // -1/8
  const Population pa = sample_population(a);
  const Population pb = sample_population(b);
  for (std::size_t i = 0; i < pa.careers.size(); ++i) {
    CHECK(pa.careers[i].impacts == pb.careers[i].impacts);
  }

  // generic means: equal up to rounding of the grouped sum
  QModelParams c = small_params(22);
  c.mu_q = 0.3;
  c.mu_p = -0.1;
  QModelParams d = c;
  d.mu_q = 0.3 + 0.2;
  d.mu_p = -0.1 - 0.2;
  const Population pc = sample_population(c);
  const Population pd = sample_population(d);
  for (std::size_t i = 0; i < pc.careers.size(); ++i) {
    for (std::size_t j = 0; j < pc.careers[i].impacts.size(); ++j) {
      CHECK(pc.careers[i].impacts[j] ==
            doctest::Approx(pd.careers[i].impacts[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimated-q ranking converges to the true ranking") {
  for (const std::uint64_t seed : {31u, 32u}) {
    double prev = -2.0;
    for (const std::int64_t papers : {1, 10, 100}) {
      QModelParams p;
      p.population_size = 2000;
      p.papers_per_author = papers;
      p.seed = seed;
      const Population pop = sample_population(p);
      std::vector<double> truth, estimate;
      for (const Career& career : pop.careers) {
        truth.push_back(career.true_q);
        estimate.push_back(estimate_q(career, p.mu_p));
      }
      const double rs = spearman(truth, estimate).r;
      CHECK(rs > prev);
      prev = rs;
    }
    CHECK(prev > 0.95);  // 100 papers pin the ranking down tightly
  }
}

TEST_CASE("productivity mode: paper counts vary but stay positive") {
  QModelParams p = small_params(44);
  p.productivity_sigma = 0.8;
  const Population pop = sample_population(p);
  bool varied = false;
  for (const Career& career : pop.careers) {
    CHECK(career.impacts.size() >= 1);
    if (career.impacts.size() != 10) varied = true;
  }
  CHECK(varied);
}

TEST_CASE("run_experiment: noiseless setup recovers a perfect sieve") {
  QModelParams p;
  p.population_size = 300;
  p.papers_per_author = 5;
  p.sigma_p = 0.0;
  const ExperimentResult result = run_experiment(p, 12, 0.0, 555);
  CHECK(result.report.best.threshold == 12);
  CHECK(result.report.best.r.value() == doctest::Approx(1.0));
  CHECK(result.report.roc.auc.value() == doctest::Approx(1.0));
}

TEST_CASE("run_experiment: deterministic and exec-independent") {
  QModelParams p;
  p.population_size = 500;
  p.papers_per_author = 8;
  const ExperimentResult a = run_experiment(p, 20, 0.4, 777, Exec::parallel);
  const ExperimentResult b = run_experiment(p, 20, 0.4, 777, Exec::parallel);
  const ExperimentResult c = run_experiment(p, 20, 0.4, 777, Exec::serial);

  for (const ExperimentResult* other : {&b, &c}) {
    CHECK(a.report.best.threshold == other->report.best.threshold);
    CHECK(a.report.best.r == other->report.best.r);
    CHECK(a.report.roc.auc == other->report.roc.auc);
    REQUIRE(a.ranking.size() == other->ranking.size());
    for (std::int64_t i = 0; i < a.ranking.size(); ++i) {
      const auto& x = a.ranking.entries()[static_cast<std::size_t>(i)];
      const auto& y = other->ranking.entries()[static_cast<std::size_t>(i)];
      CHECK(x.id == y.id);
      CHECK(x.score == y.score);
      CHECK(x.label == y.label);
    }
  }

  CHECK(a.report.roc.auc.value() >= 0.0);
  CHECK(a.report.roc.auc.value() <= 1.0);
  CHECK(a.report.best.r.value() >= -1.0);
  CHECK(a.report.best.r.value() <= 1.0);
}

TEST_CASE("substreams are decorrelated across indices") {
  // neighbouring author streams should not share structure
  long double sum = 0, ss = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const double z = substream(42, static_cast<std::uint64_t>(i)).next_normal();
    sum += z;
    ss += static_cast<long double>(z) * z;
  }
  const double mean = static_cast<double>(sum) / n;
  const double var = static_cast<double>(ss) / n - mean * mean;
  CHECK(std::fabs(mean) < 0.075);      // ~3.3 sigma
  CHECK(std::fabs(var - 1.0) < 0.11);  // ~3.5 sigma
}
