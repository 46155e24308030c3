#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "smoothq/distributions.hpp"
#include "smoothq/error.hpp"
#include "smoothq/estimator.hpp"
#include "smoothq/rng.hpp"
#include "support/convex_min.hpp"

using namespace smoothq;

namespace {

Sample make(std::initializer_list<double> xs) {
  return Sample(std::vector<double>(xs));
}

// Independent reading of the h=0 contract: the smallest observation whose
// tie-aware empirical cdf reaches t, found by linear scan.
double order_statistic_quantile(const std::vector<double>& sorted, double t) {
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto rank = static_cast<double>(
        std::upper_bound(sorted.begin(), sorted.end(), sorted[i]) -
        sorted.begin());
    if (rank / n >= t) {
      return sorted[i];
    }
  }
  return sorted.back();
}

// Score left-limit at q: uses strict counts, so it probes Fhat(q-).
double score_below(const Sample& s, double q, const SmoothingParams& p) {
  const auto& ys = s.values();
  const auto lt = static_cast<double>(
      std::lower_bound(ys.begin(), ys.end(), q) - ys.begin());
  return 2.0 * lt / static_cast<double>(ys.size()) - 1.0 + p.z +
         p.h * (q - s.mean());
}

struct TrialGen {
  SplitMix64 rng;
  explicit TrialGen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * rng.uniform();
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  std::size_t size(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>((hi - lo + 1) * rng.uniform());
  }

  DistributionModel model() {
    switch (rng.next() % 3) {
      case 0:
        return Normal(uniform(-2.0, 2.0), log_uniform(0.3, 3.0));
      case 1:
        return Laplace(uniform(-2.0, 2.0), log_uniform(0.3, 3.0));
      default:
        return AsymmetricLaplace(uniform(-2.0, 2.0), log_uniform(0.3, 3.0),
                                 log_uniform(0.4, 2.5));
    }
  }

  Sample sample(std::size_t max_n) {
    const std::size_t n = size(1, max_n);
    return draw_sample(model(), n, rng.next());
  }
};

}  // namespace

TEST_CASE("smoothing parameter validation") {
  CHECK_THROWS_AS(SmoothingParams(0.0, -0.1), DomainError);
  CHECK_THROWS_AS(SmoothingParams(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(SmoothingParams(-1.0, 0.0), DomainError);
  CHECK_THROWS_AS(SmoothingParams(1.5, 0.0), DomainError);
  CHECK_THROWS_AS(SmoothingParams(NAN, 1.0), DomainError);
  CHECK_THROWS_AS(SmoothingParams(0.0, NAN), DomainError);
  CHECK_NOTHROW(SmoothingParams(0.999, 0.0));
  CHECK_NOTHROW(SmoothingParams(37.0, 2.0));
}

TEST_CASE("objective point values") {
  CHECK(objective(make({0.0}), 0.0, SmoothingParams(0.0, 1.0)) == 0.0);
  CHECK(objective(make({-1.0, 1.0}), 0.0, SmoothingParams(0.0, 2.0)) == 2.0);
  CHECK(objective(make({-1.0, 1.0}), 0.0, SmoothingParams(0.5, 0.0)) == 1.0);
}

TEST_CASE("score point values") {
  const Sample s123 = make({1.0, 2.0, 3.0});
  CHECK(score(s123, 2.0, SmoothingParams(0.0, 0.0)) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(score(make({0.0, 10.0}), 5.0, SmoothingParams(0.0, 1.0)) == 0.0);
  // far left limit: Fhat -> 0, so the score approaches z - 1
  CHECK(score(s123, -1e18, SmoothingParams(0.25, 0.0)) == 0.25 - 1.0);
}

TEST_CASE("score nondecreasing in q") {
  const Sample s = draw_sample(Normal(0.0, 1.0), 64, 5);
  const SmoothingParams p(0.3, 0.7);
  double prev = -1e300;
  for (int i = -50; i <= 50; ++i) {
    const double cur = score(s, 0.1 * i, p);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("estimate point values") {
  CHECK(estimate(make({1.0, 2.0, 3.0}), SmoothingParams(0.0, 0.0)) == 2.0);
  CHECK(estimate(make({0.0, 1.0, 2.0, 3.0}), SmoothingParams(0.0, 1.0)) ==
        1.5);
  CHECK(estimate(make({0.0, 10.0}), SmoothingParams(0.0, 1e6)) ==
        doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("estimate with ties") {
  // median convention: no interpolation between tied values
  CHECK(estimate(make({1.0, 1.0, 1.0, 2.0}), SmoothingParams(0.0, 0.0)) == 1.0);
  CHECK(estimate(make({1.0, 1.0, 2.0, 2.0}), SmoothingParams(0.0, 0.0)) == 1.0);
  // jump crossing at a tied point under smoothing
  CHECK(estimate(make({0.0, 0.0, 0.0, 0.0, 1.0}), SmoothingParams(0.0, 1.0)) ==
        0.0);
}

TEST_CASE("tiny smoothing collapses to the quantile path") {
  const Sample s = make({1.0, 2.0, 3.0});
  CHECK(estimate(s, SmoothingParams(0.0, 1e-310)) == 2.0);
  CHECK_THROWS_AS(estimate(s, SmoothingParams(1.5, 1e-310)), DomainError);
  // just above the threshold: the linear extension stays finite
  const double far = estimate(s, SmoothingParams(1.5, 1e-299));
  CHECK(std::isfinite(far));
  CHECK(far < s.min());
}

TEST_CASE("estimate_path matches pointwise estimates") {
  const std::vector<double> single{0.0};
  CHECK(estimate_path(make({1.0, 2.0, 3.0}), 0.0, single) ==
        std::vector<double>{2.0});
  const std::vector<double> one{1.0};
  CHECK(estimate_path(make({0.0, 1.0, 2.0, 3.0}), 0.0, one) ==
        std::vector<double>{1.5});
  CHECK_THROWS_AS(estimate_path(make({1.0}), 0.0, std::vector<double>{}),
                  DomainError);

  const Sample s = draw_sample(Laplace(0.0, 1.0), 101, 17);
  const std::vector<double> grid{0.0, 0.3, 1.0, 2.5, 10.0};
  const auto path = estimate_path(s, 0.4, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(path[i] == estimate(s, SmoothingParams(0.4, grid[i])));
  }
}

TEST_CASE("ascending smoothing pulls a below-mean start upward") {
  const Sample s = make({0.0, 0.0, 0.0, 10.0});  // median 0, mean 2.5
  const std::vector<double> grid{0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0};
  const auto path = estimate_path(s, 0.0, grid);
  CHECK(path.front() == 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    CHECK(path[i] >= path[i - 1]);
  }
  CHECK(path.back() == doctest::Approx(2.5).epsilon(1e-2));
}

TEST_CASE("h = 0 reduces to the order statistic exactly") {
  TrialGen gen(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const Sample s = gen.sample(60);
    const double z = gen.uniform(-0.999, 0.999);
    const double got = estimate(s, SmoothingParams(z, 0.0));
    const double want = order_statistic_quantile(s.values(), 0.5 * (1.0 - z));
    CHECK(got == want);
  }
}

TEST_CASE("golden-section oracle agreement") {
  TrialGen gen(99);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Sample s = gen.sample(200);
    const double z = gen.uniform(-3.0, 3.0);
    const double h = gen.log_uniform(0.05, 50.0);
    const SmoothingParams p(z, h);
    const double got = estimate(s, p);

    const double slack = (1.0 + std::abs(z)) / h;
    const long double lo = std::min(s.min(), s.mean() - slack) - 1.0;
    const long double hi = std::max(s.max(), s.mean() + slack) + 1.0;
    const long double oracle = testsupport::minimize_convex(
        [&](long double q) {
          return testsupport::objective_ld(s.values(), q, z, h);
        },
        lo, hi);
    CHECK(std::abs(got - static_cast<double>(oracle)) <= 1e-9);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("minimizer certificate: objective and score") {
  TrialGen gen(7);
  for (int trial = 0; trial < 500; ++trial) {
    const Sample s = gen.sample(80);
    const bool smooth = trial % 3 != 0;
    const double z = smooth ? gen.uniform(-2.0, 2.0) : gen.uniform(-0.99, 0.99);
    const double h = smooth ? gen.log_uniform(1e-3, 1e3) : 0.0;
    const SmoothingParams p(z, h);
    const double qhat = estimate(s, p);

    const double scale = 1.0 + std::abs(qhat);
    const double fq = objective(s, qhat, p);
    for (int k = -10; k <= 10; ++k) {
      const double q = qhat + 0.2 * k * scale;
      CHECK(objective(s, q, p) >= fq - 1e-11 * (1.0 + std::abs(fq)));
    }
    // score is nonnegative from the minimizer on, negative strictly below
    CHECK(score(s, qhat, p) >= -1e-10);
    CHECK(score_below(s, qhat - 1e-7 * scale, p) < 1e-10);
  }
}

TEST_CASE("mean-limit bound") {
  TrialGen gen(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Sample s = gen.sample(120);
    const double z = gen.uniform(-4.0, 4.0);
    const double h = gen.log_uniform(1e-4, 1e4);
    const double qhat = estimate(s, SmoothingParams(z, h));
    const double bound = (1.0 + std::abs(z)) / h;
    CHECK(std::abs(qhat - s.mean()) <=
          bound * (1.0 + 1e-12) + 1e-12 * (1.0 + std::abs(s.mean())));
  }
}

TEST_CASE("shift equivariance is exact") {
  // Integer-valued samples summing to zero and integer shifts keep every
  // intermediate quantity exactly representable, so equality is bitwise.
  TrialGen gen(13);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = gen.size(2, 64);
    std::vector<double> vals;
    long long sum = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const long long v = static_cast<long long>(gen.rng.next() % 2000001) -
                          1000000;
      sum += v;
      vals.push_back(static_cast<double>(v));
    }
    vals.push_back(static_cast<double>(-sum));
    const double c = static_cast<double>(
        static_cast<long long>(gen.rng.next() % 2000001) - 1000000);

    const bool smooth = trial % 2 == 0;
    const double z = smooth ? gen.uniform(-2.0, 2.0) : gen.uniform(-0.99, 0.99);
    const double h = smooth ? gen.log_uniform(1e-3, 1e2) : 0.0;
    const SmoothingParams p(z, h);

    std::vector<double> shifted(vals);
    for (double& v : shifted) {
      v += c;
    }
    const double base = estimate(Sample(vals), p);
    const double moved = estimate(Sample(shifted), p);
    CHECK(moved == base + c);
  }
}

TEST_CASE("scale covariance") {
  TrialGen gen(17);
  for (int trial = 0; trial < 500; ++trial) {
    const Sample s = gen.sample(100);
    const double z = gen.uniform(-2.0, 2.0);
    const double h = gen.log_uniform(1e-2, 1e2);
    const double c = gen.log_uniform(1e-3, 1e3);

    std::vector<double> scaled(s.values());
    for (double& v : scaled) {
      v *= c;
    }
    const double lhs = estimate(Sample(scaled), SmoothingParams(z, h));
    const double rhs = c * estimate(s, SmoothingParams(z, c * h));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("monotone pull toward the mean") {
  TrialGen gen(19);
  for (int trial = 0; trial < 500; ++trial) {
    const Sample s = gen.sample(100);
    const double z = gen.uniform(-2.0, 2.0);
    double h1 = gen.log_uniform(1e-3, 1e2);
    double h2 = gen.log_uniform(1e-3, 1e2);
    if (h1 > h2) {
      std::swap(h1, h2);
    }
    const double q1 = estimate(s, SmoothingParams(z, h1));
    const double q2 = estimate(s, SmoothingParams(z, h2));
    const double slack = 1e-12 * (1.0 + std::abs(q1));
    if (q1 <= s.mean()) {
      CHECK(q2 >= q1 - slack);
    } else {
      CHECK(q2 <= q1 + slack);
    }
  }
}

TEST_CASE("nonincreasing in z") {
  TrialGen gen(23);
  for (int trial = 0; trial < 500; ++trial) {
    const Sample s = gen.sample(100);
    const double h = gen.log_uniform(1e-3, 1e2);
    double z1 = gen.uniform(-2.0, 2.0);
    double z2 = gen.uniform(-2.0, 2.0);
    if (z1 > z2) {
      std::swap(z1, z2);
    }
    const double q1 = estimate(s, SmoothingParams(z1, h));
    const double q2 = estimate(s, SmoothingParams(z2, h));
    CHECK(q2 <= q1 + 1e-12 * (1.0 + std::abs(q1)));
  }
}
