#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "iifs/error.hpp"
#include "iifs/rng.hpp"
#include "iifs/stats.hpp"

using iifs::jensen_shannon;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// random point on the simplex
Eigen::VectorXd random_simplex(int dim, iifs::Rng& rng) {
  Eigen::VectorXd p(dim);
  double sum = 0;
  for (int i = 0; i < dim; ++i) {
    p[i] = -std::log(rng.uniform_open01());
    sum += p[i];
  }
  return p / sum;
}

}  // namespace

TEST_CASE("jensen_shannon of identical distributions is zero") {
  const auto p = vec({0.2, 0.5, 0.3});
  CHECK(jensen_shannon(p, p) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("jensen_shannon of a point mass vs uniform") {
  const auto p = vec({1.0, 0.0});
  const auto q = vec({0.5, 0.5});
  CHECK(jensen_shannon(p, q) == doctest::Approx(0.3112781).epsilon(1e-3));
}

TEST_CASE("jensen_shannon of disjoint distributions is one") {
  const auto p = vec({1.0, 0.0});
  const auto q = vec({0.0, 1.0});
  CHECK(jensen_shannon(p, q) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("jensen_shannon rejects malformed input") {
  CHECK_THROWS_AS(jensen_shannon(vec({1.0}), vec({0.5, 0.5})), iifs::input_error);
  CHECK_THROWS_AS(jensen_shannon(vec({1.2, -0.2}), vec({0.5, 0.5})), iifs::input_error);
  CHECK_THROWS_AS(jensen_shannon(vec({0.4, 0.4}), vec({0.5, 0.5})), iifs::input_error);
}

TEST_CASE("jensen_shannon is symmetric and bounded on random simplex points") {
  iifs::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + rng.uniform_int(6);
    const auto p = random_simplex(dim, rng);
    const auto q = random_simplex(dim, rng);
    const double pq = jensen_shannon(p, q);
    const double qp = jensen_shannon(q, p);
    CHECK(pq == doctest::Approx(qp).epsilon(1e-12));
    CHECK(pq >= 0.0);
    CHECK(pq <= 1.0);
  }
}

TEST_CASE("tied_ranks averages equal values") {
  const auto ranks = iifs::tied_ranks({3.0, 1.0, 3.0, 0.5});
  CHECK(ranks[0] == doctest::Approx(2.5));
  CHECK(ranks[1] == doctest::Approx(1.0));
  CHECK(ranks[2] == doctest::Approx(2.5));
  CHECK(ranks[3] == doctest::Approx(0.0));
}

TEST_CASE("pearson and spearman on exact linear data") {
  std::vector<double> a{1, 2, 3, 4, 5};
  std::vector<double> b{2, 4, 6, 8, 10};
  CHECK(iifs::pearson(a, b) == doctest::Approx(1.0));
  CHECK(iifs::spearman(a, b) == doctest::Approx(1.0));
  for (auto& x : b) x = -x;
  CHECK(iifs::pearson(a, b) == doctest::Approx(-1.0));
  CHECK(iifs::spearman(a, b) == doctest::Approx(-1.0));
}

TEST_CASE("spearman is invariant under monotone transforms") {
  iifs::Rng rng(11);
  std::vector<double> a, b;
  for (int i = 0; i < 50; ++i) {
    const double x = rng.uniform01() * 4 - 2;
    a.push_back(x);
    b.push_back(std::exp(x));  // monotone, nonlinear
  }
  CHECK(iifs::spearman(a, b) == doctest::Approx(1.0));
  CHECK(iifs::pearson(a, b) < 1.0);
}

TEST_CASE("rng determinism and uniform_int range") {
  iifs::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  iifs::Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const int v = c.uniform_int(7);
    CHECK(v >= 0);
    CHECK(v < 7);
  }
  iifs::Rng d(5);
  auto sample = d.sample_without_replacement(10, 10);
  std::sort(sample.begin(), sample.end());
  for (int i = 0; i < 10; ++i) CHECK(sample[static_cast<std::size_t>(i)] == i);
}
