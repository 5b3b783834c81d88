#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"

#include "cessl/metrics.hpp"
#include "cessl/rng.hpp"

using namespace cessl;

namespace {

Matrix random_points(std::size_t n, RngStream& rng, double spread = 1.0) {
  Matrix m(n, 2);
  for (double& v : m.data()) v = spread * (2.0 * rng.next_double() - 1.0);
  return m;
}

// Brute-force optimal transport over all n! permutations; exact for n <= 7.
double w1_bruteforce(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = a(i, 0) - b(perm[i], 0);
      const double dy = a(i, 1) - b(perm[i], 1);
      total += std::sqrt(dx * dx + dy * dy);
    }
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

}  // namespace

TEST_CASE("assignment solver on a hand-checked 3x3 cost matrix") {
  const Matrix cost = Matrix::from_rows({{4, 1, 3}, {2, 0, 5}, {3, 2, 2}});
  const auto match = solve_assignment(cost);
  // Optimal: row0->col1 (1), row1->col0 (2), row2->col2 (2), total 5.
  CHECK(match[0] == 1);
  CHECK(match[1] == 0);
  CHECK(match[2] == 2);
}

TEST_CASE("w1 of identical point sets is zero") {
  RngStream rng(1, 0);
  const Matrix a = random_points(20, rng);
  CHECK(wasserstein1(a, a) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("w1 between shifted point masses equals the shift") {
  Matrix a(4, 2);
  Matrix b(4, 2);
  for (std::size_t i = 0; i < 4; ++i) b(i, 0) = 0.5;
  CHECK(wasserstein1(a, b) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("w1 matches permutation brute force on random small instances") {
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    RngStream rng(100 + trial, 0);
    const std::size_t n = 2 + rng.next_below(6);  // up to 7 points
    const Matrix a = random_points(n, rng);
    const Matrix b = random_points(n, rng);
    CHECK(std::fabs(wasserstein1(a, b) - w1_bruteforce(a, b)) <= 1e-12);
  }
}

TEST_CASE("w1 is symmetric and satisfies the triangle inequality") {
  RngStream rng(7, 0);
  const Matrix a = random_points(15, rng);
  const Matrix b = random_points(15, rng);
  const Matrix c = random_points(15, rng);
  CHECK(wasserstein1(a, b) == doctest::Approx(wasserstein1(b, a)).epsilon(1e-12));
  CHECK(wasserstein1(a, c) <= wasserstein1(a, b) + wasserstein1(b, c) + 1e-12);
}

TEST_CASE("w1 translation: shifting one set by t costs at most ||t||") {
  RngStream rng(8, 0);
  const Matrix a = random_points(12, rng);
  Matrix shifted = a;
  const double tx = 0.3, ty = -0.4;
  for (std::size_t i = 0; i < 12; ++i) {
    shifted(i, 0) += tx;
    shifted(i, 1) += ty;
  }
  CHECK(wasserstein1(a, shifted) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("w1 rejects mismatched sizes") {
  CHECK_THROWS_AS(wasserstein1(Matrix(3, 2), Matrix(4, 2)), std::invalid_argument);
}

TEST_CASE("subsampled w1 with max_n >= n equals exact and is seed-stable") {
  RngStream rng(9, 0);
  const Matrix a = random_points(30, rng);
  const Matrix b = random_points(30, rng);
  CHECK(wasserstein1_subsampled(a, b, 100, 5) ==
        doctest::Approx(wasserstein1(a, b)).epsilon(1e-12));
  CHECK(wasserstein1_subsampled(a, b, 10, 5) == wasserstein1_subsampled(a, b, 10, 5));
}

TEST_CASE("gaussian summary on a two-point set has a closed form") {
  Matrix pts(2, 2);
  pts(0, 0) = 2.0;
  pts(1, 0) = 0.0;
  const auto [mu, cov] = fit_gaussian_summary(pts);
  CHECK(mu[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mu[1] == doctest::Approx(0.0).epsilon(1e-15));
  // Unbiased covariance of {0, 2} is 2 in the x coordinate.
  CHECK(cov(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(cov(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(cov(1, 1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("gaussian summary matches a two-pass oracle on random samples") {
  RngStream rng(10, 0);
  const Matrix x = random_points(200, rng);
  const auto [mu, cov] = fit_gaussian_summary(x);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    mx += x(i, 0);
    my += x(i, 1);
  }
  mx /= 200.0;
  my /= 200.0;
  double cxx = 0.0, cxy = 0.0, cyy = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    cxx += (x(i, 0) - mx) * (x(i, 0) - mx);
    cxy += (x(i, 0) - mx) * (x(i, 1) - my);
    cyy += (x(i, 1) - my) * (x(i, 1) - my);
  }
  CHECK(std::fabs(mu[0] - mx) <= 1e-10);
  CHECK(std::fabs(mu[1] - my) <= 1e-10);
  CHECK(std::fabs(cov(0, 0) - cxx / 199.0) <= 1e-10);
  CHECK(std::fabs(cov(0, 1) - cxy / 199.0) <= 1e-10);
  CHECK(std::fabs(cov(1, 1) - cyy / 199.0) <= 1e-10);
  CHECK(cov(0, 1) == cov(1, 0));
}

TEST_CASE("jacobi eigensolver reconstructs the input matrix") {
  const Matrix a = Matrix::from_rows({{2.0, 0.5}, {0.5, 1.0}});
  std::vector<double> w;
  Matrix v;
  symmetric_eigen(a, w, v);
  // a == V diag(w) V^T
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 2; ++k) s += v(i, k) * w[k] * v(j, k);
      CHECK(s == doctest::Approx(a(i, j)).epsilon(1e-12));
    }
  // Trace and determinant invariants.
  CHECK(w[0] + w[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(w[0] * w[1] == doctest::Approx(2.0 - 0.25).epsilon(1e-12));
}

TEST_CASE("frechet distance closed forms") {
  // 1-D case embedded in 2-D: N(0, 1) vs N(2, 1) along x gives ||dmu||^2 = 4
  // minus nothing; with equal covariances the trace term vanishes.
  const Matrix eye = Matrix::identity(2);
  CHECK(frechet_distance({0.0, 0.0}, eye, {2.0, 0.0}, eye) ==
        doctest::Approx(4.0).epsilon(1e-9));

  // Diagonal covariances: sum over axes of (sqrt(a_i) - sqrt(b_i))^2.
  Matrix ca(2, 2), cb(2, 2);
  ca(0, 0) = 4.0;
  ca(1, 1) = 1.0;
  cb(0, 0) = 1.0;
  cb(1, 1) = 9.0;
  const double expected = (2.0 - 1.0) * (2.0 - 1.0) + (1.0 - 3.0) * (1.0 - 3.0);
  CHECK(frechet_distance({0.0, 0.0}, ca, {0.0, 0.0}, cb) ==
        doctest::Approx(expected).epsilon(1e-9));

  // Identical distributions: zero (within numerical floor).
  RngStream rng(11, 0);
  const Matrix x = random_points(500, rng);
  const auto [mu, cov] = fit_gaussian_summary(x);
  CHECK(std::fabs(frechet_distance(mu, cov, mu, cov)) <= 1e-9);
}

TEST_CASE("frechet distance is symmetric") {
  RngStream rng(12, 0);
  const auto [mu_p, cov_p] = fit_gaussian_summary(random_points(300, rng));
  const auto [mu_q, cov_q] = fit_gaussian_summary(random_points(300, rng, 2.0));
  const double pq = frechet_distance(mu_p, cov_p, mu_q, cov_q);
  const double qp = frechet_distance(mu_q, cov_q, mu_p, cov_p);
  CHECK(pq == doctest::Approx(qp).epsilon(1e-9));
  CHECK(pq >= 0.0);
}

TEST_CASE("frechet rejects strongly indefinite covariance") {
  Matrix bad(2, 2);
  bad(0, 0) = 1.0;
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(frechet_distance({0, 0}, bad, {0, 0}, Matrix::identity(2)),
                  std::invalid_argument);
}

TEST_CASE("classification accuracy on a hard-wired class head") {
  // Discriminator whose class head always prefers class 2 via the bias.
  DiscriminatorNet d;
  d.in_dim = 2;
  d.num_classes = 4;
  d.trunk.add_layer(2, 4, Activation::LeakyRelu);
  d.real_head.add_layer(4, 1, Activation::Sigmoid);
  d.class_head.add_layer(4, 4, Activation::Softmax);
  d.class_head.layers()[0].b[2] = 5.0;

  Matrix x(6, 2, 0.1);
  std::vector<std::size_t> all_two(6, 2);
  CHECK(classification_accuracy(d, x, all_two) == 1.0);
  std::vector<std::size_t> mixed{2, 2, 2, 0, 1, 3};
  CHECK(classification_accuracy(d, x, mixed) == doctest::Approx(0.5));
}

TEST_CASE("argmax ties resolve to the lowest class index") {
  // Zero-weight head: all class probabilities equal, so argmax must be 0.
  DiscriminatorNet d;
  d.in_dim = 2;
  d.num_classes = 3;
  d.trunk.add_layer(2, 4, Activation::LeakyRelu);
  d.real_head.add_layer(4, 1, Activation::Sigmoid);
  d.class_head.add_layer(4, 3, Activation::Softmax);
  Matrix x(5, 2, 0.3);
  std::vector<std::size_t> zeros(5, 0);
  CHECK(classification_accuracy(d, x, zeros) == 1.0);
  std::vector<std::size_t> ones(5, 1);
  CHECK(classification_accuracy(d, x, ones) == 0.0);
}
