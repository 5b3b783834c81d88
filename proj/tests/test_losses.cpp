#include <cmath>

#include "doctest.h"

#include "cessl/losses.hpp"
#include "cessl/network.hpp"

using namespace cessl;

TEST_CASE("generator loss closed forms") {
  CHECK(generator_loss({1.0, 1.0}).value == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(generator_loss({0.5, 0.5, 0.5}).value == doctest::Approx(std::log(2.0)));
  CHECK(generator_loss({0.9, 0.1}).value ==
        doctest::Approx((-std::log(0.9) - std::log(0.1)) / 2.0));
  CHECK_THROWS_AS(generator_loss({}), std::invalid_argument);
}

TEST_CASE("generator loss gradient is -1/(n p)") {
  const ScalarLoss loss = generator_loss({0.25, 0.8});
  CHECK(loss.grad[0] == doctest::Approx(-1.0 / (2.0 * 0.25)));
  CHECK(loss.grad[1] == doctest::Approx(-1.0 / (2.0 * 0.8)));
}

TEST_CASE("generator loss strictly decreases as any probability increases") {
  const std::vector<double> base{0.3, 0.6, 0.2};
  const double l0 = generator_loss(base).value;
  for (std::size_t i = 0; i < base.size(); ++i) {
    auto probs = base;
    probs[i] += 0.05;
    CHECK(generator_loss(probs).value < l0);
  }
}

TEST_CASE("unsupervised loss closed forms") {
  CHECK(discriminator_unsupervised_loss({0.0}, {1.0}).value ==
        doctest::Approx(0.0).epsilon(1e-6));
  CHECK(discriminator_unsupervised_loss({0.5, 0.5}, {0.5}).value ==
        doctest::Approx(2.0 * std::log(2.0)));
  CHECK(discriminator_unsupervised_loss({0.2}, {0.8}).value ==
        doctest::Approx(-std::log(0.8) - std::log(0.8)));
  CHECK_THROWS_AS(discriminator_unsupervised_loss({}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(discriminator_unsupervised_loss({0.5}, {}), std::invalid_argument);
}

TEST_CASE("supervised loss closed forms") {
  Matrix perfect(2, 3);
  perfect(0, 1) = 1.0;
  perfect(1, 0) = 1.0;
  Matrix labels(2, 3);
  labels(0, 1) = 1.0;
  labels(1, 0) = 1.0;
  CHECK(discriminator_supervised_loss(perfect, labels).value ==
        doctest::Approx(0.0).epsilon(1e-6));

  Matrix uniform(1, 10, 0.1);
  Matrix one_hot(1, 10);
  one_hot(0, 3) = 1.0;
  CHECK(discriminator_supervised_loss(uniform, one_hot).value ==
        doctest::Approx(std::log(10.0)));

  Matrix two(2, 2);
  two(0, 0) = 0.5;
  two(0, 1) = 0.5;
  two(1, 0) = 0.25;
  two(1, 1) = 0.75;
  Matrix y(2, 2);
  y(0, 0) = 1.0;
  y(1, 0) = 1.0;
  CHECK(discriminator_supervised_loss(two, y).value ==
        doctest::Approx((std::log(2.0) + std::log(4.0)) / 2.0));
}

TEST_CASE("supervised loss rejects non-one-hot labels") {
  Matrix probs(1, 3, 1.0 / 3.0);
  Matrix soft(1, 3, 1.0 / 3.0);
  CHECK_THROWS_AS(discriminator_supervised_loss(probs, soft), std::invalid_argument);
  Matrix two_hot(1, 3);
  two_hot(0, 0) = 1.0;
  two_hot(0, 1) = 1.0;
  CHECK_THROWS_AS(discriminator_supervised_loss(probs, two_hot), std::invalid_argument);
}

TEST_CASE("total loss is the exact sum") {
  CHECK(discriminator_total_loss(0.0, 0.0) == 0.0);
  CHECK(discriminator_total_loss(1.0397, 1.3863) == 1.0397 + 1.3863);
  CHECK_THROWS_AS(discriminator_total_loss(std::nan(""), 0.0), std::invalid_argument);
}

TEST_CASE("batch-mean consistency under concatenation") {
  const std::vector<double> a{0.3, 0.7, 0.2};
  const std::vector<double> b{0.9, 0.4};
  std::vector<double> both = a;
  both.insert(both.end(), b.begin(), b.end());
  const double combined = generator_loss(both).value;
  const double weighted =
      (3.0 * generator_loss(a).value + 2.0 * generator_loss(b).value) / 5.0;
  CHECK(std::fabs(combined - weighted) <= 1e-12);
}

TEST_CASE("loss gradients match finite differences at the probability level") {
  const double h = 1e-6;
  SUBCASE("generator") {
    std::vector<double> probs{0.3, 0.8, 0.55};
    const ScalarLoss loss = generator_loss(probs);
    for (std::size_t i = 0; i < probs.size(); ++i) {
      auto up = probs, down = probs;
      up[i] += h;
      down[i] -= h;
      const double fd = (generator_loss(up).value - generator_loss(down).value) / (2 * h);
      CHECK(std::fabs(fd - loss.grad[i]) / std::fabs(fd) <= 1e-4);
    }
  }
  SUBCASE("unsupervised") {
    std::vector<double> fake{0.4, 0.7};
    std::vector<double> unl{0.6};
    const UnsupervisedLoss loss = discriminator_unsupervised_loss(fake, unl);
    for (std::size_t i = 0; i < fake.size(); ++i) {
      auto up = fake, down = fake;
      up[i] += h;
      down[i] -= h;
      const double fd = (discriminator_unsupervised_loss(up, unl).value -
                         discriminator_unsupervised_loss(down, unl).value) /
                        (2 * h);
      CHECK(std::fabs(fd - loss.grad_fake[i]) / std::fabs(fd) <= 1e-4);
    }
    auto up = unl, down = unl;
    up[0] += h;
    down[0] -= h;
    const double fd = (discriminator_unsupervised_loss(fake, up).value -
                       discriminator_unsupervised_loss(fake, down).value) /
                      (2 * h);
    CHECK(std::fabs(fd - loss.grad_unlabeled[0]) / std::fabs(fd) <= 1e-4);
  }
  SUBCASE("supervised") {
    Matrix probs(2, 3);
    probs(0, 0) = 0.5;
    probs(0, 1) = 0.3;
    probs(0, 2) = 0.2;
    probs(1, 0) = 0.1;
    probs(1, 1) = 0.2;
    probs(1, 2) = 0.7;
    Matrix y(2, 3);
    y(0, 0) = 1.0;
    y(1, 2) = 1.0;
    const SupervisedLoss loss = discriminator_supervised_loss(probs, y);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 3; ++c) {
        Matrix up = probs, down = probs;
        up(r, c) += h;
        down(r, c) -= h;
        const double fd = (discriminator_supervised_loss(up, y).value -
                           discriminator_supervised_loss(down, y).value) /
                          (2 * h);
        if (y(r, c) == 1.0) {
          CHECK(std::fabs(fd - loss.grad(r, c)) / std::fabs(fd) <= 1e-4);
        } else {
          CHECK(loss.grad(r, c) == 0.0);
        }
      }
  }
}
