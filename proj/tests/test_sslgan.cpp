#include <cmath>

#include "doctest.h"

#include "cessl/sslgan.hpp"

using namespace cessl;

namespace {

SslDataset small_ring(std::uint64_t seed, std::size_t n_s = 1) {
  const DataPool pool = make_ring(seed, 10, 1000, 200);
  return split_ssl(pool, n_s, seed + 1000);
}

// Fresh zero-weight discriminator: every real prob is 0.5, every class row
// uniform, regardless of the input.
DiscriminatorNet zero_discriminator(std::size_t k) {
  DiscriminatorNet d;
  d.in_dim = 2;
  d.num_classes = k;
  d.trunk.add_layer(2, 8, Activation::LeakyRelu);
  d.real_head.add_layer(8, 1, Activation::Sigmoid);
  d.class_head.add_layer(8, k, Activation::Softmax);
  return d;
}

}  // namespace

TEST_CASE("budget validation") {
  TrainBudget bad;
  bad.epochs = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.epochs = 1;
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("evaluation against a zero discriminator hits the closed forms") {
  const SslDataset data = small_ring(3);
  RngStream rng(4, 0);
  GeneratorNet g = GeneratorNet::make(5, 2, 16, rng);
  DiscriminatorNet d = zero_discriminator(10);
  RngStream eval_rng(5, 0);
  const LossReport rep = evaluate_pair(g, d, data, 4, 100, eval_rng);
  // D(x) = 0.5 everywhere: l_g = ln 2, unsup = 2 ln 2, sup = ln 10.
  CHECK(rep.l_g == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(rep.l_d_unsup == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
  CHECK(rep.l_d_sup == doctest::Approx(std::log(10.0)).epsilon(1e-9));
  CHECK(rep.l_d_total == doctest::Approx(rep.l_d_sup + rep.l_d_unsup).epsilon(1e-12));
}

TEST_CASE("evaluation is deterministic and does not mutate the nets") {
  const SslDataset data = small_ring(6);
  RngStream rng(7, 0);
  GeneratorNet g = GeneratorNet::make(5, 2, 16, rng);
  DiscriminatorNet d = DiscriminatorNet::make(2, 10, 16, rng);
  const std::uint64_t gh = g.param_hash();
  const std::uint64_t dh = d.param_hash();

  RngStream e1(9, 0);
  RngStream e2(9, 0);
  const LossReport a = evaluate_pair(g, d, data, 3, 50, e1);
  const LossReport b = evaluate_pair(g, d, data, 3, 50, e2);
  CHECK(a.l_g == b.l_g);
  CHECK(a.l_d_total == b.l_d_total);
  CHECK(g.param_hash() == gh);
  CHECK(d.param_hash() == dh);
}

TEST_CASE("shared eval batches make pair losses comparable") {
  const SslDataset data = small_ring(8);
  RngStream rng(10, 0);
  const GeneratorNet g = GeneratorNet::make(5, 2, 16, rng);
  const DiscriminatorNet d1 = DiscriminatorNet::make(2, 10, 16, rng);
  const DiscriminatorNet d2 = DiscriminatorNet::make(2, 10, 16, rng);

  RngStream batch_rng(11, 0);
  const auto batches = make_eval_batches(data, 4, 50, batch_rng);
  const LossReport r1 = evaluate_pair_on_batches(g, d1, batches);
  const LossReport r1_again = evaluate_pair_on_batches(g, d1, batches);
  const LossReport r2 = evaluate_pair_on_batches(g, d2, batches);
  CHECK(r1.l_g == r1_again.l_g);
  CHECK(r1.l_d_total == r1_again.l_d_total);
  CHECK(r1.l_d_total != r2.l_d_total);
}

TEST_CASE("train_pair returns one report per epoch") {
  const SslDataset data = small_ring(12);
  RngStream rng(13, 0);
  GeneratorNet g = GeneratorNet::make(5, 2, 16, rng);
  DiscriminatorNet d = DiscriminatorNet::make(2, 10, 16, rng);
  TrainBudget budget;
  budget.epochs = 3;
  budget.batch_size = 100;
  RngStream train_rng(14, 0);
  long callbacks = 0;
  const auto reports =
      train_pair(g, d, data, budget, AdamConfig{}, train_rng,
                 [&](long epoch, const LossReport& rep, const GeneratorNet&,
                     const DiscriminatorNet&) {
                   CHECK(epoch == callbacks);
                   CHECK(std::isfinite(rep.l_d_total));
                   ++callbacks;
                 });
  CHECK(reports.size() == 3);
  CHECK(callbacks == 3);
}

TEST_CASE("training changes both networks deterministically") {
  const SslDataset data = small_ring(15);
  auto run = [&](std::uint64_t seed) {
    RngStream rng(seed, 0);
    GeneratorNet g = GeneratorNet::make(5, 2, 16, rng);
    DiscriminatorNet d = DiscriminatorNet::make(2, 10, 16, rng);
    const std::uint64_t g0 = g.param_hash();
    const std::uint64_t d0 = d.param_hash();
    TrainBudget budget;
    budget.epochs = 1;
    RngStream train_rng(seed + 1, 0);
    train_pair(g, d, data, budget, AdamConfig{}, train_rng);
    CHECK(g.param_hash() != g0);
    CHECK(d.param_hash() != d0);
    return std::pair{g.param_hash(), d.param_hash()};
  };
  CHECK(run(20) == run(20));
  CHECK(run(20) != run(21));
}

TEST_CASE("one epoch of training improves the evaluated discriminator loss") {
  // Starting from fresh random nets the first epoch should nearly always cut
  // the discriminator's total loss; require 28 of 30 seeds.
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SslDataset data = small_ring(100 + seed);
    RngStream rng(seed, 0);
    GeneratorNet g = GeneratorNet::make(5, 2, 32, rng);
    DiscriminatorNet d = DiscriminatorNet::make(2, 10, 32, rng);

    RngStream before_rng(777, seed);
    const auto batches = make_eval_batches(data, 4, 100, before_rng);
    const double before = evaluate_pair_on_batches(g, d, batches).l_d_total;

    TrainBudget budget;
    budget.epochs = 1;
    RngStream train_rng(seed + 50, 0);
    train_pair(g, d, data, budget, AdamConfig{}, train_rng);
    const double after = evaluate_pair_on_batches(g, d, batches).l_d_total;
    if (after < before) ++improved;
  }
  CHECK(improved >= 28);
}

TEST_CASE("more evaluation batches reduce estimator variance") {
  const SslDataset data = small_ring(30);
  RngStream rng(31, 0);
  const GeneratorNet g = GeneratorNet::make(5, 2, 16, rng);
  const DiscriminatorNet d = DiscriminatorNet::make(2, 10, 16, rng);

  auto variance_at = [&](long n_e) {
    std::vector<double> vals;
    for (std::uint64_t rep = 0; rep < 40; ++rep) {
      RngStream r(900 + rep, n_e);
      vals.push_back(evaluate_pair(g, d, data, n_e, 50, r).l_d_total);
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    return var / vals.size();
  };
  CHECK(variance_at(8) < variance_at(1));
}

TEST_CASE("training one couple never touches another couple's nets") {
  const SslDataset data = small_ring(40);
  RngStream rng(41, 0);
  GeneratorNet g1 = GeneratorNet::make(5, 2, 16, rng);
  GeneratorNet g2 = g1;
  DiscriminatorNet d1 = DiscriminatorNet::make(2, 10, 16, rng);
  DiscriminatorNet d2 = d1;
  const std::uint64_t g2h = g2.param_hash();
  const std::uint64_t d2h = d2.param_hash();

  TrainBudget budget;
  budget.epochs = 1;
  RngStream train_rng(42, 0);
  train_pair(g1, d1, data, budget, AdamConfig{}, train_rng);
  CHECK(g2.param_hash() == g2h);
  CHECK(d2.param_hash() == d2h);
  CHECK(g1.param_hash() != g2h);
}
