#include "cessl/coevo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cessl/metrics.hpp"
#include "cessl/parallel.hpp"

namespace cessl {

void CoevoConfig::validate() const {
  if (lambda < 1 || lambda > mu)
    throw std::invalid_argument("CoevoConfig: need 1 <= lambda <= mu");
  if (tau < 1 || tau > mu) throw std::invalid_argument("CoevoConfig: need 1 <= tau <= mu");
  if (n_t < 1) throw std::invalid_argument("CoevoConfig: n_t must be >= 1");
  if (n_e < 1) throw std::invalid_argument("CoevoConfig: n_e must be >= 1");
  if (t_b < n_t * static_cast<long>(lambda))
    throw std::invalid_argument("CoevoConfig: budget below one generation (T_B >= n_t*lambda)");
}

long CoevoConfig::generations() const {
  return t_b / (n_t * static_cast<long>(lambda));
}

FitnessTable evaluate_populations(const GenPopulation& gens, const DiscPopulation& discs,
                                  const SslDataset& data, long n_e, long batch_size,
                                  RngStream& rng, long stamp, int workers) {
  if (gens.empty() || discs.empty())
    throw std::invalid_argument("evaluate_populations: empty population");
  const auto batches = make_eval_batches(data, n_e, batch_size, rng);

  const std::size_t ng = gens.size();
  const std::size_t nd = discs.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> l_g(ng * nd, kInf);
  std::vector<double> l_d(ng * nd, kInf);

  parallel_for(ng * nd, workers, [&](std::size_t idx) {
    const std::size_t i = idx / nd;
    const std::size_t j = idx % nd;
    if (gens[i].diverged || discs[j].diverged) return;
    const LossReport rep = evaluate_pair_on_batches(gens[i].net, discs[j].net, batches);
    l_g[idx] = rep.l_g;
    l_d[idx] = rep.l_d_total;
  });

  FitnessTable table;
  table.stamp = stamp;
  table.gen_fitness.assign(ng, kInf);
  table.disc_fitness.assign(nd, kInf);
  for (std::size_t i = 0; i < ng; ++i) {
    if (gens[i].diverged) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < nd; ++j) {
      if (discs[j].diverged) continue;
      sum += l_g[i * nd + j];
      ++count;
    }
    if (count > 0) table.gen_fitness[i] = sum / static_cast<double>(count);
  }
  for (std::size_t j = 0; j < nd; ++j) {
    if (discs[j].diverged) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < ng; ++i) {
      if (gens[i].diverged) continue;
      sum += l_d[i * nd + j];
      ++count;
    }
    if (count > 0) table.disc_fitness[j] = sum / static_cast<double>(count);
  }
  return table;
}

std::vector<std::size_t> tournament_select(std::size_t pop_size,
                                           const std::vector<double>& fitness,
                                           long fitness_stamp, long current_stamp,
                                           std::size_t lambda, std::size_t tau,
                                           RngStream& rng) {
  if (fitness.size() != pop_size)
    throw std::invalid_argument("tournament_select: fitness size mismatch");
  if (fitness_stamp != current_stamp)
    throw std::logic_error("tournament_select: stale fitness table");
  if (tau < 1 || tau > pop_size)
    throw std::invalid_argument("tournament_select: need 1 <= tau <= population size");
  std::vector<std::size_t> winners;
  winners.reserve(lambda);
  std::vector<std::size_t> pool(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) pool[i] = i;
  for (std::size_t t = 0; t < lambda; ++t) {
    // Partial Fisher-Yates: first tau entries become the tournament draw.
    for (std::size_t j = 0; j < tau; ++j) {
      const std::size_t r = j + static_cast<std::size_t>(rng.next_below(pop_size - j));
      std::swap(pool[j], pool[r]);
    }
    std::size_t best = pool[0];
    for (std::size_t j = 1; j < tau; ++j)
      if (fitness[pool[j]] < fitness[best]) best = pool[j];
    winners.push_back(best);
  }
  return winners;
}

std::vector<std::size_t> pair_offspring(std::size_t lambda, RngStream& rng) {
  if (lambda == 0) throw std::invalid_argument("pair_offspring: empty offspring");
  return shuffled_indices(lambda, rng);
}

namespace {

template <class Pop>
std::vector<std::size_t> survivors(const Pop& pop, const std::vector<double>& fitness,
                                   std::size_t mu) {
  if (fitness.size() != pop.size())
    throw std::logic_error("elitist_replacement: missing fitness entries");
  if (mu > pop.size()) throw std::invalid_argument("elitist_replacement: mu exceeds population");
  std::vector<std::size_t> order(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (fitness[a] != fitness[b]) return fitness[a] < fitness[b];
    if (pop[a].birth_generation != pop[b].birth_generation)
      return pop[a].birth_generation < pop[b].birth_generation;
    return pop[a].id < pop[b].id;
  });
  order.resize(mu);
  return order;
}

}  // namespace

template <class Pop>
std::vector<std::size_t> elitist_replacement(const Pop& pop, const std::vector<double>& fitness,
                                             std::size_t mu) {
  return survivors(pop, fitness, mu);
}

template std::vector<std::size_t> elitist_replacement<GenPopulation>(
    const GenPopulation&, const std::vector<double>&, std::size_t);
template std::vector<std::size_t> elitist_replacement<DiscPopulation>(
    const DiscPopulation&, const std::vector<double>&, std::size_t);

double median_of(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median_of: empty");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

template <class Pop>
void keep(Pop& pop, const std::vector<std::size_t>& idx) {
  Pop out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(std::move(pop[i]));
  pop = std::move(out);
}

void filter_fitness(std::vector<double>& f, const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(f[i]);
  f = std::move(out);
}

Matrix real_sample_pool(const SslDataset& data) {
  Matrix all(data.unlabeled_x.rows() + data.labeled_x.rows(), 2);
  std::size_t r = 0;
  for (std::size_t i = 0; i < data.unlabeled_x.rows(); ++i, ++r) {
    all(r, 0) = data.unlabeled_x(i, 0);
    all(r, 1) = data.unlabeled_x(i, 1);
  }
  for (std::size_t i = 0; i < data.labeled_x.rows(); ++i, ++r) {
    all(r, 0) = data.labeled_x(i, 0);
    all(r, 1) = data.labeled_x(i, 1);
  }
  return all;
}

}  // namespace

CoevoResult run_cesslgan(const CoevoConfig& config, const SslDataset& data,
                         const AdamConfig& adam, const CoevoRunParams& params,
                         RngStream master) {
  config.validate();
  adam.validate();
  const long iota = config.generations();

  CoevoResult result;
  const Matrix real_pool = real_sample_pool(data);

  GenPopulation gens;
  DiscPopulation discs;
  std::uint64_t next_id = 1;
  for (std::size_t i = 0; i < config.mu; ++i) {
    RngStream init_g = master.split(0x10000 + i);
    RngStream init_d = master.split(0x20000 + i);
    gens.push_back({GeneratorNet::make(params.latent_dim, 2, params.hidden, init_g),
                    next_id++, 0, false});
    discs.push_back({DiscriminatorNet::make(2, data.k, params.hidden, init_d), next_id++, 0,
                     false});
  }

  RngStream eval0 = master.split(0x30000);
  FitnessTable fitness = evaluate_populations(gens, discs, data, config.n_e,
                                              params.batch_size, eval0, 0, params.workers);

  for (long gen = 1; gen <= iota; ++gen) {
    if (gens.size() != config.mu || discs.size() != config.mu)
      throw std::logic_error("run_cesslgan: population size drifted");

    // Generator and discriminator selection use independent sub-streams.
    RngStream sel_g = master.split(mix64(0x40000) ^ static_cast<std::uint64_t>(gen));
    RngStream sel_d = master.split(mix64(0x50000) ^ static_cast<std::uint64_t>(gen));
    RngStream pairing = master.split(mix64(0x60000) ^ static_cast<std::uint64_t>(gen));

    const auto g_parents = tournament_select(gens.size(), fitness.gen_fitness, fitness.stamp,
                                             gen - 1, config.lambda, config.tau, sel_g);
    const auto d_parents = tournament_select(discs.size(), fitness.disc_fitness,
                                             fitness.stamp, gen - 1, config.lambda,
                                             config.tau, sel_d);

    GenPopulation g_off;
    DiscPopulation d_off;
    for (std::size_t i = 0; i < config.lambda; ++i) {
      g_off.push_back({gens[g_parents[i]].net, next_id++, gen, false});
      d_off.push_back({discs[d_parents[i]].net, next_id++, gen, false});
    }
    const auto matching = pair_offspring(config.lambda, pairing);

    parallel_for(config.lambda, params.workers, [&](std::size_t i) {
      RngStream couple_rng = master.split(
          mix64(0x70000 ^ static_cast<std::uint64_t>(gen)) ^ static_cast<std::uint64_t>(i));
      TrainBudget budget{config.n_t, params.batch_size};
      try {
        train_pair(g_off[i].net, d_off[matching[i]].net, data, budget, adam, couple_rng);
      } catch (const TrainPairDivergence&) {
        g_off[i].diverged = true;
        d_off[matching[i]].diverged = true;
      }
    });
    for (const auto& o : g_off)
      if (o.diverged) ++result.diverged_offspring;
    result.total_epochs_trained += config.n_t * static_cast<long>(config.lambda);

    for (auto& o : g_off) gens.push_back(std::move(o));
    for (auto& o : d_off) discs.push_back(std::move(o));
    if (gens.size() != config.mu + config.lambda || discs.size() != config.mu + config.lambda)
      throw std::logic_error("run_cesslgan: mu+lambda size check failed");

    RngStream eval_rng = master.split(mix64(0x80000) ^ static_cast<std::uint64_t>(gen));
    fitness = evaluate_populations(gens, discs, data, config.n_e, params.batch_size, eval_rng,
                                   gen, params.workers);

    const auto g_survivors = elitist_replacement(gens, fitness.gen_fitness, config.mu);
    const auto d_survivors = elitist_replacement(discs, fitness.disc_fitness, config.mu);
    keep(gens, g_survivors);
    keep(discs, d_survivors);
    filter_fitness(fitness.gen_fitness, g_survivors);
    filter_fitness(fitness.disc_fitness, d_survivors);

    GenerationRecord rec;
    rec.generation = gen;
    rec.epochs_consumed = result.total_epochs_trained;
    rec.best_gen_fitness = *std::min_element(fitness.gen_fitness.begin(),
                                             fitness.gen_fitness.end());
    rec.median_gen_fitness = median_of(fitness.gen_fitness);
    rec.best_disc_fitness = *std::min_element(fitness.disc_fitness.begin(),
                                              fitness.disc_fitness.end());
    rec.median_disc_fitness = median_of(fitness.disc_fitness);

    const std::size_t best_g = static_cast<std::size_t>(
        std::min_element(fitness.gen_fitness.begin(), fitness.gen_fitness.end()) -
        fitness.gen_fitness.begin());
    const std::size_t best_d = static_cast<std::size_t>(
        std::min_element(fitness.disc_fitness.begin(), fitness.disc_fitness.end()) -
        fitness.disc_fitness.begin());
    rec.accuracy = classification_accuracy(discs[best_d].net, data.test_x, data.test_cls);
    if (params.w1_samples > 0) {
      RngStream w1_rng = master.split(mix64(0x90000) ^ static_cast<std::uint64_t>(gen));
      const std::size_t n =
          std::min<std::size_t>(params.w1_samples, real_pool.rows());
      Matrix z = sample_standard_normal(w1_rng, n, gens[best_g].net.latent_dim);
      const Matrix fake = gens[best_g].net.forward(z);
      rec.w1 = wasserstein1_subsampled(fake, real_pool, n, w1_rng.next_u64());
    }
    result.trace.push_back(rec);
  }

  const std::size_t best_g = static_cast<std::size_t>(
      std::min_element(fitness.gen_fitness.begin(), fitness.gen_fitness.end()) -
      fitness.gen_fitness.begin());
  const std::size_t best_d = static_cast<std::size_t>(
      std::min_element(fitness.disc_fitness.begin(), fitness.disc_fitness.end()) -
      fitness.disc_fitness.begin());
  result.best_generator = gens[best_g].net;
  result.best_discriminator = discs[best_d].net;
  return result;
}

}  // namespace cessl
