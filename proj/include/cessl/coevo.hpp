#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cessl/data.hpp"
#include "cessl/network.hpp"
#include "cessl/sslgan.hpp"

namespace cessl {

struct CoevoConfig {
  std::size_t mu = 5;
  std::size_t lambda = 2;
  std::size_t tau = 2;
  long n_t = 10;   // training epochs per couple per generation
  long n_e = 4;    // evaluation batches per fitness computation
  long t_b = 600;  // total training-epoch budget

  void validate() const;
  long generations() const;  // floor(t_b / (n_t * lambda))
};

template <class Net>
struct Individual {
  Net net;
  std::uint64_t id = 0;
  long birth_generation = 0;
  bool diverged = false;
};

using GenPopulation = std::vector<Individual<GeneratorNet>>;
using DiscPopulation = std::vector<Individual<DiscriminatorNet>>;

// Lower is better on both sides. The stamp must match the generation the
// table was computed at; stale tables are rejected by consumers.
struct FitnessTable {
  std::vector<double> gen_fitness;
  std::vector<double> disc_fitness;
  long stamp = -1;
};

// All-vs-all fitness on n_e shared batches: generator fitness is the mean
// generator loss against every discriminator, discriminator fitness the mean
// total discriminator loss against every generator. Diverged individuals get
// +inf and are excluded from their adversaries' means.
FitnessTable evaluate_populations(const GenPopulation& gens, const DiscPopulation& discs,
                                  const SslDataset& data, long n_e, long batch_size,
                                  RngStream& rng, long stamp, int workers = 1);

// lambda independent size-tau tournaments (members drawn without replacement
// inside a tournament, with replacement across tournaments); returns winner
// indices.
std::vector<std::size_t> tournament_select(std::size_t pop_size,
                                           const std::vector<double>& fitness,
                                           long fitness_stamp, long current_stamp,
                                           std::size_t lambda, std::size_t tau,
                                           RngStream& rng);

// Uniform random perfect matching: result[i] is the discriminator-offspring
// index coupled with generator offspring i.
std::vector<std::size_t> pair_offspring(std::size_t lambda, RngStream& rng);

// Indices of the mu survivors of a mu+lambda population, best fitness first;
// ties break by lower birth generation, then lower id.
template <class Pop>
std::vector<std::size_t> elitist_replacement(const Pop& pop,
                                             const std::vector<double>& fitness,
                                             std::size_t mu);

struct GenerationRecord {
  long generation = 0;
  long epochs_consumed = 0;
  double best_gen_fitness = 0.0;
  double median_gen_fitness = 0.0;
  double best_disc_fitness = 0.0;
  double median_disc_fitness = 0.0;
  double accuracy = 0.0;
  double w1 = 0.0;
};

struct CoevoResult {
  GeneratorNet best_generator;
  DiscriminatorNet best_discriminator;
  std::vector<GenerationRecord> trace;
  long total_epochs_trained = 0;
  long diverged_offspring = 0;
};

struct CoevoRunParams {
  long batch_size = 100;
  std::size_t latent_dim = 32;
  std::size_t hidden = 64;
  std::size_t w1_samples = 512;
  int workers = 1;
};

CoevoResult run_cesslgan(const CoevoConfig& config, const SslDataset& data,
                         const AdamConfig& adam, const CoevoRunParams& params,
                         RngStream master);

double median_of(std::vector<double> values);

}  // namespace cessl
