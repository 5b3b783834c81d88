#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cessl/coevo.hpp"
#include "cessl/data.hpp"
#include "cessl/metrics.hpp"
#include "cessl/network.hpp"

namespace cessl {

struct SummaryStats {
  double min = 0.0, median = 0.0, iqr = 0.0, max = 0.0;
};

SummaryStats summarize(std::vector<double> values);
double quantile(std::vector<double> values, double q);

struct DatasetConfig {
  std::string kind = "ring";  // ring | blob | csv
  std::uint64_t seed = 7;
  std::size_t k = 0;  // 0 -> kind default (ring 10, blob 8)
  std::size_t n_s = 1;
  std::size_t train_n = 10000;
  std::size_t test_n = 1000;
  double ring_radius = 0.75;
  double ring_sigma = 0.05;
  double blob_sigma = 0.09;
  std::uint64_t split_seed = 101;
  std::string csv_train, csv_test;

  std::size_t effective_k() const;
};

DataPool build_pool(const DatasetConfig& cfg);
SslDataset build_dataset(const DatasetConfig& cfg);

struct RunConfig {
  std::string method = "cesslgan";  // cesslgan | sslgan
  DatasetConfig dataset;
  AdamConfig adam;
  CoevoConfig coevo;
  long batch_size = 100;
  long budget = 0;             // explicit T_B (or T for sslgan); 0 -> auto
  long budget_per_lambda = 300;  // auto rule: T_B = this * lambda (sslgan: lambda=1)
  long reps = 30;
  std::uint64_t master_seed = 1;
  std::string out_dir = "results/run";
  int workers = 1;
  std::size_t latent_dim = 32;
  std::size_t hidden = 64;
  std::size_t w1_samples = 512;
  std::string preset;

  long effective_budget() const;
};

std::map<std::string, std::string> parse_kv_file(const std::string& path);
RunConfig config_from_map(const std::map<std::string, std::string>& kv);
RunConfig parse_run_config(const std::string& path);
void apply_preset(RunConfig& cfg, const std::string& preset);
std::string render_config(const RunConfig& cfg);

std::uint64_t derive_rep_seed(std::uint64_t master_seed, long rep);

struct RepResult {
  long rep = 0;
  std::uint64_t seed = 0;
  double final_accuracy = 0.0;
  double final_w1 = 0.0;
  long epochs_trained = 0;
  long generations = 0;
  bool diverged = false;
  std::string dir;
};

struct ExperimentResult {
  std::vector<RepResult> reps;
  SummaryStats accuracy;
  SummaryStats w1;
  std::string out_dir;
};

ExperimentResult run_experiment(const RunConfig& config);

struct SweepSpec {
  std::vector<std::size_t> mus;
  std::vector<std::size_t> lambdas;  // empty -> 1 .. ceil(mu/2)
  std::vector<long> n_ts;
  std::vector<std::size_t> n_ss;
  bool include_baseline = true;
};

// (mu, lambda) pairs passing the lambda <= ceil(mu/2) rule.
std::vector<std::pair<std::size_t, std::size_t>> sweep_mu_lambda_combos(
    const std::vector<std::size_t>& mus, const std::vector<std::size_t>& lambdas,
    std::vector<std::string>* skipped = nullptr);

struct SweepEntry {
  std::string name;
  std::string method;
  std::size_t mu = 0, lambda = 0;
  long n_t = 0;
  std::size_t n_s = 0;
  long budget = 0;
  long generations = 0;
  ExperimentResult result;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  std::vector<std::string> skipped;
  std::string out_dir;
};

SweepResult run_sweep(const SweepSpec& sweep, const RunConfig& base);

// Test accuracy ceiling of a plain classifier trained on the fully labeled
// training pool; the best epoch's test accuracy is returned.
double supervised_ceiling(const DataPool& pool, long epochs, long batch_size,
                          const AdamConfig& adam, std::uint64_t seed,
                          std::size_t hidden = 64);

MetricRecord evaluate_checkpoints(const GeneratorNet& g, const DiscriminatorNet& d,
                                  const SslDataset& data, std::size_t w1_samples,
                                  std::uint64_t seed);

}  // namespace cessl
