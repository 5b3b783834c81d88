#include "cessl/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cessl/checkpoint.hpp"
#include "cessl/parallel.hpp"
#include "cessl/sslgan.hpp"

namespace fs = std::filesystem;

namespace cessl {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

SummaryStats summarize(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: empty");
  SummaryStats s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.median = quantile(values, 0.5);
  s.iqr = quantile(values, 0.75) - quantile(values, 0.25);
  return s;
}

std::size_t DatasetConfig::effective_k() const {
  if (k != 0) return k;
  return kind == "blob" ? 8 : 10;
}

DataPool build_pool(const DatasetConfig& cfg) {
  if (cfg.kind == "ring")
    return make_ring(cfg.seed, cfg.effective_k(), cfg.train_n, cfg.test_n, cfg.ring_radius,
                     cfg.ring_sigma);
  if (cfg.kind == "blob")
    return make_blob(cfg.seed, cfg.effective_k(), cfg.train_n, cfg.test_n, cfg.blob_sigma);
  throw std::invalid_argument("build_pool: no pool for dataset kind '" + cfg.kind + "'");
}

SslDataset build_dataset(const DatasetConfig& cfg) {
  if (cfg.kind == "csv") {
    if (cfg.csv_train.empty() || cfg.csv_test.empty())
      throw std::invalid_argument("dataset.kind=csv needs dataset.csv_train and dataset.csv_test");
    return import_csv(cfg.csv_train, cfg.csv_test);
  }
  return split_ssl(build_pool(cfg), cfg.n_s, cfg.split_seed);
}

long RunConfig::effective_budget() const {
  if (budget > 0) return budget;
  if (method == "cesslgan") return budget_per_lambda * static_cast<long>(coevo.lambda);
  return budget_per_lambda;
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

void apply_preset(RunConfig& cfg, const std::string& preset) {
  if (preset.empty()) return;
  if (preset == "paper") {
    cfg.reps = 30;
    cfg.budget_per_lambda = 300;
  } else if (preset == "desk") {
    cfg.reps = 5;
    cfg.budget_per_lambda = 100;
  } else {
    throw std::invalid_argument("unknown preset: " + preset);
  }
  cfg.preset = preset;
}

namespace {

template <class T>
void get(const std::map<std::string, std::string>& kv, const std::string& key, T& out) {
  const auto it = kv.find(key);
  if (it == kv.end()) return;
  std::istringstream ss(it->second);
  ss >> out;
  if (ss.fail()) throw std::invalid_argument("config: bad value for " + key);
}

void get(const std::map<std::string, std::string>& kv, const std::string& key,
         std::string& out) {
  const auto it = kv.find(key);
  if (it != kv.end()) out = it->second;
}

}  // namespace

RunConfig config_from_map(const std::map<std::string, std::string>& kv) {
  static const std::set<std::string> known{
      "method",          "seed",
      "reps",            "out",
      "workers",         "preset",
      "dataset.kind",    "dataset.seed",
      "dataset.k",       "dataset.n_s",
      "dataset.train_n", "dataset.test_n",
      "dataset.ring_radius", "dataset.ring_sigma",
      "dataset.blob_sigma",  "dataset.split_seed",
      "dataset.csv_train",   "dataset.csv_test",
      "train.batch_size",    "train.budget",
      "train.budget_per_lambda",
      "adam.lr",         "adam.beta1",
      "adam.beta2",      "adam.epsilon",
      "coevo.mu",        "coevo.lambda",
      "coevo.tau",       "coevo.n_t",
      "coevo.n_e",       "net.latent_dim",
      "net.hidden",      "metrics.w1_samples"};
  for (const auto& [key, value] : kv)
    if (!known.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");

  RunConfig cfg;
  std::string preset;
  get(kv, "preset", preset);
  apply_preset(cfg, preset);

  get(kv, "method", cfg.method);
  get(kv, "seed", cfg.master_seed);
  get(kv, "reps", cfg.reps);
  get(kv, "out", cfg.out_dir);
  get(kv, "workers", cfg.workers);

  get(kv, "dataset.kind", cfg.dataset.kind);
  get(kv, "dataset.seed", cfg.dataset.seed);
  get(kv, "dataset.k", cfg.dataset.k);
  get(kv, "dataset.n_s", cfg.dataset.n_s);
  get(kv, "dataset.train_n", cfg.dataset.train_n);
  get(kv, "dataset.test_n", cfg.dataset.test_n);
  get(kv, "dataset.ring_radius", cfg.dataset.ring_radius);
  get(kv, "dataset.ring_sigma", cfg.dataset.ring_sigma);
  get(kv, "dataset.blob_sigma", cfg.dataset.blob_sigma);
  get(kv, "dataset.split_seed", cfg.dataset.split_seed);
  get(kv, "dataset.csv_train", cfg.dataset.csv_train);
  get(kv, "dataset.csv_test", cfg.dataset.csv_test);

  get(kv, "train.batch_size", cfg.batch_size);
  get(kv, "train.budget", cfg.budget);
  get(kv, "train.budget_per_lambda", cfg.budget_per_lambda);

  get(kv, "adam.lr", cfg.adam.learning_rate);
  get(kv, "adam.beta1", cfg.adam.beta1);
  get(kv, "adam.beta2", cfg.adam.beta2);
  get(kv, "adam.epsilon", cfg.adam.epsilon);

  get(kv, "coevo.mu", cfg.coevo.mu);
  get(kv, "coevo.lambda", cfg.coevo.lambda);
  get(kv, "coevo.tau", cfg.coevo.tau);
  get(kv, "coevo.n_t", cfg.coevo.n_t);
  get(kv, "coevo.n_e", cfg.coevo.n_e);

  get(kv, "net.latent_dim", cfg.latent_dim);
  get(kv, "net.hidden", cfg.hidden);
  get(kv, "metrics.w1_samples", cfg.w1_samples);

  if (cfg.method != "cesslgan" && cfg.method != "sslgan")
    throw std::invalid_argument("config: method must be cesslgan or sslgan");
  return cfg;
}

RunConfig parse_run_config(const std::string& path) {
  return config_from_map(parse_kv_file(path));
}

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string render_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "method = " << cfg.method << '\n';
  out << "seed = " << cfg.master_seed << '\n';
  out << "reps = " << cfg.reps << '\n';
  out << "out = " << cfg.out_dir << '\n';
  out << "workers = " << cfg.workers << '\n';
  out << "preset = " << cfg.preset << '\n';
  out << "dataset.kind = " << cfg.dataset.kind << '\n';
  out << "dataset.seed = " << cfg.dataset.seed << '\n';
  out << "dataset.k = " << cfg.dataset.effective_k() << '\n';
  out << "dataset.n_s = " << cfg.dataset.n_s << '\n';
  out << "dataset.train_n = " << cfg.dataset.train_n << '\n';
  out << "dataset.test_n = " << cfg.dataset.test_n << '\n';
  out << "dataset.ring_radius = " << fmt9(cfg.dataset.ring_radius) << '\n';
  out << "dataset.ring_sigma = " << fmt9(cfg.dataset.ring_sigma) << '\n';
  out << "dataset.blob_sigma = " << fmt9(cfg.dataset.blob_sigma) << '\n';
  out << "dataset.split_seed = " << cfg.dataset.split_seed << '\n';
  out << "dataset.csv_train = " << cfg.dataset.csv_train << '\n';
  out << "dataset.csv_test = " << cfg.dataset.csv_test << '\n';
  out << "train.batch_size = " << cfg.batch_size << '\n';
  out << "train.budget = " << cfg.effective_budget() << '\n';
  out << "train.budget_per_lambda = " << cfg.budget_per_lambda << '\n';
  out << "adam.lr = " << fmt9(cfg.adam.learning_rate) << '\n';
  out << "adam.beta1 = " << fmt9(cfg.adam.beta1) << '\n';
  out << "adam.beta2 = " << fmt9(cfg.adam.beta2) << '\n';
  out << "adam.epsilon = " << fmt9(cfg.adam.epsilon) << '\n';
  out << "coevo.mu = " << cfg.coevo.mu << '\n';
  out << "coevo.lambda = " << cfg.coevo.lambda << '\n';
  out << "coevo.tau = " << cfg.coevo.tau << '\n';
  out << "coevo.n_t = " << cfg.coevo.n_t << '\n';
  out << "coevo.n_e = " << cfg.coevo.n_e << '\n';
  out << "net.latent_dim = " << cfg.latent_dim << '\n';
  out << "net.hidden = " << cfg.hidden << '\n';
  out << "metrics.w1_samples = " << cfg.w1_samples << '\n';
  return out.str();
}

std::uint64_t derive_rep_seed(std::uint64_t master_seed, long rep) {
  return mix64(mix64(master_seed) ^ mix64(static_cast<std::uint64_t>(rep) + 1));
}

namespace {

Matrix real_pool_matrix(const SslDataset& data) {
  Matrix all(data.unlabeled_x.rows() + data.labeled_x.rows(), 2);
  std::size_t r = 0;
  for (std::size_t i = 0; i < data.unlabeled_x.rows(); ++i, ++r)
    for (std::size_t c = 0; c < 2; ++c) all(r, c) = data.unlabeled_x(i, c);
  for (std::size_t i = 0; i < data.labeled_x.rows(); ++i, ++r)
    for (std::size_t c = 0; c < 2; ++c) all(r, c) = data.labeled_x(i, c);
  return all;
}

double generator_w1(const GeneratorNet& g, const Matrix& real_pool, std::size_t w1_samples,
                    RngStream& rng) {
  const std::size_t n = std::min<std::size_t>(w1_samples, real_pool.rows());
  Matrix z = sample_standard_normal(rng, n, g.latent_dim);
  const Matrix fake = g.forward(z);
  return wasserstein1_subsampled(fake, real_pool, n, rng.next_u64());
}

RepResult run_one_rep(const RunConfig& cfg, const SslDataset& data, long rep,
                      const std::string& rep_dir) {
  RepResult res;
  res.rep = rep;
  res.seed = derive_rep_seed(cfg.master_seed, rep);
  res.dir = rep_dir;
  fs::create_directories(rep_dir);

  const Matrix real_pool = real_pool_matrix(data);
  std::ofstream trace(rep_dir + "/trace.csv");
  if (!trace) throw std::runtime_error("run_experiment: cannot write " + rep_dir);

  RngStream master(res.seed, 0);

  if (cfg.method == "cesslgan") {
    CoevoConfig cc = cfg.coevo;
    cc.t_b = cfg.effective_budget();
    CoevoRunParams params;
    params.batch_size = cfg.batch_size;
    params.latent_dim = cfg.latent_dim;
    params.hidden = cfg.hidden;
    params.w1_samples = cfg.w1_samples;
    params.workers = 1;  // parallelism lives at the rep level
    const CoevoResult result = run_cesslgan(cc, data, cfg.adam, params, master);

    trace << "generation,epochs_consumed,best_gen_fitness,median_gen_fitness,"
             "best_disc_fitness,median_disc_fitness,accuracy,w1\n";
    for (const auto& rec : result.trace)
      trace << rec.generation << ',' << rec.epochs_consumed << ','
            << fmt9(rec.best_gen_fitness) << ',' << fmt9(rec.median_gen_fitness) << ','
            << fmt9(rec.best_disc_fitness) << ',' << fmt9(rec.median_disc_fitness) << ','
            << fmt9(rec.accuracy) << ',' << fmt9(rec.w1) << '\n';

    res.final_accuracy = result.trace.back().accuracy;
    res.final_w1 = result.trace.back().w1;
    res.epochs_trained = result.total_epochs_trained;
    res.generations = cc.generations();
    res.diverged = result.diverged_offspring > 0;
    save_generator(result.best_generator, rep_dir + "/best_generator.ckpt", res.seed);
    save_discriminator(result.best_discriminator, rep_dir + "/best_discriminator.ckpt",
                       res.seed);
  } else {
    RngStream init_g = master.split(0x1);
    RngStream init_d = master.split(0x2);
    RngStream train_rng = master.split(0x3);
    GeneratorNet g = GeneratorNet::make(cfg.latent_dim, 2, cfg.hidden, init_g);
    DiscriminatorNet d = DiscriminatorNet::make(2, data.k, cfg.hidden, init_d);

    trace << "epoch,epochs_consumed,l_g,l_d_sup,l_d_unsup,l_d_total,accuracy,w1\n";
    double last_acc = 0.0, last_w1 = 0.0;
    const auto on_epoch = [&](long epoch, const LossReport& rep_loss, const GeneratorNet& gg,
                              const DiscriminatorNet& dd) {
      RngStream metric_rng = master.split(mix64(0x9000) ^ static_cast<std::uint64_t>(epoch));
      last_acc = classification_accuracy(dd, data.test_x, data.test_cls);
      last_w1 = cfg.w1_samples > 0 ? generator_w1(gg, real_pool, cfg.w1_samples, metric_rng)
                                   : 0.0;
      trace << (epoch + 1) << ',' << (epoch + 1) << ',' << fmt9(rep_loss.l_g) << ','
            << fmt9(rep_loss.l_d_sup) << ',' << fmt9(rep_loss.l_d_unsup) << ','
            << fmt9(rep_loss.l_d_total) << ',' << fmt9(last_acc) << ',' << fmt9(last_w1)
            << '\n';
    };

    TrainBudget budget{cfg.effective_budget(), cfg.batch_size};
    try {
      train_pair(g, d, data, budget, cfg.adam, train_rng, on_epoch);
      res.final_accuracy = last_acc;
      res.final_w1 = last_w1;
    } catch (const TrainPairDivergence& e) {
      res.diverged = true;
      trace << "# diverged at epoch " << e.epoch << " batch " << e.batch << '\n';
      res.final_accuracy = last_acc;
      res.final_w1 = last_w1;
    }
    res.epochs_trained = budget.epochs;
    save_generator(g, rep_dir + "/best_generator.ckpt", res.seed);
    save_discriminator(d, rep_dir + "/best_discriminator.ckpt", res.seed);
  }
  return res;
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& cfg) {
  if (cfg.reps < 1) throw std::invalid_argument("run_experiment: reps must be >= 1");
  fs::create_directories(cfg.out_dir);
  {
    std::ofstream probe(cfg.out_dir + "/config.txt");
    if (!probe) throw std::runtime_error("run_experiment: output dir not writable: " + cfg.out_dir);
    probe << render_config(cfg);
  }

  const SslDataset data = build_dataset(cfg.dataset);

  ExperimentResult result;
  result.out_dir = cfg.out_dir;
  result.reps.resize(static_cast<std::size_t>(cfg.reps));
  parallel_for(static_cast<std::size_t>(cfg.reps), cfg.workers, [&](std::size_t r) {
    char name[32];
    std::snprintf(name, sizeof name, "rep_%03zu", r);
    result.reps[r] = run_one_rep(cfg, data, static_cast<long>(r), cfg.out_dir + "/" + name);
  });

  std::ofstream reps_csv(cfg.out_dir + "/reps.csv");
  reps_csv << "rep,seed,final_accuracy,final_w1,epochs_trained,generations,diverged\n";
  std::vector<double> accs, w1s;
  for (const auto& r : result.reps) {
    reps_csv << r.rep << ',' << r.seed << ',' << fmt9(r.final_accuracy) << ','
             << fmt9(r.final_w1) << ',' << r.epochs_trained << ',' << r.generations << ','
             << (r.diverged ? 1 : 0) << '\n';
    if (!r.diverged) {
      accs.push_back(r.final_accuracy);
      w1s.push_back(r.final_w1);
    }
  }
  if (accs.empty())
    throw std::runtime_error("run_experiment: all repetitions diverged");
  result.accuracy = summarize(accs);
  result.w1 = summarize(w1s);

  std::ofstream summary(cfg.out_dir + "/summary.csv");
  summary << "metric,min,median,iqr,max\n";
  summary << "accuracy," << fmt9(result.accuracy.min) << ',' << fmt9(result.accuracy.median)
          << ',' << fmt9(result.accuracy.iqr) << ',' << fmt9(result.accuracy.max) << '\n';
  summary << "w1," << fmt9(result.w1.min) << ',' << fmt9(result.w1.median) << ','
          << fmt9(result.w1.iqr) << ',' << fmt9(result.w1.max) << '\n';
  return result;
}

std::vector<std::pair<std::size_t, std::size_t>> sweep_mu_lambda_combos(
    const std::vector<std::size_t>& mus, const std::vector<std::size_t>& lambdas,
    std::vector<std::string>* skipped) {
  if (mus.empty()) throw std::invalid_argument("sweep: need at least one mu");
  std::vector<std::pair<std::size_t, std::size_t>> combos;
  for (std::size_t mu : mus) {
    const std::size_t lambda_cap = (mu + 1) / 2;
    if (lambdas.empty()) {
      for (std::size_t l = 1; l <= lambda_cap; ++l) combos.emplace_back(mu, l);
    } else {
      for (std::size_t l : lambdas) {
        if (l >= 1 && l <= lambda_cap) {
          combos.emplace_back(mu, l);
        } else if (skipped) {
          skipped->push_back("mu=" + std::to_string(mu) + " lambda=" + std::to_string(l) +
                             ": lambda must be in [1, ceil(mu/2)]");
        }
      }
    }
  }
  return combos;
}

SweepResult run_sweep(const SweepSpec& sweep, const RunConfig& base) {
  if (sweep.mus.empty() || sweep.n_ts.empty() || sweep.n_ss.empty())
    throw std::invalid_argument("run_sweep: empty sweep list");
  SweepResult result;
  result.out_dir = base.out_dir;
  fs::create_directories(base.out_dir);

  const auto combos = sweep_mu_lambda_combos(sweep.mus, sweep.lambdas, &result.skipped);

  for (std::size_t n_s : sweep.n_ss) {
    for (const auto& [mu, lambda] : combos) {
      for (long n_t : sweep.n_ts) {
        RunConfig cfg = base;
        cfg.method = "cesslgan";
        cfg.coevo.mu = mu;
        cfg.coevo.lambda = lambda;
        cfg.coevo.tau = std::min(base.coevo.tau, mu);
        cfg.coevo.n_t = n_t;
        cfg.dataset.n_s = n_s;
        cfg.budget = 0;
        SweepEntry entry;
        entry.name = "cesslgan_mu" + std::to_string(mu) + "_lam" + std::to_string(lambda) +
                     "_nt" + std::to_string(n_t) + "_ns" + std::to_string(n_s);
        cfg.out_dir = base.out_dir + "/" + entry.name;
        entry.method = "cesslgan";
        entry.mu = mu;
        entry.lambda = lambda;
        entry.n_t = n_t;
        entry.n_s = n_s;
        entry.budget = cfg.effective_budget();
        CoevoConfig cc = cfg.coevo;
        cc.t_b = entry.budget;
        entry.generations = cc.generations();
        try {
          entry.result = run_experiment(cfg);
        } catch (const std::exception& e) {
          result.skipped.push_back(entry.name + ": failed: " + e.what());
          continue;
        }
        result.entries.push_back(std::move(entry));
      }
    }
    if (sweep.include_baseline) {
      RunConfig cfg = base;
      cfg.method = "sslgan";
      cfg.dataset.n_s = n_s;
      cfg.budget = 0;
      SweepEntry entry;
      entry.name = "sslgan_ns" + std::to_string(n_s);
      cfg.out_dir = base.out_dir + "/" + entry.name;
      entry.method = "sslgan";
      entry.n_s = n_s;
      entry.budget = cfg.effective_budget();
      try {
        entry.result = run_experiment(cfg);
        result.entries.push_back(std::move(entry));
      } catch (const std::exception& e) {
        result.skipped.push_back(entry.name + ": failed: " + e.what());
      }
    }
  }

  std::ofstream index(base.out_dir + "/index.csv");
  index << "name,method,mu,lambda,n_t,n_s,budget,generations,dir\n";
  for (const auto& e : result.entries)
    index << e.name << ',' << e.method << ',' << e.mu << ',' << e.lambda << ',' << e.n_t
          << ',' << e.n_s << ',' << e.budget << ',' << e.generations << ','
          << e.result.out_dir << '\n';

  std::ofstream comparison(base.out_dir + "/comparison.csv");
  comparison << "name,method,mu,lambda,n_t,n_s,acc_min,acc_median,acc_iqr,acc_max,"
                "w1_min,w1_median,w1_iqr,w1_max\n";
  for (const auto& e : result.entries)
    comparison << e.name << ',' << e.method << ',' << e.mu << ',' << e.lambda << ',' << e.n_t
               << ',' << e.n_s << ',' << fmt9(e.result.accuracy.min) << ','
               << fmt9(e.result.accuracy.median) << ',' << fmt9(e.result.accuracy.iqr) << ','
               << fmt9(e.result.accuracy.max) << ',' << fmt9(e.result.w1.min) << ','
               << fmt9(e.result.w1.median) << ',' << fmt9(e.result.w1.iqr) << ','
               << fmt9(e.result.w1.max) << '\n';

  if (!result.skipped.empty()) {
    std::ofstream log(base.out_dir + "/skipped.log");
    for (const auto& s : result.skipped) log << s << '\n';
  }
  return result;
}

double supervised_ceiling(const DataPool& pool, long epochs, long batch_size,
                          const AdamConfig& adam, std::uint64_t seed, std::size_t hidden) {
  const std::size_t k = pool.spec.k;
  RngStream rng(seed, 0xCE11);
  FeedForward clf;
  clf.add_layer(2, hidden, Activation::LeakyRelu);
  clf.add_layer(hidden, k, Activation::Softmax);
  {
    RngStream init = rng.split(0);
    clf.init_weights(init);
  }
  Matrix labels(pool.train_x.rows(), k);
  for (std::size_t i = 0; i < pool.train_cls.size(); ++i)
    labels(i, pool.train_cls[i]) = 1.0;

  BatchIterator batches(pool.train_x.rows(), static_cast<std::size_t>(batch_size),
                        rng.split(1));
  double best = 0.0;
  for (long epoch = 0; epoch < epochs; ++epoch) {
    for (const auto& idx : batches.next_epoch()) {
      const Matrix x = rows_at(pool.train_x, idx);
      const Matrix y = rows_at(labels, idx);
      std::vector<ForwardCache> cache;
      const Matrix probs = clf.forward(x, cache);
      const SupervisedLoss loss = discriminator_supervised_loss(probs, y);
      std::vector<LayerGrad> grads;
      clf.backward(cache, loss.grad, grads);
      clf.adam_step(grads, adam);
    }
    const Matrix probs = clf.forward(pool.test_x);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < probs.rows(); ++r) {
      std::size_t bestc = 0;
      for (std::size_t c = 1; c < k; ++c)
        if (probs(r, c) > probs(r, bestc)) bestc = c;
      if (bestc == pool.test_cls[r]) ++hits;
    }
    best = std::max(best, static_cast<double>(hits) / static_cast<double>(probs.rows()));
  }
  return best;
}

MetricRecord evaluate_checkpoints(const GeneratorNet& g, const DiscriminatorNet& d,
                                  const SslDataset& data, std::size_t w1_samples,
                                  std::uint64_t seed) {
  MetricRecord rec;
  rec.accuracy = classification_accuracy(d, data.test_x, data.test_cls);
  const Matrix real_pool = real_pool_matrix(data);
  RngStream rng(seed, 0xE7A1);
  rec.w1 = generator_w1(g, real_pool, w1_samples, rng);
  return rec;
}

}  // namespace cessl
