#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"

#include "cessl/runner.hpp"

using namespace cessl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("quantile uses linear interpolation between order statistics") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 1.0) == 4.0);
  CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({5.0}, 0.75) == 5.0);
  CHECK_THROWS_AS(quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("summary stats on a known sample") {
  const SummaryStats s = summarize({3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0});
  CHECK(s.min == 1.0);
  CHECK(s.max == 9.0);
  CHECK(s.median == doctest::Approx(3.5));
  CHECK(s.iqr == doctest::Approx(quantile({3, 1, 4, 1, 5, 9, 2, 6}, 0.75) -
                                 quantile({3, 1, 4, 1, 5, 9, 2, 6}, 0.25)));
  const SummaryStats one = summarize({2.5});
  CHECK(one.iqr == 0.0);
  CHECK(one.median == 2.5);
}

TEST_CASE("rep seeds are distinct and stable") {
  CHECK(derive_rep_seed(1, 0) == derive_rep_seed(1, 0));
  CHECK(derive_rep_seed(1, 0) != derive_rep_seed(1, 1));
  CHECK(derive_rep_seed(1, 0) != derive_rep_seed(2, 0));
  std::set<std::uint64_t> seen;
  for (long rep = 0; rep < 100; ++rep) seen.insert(derive_rep_seed(42, rep));
  CHECK(seen.size() == 100);
}

TEST_CASE("key=value config parsing") {
  TempDir tmp("cessl_cfg_test");
  const fs::path cfg = tmp.path / "run.cfg";
  write_file(cfg,
             "# comment line\n"
             "method = cesslgan\n"
             "seed = 99\n"
             "reps = 4\n"
             "dataset.kind = blob\n"
             "dataset.n_s = 3\n"
             "coevo.mu = 7\n"
             "coevo.lambda = 3\n"
             "coevo.n_t = 5\n"
             "train.batch_size = 64\n"
             "adam.lr = 0.001\n"
             "\n"
             "metrics.w1_samples = 128\n");
  const RunConfig run = parse_run_config(cfg.string());
  CHECK(run.method == "cesslgan");
  CHECK(run.master_seed == 99);
  CHECK(run.reps == 4);
  CHECK(run.dataset.kind == "blob");
  CHECK(run.dataset.n_s == 3);
  CHECK(run.coevo.mu == 7);
  CHECK(run.coevo.lambda == 3);
  CHECK(run.coevo.n_t == 5);
  CHECK(run.batch_size == 64);
  CHECK(run.adam.learning_rate == doctest::Approx(0.001));
  CHECK(run.w1_samples == 128);
  // Untouched keys keep their defaults.
  CHECK(run.hidden == 64);
  CHECK(run.latent_dim == 32);
}

TEST_CASE("unknown config keys are rejected") {
  TempDir tmp("cessl_cfg_bad");
  const fs::path cfg = tmp.path / "bad.cfg";
  write_file(cfg, "coevo.muu = 5\n");
  CHECK_THROWS_AS(parse_run_config(cfg.string()), std::invalid_argument);
}

TEST_CASE("config echo renders every resolved key") {
  RunConfig run;
  run.coevo.mu = 9;
  run.dataset.kind = "blob";
  const std::string text = render_config(run);
  CHECK(text.find("coevo.mu = 9") != std::string::npos);
  CHECK(text.find("dataset.kind = blob") != std::string::npos);
  CHECK(text.find("adam.lr = ") != std::string::npos);
  // The echo must itself be parseable and round-trip the values.
  TempDir tmp("cessl_cfg_echo");
  const fs::path cfg = tmp.path / "echo.cfg";
  write_file(cfg, text);
  const RunConfig back = parse_run_config(cfg.string());
  CHECK(back.coevo.mu == 9);
  CHECK(back.dataset.kind == "blob");
}

TEST_CASE("presets override reps and budget rule") {
  RunConfig run;
  apply_preset(run, "paper");
  CHECK(run.reps == 30);
  CHECK(run.budget_per_lambda == 300);
  apply_preset(run, "desk");
  CHECK(run.reps == 5);
  CHECK(run.budget_per_lambda == 100);
  CHECK_THROWS_AS(apply_preset(run, "bogus"), std::invalid_argument);
}

TEST_CASE("automatic budget scales with lambda") {
  RunConfig run;
  run.coevo.lambda = 3;
  run.budget_per_lambda = 300;
  CHECK(run.effective_budget() == 900);
  run.budget = 123;
  CHECK(run.effective_budget() == 123);
  run.budget = 0;
  run.method = "sslgan";
  CHECK(run.effective_budget() == 300);
}

TEST_CASE("mu/lambda sweep combos honor the pairing rule") {
  std::vector<std::string> skipped;
  const auto combos = sweep_mu_lambda_combos({3, 5}, {1, 2, 3}, &skipped);
  // lambda <= ceil(mu/2): mu=3 allows 1..2, mu=5 allows 1..3.
  const std::vector<std::pair<std::size_t, std::size_t>> expected{
      {3, 1}, {3, 2}, {5, 1}, {5, 2}, {5, 3}};
  CHECK(combos == expected);
  CHECK(skipped.size() == 1);  // (3,3) dropped

  const auto auto_combos = sweep_mu_lambda_combos({4}, {});
  CHECK(auto_combos == std::vector<std::pair<std::size_t, std::size_t>>{{4, 1}, {4, 2}});
  CHECK_THROWS_AS(sweep_mu_lambda_combos({}, {}), std::invalid_argument);
}

TEST_CASE("dataset config builds the requested pool") {
  DatasetConfig cfg;
  cfg.kind = "ring";
  CHECK(cfg.effective_k() == 10);
  cfg.kind = "blob";
  CHECK(cfg.effective_k() == 8);
  cfg.k = 4;
  CHECK(cfg.effective_k() == 4);

  DatasetConfig small;
  small.kind = "ring";
  small.train_n = 400;
  small.test_n = 80;
  small.n_s = 2;
  const SslDataset ds = build_dataset(small);
  CHECK(ds.k == 10);
  CHECK(ds.n_s == 2);
  CHECK(ds.labeled_x.rows() == 20);
  CHECK(ds.test_x.rows() == 80);

  DatasetConfig bad;
  bad.kind = "nope";
  CHECK_THROWS_AS(build_dataset(bad), std::invalid_argument);
}

TEST_CASE("small experiment writes the full artifact set deterministically") {
  TempDir tmp("cessl_exp_test");
  RunConfig run;
  run.method = "cesslgan";
  run.dataset.train_n = 400;
  run.dataset.test_n = 80;
  run.coevo.mu = 3;
  run.coevo.lambda = 1;
  run.coevo.tau = 2;
  run.coevo.n_t = 1;
  run.coevo.n_e = 2;
  run.budget = 2;
  run.batch_size = 50;
  run.reps = 2;
  run.hidden = 16;
  run.w1_samples = 64;
  run.out_dir = (tmp.path / "a").string();
  const ExperimentResult a = run_experiment(run);
  CHECK(a.reps.size() == 2);

  for (const char* f : {"config.txt", "reps.csv", "summary.csv"})
    CHECK(fs::exists(tmp.path / "a" / f));
  for (const char* f :
       {"trace.csv", "best_generator.ckpt", "best_discriminator.ckpt"}) {
    CHECK(fs::exists(tmp.path / "a" / "rep_000" / f));
    CHECK(fs::exists(tmp.path / "a" / "rep_001" / f));
  }

  const std::string trace = slurp(tmp.path / "a" / "rep_000" / "trace.csv");
  CHECK(trace.rfind("generation,epochs_consumed,best_gen_fitness,", 0) == 0);
  const std::string reps_csv = slurp(tmp.path / "a" / "reps.csv");
  CHECK(reps_csv.find("rep,seed,") == 0);

  // A second identical run reproduces every CSV byte for byte.
  run.out_dir = (tmp.path / "b").string();
  run_experiment(run);
  for (const char* f : {"reps.csv", "summary.csv"})
    CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));
  CHECK(slurp(tmp.path / "a" / "rep_000" / "trace.csv") ==
        slurp(tmp.path / "b" / "rep_000" / "trace.csv"));
}

TEST_CASE("baseline experiment writes the epoch-trace schema") {
  TempDir tmp("cessl_base_test");
  RunConfig run;
  run.method = "sslgan";
  run.dataset.train_n = 400;
  run.dataset.test_n = 80;
  run.budget = 2;
  run.batch_size = 50;
  run.reps = 1;
  run.hidden = 16;
  run.w1_samples = 64;
  run.out_dir = (tmp.path / "base").string();
  const ExperimentResult res = run_experiment(run);
  CHECK(res.reps.size() == 1);
  CHECK(res.accuracy.iqr == 0.0);  // single rep
  CHECK(res.reps[0].epochs_trained == 2);
  const std::string trace = slurp(tmp.path / "base" / "rep_000" / "trace.csv");
  CHECK(trace.rfind("epoch,epochs_consumed,l_g,l_d_sup,l_d_unsup,l_d_total,", 0) == 0);
}

TEST_CASE("experiment rejects unwritable output directories early") {
  RunConfig run;
  run.out_dir = "/proc/definitely/not/writable";
  run.reps = 1;
  run.budget = 1;
  CHECK_THROWS_AS(run_experiment(run), std::runtime_error);
}

TEST_CASE("checkpoint evaluation reproduces the in-run metrics") {
  DatasetConfig cfg;
  cfg.train_n = 400;
  cfg.test_n = 80;
  const SslDataset data = build_dataset(cfg);
  RngStream rng(5, 0);
  const GeneratorNet g = GeneratorNet::make(5, 2, 16, rng);
  const DiscriminatorNet d = DiscriminatorNet::make(2, 10, 16, rng);
  const MetricRecord m1 = evaluate_checkpoints(g, d, data, 64, 9);
  const MetricRecord m2 = evaluate_checkpoints(g, d, data, 64, 9);
  CHECK(m1.accuracy == m2.accuracy);
  CHECK(m1.w1 == m2.w1);
  CHECK(m1.accuracy >= 0.0);
  CHECK(m1.w1 >= 0.0);
}

TEST_CASE("supervised ceiling learns the easy ring task") {
  DatasetConfig cfg;
  cfg.train_n = 1000;
  cfg.test_n = 200;
  const DataPool pool = build_pool(cfg);
  const double ceiling = supervised_ceiling(pool, 100, 100, AdamConfig{}, 3, 32);
  CHECK(ceiling > 0.9);
  CHECK(ceiling <= 1.0);
}
