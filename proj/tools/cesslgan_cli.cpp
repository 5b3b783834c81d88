#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cessl/checkpoint.hpp"
#include "cessl/runner.hpp"

namespace {

cessl::RunConfig load_config(const std::string& config_path, const std::string& out,
                             std::int64_t seed, long reps, const std::string& preset,
                             int workers) {
  cessl::RunConfig cfg =
      config_path.empty() ? cessl::RunConfig{} : cessl::parse_run_config(config_path);
  if (!preset.empty()) cessl::apply_preset(cfg, preset);
  if (!out.empty()) cfg.out_dir = out;
  if (seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed);
  if (reps > 0) cfg.reps = reps;
  if (workers > 0) cfg.workers = workers;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-supervised GAN training: co-evolutionary (cesslgan) and baseline "
               "(sslgan) experiment runner"};
  app.require_subcommand(1);
  app.fallthrough();  // let global options appear after the subcommand

  std::string config_path, out_dir, preset;
  std::int64_t seed = -1;
  long reps = 0;
  int workers = 0;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--seed", seed, "master seed (overrides config)");
  app.add_option("--reps", reps, "repetitions (overrides config)");
  app.add_option("--preset", preset, "preset: paper or desk")
      ->check(CLI::IsMember({"paper", "desk"}));
  app.add_option("--workers", workers, "parallel workers (overrides config)");

  auto* train = app.add_subcommand("train", "run one experiment configuration");

  auto* sweep = app.add_subcommand("sweep", "run the mu/lambda/n_t/n_s parameter sweep");
  std::vector<std::size_t> sweep_mu{3, 5, 7, 9};
  std::vector<std::size_t> sweep_lambda;  // empty -> 1..ceil(mu/2)
  std::vector<long> sweep_nt{1, 5, 10};
  std::vector<std::size_t> sweep_ns{1};
  bool no_baseline = false;
  sweep->add_option("--mu", sweep_mu, "population sizes");
  sweep->add_option("--lambda", sweep_lambda, "offspring sizes (default: 1..ceil(mu/2))");
  sweep->add_option("--nt", sweep_nt, "training epochs per couple");
  sweep->add_option("--ns", sweep_ns, "labeled samples per class");
  sweep->add_flag("--no-baseline", no_baseline, "skip the sslgan baseline runs");

  auto* eval = app.add_subcommand("eval", "evaluate checkpoints against a dataset");
  std::string gen_path, disc_path;
  eval->add_option("--generator", gen_path, "generator checkpoint")->required();
  eval->add_option("--discriminator", disc_path, "discriminator checkpoint")->required();

  auto* gen_data = app.add_subcommand("gen-data", "emit a dataset as CSV");
  std::string data_out = "dataset";
  gen_data->add_option("--prefix", data_out, "output path prefix (writes <prefix>_train.csv "
                                             "and <prefix>_test.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    cessl::RunConfig cfg = load_config(config_path, out_dir, seed, reps, preset, workers);

    if (*train) {
      const cessl::ExperimentResult result = cessl::run_experiment(cfg);
      std::printf("wrote %s\n", result.out_dir.c_str());
      std::printf("accuracy min/median/iqr/max: %.9g %.9g %.9g %.9g\n", result.accuracy.min,
                  result.accuracy.median, result.accuracy.iqr, result.accuracy.max);
      std::printf("w1       min/median/iqr/max: %.9g %.9g %.9g %.9g\n", result.w1.min,
                  result.w1.median, result.w1.iqr, result.w1.max);
    } else if (*sweep) {
      cessl::SweepSpec spec;
      spec.mus = sweep_mu;
      spec.lambdas = sweep_lambda;
      spec.n_ts = sweep_nt;
      spec.n_ss = sweep_ns;
      spec.include_baseline = !no_baseline;
      const cessl::SweepResult result = cessl::run_sweep(spec, cfg);
      std::printf("wrote %zu runs to %s (%zu skipped)\n", result.entries.size(),
                  result.out_dir.c_str(), result.skipped.size());
    } else if (*eval) {
      const cessl::GeneratorNet g = cessl::load_generator(gen_path);
      const cessl::DiscriminatorNet d = cessl::load_discriminator(disc_path);
      const cessl::SslDataset data = cessl::build_dataset(cfg.dataset);
      const cessl::MetricRecord rec =
          cessl::evaluate_checkpoints(g, d, data, cfg.w1_samples, cfg.master_seed);
      std::printf("accuracy %.9g\nw1 %.9g\n", rec.accuracy, rec.w1);
    } else if (*gen_data) {
      const cessl::SslDataset data = cessl::build_dataset(cfg.dataset);
      cessl::export_csv(data, data_out + "_train.csv", data_out + "_test.csv");
      std::printf("wrote %s_train.csv and %s_test.csv\n", data_out.c_str(), data_out.c_str());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
