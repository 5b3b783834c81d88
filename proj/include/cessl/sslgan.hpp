#pragma once

#include <functional>
#include <vector>

#include "cessl/data.hpp"
#include "cessl/losses.hpp"
#include "cessl/network.hpp"

namespace cessl {

struct TrainBudget {
  long epochs = 1;       // T
  long batch_size = 100; // B_s

  void validate() const;
};

// Carries the position of the first non-finite loss plus the last finite
// per-epoch report seen before it.
class TrainPairDivergence : public std::runtime_error {
 public:
  TrainPairDivergence(const std::string& what, long epoch, long batch,
                      LossReport last_finite)
      : std::runtime_error(what), epoch(epoch), batch(batch), last_finite(last_finite) {}
  long epoch;
  long batch;
  LossReport last_finite;
};

using EpochCallback =
    std::function<void(long epoch, const LossReport&, const GeneratorNet&,
                       const DiscriminatorNet&)>;

// One adversarial training run over `budget.epochs` passes of the unlabeled
// pool. Per batch: discriminator step on fresh noise + unlabeled + labeled,
// then generator step on fresh noise with the discriminator frozen.
// Returns one aggregated LossReport per epoch.
std::vector<LossReport> train_pair(GeneratorNet& g, DiscriminatorNet& d,
                                   const SslDataset& data, const TrainBudget& budget,
                                   const AdamConfig& adam, RngStream& rng,
                                   const EpochCallback& on_epoch = nullptr);

// A fixed bundle of evaluation inputs shared across pairs.
struct EvalBatch {
  Matrix z;
  Matrix unlabeled_x;
  Matrix labeled_x;
  Matrix labeled_y;
};

std::vector<EvalBatch> make_eval_batches(const SslDataset& data, long n_batches,
                                         long batch_size, RngStream& rng);

LossReport evaluate_pair_on_batches(const GeneratorNet& g, const DiscriminatorNet& d,
                                    const std::vector<EvalBatch>& batches);

// Mean LossReport over n_batches freshly drawn batches; no updates.
LossReport evaluate_pair(const GeneratorNet& g, const DiscriminatorNet& d,
                         const SslDataset& data, long n_batches, long batch_size,
                         RngStream& rng);

}  // namespace cessl
