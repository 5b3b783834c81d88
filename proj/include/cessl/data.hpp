#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cessl/matrix.hpp"
#include "cessl/rng.hpp"

namespace cessl {

// Gaussian mixture over [-1,1]^2. Centers must keep a 3-sigma margin from
// the box edge so nearly all samples land in range before clipping.
struct MixtureSpec {
  std::size_t k = 0;
  std::vector<std::array<double, 2>> centers;
  std::vector<double> sigmas;
  std::uint64_t seed = 0;

  void validate() const;
};

// Fully labeled sample pool (train + test) drawn from a mixture.
struct DataPool {
  MixtureSpec spec;
  Matrix train_x;                       // n x 2
  std::vector<std::size_t> train_cls;
  Matrix test_x;
  std::vector<std::size_t> test_cls;
};

DataPool make_ring(std::uint64_t seed, std::size_t k = 10, std::size_t train_n = 10000,
                   std::size_t test_n = 1000, double radius = 0.75, double sigma = 0.05);

DataPool make_blob(std::uint64_t seed, std::size_t k = 8, std::size_t train_n = 10000,
                   std::size_t test_n = 1000, double sigma = 0.09);

// Semi-supervised view of a pool: n_s labeled samples per class, the rest of
// the training pool unlabeled. True classes of unlabeled samples are kept
// only for export/oracle use, never consulted in training.
struct SslDataset {
  std::size_t k = 0;
  std::size_t n_s = 0;
  Matrix labeled_x;   // (n_s * k) x 2
  Matrix labeled_y;   // one-hot, (n_s * k) x k
  Matrix unlabeled_x;
  std::vector<std::size_t> unlabeled_cls_oracle;
  Matrix test_x;
  std::vector<std::size_t> test_cls;
  std::vector<std::size_t> labeled_pool_idx;    // partition of the train pool
  std::vector<std::size_t> unlabeled_pool_idx;
};

SslDataset split_ssl(const DataPool& pool, std::size_t n_s, std::uint64_t seed);

// Epoch batching over a fixed-size index set: each epoch is a fresh shuffle
// chunked into batches, every index exactly once (last batch may be short).
class BatchIterator {
 public:
  BatchIterator(std::size_t n, std::size_t batch_size, RngStream rng);
  std::vector<std::vector<std::size_t>> next_epoch();
  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t n_;
  std::size_t batch_size_;
  RngStream rng_;
  std::size_t epoch_ = 0;
};

// Batches of fixed size from a pool smaller or larger than the batch size;
// cycles through reshuffled passes of the pool.
class CyclingBatcher {
 public:
  CyclingBatcher(std::size_t n, std::size_t batch_size, RngStream rng);
  std::vector<std::size_t> next_batch();

 private:
  std::size_t n_;
  std::size_t batch_size_;
  RngStream rng_;
  std::vector<std::size_t> order_;
  std::size_t pos_ = 0;
};

// CSV schema: x1,x2,class,labeled_flag (9 significant digits). The train
// file marks the labeled subset; the test file carries labeled_flag=1.
void export_csv(const SslDataset& ds, const std::string& train_path,
                const std::string& test_path);
SslDataset import_csv(const std::string& train_path, const std::string& test_path);

Matrix rows_at(const Matrix& m, const std::vector<std::size_t>& idx);

}  // namespace cessl
