#include "cessl/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cessl {

void MixtureSpec::validate() const {
  if (k < 2) throw std::invalid_argument("MixtureSpec: k must be >= 2");
  if (centers.size() != k || sigmas.size() != k)
    throw std::invalid_argument("MixtureSpec: centers/sigmas size mismatch");
  for (std::size_t i = 0; i < k; ++i) {
    const double margin = 1.0 - 3.0 * sigmas[i];
    if (std::fabs(centers[i][0]) > margin || std::fabs(centers[i][1]) > margin)
      throw std::invalid_argument("MixtureSpec: center too close to [-1,1]^2 edge");
  }
}

namespace {

double clip11(double v) { return std::clamp(v, -1.0, 1.0); }

void sample_pool(const MixtureSpec& spec, std::size_t n, RngStream& rng, Matrix& x,
                 std::vector<std::size_t>& cls) {
  x = Matrix(n, 2);
  cls.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = static_cast<std::size_t>(rng.next_below(spec.k));
    cls[i] = c;
    x(i, 0) = clip11(spec.centers[c][0] + spec.sigmas[c] * rng.next_normal());
    x(i, 1) = clip11(spec.centers[c][1] + spec.sigmas[c] * rng.next_normal());
  }
}

DataPool build_pool(MixtureSpec spec, std::size_t train_n, std::size_t test_n,
                    RngStream& rng) {
  spec.validate();
  DataPool pool;
  pool.spec = std::move(spec);
  RngStream train_rng = rng.split(1);
  RngStream test_rng = rng.split(2);
  sample_pool(pool.spec, train_n, train_rng, pool.train_x, pool.train_cls);
  sample_pool(pool.spec, test_n, test_rng, pool.test_x, pool.test_cls);
  return pool;
}

}  // namespace

DataPool make_ring(std::uint64_t seed, std::size_t k, std::size_t train_n,
                   std::size_t test_n, double radius, double sigma) {
  MixtureSpec spec;
  spec.k = k;
  spec.seed = seed;
  for (std::size_t i = 0; i < k; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
    spec.centers.push_back({radius * std::cos(theta), radius * std::sin(theta)});
    spec.sigmas.push_back(sigma);
  }
  RngStream rng(seed, 0xD474);
  return build_pool(std::move(spec), train_n, test_n, rng);
}

DataPool make_blob(std::uint64_t seed, std::size_t k, std::size_t train_n,
                   std::size_t test_n, double sigma) {
  MixtureSpec spec;
  spec.k = k;
  spec.seed = seed;
  RngStream rng(seed, 0xB10B);
  RngStream center_rng = rng.split(0);
  // Centers stay 3 sigma inside the box; overlap between blobs comes from
  // sigma relative to the box size.
  const double margin = 1.0 - 3.0 * sigma;
  for (std::size_t i = 0; i < k; ++i) {
    spec.centers.push_back({(2.0 * center_rng.next_double() - 1.0) * margin,
                            (2.0 * center_rng.next_double() - 1.0) * margin});
    spec.sigmas.push_back(sigma);
  }
  return build_pool(std::move(spec), train_n, test_n, rng);
}

SslDataset split_ssl(const DataPool& pool, std::size_t n_s, std::uint64_t seed) {
  if (n_s < 1) throw std::invalid_argument("split_ssl: n_s must be >= 1");
  const std::size_t k = pool.spec.k;
  std::vector<std::vector<std::size_t>> by_class(k);
  for (std::size_t i = 0; i < pool.train_cls.size(); ++i)
    by_class[pool.train_cls[i]].push_back(i);
  for (std::size_t c = 0; c < k; ++c)
    if (by_class[c].size() < n_s)
      throw std::invalid_argument("split_ssl: class " + std::to_string(c) +
                                  " has fewer than n_s samples");

  RngStream rng(seed, 0x5B17);
  SslDataset ds;
  ds.k = k;
  ds.n_s = n_s;
  std::vector<bool> is_labeled(pool.train_cls.size(), false);
  for (std::size_t c = 0; c < k; ++c) {
    auto idx = by_class[c];
    const auto order = shuffled_indices(idx.size(), rng);
    for (std::size_t j = 0; j < n_s; ++j) {
      const std::size_t i = idx[order[j]];
      is_labeled[i] = true;
      ds.labeled_pool_idx.push_back(i);
    }
  }
  std::sort(ds.labeled_pool_idx.begin(), ds.labeled_pool_idx.end());

  ds.labeled_x = Matrix(ds.labeled_pool_idx.size(), 2);
  ds.labeled_y = Matrix(ds.labeled_pool_idx.size(), k);
  for (std::size_t r = 0; r < ds.labeled_pool_idx.size(); ++r) {
    const std::size_t i = ds.labeled_pool_idx[r];
    ds.labeled_x(r, 0) = pool.train_x(i, 0);
    ds.labeled_x(r, 1) = pool.train_x(i, 1);
    ds.labeled_y(r, pool.train_cls[i]) = 1.0;
  }

  for (std::size_t i = 0; i < pool.train_cls.size(); ++i)
    if (!is_labeled[i]) ds.unlabeled_pool_idx.push_back(i);
  ds.unlabeled_x = Matrix(ds.unlabeled_pool_idx.size(), 2);
  ds.unlabeled_cls_oracle.resize(ds.unlabeled_pool_idx.size());
  for (std::size_t r = 0; r < ds.unlabeled_pool_idx.size(); ++r) {
    const std::size_t i = ds.unlabeled_pool_idx[r];
    ds.unlabeled_x(r, 0) = pool.train_x(i, 0);
    ds.unlabeled_x(r, 1) = pool.train_x(i, 1);
    ds.unlabeled_cls_oracle[r] = pool.train_cls[i];
  }

  ds.test_x = pool.test_x;
  ds.test_cls = pool.test_cls;
  return ds;
}

BatchIterator::BatchIterator(std::size_t n, std::size_t batch_size, RngStream rng)
    : n_(n), batch_size_(batch_size), rng_(rng) {
  if (n == 0) throw std::invalid_argument("BatchIterator: empty index set");
  if (batch_size == 0) throw std::invalid_argument("BatchIterator: batch size must be >= 1");
}

std::vector<std::vector<std::size_t>> BatchIterator::next_epoch() {
  const auto order = shuffled_indices(n_, rng_);
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < n_; start += batch_size_) {
    const std::size_t end = std::min(start + batch_size_, n_);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  ++epoch_;
  return batches;
}

CyclingBatcher::CyclingBatcher(std::size_t n, std::size_t batch_size, RngStream rng)
    : n_(n), batch_size_(batch_size), rng_(rng) {
  if (n == 0) throw std::invalid_argument("CyclingBatcher: empty pool");
  if (batch_size == 0) throw std::invalid_argument("CyclingBatcher: batch size must be >= 1");
  order_ = shuffled_indices(n_, rng_);
}

std::vector<std::size_t> CyclingBatcher::next_batch() {
  std::vector<std::size_t> batch;
  batch.reserve(batch_size_);
  while (batch.size() < batch_size_) {
    if (pos_ == n_) {
      order_ = shuffled_indices(n_, rng_);
      pos_ = 0;
    }
    batch.push_back(order_[pos_++]);
  }
  return batch;
}

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void export_csv(const SslDataset& ds, const std::string& train_path,
                const std::string& test_path) {
  std::ofstream train(train_path);
  if (!train) throw std::runtime_error("export_csv: cannot open " + train_path);
  train << "x1,x2,class,labeled_flag\n";
  for (std::size_t r = 0; r < ds.labeled_x.rows(); ++r) {
    std::size_t cls = 0;
    for (std::size_t c = 0; c < ds.k; ++c)
      if (ds.labeled_y(r, c) == 1.0) cls = c;
    train << fmt9(ds.labeled_x(r, 0)) << ',' << fmt9(ds.labeled_x(r, 1)) << ',' << cls
          << ",1\n";
  }
  for (std::size_t r = 0; r < ds.unlabeled_x.rows(); ++r)
    train << fmt9(ds.unlabeled_x(r, 0)) << ',' << fmt9(ds.unlabeled_x(r, 1)) << ','
          << ds.unlabeled_cls_oracle[r] << ",0\n";

  std::ofstream test(test_path);
  if (!test) throw std::runtime_error("export_csv: cannot open " + test_path);
  test << "x1,x2,class,labeled_flag\n";
  for (std::size_t r = 0; r < ds.test_x.rows(); ++r)
    test << fmt9(ds.test_x(r, 0)) << ',' << fmt9(ds.test_x(r, 1)) << ',' << ds.test_cls[r]
         << ",1\n";
}

namespace {

struct CsvRow {
  double x1, x2;
  std::size_t cls;
  int labeled;
};

std::vector<CsvRow> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("import_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "x1,x2,class,labeled_flag")
    throw std::runtime_error("import_csv: bad header in " + path);
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    CsvRow row{};
    char comma;
    if (!(ss >> row.x1 >> comma >> row.x2 >> comma >> row.cls >> comma >> row.labeled))
      throw std::runtime_error("import_csv: bad row in " + path + ": " + line);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

SslDataset import_csv(const std::string& train_path, const std::string& test_path) {
  const auto train_rows = read_rows(train_path);
  const auto test_rows = read_rows(test_path);
  if (train_rows.empty() || test_rows.empty())
    throw std::runtime_error("import_csv: empty dataset");

  std::size_t k = 0;
  for (const auto& r : train_rows) k = std::max(k, r.cls + 1);
  for (const auto& r : test_rows) k = std::max(k, r.cls + 1);

  SslDataset ds;
  ds.k = k;
  std::vector<CsvRow> labeled, unlabeled;
  for (const auto& r : train_rows) (r.labeled ? labeled : unlabeled).push_back(r);
  std::vector<std::size_t> per_class(k, 0);
  for (const auto& r : labeled) ++per_class[r.cls];
  ds.n_s = *std::min_element(per_class.begin(), per_class.end());

  ds.labeled_x = Matrix(labeled.size(), 2);
  ds.labeled_y = Matrix(labeled.size(), k);
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    ds.labeled_x(i, 0) = labeled[i].x1;
    ds.labeled_x(i, 1) = labeled[i].x2;
    ds.labeled_y(i, labeled[i].cls) = 1.0;
  }
  ds.unlabeled_x = Matrix(unlabeled.size(), 2);
  ds.unlabeled_cls_oracle.resize(unlabeled.size());
  for (std::size_t i = 0; i < unlabeled.size(); ++i) {
    ds.unlabeled_x(i, 0) = unlabeled[i].x1;
    ds.unlabeled_x(i, 1) = unlabeled[i].x2;
    ds.unlabeled_cls_oracle[i] = unlabeled[i].cls;
  }
  ds.test_x = Matrix(test_rows.size(), 2);
  ds.test_cls.resize(test_rows.size());
  for (std::size_t i = 0; i < test_rows.size(); ++i) {
    ds.test_x(i, 0) = test_rows[i].x1;
    ds.test_x(i, 1) = test_rows[i].x2;
    ds.test_cls[i] = test_rows[i].cls;
  }
  // Pool indices follow file order: labeled rows first, then unlabeled.
  for (std::size_t i = 0; i < labeled.size(); ++i) ds.labeled_pool_idx.push_back(i);
  for (std::size_t i = 0; i < unlabeled.size(); ++i)
    ds.unlabeled_pool_idx.push_back(labeled.size() + i);
  return ds;
}

Matrix rows_at(const Matrix& m, const std::vector<std::size_t>& idx) {
  Matrix out(idx.size(), m.cols());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(idx[r], c);
  return out;
}

}  // namespace cessl
