#include "cessl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cessl {

double classification_accuracy(const DiscriminatorNet& d, const Matrix& test_x,
                               const std::vector<std::size_t>& test_cls) {
  if (test_x.rows() == 0) throw std::invalid_argument("classification_accuracy: empty test set");
  if (test_x.rows() != test_cls.size())
    throw std::invalid_argument("classification_accuracy: x/class count mismatch");
  const DiscriminatorOut out = d.forward(test_x);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < test_x.rows(); ++r) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < out.class_probs.cols(); ++c)
      if (out.class_probs(r, c) > out.class_probs(r, best)) best = c;
    if (best == test_cls[r]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test_x.rows());
}

std::vector<std::size_t> solve_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols() || cost.rows() == 0)
    throw std::invalid_argument("solve_assignment: cost matrix must be square and non-empty");
  const std::size_t n = cost.rows();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Successive shortest augmenting paths with dual potentials (1-indexed).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

double wasserstein1(const Matrix& a, const Matrix& b) {
  if (a.rows() == 0 || b.rows() == 0) throw std::invalid_argument("wasserstein1: empty sample");
  if (a.rows() != b.rows())
    throw std::invalid_argument("wasserstein1: sample sizes must match");
  if (a.cols() != b.cols()) throw ShapeError("wasserstein1: dimension mismatch");
  const std::size_t n = a.rows();
  Matrix cost(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < a.cols(); ++c) {
        const double diff = a(i, c) - b(j, c);
        s += diff * diff;
      }
      cost(i, j) = std::sqrt(s);
    }
  const auto match = solve_assignment(cost);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += cost(i, match[i]);
  return total / static_cast<double>(n);
}

namespace {

Matrix subsample(const Matrix& m, std::size_t n, RngStream& rng) {
  if (m.rows() == n) return m;
  auto order = shuffled_indices(m.rows(), rng);
  order.resize(n);
  Matrix out(n, m.cols());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(order[r], c);
  return out;
}

}  // namespace

double wasserstein1_subsampled(const Matrix& a, const Matrix& b, std::size_t max_n,
                               std::uint64_t seed) {
  const std::size_t n = std::min({a.rows(), b.rows(), max_n});
  if (n == 0) throw std::invalid_argument("wasserstein1_subsampled: empty sample");
  RngStream rng_a(seed, 0x5A);
  RngStream rng_b(seed, 0x5B);
  return wasserstein1(subsample(a, n, rng_a), subsample(b, n, rng_b));
}

void symmetric_eigen(const Matrix& a, std::vector<double>& eigenvalues, Matrix& eigenvectors) {
  if (a.rows() != a.cols()) throw std::invalid_argument("symmetric_eigen: matrix not square");
  const std::size_t n = a.rows();
  Matrix m = a;
  eigenvectors = Matrix::identity(n);
  // Cyclic Jacobi rotations.
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(m(p, q)) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double mip = m(i, p), miq = m(i, q);
          m(i, p) = c * mip - s * miq;
          m(i, q) = s * mip + c * miq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double mpi = m(p, i), mqi = m(q, i);
          m(p, i) = c * mpi - s * mqi;
          m(q, i) = s * mpi + c * mqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = eigenvectors(i, p), viq = eigenvectors(i, q);
          eigenvectors(i, p) = c * vip - s * viq;
          eigenvectors(i, q) = s * vip + c * viq;
        }
      }
  }
  eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = m(i, i);
}

namespace {

constexpr double kPsdTolerance = 1e-8;

Matrix symmetrize(const Matrix& a) {
  Matrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

// Symmetric PSD square root; eigenvalues in [-tol, 0) clamp to 0, below -tol
// is an error.
Matrix psd_sqrt(const Matrix& a) {
  std::vector<double> w;
  Matrix v;
  symmetric_eigen(symmetrize(a), w, v);
  for (double& x : w) {
    if (x < -kPsdTolerance)
      throw std::invalid_argument("frechet_distance: covariance not PSD");
    x = std::sqrt(std::max(x, 0.0));
  }
  const std::size_t n = a.rows();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += v(i, k) * w[k] * v(j, k);
      out(i, j) = s;
    }
  return out;
}

double trace(const Matrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

}  // namespace

double frechet_distance(const std::vector<double>& mu_p, const Matrix& cov_p,
                        const std::vector<double>& mu_q, const Matrix& cov_q) {
  const std::size_t n = mu_p.size();
  if (mu_q.size() != n || cov_p.rows() != n || cov_p.cols() != n || cov_q.rows() != n ||
      cov_q.cols() != n)
    throw std::invalid_argument("frechet_distance: dimension mismatch");
  double mean_term = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = mu_p[i] - mu_q[i];
    mean_term += d * d;
  }
  const Matrix sp = symmetrize(cov_p);
  const Matrix sq = symmetrize(cov_q);
  const Matrix sp_half = psd_sqrt(sp);
  const Matrix inner = matmul(matmul(sp_half, sq), sp_half);
  // Tr((S_P S_Q)^{1/2}) via the eigenvalues of the symmetric product form.
  std::vector<double> w;
  Matrix v;
  symmetric_eigen(symmetrize(inner), w, v);
  double tr_sqrt = 0.0;
  for (double x : w) {
    if (x < -kPsdTolerance) throw std::invalid_argument("frechet_distance: product not PSD");
    tr_sqrt += std::sqrt(std::max(x, 0.0));
  }
  const double result = mean_term + trace(sp) + trace(sq) - 2.0 * tr_sqrt;
  return std::max(result, 0.0);
}

std::pair<std::vector<double>, Matrix> fit_gaussian_summary(const Matrix& samples) {
  const std::size_t n = samples.rows();
  if (n < 2) throw std::invalid_argument("fit_gaussian_summary: need at least two samples");
  const std::size_t d = samples.cols();
  std::vector<double> mu(d, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) mu[c] += samples(r, c);
  for (double& x : mu) x /= static_cast<double>(n);
  Matrix cov(d, d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < d; ++i) {
      const double di = samples(r, i) - mu[i];
      for (std::size_t j = 0; j < d; ++j) cov(i, j) += di * (samples(r, j) - mu[j]);
    }
  for (double& x : cov.data()) x /= static_cast<double>(n - 1);
  return {std::move(mu), symmetrize(cov)};
}

}  // namespace cessl
