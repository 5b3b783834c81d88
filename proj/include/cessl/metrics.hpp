#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cessl/matrix.hpp"
#include "cessl/network.hpp"
#include "cessl/rng.hpp"

namespace cessl {

struct MetricRecord {
  long epoch = 0;
  double accuracy = 0.0;
  double w1 = 0.0;
  double fid = -1.0;  // negative means not computed
};

// Fraction of test samples where argmax of the class head matches the true
// class; argmax ties resolve to the lowest class index.
double classification_accuracy(const DiscriminatorNet& d, const Matrix& test_x,
                               const std::vector<std::size_t>& test_cls);

// Exact minimum-cost assignment of an n x n cost matrix (shortest augmenting
// path); returns the column matched to each row.
std::vector<std::size_t> solve_assignment(const Matrix& cost);

// Exact empirical 1-Wasserstein distance between two equal-size point sets
// in R^2 under Euclidean ground distance.
double wasserstein1(const Matrix& a, const Matrix& b);

// Subsamples both sets (without replacement) to min(|a|, |b|, max_n) before
// the exact computation.
double wasserstein1_subsampled(const Matrix& a, const Matrix& b, std::size_t max_n,
                               std::uint64_t seed);

// ||mu_P - mu_Q||^2 + Tr(S_P + S_Q - 2 (S_P S_Q)^{1/2}), square root via
// eigendecomposition of S_P^{1/2} S_Q S_P^{1/2}. Inputs are symmetrized;
// eigenvalues below -1e-8 are rejected, small negatives clamped to 0.
double frechet_distance(const std::vector<double>& mu_p, const Matrix& cov_p,
                        const std::vector<double>& mu_q, const Matrix& cov_q);

// Sample mean and unbiased sample covariance (symmetrized).
std::pair<std::vector<double>, Matrix> fit_gaussian_summary(const Matrix& samples);

// Jacobi eigendecomposition of a symmetric matrix: a == V diag(w) V^T.
void symmetric_eigen(const Matrix& a, std::vector<double>& eigenvalues, Matrix& eigenvectors);

}  // namespace cessl
