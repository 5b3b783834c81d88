#pragma once

#include <vector>

#include "cessl/matrix.hpp"

namespace cessl {

// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before any log;
// gradients are zero where the clamp is active.
inline constexpr double kProbClamp = 1e-7;

struct LossReport {
  double l_g = 0.0;
  double l_d_sup = 0.0;
  double l_d_unsup = 0.0;
  double l_d_total = 0.0;
};

struct ScalarLoss {
  double value = 0.0;
  std::vector<double> grad;  // d value / d prob, per batch element
};

struct UnsupervisedLoss {
  double value = 0.0;
  std::vector<double> grad_fake;       // d value / d D_real(fake)
  std::vector<double> grad_unlabeled;  // d value / d D_real(unlabeled)
};

struct SupervisedLoss {
  double value = 0.0;
  Matrix grad;  // d value / d class probs, batch x K
};

// Mean of -log p over the batch; p = D_real(G(z)).
ScalarLoss generator_loss(const std::vector<double>& real_probs_on_fake);

// mean(-log(1 - D_real(fake))) + mean(-log D_real(unlabeled)).
UnsupervisedLoss discriminator_unsupervised_loss(const std::vector<double>& real_probs_on_fake,
                                                 const std::vector<double>& real_probs_on_unlabeled);

// Mean one-hot cross-entropy; labels must be exact one-hot rows.
SupervisedLoss discriminator_supervised_loss(const Matrix& class_probs,
                                             const Matrix& labels_onehot);

double discriminator_total_loss(double sup, double unsup);

}  // namespace cessl
