#include "cessl/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace cessl {

namespace {

double clamp_prob(double p) {
  if (p < kProbClamp) return kProbClamp;
  if (p > 1.0 - kProbClamp) return 1.0 - kProbClamp;
  return p;
}

bool clamped(double p) { return p < kProbClamp || p > 1.0 - kProbClamp; }

}  // namespace

ScalarLoss generator_loss(const std::vector<double>& real_probs_on_fake) {
  if (real_probs_on_fake.empty())
    throw std::invalid_argument("generator_loss: empty batch");
  const double n = static_cast<double>(real_probs_on_fake.size());
  ScalarLoss out;
  out.grad.resize(real_probs_on_fake.size(), 0.0);
  for (std::size_t i = 0; i < real_probs_on_fake.size(); ++i) {
    const double p = clamp_prob(real_probs_on_fake[i]);
    out.value += -std::log(p) / n;
    if (!clamped(real_probs_on_fake[i])) out.grad[i] = -1.0 / (n * p);
  }
  return out;
}

UnsupervisedLoss discriminator_unsupervised_loss(
    const std::vector<double>& real_probs_on_fake,
    const std::vector<double>& real_probs_on_unlabeled) {
  if (real_probs_on_fake.empty() || real_probs_on_unlabeled.empty())
    throw std::invalid_argument("discriminator_unsupervised_loss: empty batch");
  UnsupervisedLoss out;
  const double nf = static_cast<double>(real_probs_on_fake.size());
  const double nu = static_cast<double>(real_probs_on_unlabeled.size());
  out.grad_fake.resize(real_probs_on_fake.size(), 0.0);
  out.grad_unlabeled.resize(real_probs_on_unlabeled.size(), 0.0);
  for (std::size_t i = 0; i < real_probs_on_fake.size(); ++i) {
    const double q = clamp_prob(1.0 - real_probs_on_fake[i]);
    out.value += -std::log(q) / nf;
    if (!clamped(1.0 - real_probs_on_fake[i])) out.grad_fake[i] = 1.0 / (nf * q);
  }
  for (std::size_t i = 0; i < real_probs_on_unlabeled.size(); ++i) {
    const double p = clamp_prob(real_probs_on_unlabeled[i]);
    out.value += -std::log(p) / nu;
    if (!clamped(real_probs_on_unlabeled[i])) out.grad_unlabeled[i] = -1.0 / (nu * p);
  }
  return out;
}

SupervisedLoss discriminator_supervised_loss(const Matrix& class_probs,
                                             const Matrix& labels_onehot) {
  if (class_probs.rows() == 0)
    throw std::invalid_argument("discriminator_supervised_loss: empty batch");
  if (!class_probs.same_shape(labels_onehot))
    throw ShapeError("discriminator_supervised_loss: probs/labels shape mismatch");
  const double n = static_cast<double>(class_probs.rows());
  SupervisedLoss out;
  out.grad = Matrix(class_probs.rows(), class_probs.cols());
  for (std::size_t r = 0; r < labels_onehot.rows(); ++r) {
    std::size_t ones = 0;
    std::size_t true_cls = 0;
    for (std::size_t c = 0; c < labels_onehot.cols(); ++c) {
      const double y = labels_onehot(r, c);
      if (y == 1.0) {
        ++ones;
        true_cls = c;
      } else if (y != 0.0) {
        throw std::invalid_argument("discriminator_supervised_loss: label row not one-hot");
      }
    }
    if (ones != 1)
      throw std::invalid_argument("discriminator_supervised_loss: label row not one-hot");
    const double raw = class_probs(r, true_cls);
    const double p = clamp_prob(raw);
    out.value += -std::log(p) / n;
    if (!clamped(raw)) out.grad(r, true_cls) = -1.0 / (n * p);
  }
  return out;
}

double discriminator_total_loss(double sup, double unsup) {
  if (!std::isfinite(sup) || !std::isfinite(unsup))
    throw std::invalid_argument("discriminator_total_loss: non-finite input");
  return sup + unsup;
}

}  // namespace cessl
