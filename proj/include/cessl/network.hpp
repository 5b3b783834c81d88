#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cessl/matrix.hpp"
#include "cessl/rng.hpp"

namespace cessl {

enum class Activation { Identity, Relu, LeakyRelu, Tanh, Sigmoid, Softmax };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct AdamConfig {
  double learning_rate = 0.0003;
  // GAN-standard momentum setting (DCGAN convention); beta1 = 0.9 makes the
  // adversarial updates oscillate and slows convergence by several-fold here.
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

// Thrown when a gradient or an updated parameter goes non-finite.
class TrainingDivergence : public std::runtime_error {
 public:
  TrainingDivergence(const std::string& what, int layer_index)
      : std::runtime_error(what), layer_index(layer_index) {}
  int layer_index;
};

// One dense layer plus its Adam moments. Moments travel with the layer on
// copy, so a cloned individual resumes optimization where its parent left off.
struct DenseLayer {
  Matrix w;                   // in x out
  std::vector<double> b;      // out
  Activation act = Activation::Identity;
  double leaky_slope = 0.2;

  Matrix m_w, v_w;
  std::vector<double> m_b, v_b;
};

struct LayerGrad {
  Matrix dw;
  std::vector<double> db;
};

struct ForwardCache {
  Matrix input;
  Matrix pre;   // pre-activation
  Matrix out;   // post-activation
};

// Plain feed-forward stack with exact reverse-mode gradients.
class FeedForward {
 public:
  void add_layer(std::size_t in, std::size_t out, Activation act);

  // He-uniform for ReLU-family layers, Xavier-uniform otherwise.
  void init_weights(RngStream& rng);

  Matrix forward(const Matrix& x) const;
  Matrix forward(const Matrix& x, std::vector<ForwardCache>& cache) const;

  // grad_out is dL/d(last layer activations); returns dL/d(input).
  Matrix backward(const std::vector<ForwardCache>& cache, const Matrix& grad_out,
                  std::vector<LayerGrad>& grads) const;

  void adam_step(const std::vector<LayerGrad>& grads, const AdamConfig& cfg);

  std::size_t input_dim() const { return layers_.empty() ? 0 : layers_.front().w.rows(); }
  std::size_t output_dim() const { return layers_.empty() ? 0 : layers_.back().w.cols(); }

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  std::int64_t adam_steps() const { return adam_t_; }
  void set_adam_steps(std::int64_t t) { adam_t_ = t; }

  std::uint64_t param_hash() const;

 private:
  std::vector<DenseLayer> layers_;
  std::int64_t adam_t_ = 0;
};

// Generator: latent -> hidden (ReLU) -> data (tanh), outputs in [-1, 1].
struct GeneratorNet {
  FeedForward net;
  std::size_t latent_dim = 0;
  std::size_t out_dim = 0;

  static GeneratorNet make(std::size_t latent_dim, std::size_t out_dim,
                           std::size_t hidden, RngStream& rng);

  Matrix forward(const Matrix& z) const;
  std::uint64_t param_hash() const { return net.param_hash(); }
};

struct DiscriminatorOut {
  std::vector<double> real_probs;  // batch
  Matrix class_probs;              // batch x K
};

struct DiscriminatorCache {
  std::vector<ForwardCache> trunk, real_head, class_head;
};

struct DiscriminatorGrads {
  std::vector<LayerGrad> trunk, real_head, class_head;
};

// Two-headed discriminator: shared trunk (LeakyReLU features), a sigmoid
// real/fake head, and a softmax K-class head.
struct DiscriminatorNet {
  FeedForward trunk, real_head, class_head;
  std::size_t in_dim = 0;
  std::size_t num_classes = 0;

  static DiscriminatorNet make(std::size_t in_dim, std::size_t num_classes,
                               std::size_t hidden, RngStream& rng);

  DiscriminatorOut forward(const Matrix& x) const;
  DiscriminatorOut forward(const Matrix& x, DiscriminatorCache& cache) const;

  // grad_real is dL/d(real probs), grad_class dL/d(class probs); either may be
  // all zeros. Returns dL/d(input x).
  Matrix backward(const DiscriminatorCache& cache, const std::vector<double>& grad_real,
                  const Matrix& grad_class, DiscriminatorGrads& grads) const;

  void adam_step(const DiscriminatorGrads& grads, const AdamConfig& cfg);

  std::uint64_t param_hash() const;
};

}  // namespace cessl
