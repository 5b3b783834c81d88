#include "cessl/network.hpp"

#include <cmath>
#include <cstring>

namespace cessl {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Relu: return "relu";
    case Activation::LeakyRelu: return "leaky_relu";
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Softmax: return "softmax";
  }
  return "?";
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::Identity;
  if (name == "relu") return Activation::Relu;
  if (name == "leaky_relu") return Activation::LeakyRelu;
  if (name == "tanh") return Activation::Tanh;
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "softmax") return Activation::Softmax;
  throw std::invalid_argument("unknown activation: " + name);
}

void AdamConfig::validate() const {
  if (!(learning_rate > 0)) throw std::invalid_argument("adam: learning_rate must be > 0");
  if (!(beta1 >= 0 && beta1 < 1)) throw std::invalid_argument("adam: beta1 out of [0,1)");
  if (!(beta2 >= 0 && beta2 < 1)) throw std::invalid_argument("adam: beta2 out of [0,1)");
  if (!(epsilon > 0)) throw std::invalid_argument("adam: epsilon must be > 0");
}

void FeedForward::add_layer(std::size_t in, std::size_t out, Activation act) {
  if (!layers_.empty() && layers_.back().w.cols() != in)
    throw ShapeError("add_layer: width mismatch with previous layer");
  DenseLayer l;
  l.w = Matrix(in, out);
  l.b.assign(out, 0.0);
  l.act = act;
  l.m_w = Matrix(in, out);
  l.v_w = Matrix(in, out);
  l.m_b.assign(out, 0.0);
  l.v_b.assign(out, 0.0);
  layers_.push_back(std::move(l));
}

void FeedForward::init_weights(RngStream& rng) {
  for (auto& l : layers_) {
    const double fan_in = static_cast<double>(l.w.rows());
    const double fan_out = static_cast<double>(l.w.cols());
    const bool relu_family = l.act == Activation::Relu || l.act == Activation::LeakyRelu;
    const double limit = relu_family ? std::sqrt(6.0 / fan_in)
                                     : std::sqrt(6.0 / (fan_in + fan_out));
    for (double& v : l.w.data()) v = (2.0 * rng.next_double() - 1.0) * limit;
    for (double& v : l.b) v = 0.0;
  }
}

static void apply_activation(const DenseLayer& l, const Matrix& pre, Matrix& out) {
  out = pre;
  switch (l.act) {
    case Activation::Identity:
      break;
    case Activation::Relu:
      for (double& v : out.data()) v = v > 0 ? v : 0.0;
      break;
    case Activation::LeakyRelu:
      for (double& v : out.data()) v = v > 0 ? v : l.leaky_slope * v;
      break;
    case Activation::Tanh:
      for (double& v : out.data()) v = std::tanh(v);
      break;
    case Activation::Sigmoid:
      for (double& v : out.data()) v = 1.0 / (1.0 + std::exp(-v));
      break;
    case Activation::Softmax:
      // Row-wise with max subtraction.
      for (std::size_t r = 0; r < out.rows(); ++r) {
        double* row = out.row_ptr(r);
        double mx = row[0];
        for (std::size_t c = 1; c < out.cols(); ++c) mx = std::max(mx, row[c]);
        double sum = 0.0;
        for (std::size_t c = 0; c < out.cols(); ++c) {
          row[c] = std::exp(row[c] - mx);
          sum += row[c];
        }
        for (std::size_t c = 0; c < out.cols(); ++c) row[c] /= sum;
      }
      break;
  }
}

// dL/d(pre-activation) from dL/d(output).
static Matrix activation_backward(const DenseLayer& l, const ForwardCache& cache,
                                  const Matrix& grad_out) {
  Matrix g = grad_out;
  switch (l.act) {
    case Activation::Identity:
      break;
    case Activation::Relu:
      for (std::size_t i = 0; i < g.size(); ++i)
        if (cache.pre.data()[i] <= 0) g.data()[i] = 0.0;
      break;
    case Activation::LeakyRelu:
      for (std::size_t i = 0; i < g.size(); ++i)
        if (cache.pre.data()[i] <= 0) g.data()[i] *= l.leaky_slope;
      break;
    case Activation::Tanh:
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = cache.out.data()[i];
        g.data()[i] *= 1.0 - y * y;
      }
      break;
    case Activation::Sigmoid:
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = cache.out.data()[i];
        g.data()[i] *= y * (1.0 - y);
      }
      break;
    case Activation::Softmax:
      // Full row Jacobian: dz_i = p_i (g_i - sum_j p_j g_j).
      for (std::size_t r = 0; r < g.rows(); ++r) {
        const double* p = cache.out.row_ptr(r);
        double* gr = g.row_ptr(r);
        double dot = 0.0;
        for (std::size_t c = 0; c < g.cols(); ++c) dot += p[c] * gr[c];
        for (std::size_t c = 0; c < g.cols(); ++c) gr[c] = p[c] * (gr[c] - dot);
      }
      break;
  }
  return g;
}

Matrix FeedForward::forward(const Matrix& x) const {
  std::vector<ForwardCache> cache;
  return forward(x, cache);
}

Matrix FeedForward::forward(const Matrix& x, std::vector<ForwardCache>& cache) const {
  if (layers_.empty()) throw std::logic_error("forward: empty network");
  if (x.cols() != input_dim())
    throw ShapeError("forward: input width " + std::to_string(x.cols()) + " expected " +
                     std::to_string(input_dim()));
  cache.clear();
  cache.resize(layers_.size());
  Matrix cur = x;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const DenseLayer& l = layers_[li];
    ForwardCache& fc = cache[li];
    fc.input = std::move(cur);
    fc.pre = matmul(fc.input, l.w);
    for (std::size_t r = 0; r < fc.pre.rows(); ++r) {
      double* row = fc.pre.row_ptr(r);
      for (std::size_t c = 0; c < fc.pre.cols(); ++c) row[c] += l.b[c];
    }
    apply_activation(l, fc.pre, fc.out);
    cur = fc.out;
  }
  return cur;
}

Matrix FeedForward::backward(const std::vector<ForwardCache>& cache, const Matrix& grad_out,
                             std::vector<LayerGrad>& grads) const {
  if (cache.size() != layers_.size()) throw std::logic_error("backward: cache mismatch");
  grads.clear();
  grads.resize(layers_.size());
  Matrix g = grad_out;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const DenseLayer& l = layers_[li];
    const ForwardCache& fc = cache[li];
    Matrix dpre = activation_backward(l, fc, g);
    LayerGrad& lg = grads[li];
    lg.dw = matmul(transpose(fc.input), dpre);
    lg.db.assign(l.b.size(), 0.0);
    for (std::size_t r = 0; r < dpre.rows(); ++r) {
      const double* row = dpre.row_ptr(r);
      for (std::size_t c = 0; c < dpre.cols(); ++c) lg.db[c] += row[c];
    }
    g = matmul(dpre, transpose(l.w));
  }
  return g;
}

static void adam_update(std::vector<double>& p, std::vector<double>& m, std::vector<double>& v,
                        const std::vector<double>& g, const AdamConfig& cfg, double bc1,
                        double bc2, int layer_index) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(g[i]))
      throw TrainingDivergence("non-finite gradient", layer_index);
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    if (!std::isfinite(p[i]))
      throw TrainingDivergence("non-finite parameter after update", layer_index);
  }
}

void FeedForward::adam_step(const std::vector<LayerGrad>& grads, const AdamConfig& cfg) {
  cfg.validate();
  if (grads.size() != layers_.size()) throw std::logic_error("adam_step: grad count mismatch");
  ++adam_t_;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam_t_));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam_t_));
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    DenseLayer& l = layers_[li];
    const LayerGrad& g = grads[li];
    if (!g.dw.same_shape(l.w) || g.db.size() != l.b.size())
      throw ShapeError("adam_step: gradient shape mismatch");
    adam_update(l.w.data(), l.m_w.data(), l.v_w.data(), g.dw.data(), cfg, bc1, bc2,
                static_cast<int>(li));
    adam_update(l.b, l.m_b, l.v_b, g.db, cfg, bc1, bc2, static_cast<int>(li));
  }
}

std::uint64_t FeedForward::param_hash() const {
  // FNV-1a over the raw parameter bits.
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](const double* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t bits;
      std::memcpy(&bits, &p[i], sizeof bits);
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xFF;
        h *= 1099511628211ULL;
      }
    }
  };
  for (const auto& l : layers_) {
    feed(l.w.data().data(), l.w.size());
    feed(l.b.data(), l.b.size());
  }
  return h;
}

GeneratorNet GeneratorNet::make(std::size_t latent_dim, std::size_t out_dim,
                                std::size_t hidden, RngStream& rng) {
  GeneratorNet g;
  g.latent_dim = latent_dim;
  g.out_dim = out_dim;
  g.net.add_layer(latent_dim, hidden, Activation::Relu);
  g.net.add_layer(hidden, out_dim, Activation::Tanh);
  g.net.init_weights(rng);
  return g;
}

Matrix GeneratorNet::forward(const Matrix& z) const {
  if (z.cols() != latent_dim)
    throw ShapeError("generator: latent width " + std::to_string(z.cols()) + " expected " +
                     std::to_string(latent_dim));
  return net.forward(z);
}

DiscriminatorNet DiscriminatorNet::make(std::size_t in_dim, std::size_t num_classes,
                                        std::size_t hidden, RngStream& rng) {
  DiscriminatorNet d;
  d.in_dim = in_dim;
  d.num_classes = num_classes;
  d.trunk.add_layer(in_dim, hidden, Activation::LeakyRelu);
  d.real_head.add_layer(hidden, 1, Activation::Sigmoid);
  d.class_head.add_layer(hidden, num_classes, Activation::Softmax);
  d.trunk.init_weights(rng);
  d.real_head.init_weights(rng);
  d.class_head.init_weights(rng);
  return d;
}

DiscriminatorOut DiscriminatorNet::forward(const Matrix& x) const {
  DiscriminatorCache cache;
  return forward(x, cache);
}

DiscriminatorOut DiscriminatorNet::forward(const Matrix& x, DiscriminatorCache& cache) const {
  if (x.cols() != in_dim)
    throw ShapeError("discriminator: input width " + std::to_string(x.cols()) + " expected " +
                     std::to_string(in_dim));
  const Matrix features = trunk.forward(x, cache.trunk);
  const Matrix real_out = real_head.forward(features, cache.real_head);
  DiscriminatorOut out;
  out.real_probs.resize(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out.real_probs[r] = real_out(r, 0);
  out.class_probs = class_head.forward(features, cache.class_head);
  return out;
}

Matrix DiscriminatorNet::backward(const DiscriminatorCache& cache,
                                  const std::vector<double>& grad_real,
                                  const Matrix& grad_class, DiscriminatorGrads& grads) const {
  Matrix grad_real_m(grad_real.size(), 1);
  for (std::size_t r = 0; r < grad_real.size(); ++r) grad_real_m(r, 0) = grad_real[r];
  Matrix d_features = real_head.backward(cache.real_head, grad_real_m, grads.real_head);
  const Matrix d_features_cls =
      class_head.backward(cache.class_head, grad_class, grads.class_head);
  axpy(d_features, 1.0, d_features_cls);
  return trunk.backward(cache.trunk, d_features, grads.trunk);
}

void DiscriminatorNet::adam_step(const DiscriminatorGrads& grads, const AdamConfig& cfg) {
  trunk.adam_step(grads.trunk, cfg);
  real_head.adam_step(grads.real_head, cfg);
  class_head.adam_step(grads.class_head, cfg);
}

std::uint64_t DiscriminatorNet::param_hash() const {
  return mix64(trunk.param_hash() ^ mix64(real_head.param_hash()) ^
               mix64(class_head.param_hash() * 0x9E3779B97F4A7C15ULL));
}

}  // namespace cessl
