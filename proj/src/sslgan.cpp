#include "cessl/sslgan.hpp"

#include <cmath>
#include <stdexcept>

namespace cessl {

void TrainBudget::validate() const {
  if (epochs < 1) throw std::invalid_argument("TrainBudget: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("TrainBudget: batch size must be >= 1");
}

namespace {

void check_pair_shapes(const GeneratorNet& g, const DiscriminatorNet& d,
                       const SslDataset& data) {
  if (g.out_dim != d.in_dim)
    throw ShapeError("train_pair: generator output dim != discriminator input dim");
  if (g.out_dim != data.unlabeled_x.cols())
    throw ShapeError("train_pair: generator output dim != data sample dim");
  if (d.num_classes != data.k)
    throw ShapeError("train_pair: discriminator class head width != dataset K");
  if (data.labeled_x.rows() == 0)
    throw std::invalid_argument("train_pair: labeled set must be non-empty");
  if (data.unlabeled_x.rows() == 0)
    throw std::invalid_argument("train_pair: unlabeled set must be non-empty");
}

Matrix vstack(const Matrix& a, const Matrix& b, const Matrix& c) {
  Matrix out(a.rows() + b.rows() + c.rows(), a.cols());
  std::size_t r = 0;
  for (const Matrix* m : {&a, &b, &c})
    for (std::size_t i = 0; i < m->rows(); ++i, ++r)
      for (std::size_t j = 0; j < m->cols(); ++j) out(r, j) = (*m)(i, j);
  return out;
}

struct StepLosses {
  double sup, unsup, total;
};

// One discriminator Adam step over [fake; unlabeled; labeled] as a single
// forward/backward pass through the shared trunk.
StepLosses discriminator_step(const GeneratorNet& g, DiscriminatorNet& d,
                              const Matrix& unlabeled, const Matrix& labeled_x,
                              const Matrix& labeled_y, const AdamConfig& adam,
                              RngStream& rng) {
  const std::size_t b_fake = unlabeled.rows();
  Matrix z = sample_standard_normal(rng, b_fake, g.latent_dim);
  const Matrix fake = g.forward(z);

  const Matrix x = vstack(fake, unlabeled, labeled_x);
  DiscriminatorCache cache;
  const DiscriminatorOut out = d.forward(x, cache);

  std::vector<double> fake_probs(out.real_probs.begin(),
                                 out.real_probs.begin() + static_cast<std::ptrdiff_t>(b_fake));
  std::vector<double> unl_probs(
      out.real_probs.begin() + static_cast<std::ptrdiff_t>(b_fake),
      out.real_probs.begin() + static_cast<std::ptrdiff_t>(b_fake + unlabeled.rows()));
  Matrix labeled_probs(labeled_x.rows(), d.num_classes);
  for (std::size_t r = 0; r < labeled_x.rows(); ++r)
    for (std::size_t c = 0; c < d.num_classes; ++c)
      labeled_probs(r, c) = out.class_probs(b_fake + unlabeled.rows() + r, c);

  const UnsupervisedLoss unsup = discriminator_unsupervised_loss(fake_probs, unl_probs);
  const SupervisedLoss sup = discriminator_supervised_loss(labeled_probs, labeled_y);

  std::vector<double> grad_real(x.rows(), 0.0);
  for (std::size_t i = 0; i < b_fake; ++i) grad_real[i] = unsup.grad_fake[i];
  for (std::size_t i = 0; i < unlabeled.rows(); ++i)
    grad_real[b_fake + i] = unsup.grad_unlabeled[i];
  Matrix grad_class(x.rows(), d.num_classes);
  for (std::size_t r = 0; r < labeled_x.rows(); ++r)
    for (std::size_t c = 0; c < d.num_classes; ++c)
      grad_class(b_fake + unlabeled.rows() + r, c) = sup.grad(r, c);

  DiscriminatorGrads grads;
  d.backward(cache, grad_real, grad_class, grads);
  d.adam_step(grads, adam);
  return {sup.value, unsup.value, discriminator_total_loss(sup.value, unsup.value)};
}

// One generator Adam step; the discriminator is read-only here.
double generator_step(GeneratorNet& g, const DiscriminatorNet& d, std::size_t batch,
                      const AdamConfig& adam, RngStream& rng) {
  Matrix z = sample_standard_normal(rng, batch, g.latent_dim);
  std::vector<ForwardCache> g_cache;
  const Matrix fake = g.net.forward(z, g_cache);

  DiscriminatorCache d_cache;
  const DiscriminatorOut out = d.forward(fake, d_cache);
  const ScalarLoss loss = generator_loss(out.real_probs);

  const Matrix zero_class(fake.rows(), d.num_classes);
  DiscriminatorGrads d_grads;  // discarded; only the input gradient is used
  const Matrix grad_fake = d.backward(d_cache, loss.grad, zero_class, d_grads);

  std::vector<LayerGrad> g_grads;
  g.net.backward(g_cache, grad_fake, g_grads);
  g.net.adam_step(g_grads, adam);
  return loss.value;
}

}  // namespace

std::vector<LossReport> train_pair(GeneratorNet& g, DiscriminatorNet& d,
                                   const SslDataset& data, const TrainBudget& budget,
                                   const AdamConfig& adam, RngStream& rng,
                                   const EpochCallback& on_epoch) {
  budget.validate();
  adam.validate();
  check_pair_shapes(g, d, data);

  const std::size_t n_labeled = data.labeled_x.rows();
  const bool cycle_labeled = n_labeled > static_cast<std::size_t>(budget.batch_size);

  BatchIterator unlabeled_iter(data.unlabeled_x.rows(),
                               static_cast<std::size_t>(budget.batch_size), rng.split(1));
  CyclingBatcher labeled_iter(n_labeled, static_cast<std::size_t>(budget.batch_size),
                              rng.split(2));
  RngStream noise = rng.split(3);

  std::vector<LossReport> trace;
  trace.reserve(static_cast<std::size_t>(budget.epochs));

  LossReport last_finite{};
  for (long epoch = 0; epoch < budget.epochs; ++epoch) {
    const auto batches = unlabeled_iter.next_epoch();
    LossReport epoch_sum{};
    long batch_index = 0;
    for (const auto& idx : batches) {
      const Matrix unl = rows_at(data.unlabeled_x, idx);
      Matrix bl_x = data.labeled_x;
      Matrix bl_y = data.labeled_y;
      if (cycle_labeled) {
        const auto lb = labeled_iter.next_batch();
        bl_x = rows_at(data.labeled_x, lb);
        bl_y = rows_at(data.labeled_y, lb);
      }
      try {
        const StepLosses dl = discriminator_step(g, d, unl, bl_x, bl_y, adam, noise);
        const double gl = generator_step(g, d, idx.size(), adam, noise);
        if (!std::isfinite(dl.total) || !std::isfinite(gl))
          throw TrainingDivergence("non-finite loss", -1);
        epoch_sum.l_d_sup += dl.sup;
        epoch_sum.l_d_unsup += dl.unsup;
        epoch_sum.l_d_total += dl.total;
        epoch_sum.l_g += gl;
      } catch (const TrainingDivergence& e) {
        throw TrainPairDivergence(std::string("training diverged: ") + e.what(), epoch,
                                  batch_index, last_finite);
      }
      ++batch_index;
    }
    const double nb = static_cast<double>(batches.size());
    LossReport rep{epoch_sum.l_g / nb, epoch_sum.l_d_sup / nb, epoch_sum.l_d_unsup / nb,
                   epoch_sum.l_d_total / nb};
    last_finite = rep;
    trace.push_back(rep);
    if (on_epoch) on_epoch(epoch, rep, g, d);
  }
  return trace;
}

std::vector<EvalBatch> make_eval_batches(const SslDataset& data, long n_batches,
                                         long batch_size, RngStream& rng) {
  if (n_batches < 1) throw std::invalid_argument("make_eval_batches: n_batches must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("make_eval_batches: batch size must be >= 1");
  std::vector<EvalBatch> batches;
  batches.reserve(static_cast<std::size_t>(n_batches));
  const std::size_t b = static_cast<std::size_t>(batch_size);
  for (long i = 0; i < n_batches; ++i) {
    EvalBatch eb;
    std::vector<std::size_t> idx(b);
    for (std::size_t j = 0; j < b; ++j)
      idx[j] = static_cast<std::size_t>(rng.next_below(data.unlabeled_x.rows()));
    eb.unlabeled_x = rows_at(data.unlabeled_x, idx);
    eb.labeled_x = data.labeled_x;
    eb.labeled_y = data.labeled_y;
    // A fixed block of normals, truncated to each generator's latent width at
    // evaluation time so all pairs share identical noise.
    eb.z = sample_standard_normal(rng, b, 64);
    batches.push_back(std::move(eb));
  }
  return batches;
}

namespace {

Matrix latent_view(const Matrix& z_block, std::size_t latent_dim) {
  if (latent_dim > z_block.cols())
    throw ShapeError("evaluate: latent dim exceeds shared noise width");
  Matrix z(z_block.rows(), latent_dim);
  for (std::size_t r = 0; r < z.rows(); ++r)
    for (std::size_t c = 0; c < latent_dim; ++c) z(r, c) = z_block(r, c);
  return z;
}

}  // namespace

LossReport evaluate_pair_on_batches(const GeneratorNet& g, const DiscriminatorNet& d,
                                    const std::vector<EvalBatch>& batches) {
  if (batches.empty()) throw std::invalid_argument("evaluate_pair_on_batches: no batches");
  LossReport sum{};
  for (const EvalBatch& eb : batches) {
    const Matrix z = latent_view(eb.z, g.latent_dim);
    const Matrix fake = g.forward(z);
    const DiscriminatorOut on_fake = d.forward(fake);
    const DiscriminatorOut on_unl = d.forward(eb.unlabeled_x);
    const DiscriminatorOut on_lab = d.forward(eb.labeled_x);

    const ScalarLoss gl = generator_loss(on_fake.real_probs);
    const UnsupervisedLoss unsup =
        discriminator_unsupervised_loss(on_fake.real_probs, on_unl.real_probs);
    const SupervisedLoss sup = discriminator_supervised_loss(on_lab.class_probs, eb.labeled_y);

    sum.l_g += gl.value;
    sum.l_d_sup += sup.value;
    sum.l_d_unsup += unsup.value;
    sum.l_d_total += discriminator_total_loss(sup.value, unsup.value);
  }
  const double n = static_cast<double>(batches.size());
  return {sum.l_g / n, sum.l_d_sup / n, sum.l_d_unsup / n, sum.l_d_total / n};
}

LossReport evaluate_pair(const GeneratorNet& g, const DiscriminatorNet& d,
                         const SslDataset& data, long n_batches, long batch_size,
                         RngStream& rng) {
  const auto batches = make_eval_batches(data, n_batches, batch_size, rng);
  return evaluate_pair_on_batches(g, d, batches);
}

}  // namespace cessl
