#pragma once

#include <cstdint>
#include <cstddef>

#include "cessl/matrix.hpp"

namespace cessl {

// Counter-based splittable random stream. A stream is identified by a
// (seed, stream-id) pair; the output at step n is a strong 64-bit mix of
// the stream key and the counter, so sequences are bit-identical across
// platforms and independent streams can be derived without coordination.
// Normal variates use Box-Muller on the uniform output (the spare value
// is cached, so draws depend on call order within a stream).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double next_double();

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n);

  double next_normal();

  // Derive an independent child stream; deterministic in (this stream's
  // identity, key). Does not consume any state from the parent.
  RngStream split(std::uint64_t key) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

// 64-bit finalizer (SplitMix64); used for stream keying and seed derivation.
std::uint64_t mix64(std::uint64_t x);

Matrix sample_standard_normal(RngStream& rng, std::size_t rows, std::size_t cols);

// Fisher-Yates shuffle of [0, n) index vector.
std::vector<std::size_t> shuffled_indices(std::size_t n, RngStream& rng);

}  // namespace cessl
