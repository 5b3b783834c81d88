#include "cessl/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cessl {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  key_ = mix64(mix64(seed) ^ mix64(stream_id ^ 0xA5A5A5A5A5A5A5A5ULL));
}

std::uint64_t RngStream::next_u64() {
  return mix64(key_ ^ (counter_++ * 0xD1B54A32D192ED03ULL));
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("next_below: n must be positive");
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double RngStream::next_normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  // Box-Muller; u1 nudged away from 0 so the log is finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_normal_ = true;
  return r * std::cos(theta);
}

RngStream RngStream::split(std::uint64_t key) const {
  return RngStream(seed_, mix64(stream_id_ ^ mix64(key ^ 0x517CC1B727220A95ULL)));
}

Matrix sample_standard_normal(RngStream& rng, std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("sample_standard_normal: empty shape");
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.next_normal();
  return m;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, RngStream& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

}  // namespace cessl
