#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace mibridge {

/// A seeded random stream. Streams are identified by a key path
/// (master seed, then any number of sub-stream ids such as replication and
/// chain); the engine state is derived from the whole path through
/// std::seed_seq, so sibling streams never share state and every draw is a
/// function of (key path, call sequence).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);
  explicit RngStream(std::vector<std::uint64_t> key);

  /// Independent child stream keyed by this stream's path plus `id`. Does
  /// not advance this stream.
  RngStream child(std::uint64_t id) const;
  RngStream child(std::initializer_list<std::uint64_t> ids) const;

  const std::vector<std::uint64_t>& key() const { return key_; }

  double standard_normal() { return normal_(engine_); }
  /// Uniform on [0, 1).
  double uniform() { return std::generate_canonical<double, 53>(engine_); }
  /// Gamma with the given shape and unit scale.
  double standard_gamma(double shape);
  double chi_squared(double df) { return 2.0 * standard_gamma(0.5 * df); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::vector<std::uint64_t> key_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace mibridge
