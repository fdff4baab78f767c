#include "mibridge/rng.hpp"

#include <stdexcept>

namespace mibridge {

namespace {

std::mt19937_64 seeded_engine(const std::vector<std::uint64_t>& key) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * key.size() + 1);
  // Path length first so that {a} and {a, 0} differ.
  words.push_back(static_cast<std::uint32_t>(key.size()));
  for (std::uint64_t k : key) {
    words.push_back(static_cast<std::uint32_t>(k & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : RngStream(std::vector<std::uint64_t>{seed}) {}

RngStream::RngStream(std::vector<std::uint64_t> key)
    : key_(std::move(key)), engine_(seeded_engine(key_)) {}

RngStream RngStream::child(std::uint64_t id) const {
  std::vector<std::uint64_t> k = key_;
  k.push_back(id);
  return RngStream(std::move(k));
}

RngStream RngStream::child(std::initializer_list<std::uint64_t> ids) const {
  std::vector<std::uint64_t> k = key_;
  k.insert(k.end(), ids.begin(), ids.end());
  return RngStream(std::move(k));
}

double RngStream::standard_gamma(double shape) {
  if (!(shape > 0.0)) {
    throw std::invalid_argument("gamma shape must be positive");
  }
  return std::gamma_distribution<double>(shape, 1.0)(engine_);
}

std::size_t RngStream::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("index: empty range");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

}  // namespace mibridge
