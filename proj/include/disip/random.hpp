#pragma once

#include <cstdint>
#include <random>

namespace disip {

// Mixes a base seed with a stream index so per-iteration generators are
// independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Thin wrapper over mt19937_64. The distributions are hand-rolled so that a
// given seed yields the same draws with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);
  std::size_t index(std::size_t n);    // [0, n), n > 0
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

}  // namespace disip
