#pragma once

#include <cstdint>
#include <random>

namespace qgraph {

// Reproducible random stream, version 1.
//
// Engine: std::mt19937_64 seeded with the 64-bit seed (its output sequence is
// fixed by the C++ standard). Derived quantities avoid the implementation-
// defined std:: distributions:
//   uniform01()  = (x >> 11) * 2^-53                      in [0, 1)
//   below(b)     = rejection sampling on x mod b          in [0, b)
class Rng {
 public:
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace qgraph
