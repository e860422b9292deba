#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hawkscan {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// A stream is identified by a 64-bit key (the seed) and a 64-bit stream id;
// draws walk a 64-bit counter. Any (seed, stream, position) is addressable
// directly, which is what lets the simulator and the Monte Carlo harness hand
// out disjoint, reproducible substreams without any shared state.
class Philox {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;

  Philox(std::uint64_t seed, std::uint64_t stream);

  // Raw block function on an explicit counter and key.
  static Block block(const Block& counter, std::array<std::uint32_t, 2> key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  // Exponential with unit rate.
  double exponential();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  Block buffer_{};
  int used_ = 4;
};

// Seed of replication `index` derived from a master seed; distinct indices
// give unrelated seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace hawkscan
