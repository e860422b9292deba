#include "hawkscan/rng.hpp"

#include <cmath>

namespace hawkscan {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox::Block Philox::block(const Block& counter,
                            std::array<std::uint32_t, 2> key) {
  Block c = counter;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ key[0], lo1, hi0 ^ c[3] ^ key[1], lo0};
  }
  return c;
}

Philox::Philox(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream) {}

void Philox::refill() {
  const Block ctr{static_cast<std::uint32_t>(counter_),
                  static_cast<std::uint32_t>(counter_ >> 32),
                  static_cast<std::uint32_t>(stream_),
                  static_cast<std::uint32_t>(stream_ >> 32)};
  buffer_ = block(ctr, key_);
  ++counter_;
  used_ = 0;
}

Philox::result_type Philox::operator()() {
  if (used_ > 2) refill();
  const std::uint64_t out =
      (static_cast<std::uint64_t>(buffer_[static_cast<std::size_t>(used_)])
       << 32) |
      buffer_[static_cast<std::size_t>(used_ + 1)];
  used_ += 2;
  return out;
}

double Philox::uniform() {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double Philox::exponential() { return -std::log(uniform()); }

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // Stream id with the top bit set keeps these draws apart from the
  // simulator's own substreams.
  Philox gen(master, index | (std::uint64_t{1} << 63));
  return gen();
}

}  // namespace hawkscan
