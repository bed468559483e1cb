#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace walklocus {

// Name and version of the generator; embedded in every report so that a
// change of generator is visible in provenance.
inline constexpr std::string_view kRngName = "philox4x32-10/v1";

// Philox4x32 with 10 rounds (Salmon et al., Random123). Pure function of
// (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

// A counter-based random stream. The 128-bit counter is laid out as
// (block_lo, block_hi, stream_lo, stream_hi) and the key is the 64-bit seed,
// so stream (seed, id) is a pure function of its two identifiers and any
// number of streams can be consumed in any order.
//
// Models std::uniform_random_bit_generator.
class Stream {
 public:
  using result_type = std::uint32_t;

  Stream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = (*this)();
    return (hi << 32) | (*this)();
  }

  // Uniform integer in [0, bound), bound >= 1. Lemire's nearly divisionless
  // rejection method, so the result is exactly uniform.
  std::uint32_t below(std::uint32_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Independent child stream identified by `tag`. Children of equal parents
  // and tags are identical.
  Stream split(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int pos_ = 4;
};

// Stream of replicate `r` of an experiment with the given master seed.
inline Stream replicate_stream(std::uint64_t master_seed, std::uint64_t replicate) {
  return Stream(master_seed, replicate);
}

// Human-readable description of the per-replicate seed derivation rule.
inline constexpr std::string_view kSeedRule =
    "replicate r uses philox4x32-10 key=master_seed, counter=(block, r); "
    "sub-streams via key=splitmix64(key^splitmix64(tag))";

}  // namespace walklocus
