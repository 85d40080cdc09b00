#ifndef IDLA_RNG_HPP
#define IDLA_RNG_HPP

#include <array>
#include <cstdint>

namespace idla {

/// Philox4x32-10 counter-based generator keyed by `seed`, with `stream_id`
/// occupying the upper half of the 128-bit counter. Equal (seed, stream_id)
/// pairs reproduce the same sequence; different stream ids address disjoint
/// counter ranges and need no coordination.
class WalkRng {
public:
  using result_type = std::uint64_t;

  explicit WalkRng(std::uint64_t seed = 0, std::uint64_t stream_id = 0)
      : seed_(seed), stream_(stream_id) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  std::uint32_t next_u32() {
    if (lane_ == 4) refill();
    return block_[lane_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  result_type operator()() { return next_u64(); }

  /// Uniform integer in [0, bound) without modulo bias (Lemire's method).
  std::uint32_t uniform_below(std::uint32_t bound) {
    std::uint64_t m = std::uint64_t{next_u32()} * bound;
    auto low = static_cast<std::uint32_t>(m);
    if (low < bound) {
      const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
      while (low < threshold) {
        m = std::uint64_t{next_u32()} * bound;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  /// `bits` uniform random bits (1 <= bits <= 16), drawn from a bit reservoir.
  std::uint32_t next_bits(unsigned bits) {
    if (reservoir_bits_ < bits) {
      reservoir_ = next_u64();
      reservoir_bits_ = 64;
    }
    const auto out = static_cast<std::uint32_t>(reservoir_ & ((std::uint64_t{1} << bits) - 1));
    reservoir_ >>= bits;
    reservoir_bits_ -= bits;
    return out;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Raw Philox4x32-10 block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key);

private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  unsigned lane_ = 4;
  std::uint64_t reservoir_ = 0;
  unsigned reservoir_bits_ = 0;
};

/// Uniform neighbor direction in [0, 2d). Uses the bit reservoir when 2d is a
/// power of two, Lemire rejection otherwise.
class DirectionSampler {
public:
  explicit DirectionSampler(int d) : count_(2U * static_cast<unsigned>(d)) {
    if ((count_ & (count_ - 1)) == 0) {
      while ((1U << bits_) < count_) ++bits_;
    }
  }

  unsigned operator()(WalkRng& rng) const {
    return bits_ ? rng.next_bits(bits_) : rng.uniform_below(count_);
  }

  unsigned count() const { return count_; }

private:
  unsigned count_;
  unsigned bits_ = 0;
};

}  // namespace idla

#endif  // IDLA_RNG_HPP
