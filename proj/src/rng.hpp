#ifndef RANKDEC_RNG_HPP
#define RANKDEC_RNG_HPP

#include <cstdint>

namespace rankdec {

// Counter-derived deterministic generator. A (seed, stream) pair fully
// determines the output sequence on every platform, and streams derived
// from distinct indices are statistically independent, so parallel workers
// can be keyed by trial index without coordination.
class SeededRng {
public:
  SeededRng() : SeededRng(0, 0) {}
  SeededRng(std::uint64_t seed, std::uint64_t stream) {
    state_ = mix(seed + 0x9E3779B97F4A7C15ULL);
    state_ ^= mix(stream + 0xD1B54A32D192ED03ULL);
    // decorrelate the low entropy of small (seed, stream) pairs
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // uniform in [0, bound), bound >= 1; unbiased via rejection
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  std::uint32_t next_bit() { return static_cast<std::uint32_t>(next_u64() >> 63); }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

} // namespace rankdec

#endif
