#pragma once

#include <cstdint>

namespace lexichron {

// Small counter-free generator (SplitMix64). One instance per logical
// stream; streams are derived by hashing a master seed with stream keys,
// so results never depend on the order streams are consumed in.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound) by rejection; unbiased and portable.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

  private:
    std::uint64_t state_;
};

// Stream derivation: feed the key words through one SplitMix64 step each.
// derive_stream(seed, a, b) is the documented per-(branch, item) scheme.
inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t word) {
    SplitMix64 g(seed ^ (word + 0x9E3779B97F4A7C15ULL));
    return g.next_u64();
}

inline SplitMix64 derive_stream(std::uint64_t master, std::uint64_t domain,
                                std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = mix_key(master, domain);
    s = mix_key(s, a);
    s = mix_key(s, b);
    return SplitMix64(s);
}

} // namespace lexichron
