// Counter-based pseudo-random generator with explicit stream splitting.
//
// The generator is a keyed SplitMix64 walk: the key is a hash of
// (seed, stream_index), and draw i is finalize(key + i * golden_gamma).
// Output for a given (seed, stream_index, counter) is a pure function of
// those three integers, so estimates are reproducible bit-for-bit and
// sub-streams can be fanned out across threads without coordination.

#pragma once

#include <cstdint>

namespace arakelov {

class SeededSampler {
  public:
    explicit SeededSampler(std::uint64_t seed, std::uint64_t stream_index = 0)
        : seed_(seed), stream_(stream_index),
          key_(derive_key(seed, stream_index)) {}

    std::uint64_t next_u64() { return value_at(counter_++); }

    // Uniform double in [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Independent child stream; children of distinct parents are distinct
    // because the child is keyed by the parent's mixed key.
    SeededSampler split(std::uint64_t index) const {
        SeededSampler child(key_, index + 1);
        return child;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }
    std::uint64_t counter() const { return counter_; }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
        return mix(mix(seed + kGamma) ^ (0xD1342543DE82EF95ULL * (stream + 1)));
    }

    std::uint64_t value_at(std::uint64_t i) const { return mix(key_ + i * kGamma); }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace arakelov
