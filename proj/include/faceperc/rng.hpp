#pragma once

#include <cstdint>
#include <limits>

namespace faceperc {

// Counter-based randomness: every draw is a pure function of (key, counter),
// so per-face and per-replicate decisions do not depend on iteration order or
// thread count.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_key(std::uint64_t seed, std::uint64_t a) { return splitmix64(splitmix64(seed) ^ a); }

constexpr std::uint64_t hash_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(hash_key(seed, a) ^ splitmix64(b + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t hash_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return splitmix64(hash_key(seed, a, b) ^ splitmix64(c + 0x8CB92BA72F3D8DD7ULL));
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// A keyed counter stream usable as a UniformRandomBitGenerator.
class CounterStream {
  public:
    using result_type = std::uint64_t;

    explicit CounterStream(std::uint64_t key) : key_(splitmix64(key)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return splitmix64(key_ ^ splitmix64(counter_++)); }
    double uniform() { return to_unit((*this)()); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace faceperc
