#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace dagcollapse {

namespace detail {

// SplitMix64 finalizer. Used to derive well-separated engine seeds from
// (seed, stream index) pairs so parallel workers never share a stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// Thin wrapper around mt19937_64 that owns all integer draws made by this
// library. std::uniform_int_distribution is not pinned by the standard and
// differs across implementations, so bounded draws use explicit rejection
// sampling instead. Same seed, same platform-independent sequence.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Unbiased draw from [0, bound), bound > 0. Rejects the low region of
    // the 64-bit range whose size is 2^64 mod bound, then reduces.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    std::size_t index(std::size_t bound) {
        return static_cast<std::size_t>(below(static_cast<std::uint64_t>(bound)));
    }

    double unit() {
        // 53 random bits mapped to [0, 1). Only used for diagnostics, never
        // for anything that must be bit-stable across float environments.
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Fisher-Yates. std::shuffle draws through uniform_int_distribution and
    // is therefore not reproducible across standard libraries.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[index(i)]);
        }
    }

    std::vector<std::uint32_t> permutation(std::size_t n) {
        std::vector<std::uint32_t> p(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = static_cast<std::uint32_t>(i);
        }
        shuffle(p);
        return p;
    }

    // Independent stream for worker/trial `index` under a run seed.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(detail::splitmix64(detail::splitmix64(seed) + index));
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace dagcollapse
