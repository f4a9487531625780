#ifndef MLCC_RNG_HPP_
#define MLCC_RNG_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

namespace mlcc {

/// splitmix64 step: advances the state and returns the scrambled output.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Small deterministic generator used for every seeded decision in the toolkit.
/// Identical seeds give identical streams on every platform.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return splitmix64_next(state_); }

    /// Unbiased-enough draw in [0, bound) via 128-bit multiply-shift.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

/// FNV-1a over the stream tag.
inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derives an independent child seed from a master seed and a stream tag.
/// The derivation is a single splitmix64 step over master XOR hash(tag), so
/// streams depend only on their own tag: adding or removing other streams
/// never perturbs existing ones.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
    std::uint64_t state = master ^ hash_tag(tag);
    return splitmix64_next(state);
}

/// Fisher-Yates shuffle driven by SplitMix64.
template <class T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace mlcc

#endif  // MLCC_RNG_HPP_
