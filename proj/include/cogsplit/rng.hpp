#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cogsplit::rng {

// All randomness in the tool flows through mt19937_64 plus the helpers below.
// mt19937_64 is fully specified by the C++ standard; std::shuffle and
// std::uniform_int_distribution are not, so splits would stop reproducing
// across standard libraries if we used them. Golden tests freeze outputs.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent substream for unit `tag` of a seeded run (per-story cuts,
// generator fields). Stable: substream(s, t) is part of the file contract.
inline uint64_t substream(uint64_t seed, uint64_t tag) {
    return splitmix64(seed ^ splitmix64(tag + 1));
}

// Unbiased draw in [0, n) by rejection.
inline uint64_t bounded(std::mt19937_64& gen, uint64_t n) {
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
        const uint64_t r = gen();
        if (r >= threshold) return r % n;
    }
}

// Fisher-Yates, high index down, swap partner drawn with bounded().
template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& gen) {
    for (size_t i = values.size(); i > 1; --i) {
        const size_t j = static_cast<size_t>(bounded(gen, i));
        std::swap(values[i - 1], values[j]);
    }
}

template <typename T>
void shuffle_seeded(std::vector<T>& values, uint64_t seed) {
    std::mt19937_64 gen(seed);
    shuffle(values, gen);
}

}  // namespace cogsplit::rng
