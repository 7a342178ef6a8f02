#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace cogsplit {

// Exact train:val:test proportions. Kept as integers ("8:1:1") so quota
// arithmetic is rational and splits are reproducible bit for bit.
struct Ratio {
    uint32_t train = 8;
    uint32_t val = 1;
    uint32_t test = 1;

    uint64_t total() const {
        return static_cast<uint64_t>(train) + val + test;
    }
    bool operator==(const Ratio&) const = default;

    // Parses "R:R:R". Throws BadRatio on malformed input, zero total,
    // or zero train share.
    static Ratio parse(const std::string& text);
    std::string to_string() const;
};

// Sample-level apportionment: val and test get their floor quotas, train
// absorbs every remainder, so test is never inflated past its exact share.
std::array<uint64_t, 3> apportion_samples(uint64_t count, const Ratio& ratio);

// Unit-level apportionment (subjects, stories, story groups): same floors,
// but a partition with a nonzero share is guaranteed at least one unit.
// Requires count >= number of nonzero shares; callers turn a violation into
// their own TooFew* error.
std::array<uint64_t, 3> apportion_units(uint64_t count, const Ratio& ratio);

// Number of partitions with a nonzero share (train is always nonzero).
int nonzero_partitions(const Ratio& ratio);

}  // namespace cogsplit
