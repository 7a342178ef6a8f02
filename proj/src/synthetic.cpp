#include "cogsplit/synthetic.hpp"

#include <random>
#include <vector>

#include "cogsplit/error.hpp"
#include "cogsplit/rng.hpp"

namespace cogsplit {

const char* exposure_name(Exposure e) {
    switch (e) {
        case Exposure::Complete: return "complete";
        case Exposure::Bernoulli: return "bernoulli";
        case Exposure::DisjointBlocks: return "disjoint";
    }
    return "?";
}

Exposure parse_exposure(const std::string& text) {
    if (text == "complete") return Exposure::Complete;
    if (text == "disjoint") return Exposure::DisjointBlocks;
    if (text.rfind("bernoulli", 0) == 0) return Exposure::Bernoulli;
    throw Error(ErrorCode::BadArgument, "unknown exposure '" + text + "'");
}

namespace {

constexpr int kRetryBound = 100;

std::string subject_label(uint32_t i) { return "S" + std::to_string(i + 1); }
std::string story_label(uint32_t k) { return "M" + std::to_string(k + 1); }

std::string locator(uint32_t i, uint32_t k, uint32_t j) {
    return "synth://" + subject_label(i) + "/" + story_label(k) + "/" + std::to_string(j);
}

// p as a 53-bit draw; avoids std::bernoulli_distribution (not pinned by the
// standard).
bool coin(std::mt19937_64& gen, double p) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53 < p;
}

}  // namespace

DatasetManifest generate(const SynthSpec& spec) {
    if (spec.subjects == 0 || spec.stories == 0 || spec.segments_min == 0) {
        throw Error(ErrorCode::BadManifest, "synthetic counts must be at least 1");
    }
    if (spec.segments_max < spec.segments_min) {
        throw Error(ErrorCode::BadManifest, "segment range is inverted");
    }
    if (spec.exposure == Exposure::Bernoulli &&
        !(spec.bernoulli_p > 0.0 && spec.bernoulli_p <= 1.0)) {
        throw Error(ErrorCode::BadManifest, "bernoulli p must be in (0,1]");
    }

    DatasetManifest manifest;
    std::mt19937_64 segment_gen(rng::substream(spec.seed, 0));
    for (uint32_t k = 0; k < spec.stories; ++k) {
        uint32_t count = spec.segments_min;
        if (spec.segments_max > spec.segments_min) {
            count += static_cast<uint32_t>(
                rng::bounded(segment_gen, spec.segments_max - spec.segments_min + 1));
        }
        manifest.stories.push_back({story_label(k), count});
    }

    // hears[i][k]
    std::vector<std::vector<bool>> hears(spec.subjects,
                                         std::vector<bool>(spec.stories, false));
    switch (spec.exposure) {
        case Exposure::Complete:
            for (auto& row : hears) row.assign(spec.stories, true);
            break;
        case Exposure::DisjointBlocks:
            // Disjoint subject blocks per story; round-robin the longer side
            // so no story is left uncovered and no subject is left idle.
            if (spec.subjects >= spec.stories) {
                for (uint32_t i = 0; i < spec.subjects; ++i) hears[i][i % spec.stories] = true;
            } else {
                for (uint32_t k = 0; k < spec.stories; ++k) hears[k % spec.subjects][k] = true;
            }
            break;
        case Exposure::Bernoulli: {
            std::mt19937_64 gen(rng::substream(spec.seed, 1));
            for (uint32_t i = 0; i < spec.subjects; ++i) {
                for (uint32_t k = 0; k < spec.stories; ++k) {
                    hears[i][k] = coin(gen, spec.bernoulli_p);
                }
            }
            // Re-roll any story nobody heard, then any subject who heard
            // nothing; both bounded.
            for (uint32_t k = 0; k < spec.stories; ++k) {
                int tries = 0;
                for (;;) {
                    bool covered = false;
                    for (uint32_t i = 0; i < spec.subjects; ++i) covered |= hears[i][k];
                    if (covered) break;
                    if (++tries > kRetryBound) {
                        throw Error(ErrorCode::ExposureInfeasible,
                                    "story " + story_label(k) + " uncovered after " +
                                        std::to_string(kRetryBound) + " re-rolls");
                    }
                    for (uint32_t i = 0; i < spec.subjects; ++i) {
                        hears[i][k] = coin(gen, spec.bernoulli_p);
                    }
                }
            }
            for (uint32_t i = 0; i < spec.subjects; ++i) {
                int tries = 0;
                for (;;) {
                    bool any = false;
                    for (uint32_t k = 0; k < spec.stories; ++k) any |= hears[i][k];
                    if (any) break;
                    if (++tries > kRetryBound) {
                        throw Error(ErrorCode::ExposureInfeasible,
                                    "subject " + subject_label(i) + " idle after " +
                                        std::to_string(kRetryBound) + " re-rolls");
                    }
                    for (uint32_t k = 0; k < spec.stories; ++k) {
                        hears[i][k] = coin(gen, spec.bernoulli_p);
                    }
                }
            }
            break;
        }
    }

    for (uint32_t i = 0; i < spec.subjects; ++i) {
        for (uint32_t k = 0; k < spec.stories; ++k) {
            if (!hears[i][k]) continue;
            const uint32_t count = manifest.stories[k].segment_count;
            for (uint32_t j = 0; j < count; ++j) {
                manifest.recordings.push_back(
                    {subject_label(i), story_label(k), j, locator(i, k, j)});
            }
        }
    }
    return manifest;
}

}  // namespace cogsplit
