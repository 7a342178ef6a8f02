#include "cogsplit/oracle.hpp"

#include <algorithm>

#include "cogsplit/error.hpp"

namespace cogsplit {

namespace {

bool windows_intersect(const SampleWindow& a, const SampleWindow& b) {
    return a.story == b.story && a.position <= b.last_position() &&
           b.position <= a.last_position();
}

std::pair<bool, bool> pairwise_leakage(const std::vector<SampleWindow>& samples,
                                       const std::vector<uint32_t>& ref,
                                       const std::vector<uint32_t>& held) {
    bool brain = false;
    bool text = false;
    for (const uint32_t a : ref) {
        for (const uint32_t b : held) {
            brain = brain || samples[a].subject == samples[b].subject;
            text = text || windows_intersect(samples[a], samples[b]);
            if (brain && text) return {true, true};
        }
    }
    return {brain, text};
}

}  // namespace

std::pair<bool, bool> oracle_pair_leakage(const SplitAssignment& split, Part reference,
                                          Part held_out) {
    return pairwise_leakage(split.samples(), split.part_indices(reference),
                            split.part_indices(held_out));
}

std::pair<bool, bool> oracle_leakage(const SplitAssignment& split) {
    const auto val = oracle_pair_leakage(split, Part::Train, Part::Val);
    const auto test = oracle_pair_leakage(split, Part::Train, Part::Test);
    return {val.first || test.first, val.second || test.second};
}

bool oracle_disjoint_all_pairs(const SplitAssignment& split) {
    const Part parts[] = {Part::Train, Part::Val, Part::Test};
    const auto& samples = split.samples();
    for (int p = 0; p < 3; ++p) {
        for (int q = p + 1; q < 3; ++q) {
            const auto lhs = split.part_indices(parts[p]);
            const auto rhs = split.part_indices(parts[q]);
            for (const uint32_t a : lhs) {
                for (const uint32_t b : rhs) {
                    if (samples[a].subject == samples[b].subject) return false;
                    if (windows_intersect(samples[a], samples[b])) return false;
                    if (split.config().modality == Modality::FMRI &&
                        samples[a].story == samples[b].story) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

uint32_t oracle_min_discard(const DatasetGraph& graph, Modality modality,
                            uint32_t window_length) {
    const auto samples =
        enumerate_samples(graph, modality, modality == Modality::FMRI ? window_length : 0);
    const size_t n = samples.size();
    if (n > 16) {
        throw Error(ErrorCode::TooLarge,
                    std::to_string(n) + " samples exceed the 16-sample enumeration bound");
    }
    if (graph.subject_count() > 64 || graph.segment_count() > 64) {
        throw Error(ErrorCode::TooLarge, "occupancy masks require <= 64 subjects and segments");
    }

    std::vector<uint64_t> subject_bit(n);
    std::vector<uint64_t> segment_mask(n);
    for (size_t s = 0; s < n; ++s) {
        subject_bit[s] = 1ULL << samples[s].subject;
        uint64_t mask = 0;
        const uint64_t base = graph.segment_id(samples[s].story, samples[s].position);
        for (uint32_t j = 0; j <= samples[s].length; ++j) mask |= 1ULL << (base + j);
        segment_mask[s] = mask;
    }

    // Depth-first over train/test/discard labels with incremental occupancy
    // masks; prunes once the discard count reaches the best found.
    uint32_t best = UINT32_MAX;
    struct Frame {
        uint64_t train_subj = 0, test_subj = 0, train_seg = 0, test_seg = 0;
    };
    auto dfs = [&](auto&& self, size_t depth, Frame f, uint32_t discards) -> void {
        if (discards >= best) return;
        if (depth == n) {
            const bool train_nonempty = (f.train_subj | f.train_seg) != 0;
            const bool test_nonempty = (f.test_subj | f.test_seg) != 0;
            if (train_nonempty && test_nonempty) best = discards;
            return;
        }
        // train
        if ((subject_bit[depth] & f.test_subj) == 0 && (segment_mask[depth] & f.test_seg) == 0) {
            Frame g = f;
            g.train_subj |= subject_bit[depth];
            g.train_seg |= segment_mask[depth];
            self(self, depth + 1, g, discards);
        }
        // test (val folded in)
        if ((subject_bit[depth] & f.train_subj) == 0 &&
            (segment_mask[depth] & f.train_seg) == 0) {
            Frame g = f;
            g.test_subj |= subject_bit[depth];
            g.test_seg |= segment_mask[depth];
            self(self, depth + 1, g, discards);
        }
        // discard
        self(self, depth + 1, f, discards + 1);
    };
    dfs(dfs, 0, Frame{}, 0);
    return best;  // UINT32_MAX when no zero-leakage assignment exists
}

}  // namespace cogsplit
